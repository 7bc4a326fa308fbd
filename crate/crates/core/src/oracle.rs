//! Brute-force ground truth for small codes.
//!
//! Every Pauli error pattern on up to nine qubits is enumerated with plain
//! double-precision arithmetic. Flip and phase bits come from the commutation
//! of each Pauli with the code's basis operators, so the relabeling in
//! [`crate::channel::permute_basis`] and the log-domain formulas are checked
//! rather than reused.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catcode::{
    cat_rate, induced_channel, joint_prob, joint_prob_hetero, logical_slot, syndrome_classes,
    CatCodeSpec,
};
use crate::channel::{permute_basis, Basis, ChannelFamily, PauliChannel};
use crate::concat::{concat_rate, induced_ensemble, ConcatSpec};
use crate::error::{Error, Result};

pub const MAX_ORACLE_QUBITS: usize = 9;

/// Symplectic `(x, z)` bits of `I, X, Y, Z`.
const PAULI_XZ: [(u8, u8); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

fn anticommutes(a: usize, b: usize) -> u8 {
    let (ax, az) = PAULI_XZ[a];
    let (bx, bz) = PAULI_XZ[b];
    (ax & bz) ^ (az & bx)
}

/// `(stabilizer Pauli, logical flip Pauli)` of a cat code in `basis`.
fn basis_operators(basis: Basis) -> (usize, usize) {
    match basis {
        Basis::Z => (3, 1),
        Basis::X => (1, 3),
        Basis::Y => (2, 1),
    }
}

/// Whether a single-qubit Pauli flips the codeword bit, and whether it
/// anticommutes with the logical flip operator.
fn flip_phase(pauli: usize, basis: Basis) -> (u8, u8) {
    let (stab, flip_op) = basis_operators(basis);
    (anticommutes(pauli, stab), anticommutes(pauli, flip_op))
}

/// The single-qubit Pauli carrying logical bits `(u, v)` in `basis`.
fn logical_pauli(u: u8, v: u8, basis: Basis) -> usize {
    (0..4)
        .find(|&p| flip_phase(p, basis) == (u, v))
        .expect("every (flip, phase) pair has a Pauli")
}

/// Joint distribution of full syndrome vectors and logical errors.
#[derive(Debug, Clone, Serialize)]
pub struct JointTable {
    pub m: usize,
    pub basis: Basis,
    /// Indexed by syndrome bits (`s_l` at bit `l - 2`), entries in
    /// `[I, X, Y, Z]` logical order.
    pub entries: Vec<[f64; 4]>,
}

impl JointTable {
    pub fn get(&self, syndrome: usize, u: u8, v: u8) -> f64 {
        self.entries[syndrome][logical_slot(u, v)]
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().flatten().sum()
    }

    pub fn syndrome_bits(&self, syndrome: usize) -> Vec<bool> {
        (0..self.m.saturating_sub(1)).map(|i| syndrome >> i & 1 == 1).collect()
    }
}

fn check_cap(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_ORACLE_QUBITS {
        return Err(Error::OracleCap {
            qubits,
            max: MAX_ORACLE_QUBITS,
        });
    }
    Ok(())
}

/// Calls `visit(paulis, probability)` for every pattern, in base-4 counter
/// order with qubit 0 least significant.
fn for_each_pattern(chs: &[PauliChannel], mut visit: impl FnMut(&[usize], f64)) {
    let n = chs.len();
    let mut digits = vec![0usize; n];
    let count = 4usize.pow(n as u32);
    for index in 0..count {
        let mut rest = index;
        let mut prob = 1.0;
        for (q, d) in digits.iter_mut().enumerate() {
            *d = rest % 4;
            rest /= 4;
            prob *= chs[q].as_array()[*d];
        }
        visit(&digits, prob);
    }
}

/// Syndrome index and logical bits of a pattern for one cat-code block.
fn decode_block(paulis: &[usize], basis: Basis) -> (usize, u8, u8) {
    let bits: Vec<(u8, u8)> = paulis.iter().map(|&p| flip_phase(p, basis)).collect();
    let u = bits[0].0;
    let v = bits.iter().fold(0, |acc, b| acc ^ b.1);
    let syndrome = bits[1..]
        .iter()
        .enumerate()
        .fold(0usize, |acc, (i, b)| acc | (usize::from(u ^ b.0) << i));
    (syndrome, u, v)
}

/// Exhaustive joint table for a cat code in `basis` with qubit `l` subject to
/// `chs[l]` (computational frame).
pub fn enumerate_joint(chs: &[PauliChannel], basis: Basis) -> Result<JointTable> {
    let m = chs.len();
    check_cap(m)?;
    let mut entries = vec![[0.0; 4]; 1 << (m - 1)];
    for_each_pattern(chs, |paulis, prob| {
        let (s, u, v) = decode_block(paulis, basis);
        entries[s][logical_slot(u, v)] += prob;
    });
    Ok(JointTable { m, basis, entries })
}

fn plain_entropy(dist: &[f64]) -> f64 {
    dist.iter().filter(|&&d| d > 0.0).map(|d| -d * d.log2()).sum()
}

fn table_information(entries: &[[f64; 4]]) -> f64 {
    entries
        .iter()
        .map(|row| {
            let total: f64 = row.iter().sum();
            if total <= 0.0 {
                return 0.0;
            }
            let cond: Vec<f64> = row.iter().map(|j| j / total).collect();
            total * (1.0 - plain_entropy(&cond))
        })
        .sum()
}

/// Single-level rate from first principles: `(1/m) Σ_s Pr(s) (1 - H(logical | s))`.
pub fn oracle_rate(chs: &[PauliChannel], basis: Basis) -> Result<f64> {
    let table = enumerate_joint(chs, basis)?;
    Ok(table_information(&table.entries) / chs.len() as f64)
}

/// Two-level rate from first principles: every pattern on `n * m` qubits is
/// decoded block by block, the inner logical errors are fed to the outer
/// code, and the logical distribution is conditioned on all inner syndromes
/// plus the outer syndrome. Qubit `b * n + i` is qubit `i` of block `b`.
pub fn oracle_concat_rate(chs: &[PauliChannel], spec: ConcatSpec) -> Result<f64> {
    let (n, m) = (spec.inner.m, spec.outer.m);
    if chs.len() != n * m {
        return Err(Error::LengthMismatch {
            expected: n * m,
            got: chs.len(),
        });
    }
    check_cap(n * m)?;
    let inner_bits = n - 1;
    let mut entries = vec![[0.0; 4]; 1 << (n * m - 1)];
    let mut logical = vec![0usize; m];
    for_each_pattern(chs, |paulis, prob| {
        let mut key = 0usize;
        for (b, block) in paulis.chunks(n).enumerate() {
            let (s, u, v) = decode_block(block, spec.inner.basis);
            key |= s << (b * inner_bits);
            logical[b] = logical_pauli(u, v, spec.inner.basis);
        }
        let (s, u, v) = decode_block(&logical, spec.outer.basis);
        key |= s << (m * inner_bits);
        entries[key][logical_slot(u, v)] += prob;
    });
    Ok(table_information(&entries) / (n * m) as f64)
}

/// Dirichlet(1, 1, 1, 1) sample.
pub fn random_channel(rng: &mut impl Rng) -> PauliChannel {
    let draws: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = draws.iter().sum();
    let mut probs = draws.map(|d| d / total);
    let rest: f64 = probs[1..].iter().sum();
    probs[0] = 1.0 - rest;
    PauliChannel::from_array(probs).expect("normalized sample")
}

pub fn seeded_channels(seed: u64, count: usize) -> Vec<PauliChannel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_channel(&mut rng)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &str, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

fn widen(acc: &mut f64, a: f64, b: f64) {
    let d = (a - b).abs();
    if d.is_nan() || d > *acc {
        *acc = if d.is_nan() { f64::INFINITY } else { d };
    }
}

/// Largest deviation of the closed-form joint values, induced channels and
/// rate from the oracle for `m` copies of `ch` in `basis`.
pub fn homogeneous_deviation(ch: &PauliChannel, m: usize, basis: Basis) -> Result<[f64; 3]> {
    let table = enumerate_joint(&vec![*ch; m], basis)?;
    let framed = permute_basis(ch, basis);
    let classes = syndrome_classes(&framed, m)?;
    let (mut joint_err, mut induced_err) = (0.0, 0.0);
    for s in 0..table.entries.len() {
        let r = s.count_ones() as usize;
        for (u, v) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
            widen(&mut joint_err, joint_prob(&framed, m, u, v, r)?.to_f64(), table.get(s, u, v));
        }
        let row = table.entries[s];
        let total: f64 = row.iter().sum();
        if total > 1e-300 {
            let induced = induced_channel(&classes[r])?.as_array();
            for k in 0..4 {
                widen(&mut induced_err, induced[k], row[k] / total);
            }
        }
    }
    let mut rate_err = 0.0;
    widen(
        &mut rate_err,
        cat_rate(ch, CatCodeSpec::new(m, basis)?)?,
        oracle_rate(&vec![*ch; m], basis)?,
    );
    Ok([joint_err, induced_err, rate_err])
}

/// Largest deviation of `joint_prob_hetero` from the oracle.
pub fn heterogeneous_deviation(chs: &[PauliChannel], basis: Basis) -> Result<f64> {
    let table = enumerate_joint(chs, basis)?;
    let framed: Vec<PauliChannel> = chs.iter().map(|c| permute_basis(c, basis)).collect();
    let mut err = 0.0;
    for s in 0..table.entries.len() {
        let bits = table.syndrome_bits(s);
        for (u, v) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
            widen(&mut err, joint_prob_hetero(&framed, u, v, &bits)?.to_f64(), table.get(s, u, v));
        }
    }
    Ok(err)
}

/// Largest spread of oracle entries within one syndrome weight class.
pub fn class_collapse_deviation(ch: &PauliChannel, m: usize, basis: Basis) -> Result<f64> {
    let table = enumerate_joint(&vec![*ch; m], basis)?;
    let mut first: Vec<Option<[f64; 4]>> = vec![None; m];
    let mut err = 0.0;
    for (s, row) in table.entries.iter().enumerate() {
        let r = s.count_ones() as usize;
        match first[r] {
            None => first[r] = Some(*row),
            Some(reference) => {
                for k in 0..4 {
                    widen(&mut err, reference[k], row[k]);
                }
            }
        }
    }
    Ok(err)
}

/// Largest deviation of inner-ensemble weights and channels from oracle
/// class aggregates.
pub fn ensemble_deviation(ch: &PauliChannel, spec: CatCodeSpec) -> Result<f64> {
    let table = enumerate_joint(&vec![*ch; spec.m], spec.basis)?;
    let ens = induced_ensemble(ch, spec)?;
    let mut class_rows = vec![[0.0; 4]; spec.m];
    for (s, row) in table.entries.iter().enumerate() {
        let r = s.count_ones() as usize;
        for k in 0..4 {
            class_rows[r][k] += row[k];
        }
    }
    let mut err = 0.0;
    for (entry, row) in ens.entries.iter().zip(&class_rows) {
        let total: f64 = row.iter().sum();
        widen(&mut err, entry.weight, total);
        if total > 1e-300 {
            // the oracle row is in code-frame logical order; map each logical
            // (u, v) to its computational Pauli as the ensemble does
            let ens_probs = entry.channel.as_array();
            for (u, v) in [(0u8, 0u8), (1, 0), (1, 1), (0, 1)] {
                let pauli = logical_pauli(u, v, spec.basis);
                widen(&mut err, ens_probs[pauli], row[logical_slot(u, v)] / total);
            }
        }
    }
    Ok(err)
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheckReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Oracle-equivalence suite over seeded random channels: homogeneous codes
/// with `m <= 6` in every basis, heterogeneous codes with `m <= 5`, inner
/// ensembles, and small concatenated codes.
pub fn self_check(seed: u64) -> Result<SelfCheckReport> {
    let channels = seeded_channels(seed, 20);
    let mut joint = 0.0f64;
    let mut induced = 0.0f64;
    let mut rate = 0.0f64;
    let mut collapse = 0.0f64;
    let mut ensemble = 0.0f64;
    for ch in &channels {
        for m in 1..=6 {
            for basis in Basis::ALL {
                let [j, i, r] = homogeneous_deviation(ch, m, basis)?;
                joint = joint.max(j);
                induced = induced.max(i);
                rate = rate.max(r);
                collapse = collapse.max(class_collapse_deviation(ch, m, basis)?);
                ensemble = ensemble.max(ensemble_deviation(ch, CatCodeSpec::new(m, basis)?)?);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut hetero = 0.0f64;
    for _ in 0..20 {
        for m in 1..=5 {
            let chs: Vec<PauliChannel> = (0..m).map(|_| random_channel(&mut rng)).collect();
            for basis in Basis::ALL {
                hetero = hetero.max(heterogeneous_deviation(&chs, basis)?);
            }
        }
    }

    let mut concat = 0.0f64;
    let fixed = [
        ChannelFamily::Depolarizing.evaluate(0.18)?,
        ChannelFamily::TwoPauli.evaluate(0.2)?,
        PauliChannel::new(0.8, 0.1, 0.04, 0.06)?,
    ];
    let specs = [
        (3, Basis::Z, 3, Basis::X),
        (2, Basis::Z, 4, Basis::X),
        (3, Basis::X, 3, Basis::Y),
    ];
    for ch in fixed.iter().chain(channels.iter().take(2)) {
        for &(n, bi, m, bo) in &specs {
            let spec = ConcatSpec::new(CatCodeSpec::new(n, bi)?, CatCodeSpec::new(m, bo)?);
            let exact = concat_rate(ch, spec)?;
            let brute = oracle_concat_rate(&vec![*ch; n * m], spec)?;
            widen(&mut concat, exact, brute);
        }
    }

    Ok(SelfCheckReport {
        seed,
        checks: vec![
            CheckOutcome::new("joint probabilities (m<=6, all bases)", joint, 1e-10),
            CheckOutcome::new("induced channels (m<=6, all bases)", induced, 1e-10),
            CheckOutcome::new("cat rates (m<=6, all bases)", rate, 1e-10),
            CheckOutcome::new("syndrome-class collapse", collapse, 1e-12),
            CheckOutcome::new("inner ensembles (m<=6)", ensemble, 1e-10),
            CheckOutcome::new("heterogeneous joint probabilities (m<=5)", hetero, 1e-10),
            CheckOutcome::new("concatenated rates (3-in-3, 2-in-4)", concat, 1e-9),
        ],
    })
}
