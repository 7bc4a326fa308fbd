//! Single-level repetition ("cat") codes.
//!
//! An `m`-qubit Z-basis cat code has stabilizers `Z_1 Z_l` for `l = 2..m`.
//! A Pauli error `X^x Z^z` produces the syndrome `x_1 ⊕ x_l` and, with no
//! recovery, the logical error `X̄^{x_1} Z̄^{⊕ z_l}`. The joint probability of
//! a logical error and a specific syndrome depends on the syndrome only
//! through its Hamming weight, so the rate is a sum over `m` weight classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{binary_entropy, entropy_bits, permute_basis, Basis, PauliChannel, CLAMP_TOL};
use crate::combinatorics::LnFactorials;
use crate::error::{Error, Result};
use crate::signed::SignedLogValue;

/// Largest code length accepted by string parsing.
pub const MAX_CLI_LENGTH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatCodeSpec {
    pub m: usize,
    pub basis: Basis,
}

impl CatCodeSpec {
    pub fn new(m: usize, basis: Basis) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("cat code length must be at least 1".into()));
        }
        Ok(Self { m, basis })
    }

    pub fn z(m: usize) -> Result<Self> {
        Self::new(m, Basis::Z)
    }
}

impl fmt::Display for CatCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m, self.basis)
    }
}

/// Parses the compact form `<m><basis>`, e.g. `3Z` or `19X`.
impl FromStr for CatCodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s
            .find(|c: char| !c.is_ascii_digit())
            .ok_or_else(|| Error::InvalidParameter(format!("missing basis in {s:?}")))?;
        let (digits, basis) = s.split_at(split);
        let m: usize = digits
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad code length in {s:?}")))?;
        if m > MAX_CLI_LENGTH {
            return Err(Error::InvalidParameter(format!(
                "code length {m} exceeds the cap {MAX_CLI_LENGTH}"
            )));
        }
        Self::new(m, basis.parse()?)
    }
}

/// Index of the logical error `X̄^u Z̄^v` in `[I, X, Y, Z]` order.
pub fn logical_slot(u: u8, v: u8) -> usize {
    match (u & 1, v & 1) {
        (0, 0) => 0,
        (1, 0) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

/// Per-qubit factors of the joint distribution for a channel in the code
/// frame. `alpha[f]` is the probability that the qubit's flip bit equals `f`;
/// `beta[f]` is the same weighted by `(-1)^z`, whose product tracks the
/// logical phase parity.
#[derive(Debug, Clone, Copy)]
pub struct FlipFactors {
    pub alpha: [SignedLogValue; 2],
    pub beta: [SignedLogValue; 2],
}

impl FlipFactors {
    pub fn new(ch: &PauliChannel) -> Self {
        let alpha0 = ch.p_i() + ch.p_z();
        let alpha1 = ch.p_x() + ch.p_y();
        // p_i - p_z == 1 - p_x - p_y - 2 p_z without the cancellation
        let beta0 = ch.p_i() - ch.p_z();
        let beta1 = ch.p_x() - ch.p_y();
        Self {
            alpha: [alpha0.into(), alpha1.into()],
            beta: [beta0.into(), beta1.into()],
        }
    }
}

/// A run of `count` qubits sharing one channel, `flipped` of which have flip
/// bit 1.
#[derive(Debug, Clone, Copy)]
pub struct FlipGroup {
    pub factors: FlipFactors,
    pub count: usize,
    pub flipped: usize,
}

/// The two products `Π α` and `Π β` over the groups.
pub fn flip_products(groups: &[FlipGroup]) -> Result<(SignedLogValue, SignedLogValue)> {
    let mut a = SignedLogValue::ONE;
    let mut b = SignedLogValue::ONE;
    for g in groups {
        if g.flipped > g.count {
            return Err(Error::InvalidParameter(format!(
                "flipped count {} exceeds group size {}",
                g.flipped, g.count
            )));
        }
        let (on, off) = (g.flipped as u64, (g.count - g.flipped) as u64);
        a = a * g.factors.alpha[1].pow(on) * g.factors.alpha[0].pow(off);
        b = b * g.factors.beta[1].pow(on) * g.factors.beta[0].pow(off);
    }
    Ok((a, b))
}

/// Grouped form of the joint probability: `½[Π α + (-1)^v Π β]` where the
/// flip pattern is given as per-group flipped counts.
pub fn joint_prob_grouped(groups: &[FlipGroup], v: u8) -> Result<SignedLogValue> {
    let (a, b) = flip_products(groups)?;
    Ok(half(combine(a, b, v)))
}

fn combine(a: SignedLogValue, b: SignedLogValue, v: u8) -> SignedLogValue {
    if v & 1 == 0 {
        a + b
    } else {
        a - b
    }
}

fn half(x: SignedLogValue) -> SignedLogValue {
    x * SignedLogValue::from_parts(1, -std::f64::consts::LN_2)
}

/// Probability of logical error `X̄^u Z̄^v` together with one particular
/// syndrome vector of Hamming weight `r`, for `m` copies of `ch` (already in
/// the code frame).
pub fn joint_prob(ch: &PauliChannel, m: usize, u: u8, v: u8, r: usize) -> Result<SignedLogValue> {
    if m == 0 || r >= m {
        return Err(Error::WeightOutOfRange { r, m });
    }
    let flipped = if u & 1 == 0 { r } else { m - r };
    joint_prob_grouped(
        &[FlipGroup {
            factors: FlipFactors::new(ch),
            count: m,
            flipped,
        }],
        v,
    )
}

/// Joint probability for position-dependent channels `chs[0..m]` and an
/// explicit syndrome `s_2..s_m` (`syndrome.len() == m - 1`).
pub fn joint_prob_hetero(
    chs: &[PauliChannel],
    u: u8,
    v: u8,
    syndrome: &[bool],
) -> Result<SignedLogValue> {
    if chs.is_empty() || syndrome.len() + 1 != chs.len() {
        return Err(Error::LengthMismatch {
            expected: chs.len().saturating_sub(1),
            got: syndrome.len(),
        });
    }
    let u = u & 1 == 1;
    let flips = std::iter::once(u).chain(syndrome.iter().map(|&s| u ^ s));
    let groups: Vec<FlipGroup> = chs
        .iter()
        .zip(flips)
        .map(|(ch, f)| FlipGroup {
            factors: FlipFactors::new(ch),
            count: 1,
            flipped: usize::from(f),
        })
        .collect();
    joint_prob_grouped(&groups, v)
}

/// All syndromes of one Hamming weight `r`.
#[derive(Debug, Clone)]
pub struct SyndromeClass {
    pub r: usize,
    /// `ln C(m-1, r)`.
    pub ln_multiplicity: f64,
    /// Joint probability of each logical error with one syndrome of this
    /// class, in `[I, X, Y, Z]` order.
    pub joint: [SignedLogValue; 4],
}

impl SyndromeClass {
    /// `C(m-1, r)`; infinite once it exceeds `f64` range.
    pub fn multiplicity(&self) -> f64 {
        self.ln_multiplicity.exp().round()
    }

    /// Probability of one syndrome vector of this class.
    pub fn syndrome_probability(&self) -> SignedLogValue {
        self.joint.iter().copied().sum()
    }

    /// Probability of observing any syndrome in the class.
    pub fn class_probability(&self) -> f64 {
        let per = self.syndrome_probability();
        if per.sign() <= 0 {
            return 0.0;
        }
        (self.ln_multiplicity + per.log_magnitude()).exp()
    }
}

/// The `m` syndrome-weight classes of an `m`-qubit Z-basis cat code on `ch`
/// (already in the code frame).
pub fn syndrome_classes(ch: &PauliChannel, m: usize) -> Result<Vec<SyndromeClass>> {
    if m == 0 {
        return Err(Error::InvalidParameter("cat code length must be at least 1".into()));
    }
    let ln_fact = LnFactorials::new(m);
    let factors = FlipFactors::new(ch);
    (0..m)
        .map(|r| {
            let mut joint = [SignedLogValue::ZERO; 4];
            for u in 0..2u8 {
                let flipped = if u == 0 { r } else { m - r };
                let (a, b) = flip_products(&[FlipGroup {
                    factors,
                    count: m,
                    flipped,
                }])?;
                for v in 0..2u8 {
                    joint[logical_slot(u, v)] = half(combine(a, b, v));
                }
            }
            clamp_joint(&mut joint, r)?;
            Ok(SyndromeClass {
                r,
                ln_multiplicity: ln_fact.ln_binomial(m - 1, r),
                joint,
            })
        })
        .collect()
}

fn clamp_joint(joint: &mut [SignedLogValue; 4], r: usize) -> Result<()> {
    let total: SignedLogValue = joint.iter().copied().sum();
    for j in joint.iter_mut() {
        if j.sign() < 0 {
            if total.sign() > 0 && j.ratio(total) >= -CLAMP_TOL {
                *j = SignedLogValue::ZERO;
            } else {
                return Err(Error::InvalidDistribution(format!(
                    "negative joint probability {j:?} in syndrome class r={r}"
                )));
            }
        }
    }
    Ok(())
}

/// Conditional Pauli channel on the logical qubit given one syndrome of the
/// class, in the code frame.
pub fn induced_channel(sc: &SyndromeClass) -> Result<PauliChannel> {
    conditional(&sc.joint).ok_or(Error::ZeroProbabilityClass { r: sc.r })?
}

/// Normalizes four joint values into a channel; `None` for a zero total.
pub(crate) fn conditional(joint: &[SignedLogValue; 4]) -> Option<Result<PauliChannel>> {
    let total: SignedLogValue = joint.iter().copied().sum();
    if total.sign() <= 0 {
        return None;
    }
    let mut probs = [0.0; 4];
    for (p, j) in probs.iter_mut().zip(joint) {
        *p = j.ratio(total).clamp(-1.0, 1.0 + CLAMP_TOL);
    }
    Some(PauliChannel::from_array(probs))
}

/// Coherent-information rate, in qubits per channel use, of an `m`-qubit
/// cat code followed by a random stabilizer code:
/// `(1/m) [1 - Σ_r Pr(class r) H(induced channel of r)]`.
pub fn cat_rate(ch: &PauliChannel, spec: CatCodeSpec) -> Result<f64> {
    if spec.m == 0 {
        return Err(Error::InvalidParameter("cat code length must be at least 1".into()));
    }
    let framed = permute_basis(ch, spec.basis);
    let mut cond_entropy = 0.0;
    for class in syndrome_classes(&framed, spec.m)? {
        let prob = class.class_probability();
        if prob == 0.0 {
            continue;
        }
        let induced = induced_channel(&class)?;
        cond_entropy += prob * entropy_bits(&induced.as_array());
    }
    Ok((1.0 - cond_entropy) / spec.m as f64)
}

/// `[1 - (1 - 2 q_z)^m] / 2`, the probability that an odd number of `m`
/// independent phase flips occurs.
pub fn logical_z_flip_prob(q_z: f64, m: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&q_z) {
        return Err(Error::Domain(format!("phase flip probability {q_z} outside [0, 1]")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("cat code length must be at least 1".into()));
    }
    let base = 1.0 - 2.0 * q_z;
    let power = match i32::try_from(m) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(m as f64),
    };
    Ok(0.5 * (1.0 - power))
}

/// Syndrome-averaged binary entropies of the logical flip (`u`) and phase
/// (`v`) bits after an `m`-qubit cat code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalEntropies {
    pub flip: f64,
    pub phase: f64,
}

pub fn logical_entropies(ch: &PauliChannel, spec: CatCodeSpec) -> Result<LogicalEntropies> {
    let framed = permute_basis(ch, spec.basis);
    let mut out = LogicalEntropies { flip: 0.0, phase: 0.0 };
    for class in syndrome_classes(&framed, spec.m)? {
        let prob = class.class_probability();
        if prob == 0.0 {
            continue;
        }
        let induced = induced_channel(&class)?;
        out.flip += prob * binary_entropy(induced.q_x());
        out.phase += prob * binary_entropy(induced.q_z());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{hashing_rate, ChannelFamily};
    use approx::assert_abs_diff_eq;

    fn sample() -> PauliChannel {
        PauliChannel::new(0.7, 0.12, 0.08, 0.1).unwrap()
    }

    #[test]
    fn length_one_is_bare_channel() {
        let ch = sample();
        let expect = ch.as_array();
        for (u, v) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
            let got = joint_prob(&ch, 1, u, v, 0).unwrap().to_f64();
            assert_abs_diff_eq!(got, expect[logical_slot(u, v)], epsilon = 1e-15);
        }
        let classes = syndrome_classes(&ch, 1).unwrap();
        let induced = induced_channel(&classes[0]).unwrap().as_array();
        for (a, b) in induced.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn out_of_range_weight() {
        assert!(matches!(
            joint_prob(&sample(), 3, 0, 0, 3),
            Err(Error::WeightOutOfRange { r: 3, m: 3 })
        ));
    }

    #[test]
    fn v_marginal_is_binomial_flip_law() {
        let ch = sample();
        let qx = ch.q_x();
        for m in 1..12 {
            for r in 0..m {
                let sum = (joint_prob(&ch, m, 0, 0, r).unwrap() + joint_prob(&ch, m, 0, 1, r).unwrap())
                    .to_f64();
                let law = qx.powi(r as i32) * (1.0 - qx).powi((m - r) as i32);
                assert_abs_diff_eq!(sum, law, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn multiplicities_are_binomial_rows() {
        let ch = sample();
        let m2: Vec<f64> = syndrome_classes(&ch, 2).unwrap().iter().map(|c| c.multiplicity()).collect();
        assert_eq!(m2, vec![1.0, 1.0]);
        let m5: Vec<f64> = syndrome_classes(&ch, 5).unwrap().iter().map(|c| c.multiplicity()).collect();
        assert_eq!(m5, vec![1.0, 4.0, 6.0, 4.0, 1.0]);
    }

    #[test]
    fn normalization_across_lengths() {
        for ch in [sample(), ChannelFamily::Depolarizing.evaluate(0.19).unwrap()] {
            for m in [1, 2, 7, 40, 300, 2000] {
                let total: f64 = syndrome_classes(&ch, m)
                    .unwrap()
                    .iter()
                    .map(|c| c.class_probability())
                    .sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rate_of_length_one_is_hashing() {
        let ch = sample();
        for b in Basis::ALL {
            let r = cat_rate(&ch, CatCodeSpec::new(1, b).unwrap()).unwrap();
            assert_abs_diff_eq!(r, hashing_rate(&ch), epsilon = 1e-14);
        }
    }

    #[test]
    fn rate_bounded_by_inverse_length() {
        let ch = ChannelFamily::Depolarizing.evaluate(0.05).unwrap();
        for m in 1..30 {
            let r = cat_rate(&ch, CatCodeSpec::z(m).unwrap()).unwrap();
            assert!(r <= 1.0 / m as f64 + 1e-15);
        }
    }

    #[test]
    fn depolarizing_basis_invariance() {
        let ch = ChannelFamily::Depolarizing.evaluate(0.17).unwrap();
        for m in [2, 5, 13] {
            let z = cat_rate(&ch, CatCodeSpec::new(m, Basis::Z).unwrap()).unwrap();
            for b in [Basis::X, Basis::Y] {
                let other = cat_rate(&ch, CatCodeSpec::new(m, b).unwrap()).unwrap();
                assert_abs_diff_eq!(z, other, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn logical_z_closed_form() {
        assert_abs_diff_eq!(logical_z_flip_prob(0.13, 1).unwrap(), 0.13, epsilon = 1e-15);
        for m in [1, 2, 9, 100] {
            assert_abs_diff_eq!(logical_z_flip_prob(0.5, m).unwrap(), 0.5, epsilon = 1e-15);
        }
        assert!(logical_z_flip_prob(1.5, 3).is_err());
    }

    #[test]
    fn logical_z_matches_induced_marginals_on_independent_channel() {
        let (qx, qz) = (0.27, 0.04);
        let ch = PauliChannel::independent(qx, qz).unwrap();
        for m in [1, 3, 8, 25] {
            let expect = logical_z_flip_prob(qz, m).unwrap();
            let classes = syndrome_classes(&ch, m).unwrap();
            let mut averaged = 0.0;
            for c in &classes {
                let induced = induced_channel(c).unwrap();
                assert_abs_diff_eq!(induced.q_z(), expect, epsilon = 1e-12);
                averaged += c.class_probability() * induced.q_z();
            }
            assert_abs_diff_eq!(averaged, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn homogeneous_hetero_agree() {
        let ch = sample();
        let m = 5;
        for bits in 0u32..16 {
            let syndrome: Vec<bool> = (0..m - 1).map(|i| bits >> i & 1 == 1).collect();
            let r = syndrome.iter().filter(|&&s| s).count();
            for (u, v) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
                let het = joint_prob_hetero(&vec![ch; m], u, v, &syndrome).unwrap().to_f64();
                let hom = joint_prob(&ch, m, u, v, r).unwrap().to_f64();
                assert_abs_diff_eq!(het, hom, epsilon = 1e-12);
            }
        }
        assert!(matches!(
            joint_prob_hetero(&[ch, ch], 0, 0, &[]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn hetero_v_sum_cancels_second_term() {
        let chs = [
            sample(),
            PauliChannel::new(0.9, 0.05, 0.02, 0.03).unwrap(),
            PauliChannel::new(0.6, 0.0, 0.3, 0.1).unwrap(),
        ];
        let syndrome = [true, false];
        for u in 0..2u8 {
            let sum = (joint_prob_hetero(&chs, u, 0, &syndrome).unwrap()
                + joint_prob_hetero(&chs, u, 1, &syndrome).unwrap())
            .to_f64();
            let flips = [u == 1, (u == 1) ^ true, u == 1];
            let alpha: f64 = chs
                .iter()
                .zip(flips)
                .map(|(c, f)| if f { c.q_x() } else { 1.0 - c.q_x() })
                .product();
            assert_abs_diff_eq!(sum, alpha, epsilon = 1e-14);
        }
    }

    #[test]
    fn long_codes_do_not_underflow() {
        let ch = ChannelFamily::Depolarizing.evaluate(0.3).unwrap();
        let r = cat_rate(&ch, CatCodeSpec::z(4000).unwrap()).unwrap();
        assert!(r.is_finite());
        assert!(r.abs() <= 2.0 / 4000.0);
    }

    #[test]
    fn information_tradeoff_is_monotone() {
        let ch = PauliChannel::independent(0.3, 0.01).unwrap();
        let mut prev = logical_entropies(&ch, CatCodeSpec::z(1).unwrap()).unwrap();
        for m in 2..=50 {
            let cur = logical_entropies(&ch, CatCodeSpec::z(m).unwrap()).unwrap();
            assert!(cur.flip <= prev.flip + 1e-12, "flip entropy rose at m={m}");
            assert!(cur.phase >= prev.phase - 1e-12, "phase entropy fell at m={m}");
            assert_abs_diff_eq!(
                cur.phase,
                binary_entropy(logical_z_flip_prob(0.01, m).unwrap()),
                epsilon = 1e-12
            );
            prev = cur;
        }
    }

    #[test]
    fn spec_parsing() {
        let s: CatCodeSpec = "19X".parse().unwrap();
        assert_eq!(s, CatCodeSpec::new(19, Basis::X).unwrap());
        assert_eq!(s.to_string(), "19X");
        assert!("0Z".parse::<CatCodeSpec>().is_err());
        assert!("Z".parse::<CatCodeSpec>().is_err());
        assert!("5000Z".parse::<CatCodeSpec>().is_err());
    }
}
