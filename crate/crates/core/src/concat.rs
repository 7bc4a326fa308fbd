//! Two-level concatenated cat codes ("n in m").
//!
//! An inner `n`-qubit cat code is applied to each of `m` blocks and its
//! syndrome is measured and kept. Each block then acts as a logical qubit
//! carrying one of the `n` induced channels of the inner code, and an outer
//! `m`-qubit cat code runs across the blocks.
//!
//! The rate is evaluated exactly. Block assignments are grouped by how many
//! blocks carry each inner type (a composition of `m`), and outer flip
//! patterns by how many blocks of each type are flipped. A flip pattern `f`
//! and its complement give the same outer syndrome with the logical flip
//! swapped, so all `2^m` patterns are summed and the result halved.

use serde::{Deserialize, Serialize};

use crate::catcode::{induced_channel, syndrome_classes, CatCodeSpec, FlipFactors};
use crate::channel::{entropy_bits, permute_basis, PauliChannel, CLAMP_TOL};
use crate::combinatorics::{Compositions, LnFactorials};
use crate::error::{Error, Result};

/// Default cap on enumerated (composition, flipped-count) configurations.
pub const DEFAULT_MAX_CONFIGURATIONS: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConcatSpec {
    pub inner: CatCodeSpec,
    pub outer: CatCodeSpec,
}

impl ConcatSpec {
    pub fn new(inner: CatCodeSpec, outer: CatCodeSpec) -> Self {
        Self { inner, outer }
    }

    pub fn block_length(&self) -> usize {
        self.inner.m * self.outer.m
    }

    /// Number of configurations `concat_rate` enumerates.
    pub fn configurations(&self) -> u128 {
        configuration_count(self.inner.m, self.outer.m)
    }
}

impl std::fmt::Display for ConcatSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-in-{}", self.inner, self.outer)
    }
}

fn configuration_count(types: usize, outer_m: usize) -> u128 {
    // compositions of outer_m into 2 * types (type, flip) cells
    Compositions::count(outer_m, 2 * types)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConcatLimits {
    pub max_configurations: u128,
}

impl Default for ConcatLimits {
    fn default() -> Self {
        Self {
            max_configurations: DEFAULT_MAX_CONFIGURATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEntry {
    /// Probability of observing this inner syndrome class.
    pub weight: f64,
    pub ln_weight: f64,
    /// Induced logical channel, expressed in the computational frame.
    pub channel: PauliChannel,
    /// Set when the class has zero probability and `channel` is a placeholder.
    pub degenerate: bool,
}

/// Weighted logical channels induced by an inner cat code, one entry per
/// syndrome weight class in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedEnsemble {
    pub entries: Vec<EnsembleEntry>,
    pub inner: CatCodeSpec,
}

impl InducedEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }
}

pub fn induced_ensemble(ch: &PauliChannel, spec: CatCodeSpec) -> Result<InducedEnsemble> {
    let framed = permute_basis(ch, spec.basis);
    let entries = syndrome_classes(&framed, spec.m)?
        .iter()
        .map(|class| {
            let per = class.syndrome_probability();
            if per.sign() <= 0 {
                return Ok(EnsembleEntry {
                    weight: 0.0,
                    ln_weight: f64::NEG_INFINITY,
                    channel: PauliChannel::NOISELESS,
                    degenerate: true,
                });
            }
            let ln_weight = class.ln_multiplicity + per.log_magnitude();
            Ok(EnsembleEntry {
                weight: ln_weight.exp(),
                ln_weight,
                channel: permute_basis(&induced_channel(class)?, spec.basis),
                degenerate: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedEnsemble { entries, inner: spec })
}

/// Rate of the concatenated code with the default resource cap.
pub fn concat_rate(ch: &PauliChannel, spec: ConcatSpec) -> Result<f64> {
    concat_rate_with(ch, spec, ConcatLimits::default())
}

pub fn concat_rate_with(ch: &PauliChannel, spec: ConcatSpec, limits: ConcatLimits) -> Result<f64> {
    check_limits(spec.inner.m, spec.outer.m, limits)?;
    let ensemble = induced_ensemble(ch, spec.inner)?;
    concat_rate_from_ensemble(&ensemble, spec.outer, limits)
}

fn check_limits(types: usize, outer_m: usize, limits: ConcatLimits) -> Result<()> {
    let required = configuration_count(types, outer_m);
    if required > limits.max_configurations {
        return Err(Error::ResourceLimit {
            required,
            cap: limits.max_configurations,
        });
    }
    Ok(())
}

/// Per-type log factors in the outer frame, weights folded in.
#[derive(Debug, Clone, Copy)]
struct TypeFactors {
    ln_alpha: [f64; 2],
    ln_beta: [f64; 2],
    neg_beta: [bool; 2],
}

impl TypeFactors {
    fn new(entry: &EnsembleEntry, outer: CatCodeSpec) -> Self {
        let f = FlipFactors::new(&permute_basis(&entry.channel, outer.basis));
        let w = entry.ln_weight;
        Self {
            ln_alpha: [w + f.alpha[0].log_magnitude(), w + f.alpha[1].log_magnitude()],
            ln_beta: [w + f.beta[0].log_magnitude(), w + f.beta[1].log_magnitude()],
            neg_beta: [f.beta[0].sign() < 0, f.beta[1].sign() < 0],
        }
    }
}

/// `Σ count * ln` with `0 * (-inf) = 0`.
#[inline]
fn add_power(acc: &mut f64, ln: f64, count: usize) {
    if count > 0 {
        *acc += ln * count as f64;
    }
}

/// Rate of an outer cat code across blocks whose channels are drawn from
/// `ensemble` and known to the decoder.
pub fn concat_rate_from_ensemble(
    ensemble: &InducedEnsemble,
    outer: CatCodeSpec,
    limits: ConcatLimits,
) -> Result<f64> {
    let types = ensemble.entries.len();
    let m = outer.m;
    if m == 0 {
        return Err(Error::InvalidParameter("cat code length must be at least 1".into()));
    }
    check_limits(types, m, limits)?;
    let factors: Vec<TypeFactors> = ensemble
        .entries
        .iter()
        .map(|e| TypeFactors::new(e, outer))
        .collect();
    let ln_fact = LnFactorials::new(m);

    let mut flipped = vec![0usize; types];
    let mut cond_entropy = 0.0;
    let mut total = 0.0;
    for comp in Compositions::new(m, types) {
        if comp
            .iter()
            .zip(&ensemble.entries)
            .any(|(&k, e)| k > 0 && e.ln_weight == f64::NEG_INFINITY)
        {
            continue;
        }
        let ln_multinomial =
            ln_fact.ln_factorial(m) - comp.iter().map(|&k| ln_fact.ln_factorial(k)).sum::<f64>();
        flipped.iter_mut().for_each(|j| *j = 0);
        loop {
            let mut ln_mult = ln_multinomial - std::f64::consts::LN_2;
            // u = 0 uses the flip pattern as-is, u = 1 its complement
            let (mut a0, mut a1, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0);
            let (mut neg0, mut neg1) = (false, false);
            for t in 0..types {
                let (k, j) = (comp[t], flipped[t]);
                if k == 0 {
                    continue;
                }
                let tf = &factors[t];
                ln_mult += ln_fact.ln_binomial(k, j);
                let off = k - j;
                add_power(&mut a0, tf.ln_alpha[0], off);
                add_power(&mut a0, tf.ln_alpha[1], j);
                add_power(&mut a1, tf.ln_alpha[1], off);
                add_power(&mut a1, tf.ln_alpha[0], j);
                add_power(&mut b0, tf.ln_beta[0], off);
                add_power(&mut b0, tf.ln_beta[1], j);
                add_power(&mut b1, tf.ln_beta[1], off);
                add_power(&mut b1, tf.ln_beta[0], j);
                if tf.neg_beta[0] {
                    neg0 ^= off % 2 == 1;
                    neg1 ^= j % 2 == 1;
                }
                if tf.neg_beta[1] {
                    neg0 ^= j % 2 == 1;
                    neg1 ^= off % 2 == 1;
                }
            }
            let reference = a0.max(a1);
            if reference > f64::NEG_INFINITY {
                let big0 = (a0 - reference).exp();
                let big1 = (a1 - reference).exp();
                let small0 = signed_exp(neg0, b0 - reference);
                let small1 = signed_exp(neg1, b1 - reference);
                let norm = big0 + big1;
                let joint = [
                    0.5 * (big0 + small0),
                    0.5 * (big1 + small1),
                    0.5 * (big1 - small1),
                    0.5 * (big0 - small0),
                ];
                let mut cond = [0.0; 4];
                for (c, j) in cond.iter_mut().zip(joint) {
                    let p = j / norm;
                    if p < -CLAMP_TOL {
                        return Err(Error::InvalidDistribution(format!(
                            "negative conditional probability {p} in composition {comp:?}"
                        )));
                    }
                    *c = p.max(0.0);
                }
                let prob = (ln_mult + reference + norm.ln()).exp();
                total += prob;
                cond_entropy += prob * entropy_bits(&cond);
            }
            if !advance(&mut flipped, &comp) {
                break;
            }
        }
    }
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidDistribution(format!(
            "outer syndrome distribution sums to {total}"
        )));
    }
    Ok((1.0 - cond_entropy) / (ensemble.inner.m * m) as f64)
}

#[inline]
fn signed_exp(negative: bool, ln: f64) -> f64 {
    let v = ln.exp();
    if negative {
        -v
    } else {
        v
    }
}

/// Odometer over `0 <= flipped[t] <= limit[t]`, last index fastest.
fn advance(flipped: &mut [usize], limit: &[usize]) -> bool {
    for t in (0..flipped.len()).rev() {
        if flipped[t] < limit[t] {
            flipped[t] += 1;
            return true;
        }
        flipped[t] = 0;
    }
    false
}
