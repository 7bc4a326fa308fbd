//! Zero-rate thresholds along channel families and scans over code length.

use std::fmt;

use serde::Serialize;

use crate::catcode::{cat_rate, CatCodeSpec};
use crate::channel::{permute_basis, Basis, ChannelFamily, PauliChannel};
use crate::concat::{concat_rate_with, ConcatLimits, ConcatSpec};
use crate::error::{Error, Result};

/// A one-parameter path of channels starting at the noiseless channel.
pub trait NoisePath {
    fn channel_at(&self, p: f64) -> Result<PauliChannel>;
    fn max_p(&self) -> f64;
}

impl NoisePath for ChannelFamily {
    fn channel_at(&self, p: f64) -> Result<PauliChannel> {
        self.evaluate(p)
    }

    fn max_p(&self) -> f64 {
        ChannelFamily::max_p(self)
    }
}

/// Either a single-level or a two-level cat code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Code {
    Cat(CatCodeSpec),
    Concat(ConcatSpec),
}

impl Code {
    pub fn rate(&self, ch: &PauliChannel, limits: ConcatLimits) -> Result<f64> {
        match self {
            Code::Cat(spec) => cat_rate(ch, *spec),
            Code::Concat(spec) => concat_rate_with(ch, *spec, limits),
        }
    }

    /// Length of the only (single-level) or outer (two-level) code.
    pub fn scan_length(&self) -> usize {
        match self {
            Code::Cat(spec) => spec.m,
            Code::Concat(spec) => spec.outer.m,
        }
    }

    pub fn block_length(&self) -> usize {
        match self {
            Code::Cat(spec) => spec.m,
            Code::Concat(spec) => spec.block_length(),
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Cat(s) => write!(f, "cat:m={},basis={}", s.m, s.basis),
            Code::Concat(s) => write!(f, "concat:inner={},outer={}", s.inner, s.outer),
        }
    }
}

impl From<CatCodeSpec> for Code {
    fn from(spec: CatCodeSpec) -> Self {
        Code::Cat(spec)
    }
}

impl From<ConcatSpec> for Code {
    fn from(spec: ConcatSpec) -> Self {
        Code::Concat(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptions {
    /// Final bracket width.
    pub tol: f64,
    /// First probe of the doubling bracket search.
    pub initial_step: f64,
    /// Coarse grid size for detecting multiple sign changes; 0 disables it.
    pub grid_points: usize,
    pub limits: ConcatLimits,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            initial_step: 0.01,
            grid_points: 64,
            limits: ConcatLimits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub p_star: f64,
    /// `rate(bracket.0) > 0 >= rate(bracket.1)`.
    pub bracket: (f64, f64),
    pub evaluations: usize,
    pub code: Code,
    /// Set when the coarse grid saw more than one sign change; the largest
    /// crossing is returned.
    pub non_monotone: bool,
}

/// Smallest noise level along `path` at which `code`'s rate reaches zero,
/// by doubling to a bracket and bisecting.
pub fn threshold(path: &dyn NoisePath, code: &Code, opts: &ThresholdOptions) -> Result<ThresholdResult> {
    if !(opts.tol > 0.0) || !(opts.initial_step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {} and initial step {} must be positive",
            opts.tol, opts.initial_step
        )));
    }
    let mut evaluations = 0usize;
    let mut rate_at = |p: f64| -> Result<f64> {
        evaluations += 1;
        code.rate(&path.channel_at(p)?, opts.limits)
    };

    let r0 = rate_at(0.0)?;
    if !(r0 > 0.0) {
        return Err(Error::NoBracket(format!("rate of {code} at p=0 is {r0}, not positive")));
    }
    let max_p = path.max_p();
    let (mut lo, mut hi) = (0.0, f64::NAN);
    let mut probe = opts.initial_step.min(max_p);
    loop {
        let r = rate_at(probe)?;
        if r <= 0.0 {
            hi = probe;
            break;
        }
        if probe >= max_p {
            break;
        }
        lo = probe;
        probe = (2.0 * probe).min(max_p);
    }
    if hi.is_nan() {
        return Err(Error::NoBracket(format!(
            "rate of {code} stays positive up to p={max_p}"
        )));
    }

    let mut non_monotone = false;
    if opts.grid_points >= 2 {
        let g = opts.grid_points;
        let mut prev = (0.0, r0);
        let mut downs = Vec::new();
        let mut ups = 0usize;
        for i in 1..=g {
            let p = hi * i as f64 / g as f64;
            let r = if i == g { 0.0 } else { rate_at(p)? };
            if prev.1 > 0.0 && r <= 0.0 {
                downs.push((prev.0, p));
            } else if prev.1 <= 0.0 && r > 0.0 {
                ups += 1;
            }
            prev = (p, r);
        }
        non_monotone = downs.len() > 1 || ups > 0;
        if let Some(&(a, b)) = downs.last() {
            lo = a;
            hi = b;
        }
    }

    while hi - lo > opts.tol {
        let mid = 0.5 * (lo + hi);
        if rate_at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        p_star: 0.5 * (lo + hi),
        bracket: (lo, hi),
        evaluations,
        code: *code,
        non_monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub m: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthScan {
    pub rows: Vec<RateRow>,
    pub best_m: usize,
    pub best_rate: f64,
    /// Rule-of-thumb lengths `1/p_z` and `1/q_z`, in the code frame.
    pub inverse_p_z: f64,
    pub inverse_q_z: f64,
}

/// Cat-code rate at a fixed channel for every length in `lengths`; the best
/// length breaks ties toward the smaller code.
pub fn best_length_scan(
    ch: &PauliChannel,
    basis: Basis,
    lengths: impl IntoIterator<Item = usize>,
) -> Result<LengthScan> {
    let mut ms: Vec<usize> = lengths.into_iter().collect();
    ms.sort_unstable();
    ms.dedup();
    if ms.is_empty() {
        return Err(Error::InvalidParameter("length range is empty".into()));
    }
    let rows = ms
        .iter()
        .map(|&m| Ok(RateRow { m, rate: cat_rate(ch, CatCodeSpec::new(m, basis)?)? }))
        .collect::<Result<Vec<_>>>()?;
    let best = argmax_by(&rows, |r| r.rate).expect("nonempty");
    let framed = permute_basis(ch, basis);
    Ok(LengthScan {
        best_m: best.m,
        best_rate: best.rate,
        rows,
        inverse_p_z: 1.0 / framed.p_z(),
        inverse_q_z: 1.0 / framed.q_z(),
    })
}

/// Same as [`best_length_scan`] with the channel taken from a family.
pub fn best_length_scan_on(
    family: &ChannelFamily,
    p: f64,
    basis: Basis,
    lengths: impl IntoIterator<Item = usize>,
) -> Result<LengthScan> {
    best_length_scan(&family.evaluate(p)?, basis, lengths)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub m: usize,
    pub threshold: ThresholdResult,
}

/// First row with the largest value; rows are assumed sorted by `m`.
fn argmax_by<T>(rows: &[T], key: impl Fn(&T) -> f64) -> Option<&T> {
    let mut best: Option<&T> = None;
    for row in rows {
        if best.is_none_or(|b| key(row) > key(b)) {
            best = Some(row);
        }
    }
    best
}

/// Row with the highest threshold, smallest `m` on ties.
pub fn best_threshold(rows: &[ThresholdRow]) -> Option<&ThresholdRow> {
    argmax_by(rows, |r| r.threshold.p_star)
}

/// Thresholds of each code along `path`, sorted by scan length.
pub fn threshold_scan(
    path: &dyn NoisePath,
    codes: &[Code],
    opts: &ThresholdOptions,
) -> Result<Vec<ThresholdRow>> {
    let mut rows = codes
        .iter()
        .map(|code| {
            Ok(ThresholdRow {
                m: code.scan_length(),
                threshold: threshold(path, code, opts)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.m);
    Ok(rows)
}

/// Closed-form large-length estimate `2 q_z ln(1/q_z) / ln ln(1/q_z)` of the
/// best cat-code rate at the hashing point of an almost-bitflip channel. An
/// asymptotic guide, not an exact rate.
pub fn asymptotic_rate_estimate(q_z: f64) -> Result<f64> {
    if !(q_z > 0.0 && q_z < (-1.0f64).exp()) {
        return Err(Error::Domain(format!(
            "asymptotic estimate needs 0 < q_z < 1/e, got {q_z}"
        )));
    }
    let inv_ln = (1.0 / q_z).ln();
    Ok(2.0 * q_z * inv_ln / inv_ln.ln())
}
