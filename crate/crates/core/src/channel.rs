//! Qubit Pauli channels, their entropies and hashing rates, and the channel
//! families used for threshold searches.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Negative components down to this magnitude are treated as roundoff and
/// clamped to zero.
pub const CLAMP_TOL: f64 = 1e-12;

const SUM_TOL: f64 = 1e-12;
const ENTROPY_SUM_TOL: f64 = 1e-9;

/// A qubit Pauli channel `rho -> p_i rho + p_x XρX + p_y YρY + p_z ZρZ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliChannel {
    p_i: f64,
    p_x: f64,
    p_y: f64,
    p_z: f64,
}

impl PauliChannel {
    pub const NOISELESS: PauliChannel = PauliChannel {
        p_i: 1.0,
        p_x: 0.0,
        p_y: 0.0,
        p_z: 0.0,
    };

    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let mut probs = [p_i, p_x, p_y, p_z];
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "non-finite component in {:?}",
                    [p_i, p_x, p_y, p_z]
                )));
            }
            if *p < 0.0 {
                if *p < -CLAMP_TOL {
                    return Err(Error::InvalidDistribution(format!(
                        "negative component {p} in {:?}",
                        [p_i, p_x, p_y, p_z]
                    )));
                }
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "components sum to {sum}, expected 1"
            )));
        }
        Ok(Self::from_array_unchecked(probs))
    }

    /// Builds a channel from the error probabilities, with `p_i` implied.
    pub fn from_errors(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        Self::new(1.0 - p_x - p_y - p_z, p_x, p_y, p_z)
    }

    /// Builds a channel where amplitude (X) and phase (Z) flips occur
    /// independently with probabilities `q_x` and `q_z`.
    pub fn independent(q_x: f64, q_z: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q_x) || !(0.0..=1.0).contains(&q_z) {
            return Err(Error::InvalidParameter(format!(
                "flip probabilities ({q_x}, {q_z}) must lie in [0, 1]"
            )));
        }
        Self::new(
            (1.0 - q_x) * (1.0 - q_z),
            q_x * (1.0 - q_z),
            q_x * q_z,
            q_z * (1.0 - q_x),
        )
    }

    /// Components in `[I, X, Y, Z]` order.
    pub fn from_array(probs: [f64; 4]) -> Result<Self> {
        Self::new(probs[0], probs[1], probs[2], probs[3])
    }

    pub(crate) fn from_array_unchecked(probs: [f64; 4]) -> Self {
        Self {
            p_i: probs[0],
            p_x: probs[1],
            p_y: probs[2],
            p_z: probs[3],
        }
    }

    pub fn p_i(&self) -> f64 {
        self.p_i
    }

    pub fn p_x(&self) -> f64 {
        self.p_x
    }

    pub fn p_y(&self) -> f64 {
        self.p_y
    }

    pub fn p_z(&self) -> f64 {
        self.p_z
    }

    /// Amplitude-flip probability `p_x + p_y`.
    pub fn q_x(&self) -> f64 {
        self.p_x + self.p_y
    }

    /// Phase-flip probability `p_z + p_y`.
    pub fn q_z(&self) -> f64 {
        self.p_z + self.p_y
    }

    /// Total error probability `p_x + p_y + p_z`.
    pub fn total_error(&self) -> f64 {
        self.p_x + self.p_y + self.p_z
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }
}

impl fmt::Display for PauliChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(p_i={}, p_x={}, p_y={}, p_z={})",
            self.p_i, self.p_x, self.p_y, self.p_z
        )
    }
}

/// Shannon entropy, in bits, of a four-outcome distribution.
pub fn entropy4(dist: [f64; 4]) -> Result<f64> {
    let mut sum = 0.0;
    for &d in &dist {
        if !d.is_finite() || d < -CLAMP_TOL {
            return Err(Error::InvalidDistribution(format!(
                "component {d} in {dist:?}"
            )));
        }
        sum += d;
    }
    if (sum - 1.0).abs() > ENTROPY_SUM_TOL {
        return Err(Error::InvalidDistribution(format!(
            "{dist:?} sums to {sum}"
        )));
    }
    Ok(entropy_bits(&dist))
}

/// `-Σ d log2 d` with `0 log 0 = 0` and nonpositive entries skipped.
pub(crate) fn entropy_bits(dist: &[f64]) -> f64 {
    dist.iter()
        .filter(|&&d| d > 0.0)
        .map(|&d| -d * d.log2())
        .sum()
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

/// Single-letter coherent information of a Pauli channel on the maximally
/// mixed input, `1 - H(p_i, p_x, p_y, p_z)`. Negative values are returned
/// as-is.
pub fn hashing_rate(ch: &PauliChannel) -> f64 {
    1.0 - entropy_bits(&ch.as_array())
}

/// Basis in which a cat code repeats its codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Basis {
    #[default]
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    pub fn letter(self) -> char {
        match self {
            Basis::Z => 'Z',
            Basis::X => 'X',
            Basis::Y => 'Y',
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Basis::Z),
            "X" | "x" => Ok(Basis::X),
            "Y" | "y" => Ok(Basis::Y),
            _ => Err(Error::InvalidParameter(format!("unknown basis {s:?}"))),
        }
    }
}

/// Relabels error operators so a code in basis `b` can be evaluated with the
/// Z-basis formulas: the errors that flip the codewords land in the X and Y
/// slots, and the error that only dephases them lands in the Z slot.
///
/// Every relabeling is an involution, so the same call maps back.
pub fn permute_basis(ch: &PauliChannel, b: Basis) -> PauliChannel {
    let [i, x, y, z] = ch.as_array();
    let permuted = match b {
        Basis::Z => [i, x, y, z],
        Basis::X => [i, z, y, x],
        Basis::Y => [i, x, z, y],
    };
    PauliChannel::from_array_unchecked(permuted)
}

/// One-parameter families of Pauli channels indexed by a noise magnitude
/// `p`, each passing through the noiseless channel at `p = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ChannelFamily {
    /// `(1 - p, p/3, p/3, p/3)`.
    Depolarizing,
    /// `(1 - p, p/2, 0, p/2)`.
    TwoPauli,
    /// Independent amplitude and phase flips with `q_x = ratio * q_z`, indexed
    /// by the total error probability `p = q_x + q_z - q_x q_z`.
    IndependentXz { ratio: f64 },
    /// `(1 - p, p d_x, p d_y, p d_z)` for a direction summing to one.
    CustomRay { direction: [f64; 3] },
}

impl ChannelFamily {
    pub fn independent_xz(ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "independent family ratio must be positive, got {ratio}"
            )));
        }
        Ok(ChannelFamily::IndependentXz { ratio })
    }

    /// A ray from the noiseless channel toward the channel with error
    /// probabilities proportional to `(d_x, d_y, d_z)`.
    pub fn custom_ray(d_x: f64, d_y: f64, d_z: f64) -> Result<Self> {
        let total = d_x + d_y + d_z;
        if [d_x, d_y, d_z].iter().any(|d| !d.is_finite() || *d < 0.0) || total <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ray direction ({d_x}, {d_y}, {d_z}) must be nonnegative and nonzero"
            )));
        }
        Ok(ChannelFamily::CustomRay {
            direction: [d_x / total, d_y / total, d_z / total],
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::TwoPauli => "two-pauli",
            ChannelFamily::IndependentXz { .. } => "indep",
            ChannelFamily::CustomRay { .. } => "pauli",
        }
    }

    /// Largest admissible value of the family parameter.
    pub fn max_p(&self) -> f64 {
        1.0
    }

    pub fn evaluate(&self, p: f64) -> Result<PauliChannel> {
        if !(p.is_finite() && p >= 0.0 && p <= self.max_p()) {
            return Err(Error::NoSolution {
                family: self.name().to_string(),
                p,
            });
        }
        match *self {
            ChannelFamily::Depolarizing => PauliChannel::new(1.0 - p, p / 3.0, p / 3.0, p / 3.0),
            ChannelFamily::TwoPauli => PauliChannel::new(1.0 - p, p / 2.0, 0.0, p / 2.0),
            ChannelFamily::IndependentXz { ratio } => {
                let (q_z, q_x) = independent_split(ratio, p);
                PauliChannel::independent(q_x.min(1.0), q_z.min(1.0))
            }
            ChannelFamily::CustomRay { direction: [dx, dy, dz] } => {
                PauliChannel::new(1.0 - p, p * dx, p * dy, p * dz)
            }
        }
    }
}

/// Solves `q_hi = ratio * q_lo` and `q_lo + q_hi - q_lo q_hi = p` for the
/// root with `q_lo` in `[0, 1]`. Returns `(q_lo, q_hi)`.
pub fn independent_split(ratio: f64, p: f64) -> (f64, f64) {
    // ratio q^2 - (1 + ratio) q + p = 0, small root in the cancellation-free form
    let b = 1.0 + ratio;
    let disc = (b * b - 4.0 * ratio * p).max(0.0);
    let q_lo = 2.0 * p / (b + disc.sqrt());
    (q_lo, ratio * q_lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn entropy_of_fixed_distributions() {
        assert_eq!(entropy4([1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(entropy4([0.25; 4]).unwrap(), 2.0, epsilon = 1e-15);
        // 40-digit evaluation of -0.7 log2 0.7 - 0.3 log2 0.1
        assert_abs_diff_eq!(
            entropy4([0.7, 0.1, 0.1, 0.1]).unwrap(),
            1.356779649447039472660940907427108609816,
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_rejects_bad_distributions() {
        assert!(entropy4([1.1, 0.0, 0.0, 0.0]).is_err());
        assert!(entropy4([1.0 + 1e-6, -1e-6, 0.0, 0.0]).is_err());
        assert!(entropy4([1.0, -1e-13, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn channel_validation_and_clamping() {
        let ch = PauliChannel::new(1.0, -1e-13, 0.0, 1e-13).unwrap();
        assert_eq!(ch.p_x(), 0.0);
        assert!(PauliChannel::new(1.1, -0.1, 0.0, 0.0).is_err());
        assert!(PauliChannel::new(0.5, 0.1, 0.1, 0.1).is_err());
        assert!(PauliChannel::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn hashing_rate_noiseless_is_one() {
        assert_eq!(hashing_rate(&PauliChannel::NOISELESS), 1.0);
    }

    #[test]
    fn two_pauli_hashing_matches_closed_form() {
        for k in 1..=9 {
            let p = 0.05 * k as f64;
            let ch = ChannelFamily::TwoPauli.evaluate(p).unwrap();
            let closed = 1.0 - binary_entropy(p) - p;
            assert_abs_diff_eq!(hashing_rate(&ch), closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn hashing_zero_crossings() {
        let tp = bisect(|p| 1.0 - binary_entropy(p) - p, 0.1, 0.4);
        let tp_family = bisect(
            |p| hashing_rate(&ChannelFamily::TwoPauli.evaluate(p).unwrap()),
            0.1,
            0.4,
        );
        assert_abs_diff_eq!(tp, 0.2271, epsilon = 1e-3);
        assert_abs_diff_eq!(tp, tp_family, epsilon = 1e-10);
        let dep = bisect(
            |p| hashing_rate(&ChannelFamily::Depolarizing.evaluate(p).unwrap()),
            0.1,
            0.4,
        );
        assert_abs_diff_eq!(dep, 0.1893, epsilon = 1e-3);
    }

    #[test]
    fn depolarizing_hashing_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..=750 {
            let p = k as f64 / 1000.0;
            let r = hashing_rate(&ChannelFamily::Depolarizing.evaluate(p).unwrap());
            assert!(r < prev, "not decreasing at p={p}");
            prev = r;
        }
    }

    #[test]
    fn family_values() {
        let tp = ChannelFamily::TwoPauli.evaluate(0.2).unwrap();
        assert_abs_diff_eq!(tp.p_i(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(tp.p_x(), 0.1, epsilon = 1e-15);
        assert_eq!(tp.p_y(), 0.0);
        assert_abs_diff_eq!(tp.p_z(), 0.1, epsilon = 1e-15);

        let families = [
            ChannelFamily::Depolarizing,
            ChannelFamily::TwoPauli,
            ChannelFamily::independent_xz(9.0).unwrap(),
            ChannelFamily::independent_xz(1.0 / 9.0).unwrap(),
            ChannelFamily::custom_ray(1.0, 2.0, 3.0).unwrap(),
        ];
        for f in families {
            assert_eq!(f.evaluate(0.0).unwrap(), PauliChannel::NOISELESS);
            assert!(matches!(f.evaluate(1.5), Err(Error::NoSolution { .. })));
            assert!(f.evaluate(1.0).is_ok());
        }
    }

    #[test]
    fn independent_split_residuals() {
        for ratio in [9.0, 1.0, 0.25, 40.0] {
            for k in 0..=20 {
                let p = k as f64 / 20.0;
                let (lo, hi) = independent_split(ratio, p);
                assert!((0.0..=1.0 + 1e-12).contains(&lo));
                assert_abs_diff_eq!(hi, ratio * lo, epsilon = 1e-12);
                assert_abs_diff_eq!(lo + hi - lo * hi, p, epsilon = 1e-12);
            }
        }
        let ch = ChannelFamily::independent_xz(9.0).unwrap().evaluate(0.29).unwrap();
        assert_abs_diff_eq!(ch.q_x(), 9.0 * ch.q_z(), epsilon = 1e-12);
        assert_abs_diff_eq!(ch.total_error(), 0.29, epsilon = 1e-12);
    }

    #[test]
    fn permute_basis_cases() {
        let ch = PauliChannel::new(0.9, 0.05, 0.02, 0.03).unwrap();
        assert_eq!(permute_basis(&ch, Basis::Z), ch);
        let x = permute_basis(&ch, Basis::X);
        assert_eq!(x.as_array(), [0.9, 0.03, 0.02, 0.05]);
        let y = permute_basis(&ch, Basis::Y);
        assert_eq!(y.as_array(), [0.9, 0.05, 0.03, 0.02]);
        for b in Basis::ALL {
            assert_eq!(permute_basis(&permute_basis(&ch, b), b), ch);
        }
    }

    #[test]
    fn basis_parse() {
        assert_eq!("X".parse::<Basis>().unwrap(), Basis::X);
        assert!("W".parse::<Basis>().is_err());
    }
}
