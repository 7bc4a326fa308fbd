//! Sign plus log-magnitude representation of reals.
//!
//! Products of many probabilities underflow long before the cat-code lengths
//! of interest; differences of such products may also be negative. A value is
//! stored as `sign * mantissa * 2^exponent` with `mantissa` in `[1, 2)` and an
//! unbounded integer exponent, so its log-magnitude `ln(mantissa) +
//! exponent * ln 2` never loses the precision a single `f64` logarithm would.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use std::f64::consts::LN_2;

#[derive(Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    mantissa: f64,
    exponent: i64,
}

const MANTISSA_MASK: u64 = (1 << 52) - 1;

/// Exact `2^k` for `k` in the normal range.
fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// `x = m * 2^e` with `m` in `[1, 2)`, for finite positive `x`.
fn split(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let (x, bias) = if x < f64::MIN_POSITIVE {
        (x * pow2(64), -64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let m = f64::from_bits((bits & MANTISSA_MASK) | (1023 << 52));
    (m, e + bias)
}

impl SignedLogValue {
    pub const ZERO: SignedLogValue = SignedLogValue {
        sign: 0,
        mantissa: 0.0,
        exponent: 0,
    };

    pub const ONE: SignedLogValue = SignedLogValue {
        sign: 1,
        mantissa: 1.0,
        exponent: 0,
    };

    /// `sign * m * 2^e` for any finite nonzero `m`.
    fn normalized(sign: i8, m: f64, e: i64) -> Self {
        if sign == 0 || m == 0.0 {
            return Self::ZERO;
        }
        let sign = if m < 0.0 { -sign } else { sign };
        let (m, shift) = split(m.abs());
        Self {
            sign: sign.signum(),
            mantissa: m,
            exponent: e + shift,
        }
    }

    /// `sign * exp(log_magnitude)`; a zero sign or `-inf` magnitude gives zero.
    pub fn from_parts(sign: i8, log_magnitude: f64) -> Self {
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        assert!(log_magnitude.is_finite(), "log-magnitude {log_magnitude} is not finite");
        let e = (log_magnitude / LN_2).floor();
        let rest = log_magnitude - e * LN_2;
        Self::normalized(sign, rest.exp(), e as i64)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "cannot represent {x}");
        if x == 0.0 {
            return Self::ZERO;
        }
        Self::normalized(1, x, 0)
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let e = self.exponent;
        let mag = if e > 1023 {
            f64::INFINITY
        } else if e < -1076 {
            0.0
        } else {
            // two steps keep each factor in the normal range
            let half = e / 2;
            self.mantissa * pow2(half) * pow2(e - half)
        };
        f64::from(self.sign) * mag
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_magnitude(self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.exponent as f64 * LN_2
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// `base^exp` for a real base and integer exponent, with `0^0 = 1`.
    pub fn powi(base: f64, exp: u64) -> Self {
        if exp == 0 {
            return Self::ONE;
        }
        Self::from_f64(base).pow(exp)
    }

    /// Repeated squaring; relative error grows like `log2(exp)` roundings.
    pub fn pow(self, exp: u64) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut n = exp;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        acc
    }

    pub fn abs(self) -> Self {
        Self {
            sign: self.sign.abs(),
            ..self
        }
    }

    /// Ratio of two values as an ordinary real, without forming either one.
    pub fn ratio(self, denom: Self) -> f64 {
        (self / denom).to_f64()
    }
}

impl Default for SignedLogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for SignedLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(
                f,
                "{}{}*2^{}",
                if s < 0 { "-" } else { "" },
                self.mantissa,
                self.exponent
            ),
        }
    }
}

impl From<f64> for SignedLogValue {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for SignedLogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            ..self
        }
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        Self::normalized(
            self.sign * rhs.sign,
            self.mantissa * rhs.mantissa,
            self.exponent + rhs.exponent,
        )
    }
}

impl Div for SignedLogValue {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "division by a zero SignedLogValue");
        if self.sign == 0 {
            return Self::ZERO;
        }
        Self::normalized(
            self.sign * rhs.sign,
            self.mantissa / rhs.mantissa,
            self.exponent - rhs.exponent,
        )
    }
}

impl Add for SignedLogValue {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if (self.exponent, self.mantissa) >= (rhs.exponent, rhs.mantissa) {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = big.exponent - small.exponent;
        if gap > 1000 {
            return big;
        }
        let m = f64::from(big.sign) * big.mantissa
            + f64::from(small.sign) * small.mantissa * pow2(-gap);
        Self::normalized(1, m, big.exponent)
    }
}

impl Sub for SignedLogValue {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::iter::Sum for SignedLogValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, x| acc + x)
    }
}

impl std::iter::Product for SignedLogValue {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ONE, |acc, x| acc * x)
    }
}
