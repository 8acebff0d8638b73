//! Exact non-negative rationals.
//!
//! Every threshold in the crate (λ, ε, δ, window ratios) is compared
//! exactly; there is no floating point anywhere on a decision path.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational with `u64` numerator and denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<u64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalError {
    #[error("malformed rational {0:?}: expected \"p/q\" or \"p\"")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics if `denom` is zero.
    pub fn new(numer: u64, denom: u64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: u64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    /// `self * n`, rounded up.
    pub fn ceil_mul(&self, n: u64) -> u64 {
        let p = self.numer() as u128 * n as u128;
        let q = self.denom() as u128;
        p.div_ceil(q) as u64
    }

    /// `a > self * b`, evaluated without rounding.
    pub fn lt_ratio_of(&self, a: u64, b: u64) -> bool {
        // a/b > p/q  <=>  a*q > p*b
        a as u128 * self.denom() as u128 > self.numer() as u128 * b as u128
    }

    /// `a >= self * b`.
    pub fn le_ratio_of(&self, a: u64, b: u64) -> bool {
        a as u128 * self.denom() as u128 >= self.numer() as u128 * b as u128
    }

    /// `a / b` as a reduced rational. Panics if `b` is zero.
    pub fn ratio(a: usize, b: usize) -> Self {
        Rational::new(a as u64, b as u64)
    }

    /// `1 - 3·self`, saturating at zero.
    pub fn greendlinger_bound(&self) -> Rational {
        let three = Ratio::from_integer(3u64);
        let one = Ratio::from_integer(1u64);
        if self.0 * three >= one {
            Rational::ZERO
        } else {
            Rational(one - self.0 * three)
        }
    }

    pub fn checked_mul(&self, other: &Rational) -> Option<Rational> {
        let n = self.numer().checked_mul(other.numer())?;
        let d = self.denom().checked_mul(other.denom())?;
        Some(Rational::new(n, d))
    }

    pub fn recip(&self) -> Option<Rational> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let malformed = || RationalError::Malformed(s.to_string());
        let digits = |x: &str| -> Result<u64, RationalError> {
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            x.parse().map_err(|_| malformed())
        };
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (digits(p)?, digits(q)?),
            None => (digits(t)?, 1),
        };
        if q == 0 {
            return Err(RationalError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational::new(p, q))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let r: Rational = "2/20".parse().unwrap();
        assert_eq!(r, Rational::new(1, 10));
        assert_eq!(r.to_string(), "1/10");
        assert_eq!("3".parse::<Rational>().unwrap().to_string(), "3/1");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("-1/2".parse::<Rational>().is_err());
        assert!("0.5".parse::<Rational>().is_err());
        assert!("/3".parse::<Rational>().is_err());
    }

    #[test]
    fn exact_comparisons() {
        let tenth = Rational::new(1, 10);
        assert!(tenth.lt_ratio_of(665, 6640));
        assert!(!tenth.lt_ratio_of(664, 6640));
        assert!(tenth.le_ratio_of(664, 6640));
        assert_eq!(Rational::new(7, 10).ceil_mul(6640), 4648);
        assert_eq!(Rational::new(7, 10).ceil_mul(9880), 6916);
        assert_eq!(Rational::new(1, 3).ceil_mul(10), 4);
        assert_eq!(tenth.greendlinger_bound(), Rational::new(7, 10));
        assert_eq!(Rational::new(1, 2).greendlinger_bound(), Rational::ZERO);
    }
}
