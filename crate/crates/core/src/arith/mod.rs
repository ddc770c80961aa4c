//! Exact arithmetic: rationals, Bernoulli values, cyclotomic numbers.

mod bernoulli;
mod cyclotomic;

pub use bernoulli::{bernoulli_number, bernoulli_poly, root_of_unity_sum};
pub use cyclotomic::{cyclotomic_poly, euler_phi, Cyclotomic};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Reduced fraction `num/den` with positive denominator.
pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(num.into(), den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Always `p/q`, including `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p`, `p/q`, with an optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Query(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            rational(p, q)
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `x^e` for a possibly negative exponent.
pub fn pow(x: &Rational, e: i64) -> Rational {
    let mut r = Rational::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// `Some(n)` when `q` is a non-negative integer that fits in `u64`.
pub fn as_nonneg_integer(q: &Rational) -> Option<u64> {
    if !q.is_integer() || q.is_negative() {
        return None;
    }
    q.to_integer().try_into().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_reduces() {
        assert_eq!(format_rational(&rational(2, 4).unwrap()), "1/2");
        assert_eq!(format_rational(&rational(-3, -6).unwrap()), "1/2");
        assert_eq!(format_rational(&rational(0, 5).unwrap()), "0/1");
        assert_eq!(format_rational(&rational(3, -6).unwrap()), "-1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(rational(1, 0), Err(Error::ZeroDenominator));
        assert!(parse_rational("3/0").is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0/1", "-7/3", "12/1", "1/25"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), BigInt::from(10));
        assert_eq!(binomial(12, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
        assert_eq!(factorial(6), BigInt::from(720));
    }
}
