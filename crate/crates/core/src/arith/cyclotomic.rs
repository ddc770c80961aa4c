//! Elements of `Q(zeta_n)` in the power basis reduced modulo `Phi_n`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;

use super::{format_rational, int};
use crate::error::{Error, Result};
use crate::Rational;

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
///
/// Obtained by dividing `x^n - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = divide_monic(&p, &cyclotomic_poly(d));
    }
    let p = Arc::new(p);
    phi_cache().lock().insert(n, p.clone());
    p
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (dn..num.len()).rev() {
        let c = rem[i];
        quot[i - dn] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i - dn + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// `sum_j c_j zeta_n^j` with `0 <= j < phi(n)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn rational(q: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// `zeta_n^k`; negative `k` is taken modulo `n`.
    pub fn zeta(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(i64::from(n)) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::reduce(n, raw)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    fn reduce(n: u32, mut raw: Vec<Rational>) -> Self {
        let phi = cyclotomic_poly(n);
        let d = phi.len() - 1;
        for i in (d..raw.len()).rev() {
            if raw[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut raw[i]);
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    raw[i - d + j] -= &c * int(pj);
                }
            }
        }
        raw.resize(d, Rational::zero());
        Cyclotomic { conductor: n, coeffs: raw }
    }

    /// The same number written over conductor `m`, a multiple of ours.
    pub fn embed(&self, m: u32) -> Self {
        if m == self.conductor {
            return self.clone();
        }
        assert_eq!(m % self.conductor, 0, "conductor {} does not divide {}", self.conductor, m);
        let step = (m / self.conductor) as usize;
        let mut raw = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            raw[j * step] = c.clone();
        }
        Self::reduce(m, raw)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.conductor.lcm(&b.conductor);
        (a.embed(m), b.embed(m))
    }

    /// Galois action `zeta_n -> zeta_n^k`, `k` coprime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.conductor;
        let kk = k.rem_euclid(i64::from(n)) as usize;
        let mut raw = vec![Rational::zero(); self.coeffs.len().saturating_sub(1) * kk.max(1) + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            let e = (j * kk) % n as usize;
            if e >= raw.len() {
                raw.resize(e + 1, Rational::zero());
            }
            raw[e] += c;
        }
        Self::reduce(n, raw)
    }

    /// Complex conjugate, `zeta_n -> zeta_n^-1`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            Err(Error::NotRational(self.to_string()))
        }
    }

    /// Inverse via the product of the non-trivial Galois conjugates.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.conductor;
        let mut conj = Cyclotomic::one();
        for k in 2..=n {
            if k.gcd(&n) == 1 && k != n {
                conj = conj * self.galois(i64::from(k));
            }
        }
        let norm = (self.clone() * conj.clone()).to_rational().expect("field norm is rational");
        Some(conj.scale(&norm.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Cyclotomic::one(), |acc, _| acc * self.clone())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Self {
        let (mut a, b) = Self::common(&self, &rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = Self::common(&self, &rhs);
        if a.is_zero() || b.is_zero() {
            return Cyclotomic::zero();
        }
        let mut raw = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Self::reduce(a.conductor, raw)
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

/// Written in the group-file character grammar, e.g. `-1 - 1*z3^1`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mag = if mag.is_integer() { mag.numer().to_string() } else { format_rational(&mag) };
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if j == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*z{}^{j}", self.conductor)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::zeta(n, k)
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_poly(n).len() as u32 - 1, euler_phi(n));
        }
    }

    #[test]
    fn small_identities() {
        assert_eq!((z(3, 1) + z(3, 2)).to_rational().unwrap(), int(-1));
        assert_eq!((z(5, 1) * z(5, 4)).to_rational().unwrap(), int(1));
        assert_eq!((z(4, 1) * z(4, 1)).to_rational().unwrap(), int(-1));
        let s = Cyclotomic::one() + z(3, 1) + z(3, 2);
        assert_eq!(s.to_rational().unwrap(), int(0));
        assert_eq!(Cyclotomic::from_int(3).to_rational().unwrap(), int(3));
        assert!(matches!(z(5, 1).to_rational(), Err(Error::NotRational(_))));
    }

    #[test]
    fn mixed_conductors() {
        // zeta_6 = -zeta_3^2
        assert_eq!(z(6, 1), -z(3, 2));
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
        assert_eq!(z(12, 4), z(3, 1));
        let s = z(4, 1) + z(3, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(s - z(3, 1), z(4, 1));
    }

    #[test]
    fn conjugation_and_powers() {
        for n in 1..=12u32 {
            assert_eq!(z(n, 1).pow(n), Cyclotomic::one(), "zeta_{n}^{n}");
            assert_eq!(z(n, 3).conjugate(), z(n, -3));
        }
    }

    #[test]
    fn inverses() {
        let a = Cyclotomic::from_int(2) + z(7, 1) - z(7, 3).scale(&rational(1, 3).unwrap());
        let inv = a.inverse().unwrap();
        assert_eq!(a * inv, Cyclotomic::one());
        assert!(Cyclotomic::zero().inverse().is_none());
    }

    #[test]
    fn display_grammar() {
        assert_eq!(Cyclotomic::from_int(-1).to_string(), "-1");
        assert_eq!(z(3, 2).to_string(), "-1 - 1*z3^1");
        assert_eq!(Cyclotomic::zero().to_string(), "0");
    }

    fn arb(n: u32) -> impl proptest::strategy::Strategy<Value = Cyclotomic> {
        use proptest::prelude::*;
        proptest::collection::vec((-5i64..5, 1i64..4), n as usize).prop_map(move |cs| {
            cs.into_iter()
                .enumerate()
                .fold(Cyclotomic::zero(), |acc, (j, (p, q))| acc + z(n, j as i64).scale(&rational(p, q).unwrap()))
        })
    }

    #[test]
    fn imaginary_quadratic_norms_are_rational() {
        for n in [3u32, 4] {
            let a = Cyclotomic::from_int(2) + z(n, 1).scale(&rational(-5, 3).unwrap());
            assert!((a.clone() * a.conjugate()).is_rational());
        }
    }

    proptest::proptest! {
        #[test]
        fn mul_associative(a in arb(5), b in arb(5), c in arb(5)) {
            proptest::prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a * (b * c));
        }

        #[test]
        fn norm_of_conjugate_pair_is_real(a in arb(12)) {
            // a * conj(a) is fixed by conjugation
            let n = a.clone() * a.conjugate();
            proptest::prop_assert_eq!(n.conjugate(), n);
        }

        #[test]
        fn inverse_is_inverse(a in arb(9)) {
            if let Some(inv) = a.inverse() {
                proptest::prop_assert_eq!(a * inv, Cyclotomic::one());
            }
        }
    }
}
