//! Sparse multivariate polynomials over an exact [`Scalar`] field.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// A monomial: variables in increasing order with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Collects repeated variables and drops zero exponents.
    pub fn from_powers(powers: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut m: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in powers {
            *m.entry(v).or_default() += e;
        }
        Monomial(m.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn powers(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.0.len());
        for (v, e) in &self.0 {
            let d = other.exponent(v);
            if d > *e {
                return None;
            }
            if d < *e {
                out.push((v.clone(), e - d));
            }
        }
        if other.0.iter().any(|(v, _)| self.exponent(v) == 0) {
            return None;
        }
        Some(Monomial(out))
    }

    /// Every divisor, each exactly once.
    pub fn divisors(&self) -> Vec<Self> {
        let mut out = vec![Vec::new()];
        for (v, e) in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
            for d in &out {
                for k in 0..=*e {
                    let mut d2: Vec<(V, u32)> = d.clone();
                    if k > 0 {
                        d2.push((v.clone(), k));
                    }
                    next.push(d2);
                }
            }
            out = next;
        }
        out.into_iter().map(Monomial).collect()
    }
}

impl<V: fmt::Display> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(v, e)| format!("{v}^{e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<V: Ord, T> {
    terms: BTreeMap<Monomial<V>, T>,
}

impl<V: Ord + Clone, T: Scalar> Default for Poly<V, T> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<V: Ord + Clone, T: Scalar> Poly<V, T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: T) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: V) -> Self {
        Self::term(Monomial::var(v), T::one())
    }

    pub fn term(m: Monomial<V>, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coeff(&self, m: &Monomial<V>) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &T)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_filtered(&self, other: &Self, keep: impl Fn(&Monomial<V>) -> bool) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if keep(&m) {
                    out.add_term(m, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<V, U> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs<U: Scalar, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Poly<V, U>, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl<V: Ord + Clone, T: Scalar> Add for Poly<V, T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<V: Ord + Clone, T: Scalar> Neg for Poly<V, T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-T::one())
    }
}

impl<V: Ord + Clone, T: Scalar> Sub for Poly<V, T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<V: Ord + Clone, T: Scalar> Mul for Poly<V, T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_filtered(&rhs, |_| true)
    }
}

impl<V: Ord + Clone + fmt::Display, T: Scalar> fmt::Display for Poly<V, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Cyclotomic};
    use crate::Rational;
    use proptest::prelude::*;

    type P = Poly<u8, Rational>;

    #[test]
    fn cancellation_removes_terms() {
        let x = P::var(0);
        let y = P::var(1);
        let p = (x.clone() + y.clone()) * (x.clone() - y.clone());
        assert_eq!(p.coeff(&Monomial::from_powers([(0, 2)])), int(1));
        assert_eq!(p.coeff(&Monomial::from_powers([(0, 1), (1, 1)])), int(0));
        assert_eq!(p.len(), 2);
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn monomial_division() {
        let m = Monomial::from_powers([(0u8, 2), (1, 1)]);
        assert_eq!(m.div(&Monomial::var(0)), Some(Monomial::from_powers([(0, 1), (1, 1)])));
        assert_eq!(m.div(&Monomial::var(2)), None);
        assert_eq!(m.divisors().len(), 6);
    }

    #[test]
    fn cyclotomic_coefficients() {
        let z = Poly::<u8, Cyclotomic>::constant(Cyclotomic::zeta(3, 1));
        let p = z.clone() * z.clone() * z * Poly::var(0);
        assert_eq!(p.coeff(&Monomial::var(0)), Cyclotomic::from_int(1));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in proptest::collection::vec((0u8..3, 0u32..3, -5i64..5), 0..5),
                       b in proptest::collection::vec((0u8..3, 0u32..3, -5i64..5), 0..5),
                       c in proptest::collection::vec((0u8..3, 0u32..3, -5i64..5), 0..5)) {
            let mk = |t: &Vec<(u8, u32, i64)>| {
                let mut p = P::zero();
                for &(v, e, k) in t {
                    p.add_term(Monomial::from_powers([(v, e)]), int(k));
                }
                p
            };
            let (a, b, c) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b + a * c);
        }
    }
}
