use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use parking_lot::Mutex;

use super::{binomial, int, Cyclotomic};
use crate::error::Result;
use crate::Rational;

fn number_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

fn poly_table() -> &'static Mutex<HashMap<(u32, Rational), Rational>> {
    static TABLE: OnceLock<Mutex<HashMap<(u32, Rational), Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `B_m = B_m(0)`, so `B_1 = -1/2`.
pub fn bernoulli_number(m: u32) -> Rational {
    let mut table = number_table().lock();
    while table.len() <= m as usize {
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        let n = table.len() as u32;
        let s = (0..n)
            .fold(Rational::zero(), |acc, j| acc + Rational::from_integer(binomial(n + 1, j)) * &table[j as usize]);
        table.push(-s / int(i64::from(n) + 1));
    }
    table[m as usize].clone()
}

/// `B_m(x) = sum_j C(m, j) B_j x^(m-j)`.
pub fn bernoulli_poly(m: u32, x: &Rational) -> Rational {
    let key = (m, x.clone());
    if let Some(v) = poly_table().lock().get(&key) {
        return v.clone();
    }
    let mut acc = Rational::zero();
    let mut xp = Rational::one();
    // accumulate from j = m down to 0 so the power of x grows
    for j in (0..=m).rev() {
        acc += Rational::from_integer(binomial(m, j)) * bernoulli_number(j) * &xp;
        xp *= x;
    }
    poly_table().lock().insert(key, acc.clone());
    acc
}

/// `sum_{j=1}^{m-1} zeta_m^(j l) / (1 - zeta_m^(-j))`, evaluated in `Q(zeta_m)`.
pub fn root_of_unity_sum(m: u32, l: u32) -> Result<Rational> {
    assert!(m >= 2 && l < m, "root_of_unity_sum needs m >= 2 and 0 <= l < m");
    let n = i64::from(m);
    let one = Cyclotomic::one();
    let mut total = Cyclotomic::zero();
    for j in 1..n {
        let num = Cyclotomic::zeta(m, j * i64::from(l));
        let den = one.clone() - Cyclotomic::zeta(m, -j);
        let inv = den.inverse().expect("1 - zeta^-j is nonzero for 0 < j < m");
        total = total + num * inv;
    }
    total.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorial, rational};

    /// Coefficients of t/(e^t - 1) by exact power-series division.
    fn oracle_numbers(n: usize) -> Vec<Rational> {
        // (e^t - 1)/t = sum t^k / (k+1)!
        let d: Vec<Rational> = (0..=n).map(|k| Rational::new(1.into(), factorial(k as u32 + 1))).collect();
        let mut q = vec![Rational::zero(); n + 1];
        for k in 0..=n {
            let mut s = if k == 0 { Rational::one() } else { Rational::zero() };
            for j in 1..=k {
                s -= &d[j] * &q[k - j];
            }
            q[k] = s / &d[0];
        }
        // q[k] = B_k / k!
        q.into_iter().enumerate().map(|(k, c)| c * Rational::from_integer(factorial(k as u32))).collect()
    }

    /// B_m(x) from the product of t/(e^t-1) and e^{tx}.
    fn oracle_poly(m: usize, x: &Rational) -> Rational {
        let b = oracle_numbers(m);
        let mut acc = Rational::zero();
        for j in 0..=m {
            // coefficient of t^m: sum_j (B_j/j!) * x^(m-j)/(m-j)!
            let xp = (0..m - j).fold(Rational::one(), |a, _| a * x);
            acc += &b[j] / Rational::from_integer(factorial(j as u32)) * xp
                / Rational::from_integer(factorial((m - j) as u32));
        }
        acc * Rational::from_integer(factorial(m as u32))
    }

    #[test]
    fn numbers_match_series_division() {
        let oracle = oracle_numbers(20);
        for (m, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli_number(m as u32), b, "B_{m}");
        }
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(2), rational(1, 6).unwrap());
        assert_eq!(bernoulli_number(3), int(0));
    }

    #[test]
    fn poly_values() {
        let fifth = rational(1, 5).unwrap();
        assert_eq!(bernoulli_poly(2, &fifth), rational(1, 150).unwrap());
        assert_eq!(oracle_poly(2, &fifth), rational(1, 150).unwrap());
        let x = rational(3, 5).unwrap();
        assert_eq!(bernoulli_poly(3, &x), rational(-3, 125).unwrap());
        assert_eq!(oracle_poly(3, &x), rational(-3, 125).unwrap());
    }

    #[test]
    fn poly_matches_oracle_grid() {
        for m in 0..10 {
            for (p, q) in [(0, 1), (1, 2), (2, 7), (-5, 3)] {
                let x = rational(p, q).unwrap();
                assert_eq!(bernoulli_poly(m, &x), oracle_poly(m as usize, &x));
            }
        }
    }

    #[test]
    fn poly_at_zero_is_number() {
        for m in 0..=20 {
            assert_eq!(bernoulli_poly(m, &Rational::zero()), bernoulli_number(m));
        }
    }

    #[test]
    fn root_of_unity_sum_small() {
        assert_eq!(root_of_unity_sum(2, 0).unwrap(), rational(1, 2).unwrap());
        assert_eq!(root_of_unity_sum(5, 3).unwrap(), int(-1));
    }

    proptest::proptest! {
        #[test]
        fn reflection(m in 0u32..=12, p in -40i64..40, q in 1i64..30) {
            let x = rational(p, q).unwrap();
            let lhs = bernoulli_poly(m, &(Rational::one() - &x));
            let sign = if m % 2 == 0 { int(1) } else { int(-1) };
            proptest::prop_assert_eq!(lhs, sign * bernoulli_poly(m, &x));
        }
    }
}
