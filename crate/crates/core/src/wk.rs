//! ψ-class intersection numbers `⟨τ_{a_1}⋯τ_{a_n}⟩_g` on moduli of stable curves.
//!
//! String and dilaton equations strip `τ_0` and `τ_1`; anything left goes
//! through the DVV recursion on the largest exponent.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use crate::arith::{int, rational};
use crate::error::{Error, Result};
use crate::Rational;

type Key = (u32, Vec<u32>);

fn memo() -> &'static Mutex<HashMap<Key, Rational>> {
    static MEMO: OnceLock<Mutex<HashMap<Key, Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `(2n-1)!!` with `(-1)!! = 1`.
fn odd_factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * (2 * i - 1))
}

pub fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// `⟨Π τ_{a_i}⟩_g`; zero when the degree does not match `3g - 3 + n`.
///
/// `n = 0` is rejected for every genus.
pub fn psi_correlator(g: u32, powers: &[u32]) -> Result<Rational> {
    if powers.is_empty() || !is_stable(g, powers.len()) {
        return Err(Error::Unstable { genus: g, points: powers.len() });
    }
    let mut a = powers.to_vec();
    a.sort_unstable();
    Ok(eval(g, a))
}

/// Stable-or-zero variant for recursive callers.
fn eval_or_zero(g: i64, a: Vec<u32>) -> Rational {
    if g < 0 || !is_stable(g as u32, a.len()) {
        return Rational::zero();
    }
    let mut a = a;
    a.sort_unstable();
    eval(g as u32, a)
}

fn eval(g: u32, a: Vec<u32>) -> Rational {
    let n = a.len() as i64;
    let sum: i64 = a.iter().map(|&x| i64::from(x)).sum();
    if sum != 3 * i64::from(g) - 3 + n {
        return Rational::zero();
    }
    if g == 0 && a == [0, 0, 0] {
        return Rational::one();
    }
    if g == 1 && a == [1] {
        return rational(1, 24).unwrap();
    }
    let key = (g, a);
    if let Some(v) = memo().lock().get(&key) {
        return v.clone();
    }
    let (g, a) = key;
    let v = compute(g, &a);
    memo().lock().insert((g, a), v.clone());
    v
}

fn compute(g: u32, a: &[u32]) -> Rational {
    // string equation
    if a.first() == Some(&0) {
        let rest = &a[1..];
        let mut total = Rational::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut b = rest.to_vec();
            b[j] -= 1;
            total += eval_or_zero(i64::from(g), b);
        }
        return total;
    }
    // dilaton equation
    if a.first() == Some(&1) {
        let rest = a[1..].to_vec();
        if is_stable(g, rest.len()) {
            let n = rest.len() as i64;
            return int(2 * i64::from(g) - 2 + n) * eval_or_zero(i64::from(g), rest);
        }
    }
    dvv(g, a)
}

/// DVV on the largest exponent `k`, which sits last in the sorted key.
fn dvv(g: u32, a: &[u32]) -> Rational {
    let (&k, d) = a.split_last().expect("nonempty");
    let gi = i64::from(g);
    let mut total = Rational::zero();

    for j in 0..d.len() {
        let mut b = d.to_vec();
        let dj = b[j];
        b[j] = dj + k - 1;
        let w = Rational::new(odd_factorial(k + dj), odd_factorial(dj));
        total += w * eval_or_zero(gi, b);
    }

    let mut quad = Rational::zero();
    if k >= 2 {
        for r in 0..=k - 2 {
            let s = k - 2 - r;
            let w = Rational::from_integer(odd_factorial(r + 1) * odd_factorial(s + 1));
            let mut inner = Rational::zero();
            let mut b = d.to_vec();
            b.push(r);
            b.push(s);
            inner += eval_or_zero(gi - 1, b);
            for mask in 0u64..(1 << d.len()) {
                let mut left = vec![r];
                let mut right = vec![s];
                for (i, &x) in d.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                for g1 in 0..=gi {
                    let l = eval_or_zero(g1, left.clone());
                    if l.is_zero() {
                        continue;
                    }
                    inner += l * eval_or_zero(gi - g1, right.clone());
                }
            }
            quad += w * inner;
        }
    }
    total += quad / int(2);
    total / Rational::from_integer(odd_factorial(k + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorial;
    use proptest::prelude::*;

    fn q(p: i64, r: i64) -> Rational {
        rational(p, r).unwrap()
    }

    /// Genus-0 closed form `(n-3)!/Π a_i!`.
    fn genus0_oracle(a: &[u32]) -> Rational {
        let n = a.len() as u32;
        if a.iter().sum::<u32>() != n - 3 {
            return Rational::zero();
        }
        let den = a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x));
        Rational::new(factorial(n - 3), den)
    }

    #[test]
    fn base_values() {
        assert_eq!(psi_correlator(0, &[0, 0, 0]).unwrap(), int(1));
        assert_eq!(psi_correlator(1, &[1]).unwrap(), q(1, 24));
        assert_eq!(psi_correlator(1, &[1, 1]).unwrap(), q(1, 24));
        assert_eq!(psi_correlator(2, &[4]).unwrap(), q(1, 1152));
        assert_eq!(psi_correlator(2, &[2, 3]).unwrap(), q(29, 5760));
        assert_eq!(psi_correlator(3, &[7]).unwrap(), q(1, 82944));
    }

    #[test]
    fn one_point_closed_form() {
        // ⟨τ_{3g-2}⟩_g = 1/(24^g g!)
        for g in 1..=5u32 {
            let den = BigInt::from(24).pow(g) * factorial(g);
            assert_eq!(psi_correlator(g, &[3 * g - 2]).unwrap(), Rational::new(BigInt::one(), den));
        }
    }

    #[test]
    fn unstable_rejected() {
        assert!(matches!(psi_correlator(0, &[0, 0]), Err(Error::Unstable { .. })));
        assert!(psi_correlator(1, &[]).is_err());
        assert!(psi_correlator(2, &[]).is_err());
    }

    #[test]
    fn dimension_off_is_zero() {
        assert_eq!(psi_correlator(0, &[1, 0, 0]).unwrap(), Rational::zero());
        assert_eq!(psi_correlator(2, &[3]).unwrap(), Rational::zero());
    }

    fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
        if parts == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=total {
            for mut rest in compositions(total - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn genus_zero_closed_form() {
        for n in 3..=8usize {
            for a in compositions(n as u32 - 3, n) {
                assert_eq!(psi_correlator(0, &a).unwrap(), genus0_oracle(&a), "{a:?}");
            }
        }
    }

    #[test]
    fn string_and_dilaton_sweep() {
        for g in 0..=3u32 {
            for n in 1..=6usize {
                let dim = 3 * g as i64 - 3 + n as i64;
                if !(0..=12).contains(&dim) || !is_stable(g, n) {
                    continue;
                }
                for a in compositions(dim as u32 + 1, n) {
                    let mut s = a.clone();
                    s.push(0);
                    let rhs: Rational = (0..n)
                        .filter(|&j| a[j] > 0)
                        .map(|j| {
                            let mut b = a.clone();
                            b[j] -= 1;
                            psi_correlator(g, &b).unwrap()
                        })
                        .sum();
                    assert_eq!(psi_correlator(g, &s).unwrap(), rhs, "string {g} {a:?}");
                }
                for a in compositions(dim as u32, n) {
                    let mut d = a.clone();
                    d.push(1);
                    assert_eq!(
                        psi_correlator(g, &d).unwrap(),
                        int(2 * g as i64 - 2 + n as i64) * psi_correlator(g, &a).unwrap(),
                        "dilaton {g} {a:?}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn permutation_invariance(g in 0u32..3, mut a in proptest::collection::vec(0u32..5, 1..6), seed in any::<u64>()) {
            prop_assume!(is_stable(g, a.len()));
            let v = psi_correlator(g, &a).unwrap();
            let n = a.len();
            a.rotate_left((seed as usize) % n);
            a.reverse();
            prop_assert_eq!(psi_correlator(g, &a).unwrap(), v);
        }
    }
}
