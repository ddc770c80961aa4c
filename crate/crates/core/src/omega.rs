//! Degrees `Ω_g^G(γ_1, …, γ_n)` of the forgetful map to moduli of curves.

use std::collections::HashMap;

use num_traits::Zero;
use parking_lot::Mutex;

use crate::arith::{format_rational, int, pow, rational, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::Rational;

/// `|G|^{2g-1}` when the classes multiply to the identity, else 0.
///
/// `None` for nonabelian groups.
pub fn omega_abelian(group: &FiniteGroupData, g: u32, classes: &[usize]) -> Option<Rational> {
    let prod = group.abelian_product(classes)?;
    if prod != 0 {
        return Some(Rational::zero());
    }
    Some(pow(&rational(group.order(), 1).unwrap(), 2 * i64::from(g) - 1))
}

/// `Σ_α ν_α^{1-g} Π_i |[γ_i]| χ_α(γ_i) / dim V_α`.
pub fn omega_characters(group: &FiniteGroupData, g: u32, classes: &[usize]) -> Result<Rational> {
    let mut total = Cyclotomic::zero();
    for (a, irr) in group.irreps().iter().enumerate() {
        let mut term = Cyclotomic::rational(pow(&group.nu(a), 1 - i64::from(g)));
        for &c in classes {
            let k = rational(group.classes()[c].size, irr.dim).unwrap();
            term = term * irr.values[c].scale(&k);
        }
        total = total + term;
    }
    total.to_rational()
}

pub fn omega(group: &FiniteGroupData, g: u32, classes: &[usize]) -> Result<Rational> {
    match omega_abelian(group, g, classes) {
        Some(v) => Ok(v),
        None => omega_characters(group, g, classes),
    }
}

/// Memoized `Ω` for one group.
#[derive(Debug, Default)]
pub struct OmegaTable {
    memo: Mutex<HashMap<(u32, Vec<usize>), Rational>>,
}

impl OmegaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, group: &FiniteGroupData, g: u32, classes: &[usize]) -> Result<Rational> {
        let mut key = classes.to_vec();
        key.sort_unstable();
        let key = (g, key);
        if let Some(v) = self.memo.lock().get(&key) {
            return Ok(v.clone());
        }
        let v = omega(group, g, &key.1)?;
        self.memo.lock().insert(key, v.clone());
        Ok(v)
    }
}

/// Sorted multisets of `len` class indices.
pub fn class_multisets(num_classes: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for v in class_multisets(num_classes, len - 1) {
        let start = v.last().copied().unwrap_or(0);
        for c in start..num_classes {
            let mut w = v.clone();
            w.push(c);
            out.push(w);
        }
    }
    out
}

fn eta_inv(g: &FiniteGroupData, z: usize, x: usize) -> Rational {
    if x == g.inverse(z) {
        int(g.centralizer_order(z) as i64)
    } else {
        Rational::zero()
    }
}

/// Checks forgetting tails, cutting loops and cutting trees for every class
/// multiset up to the given genus and length. Returns the number of identities
/// checked.
pub fn check_recursions(g: &FiniteGroupData, max_genus: u32, max_points: usize) -> Result<usize> {
    let n = g.num_classes();
    let mut checked = 0;
    let fail = |what: &str, genus: u32, cs: &[usize], lhs: &Rational, rhs: &Rational| {
        Error::Inconsistency(format!(
            "{what} fails at g={genus} {cs:?}: {} != {}",
            format_rational(lhs),
            format_rational(rhs)
        ))
    };
    for genus in 0..=max_genus {
        for len in 0..=max_points {
            for cs in class_multisets(n, len) {
                let v = omega(g, genus, &cs)?;
                let mut with_one = cs.clone();
                with_one.insert(0, 0);
                let t = omega(g, genus, &with_one)?;
                if t != v {
                    return Err(fail("forgetting tails", genus, &cs, &t, &v));
                }
                checked += 1;
                if genus >= 1 {
                    let mut s = Rational::zero();
                    for z in 0..n {
                        let x = g.inverse(z);
                        let mut k = cs.clone();
                        k.push(z);
                        k.push(x);
                        s += eta_inv(g, z, x) * omega(g, genus - 1, &k)?;
                    }
                    if s != v {
                        return Err(fail("cutting loops", genus, &cs, &s, &v));
                    }
                    checked += 1;
                }
                for mask in 0u32..(1 << cs.len()) {
                    for g1 in 0..=genus {
                        let (mut left, mut right) = (Vec::new(), Vec::new());
                        for (i, &c) in cs.iter().enumerate() {
                            if mask >> i & 1 == 1 {
                                left.push(c)
                            } else {
                                right.push(c)
                            }
                        }
                        let mut s = Rational::zero();
                        for z in 0..n {
                            let x = g.inverse(z);
                            left.push(z);
                            right.push(x);
                            s += eta_inv(g, z, x) * omega(g, g1, &left)? * omega(g, genus - g1, &right)?;
                            left.pop();
                            right.pop();
                        }
                        if s != v {
                            return Err(fail("cutting trees", genus, &cs, &s, &v));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic_group, load_group};
    use proptest::prelude::*;

    fn s3() -> FiniteGroupData {
        load_group(include_str!("../data/s3.group")).unwrap()
    }

    #[test]
    fn known_values() {
        let z3 = cyclic_group(3);
        assert_eq!(omega(&z3, 0, &[1, 1, 1]).unwrap(), rational(1, 3).unwrap());
        assert_eq!(omega(&z3, 1, &[]).unwrap(), int(3));
        let z5 = cyclic_group(5);
        assert_eq!(omega(&z5, 0, &[1, 2, 2]).unwrap(), rational(1, 5).unwrap());
        assert_eq!(omega(&z5, 0, &[1, 2]).unwrap(), Rational::zero());
    }

    #[test]
    fn character_path_matches_abelian_path() {
        for n in [2u32, 3, 5] {
            let g = cyclic_group(n);
            for genus in 0..=3 {
                for len in 0..=5 {
                    for cs in class_multisets(n as usize, len) {
                        assert_eq!(
                            omega_characters(&g, genus, &cs).unwrap(),
                            omega_abelian(&g, genus, &cs).unwrap(),
                            "Z{n} g={genus} {cs:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn s3_small_values() {
        let g = s3();
        // homomorphism counts / |G|: two transpositions with product a 3-cycle
        assert_eq!(omega(&g, 0, &[1, 1, 2]).unwrap(), int(1));
        assert_eq!(omega(&g, 0, &[1, 1]).unwrap(), rational(1, 2).unwrap());
        assert_eq!(omega(&g, 0, &[1]).unwrap(), Rational::zero());
        assert_eq!(omega(&g, 1, &[]).unwrap(), int(3));
    }

    #[test]
    fn recursions_hold_z3_z5_s3() {
        for g in [cyclic_group(3), cyclic_group(5), s3()] {
            assert!(check_recursions(&g, 2, 4).unwrap() > 0);
        }
    }

    #[test]
    fn table_memoizes_canonically() {
        let g = cyclic_group(5);
        let t = OmegaTable::new();
        assert_eq!(t.get(&g, 0, &[2, 1, 2]).unwrap(), t.get(&g, 0, &[1, 2, 2]).unwrap());
    }

    proptest! {
        #[test]
        fn symmetric_in_classes(cs in proptest::collection::vec(0usize..3, 0..6), genus in 0u32..3) {
            let g = s3();
            let v = omega(&g, genus, &cs).unwrap();
            let mut r = cs.clone();
            r.reverse();
            prop_assert_eq!(omega(&g, genus, &r).unwrap(), v);
        }
    }
}
