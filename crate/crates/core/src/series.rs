//! Truncated generating functions in the variables `t_a^{[γ]}`.
//!
//! Every function that has two routes to the same coefficients computes
//! both and fails with [`Error::Inconsistency`] when they disagree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorial, format_rational, int, pow, rational, Cyclotomic};
use crate::classes::{evaluate_class, ClassExpr, Generator};
use crate::engine::{ChInsertion, Engine, Insertion, TwistedCorrelator};
use crate::error::{Error, Result};
use crate::group::{Basis, FiniteGroupData, HVector};
use crate::poly::{Monomial, Poly};
use crate::wk::{is_stable, psi_correlator};
use crate::Rational;

/// The variable `t_psi^{[class]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TVar {
    pub class: usize,
    pub psi: u32,
}

impl From<Insertion> for TVar {
    fn from(i: Insertion) -> Self {
        TVar { class: i.class, psi: i.psi }
    }
}

impl From<TVar> for Insertion {
    fn from(v: TVar) -> Self {
        Insertion::new(v.class, v.psi)
    }
}

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}[{}]", self.psi, self.class)
    }
}

/// The Euler-series variable `s_i` (1-based in output).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SVar(pub usize);

impl fmt::Display for SVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0 + 1)
    }
}

pub type SeriesPoly = Poly<TVar, Rational>;

/// Bounds on the number of marked points and on each ψ-power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub max_points: usize,
    pub max_psi: u32,
}

/// `t0[w]^2 t1[w2]^1`, variables ordered by class then ψ-power.
pub fn monomial_string(group: &FiniteGroupData, m: &Monomial<TVar>) -> String {
    if m.powers().is_empty() {
        return "1".into();
    }
    m.powers()
        .iter()
        .map(|(v, e)| format!("t{}[{}]^{}", v.psi, group.classes()[v.class].name, e))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Monomial strings mapped to `p/q`, in monomial order.
pub fn series_entries(group: &FiniteGroupData, p: &SeriesPoly) -> Vec<(String, String)> {
    p.terms().map(|(m, c)| (monomial_string(group, m), format_rational(c))).collect()
}

pub fn euler_entries(p: &Poly<SVar, Rational>) -> Vec<(String, String)> {
    p.terms().map(|(m, c)| (m.to_string(), format_rational(c))).collect()
}

fn insertions_of(m: &Monomial<TVar>) -> Vec<Insertion> {
    m.powers().iter().flat_map(|(v, e)| std::iter::repeat_n(Insertion::from(*v), *e as usize)).collect()
}

fn monomial_of(ins: &[Insertion]) -> Monomial<TVar> {
    Monomial::from_powers(ins.iter().map(|&i| (TVar::from(i), 1)))
}

/// `Π m_v!` for a monomial.
fn symmetry(m: &Monomial<TVar>) -> Rational {
    let d = m.powers().iter().fold(BigInt::one(), |acc, (_, e)| acc * factorial(*e));
    Rational::from_integer(d)
}

/// Sorted multisets of `n` insertions with ψ-powers summing to `psi_sum`.
pub fn enumerate_insertions(num_classes: usize, n: usize, psi_sum: u32, max_psi: u32) -> Vec<Vec<Insertion>> {
    let slots: Vec<Insertion> =
        (0..num_classes).flat_map(|c| (0..=max_psi).map(move |a| Insertion::new(c, a))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(
        slots: &[Insertion],
        start: usize,
        left: usize,
        sum: u32,
        max_psi: u32,
        cur: &mut Vec<Insertion>,
        out: &mut Vec<Vec<Insertion>>,
    ) {
        if left == 0 {
            if sum == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if u64::from(sum) > left as u64 * u64::from(max_psi) {
            return;
        }
        for i in start..slots.len() {
            let s = slots[i];
            if s.psi > sum {
                continue;
            }
            cur.push(s);
            rec(slots, i, left - 1, sum - s.psi, max_psi, cur, out);
            cur.pop();
        }
    }
    rec(&slots, 0, n, psi_sum, max_psi, &mut cur, &mut out);
    out
}

/// Insertion multisets of stable, dimension-correct, nonempty components.
fn components(engine: &Engine, g: u32, trunc: Truncation, extra_degree: u32) -> Result<Vec<Vec<Insertion>>> {
    let mut out = Vec::new();
    for n in 1..=trunc.max_points {
        let dim = 3 * i64::from(g) - 3 + n as i64 - i64::from(extra_degree);
        if dim < 0 || (!is_stable(g, n) && extra_degree == 0) {
            continue;
        }
        for ins in enumerate_insertions(engine.group().num_classes(), n, dim as u32, trunc.max_psi) {
            let classes: Vec<usize> = ins.iter().map(|i| i.class).collect();
            if !engine.omega(g, &classes)?.is_zero() {
                out.push(ins);
            }
        }
    }
    Ok(out)
}

/// Correlators in the representation basis: with `e_γ = Σ_α c(γ, α) f_α`,
/// a correlator of `f` insertions vanishes unless all irreps agree, and then
/// equals `ν_α^{1-g} ⟨Π τ_{a_i}⟩_g`.
fn correlator_via_rep_basis(group: &FiniteGroupData, g: u32, ins: &[Insertion]) -> Result<Rational> {
    let n = group.num_classes();
    let psi: Vec<u32> = ins.iter().map(|i| i.psi).collect();
    let tau = psi_correlator(g, &psi)?;
    if tau.is_zero() {
        return Ok(tau);
    }
    let expansions: Vec<HVector> =
        ins.iter().map(|i| group.basis_change(&HVector::unit(Basis::Class, n, i.class))).collect();
    let mut total = Cyclotomic::zero();
    for alpha in 0..n {
        let mut term = Cyclotomic::rational(pow(&group.nu(alpha), 1 - i64::from(g)));
        for e in &expansions {
            term = term * e.coeffs[alpha].clone();
        }
        total = total + term;
    }
    Ok(total.to_rational()? * tau)
}

/// `F_g^G` truncated, with both routes compared coefficient by coefficient.
pub fn potential(engine: &Engine, g: u32, trunc: Truncation) -> Result<SeriesPoly> {
    let mut out = SeriesPoly::zero();
    for ins in components(engine, g, trunc, 0)? {
        let direct = engine.correlator(g, &ins)?;
        let via_rep = correlator_via_rep_basis(engine.group(), g, &ins)?;
        if direct != via_rep {
            return Err(Error::Inconsistency(format!(
                "potential: class-basis value {direct} and representation-basis value {via_rep} differ at g={g} {ins:?}"
            )));
        }
        let m = monomial_of(&ins);
        let c = direct / symmetry(&m);
        out.add_term(m, c);
    }
    Ok(out)
}

/// Lazy coefficients of `F_g` and its derivatives.
struct PotentialView<'a> {
    engine: &'a Engine,
}

/// `Σ_v a_v e_v` over the monomial: total ψ-degree.
fn psi_degree(m: &Monomial<TVar>) -> i64 {
    m.powers().iter().map(|(v, e)| i64::from(v.psi) * i64::from(*e)).sum()
}

impl PotentialView<'_> {
    /// Coefficient of `m` in `F_g`.
    fn coeff(&self, g: i64, m: &Monomial<TVar>) -> Rational {
        let n = m.degree() as usize;
        if g < 0 || !is_stable(g as u32, n) || psi_degree(m) != 3 * g - 3 + n as i64 {
            return Rational::zero();
        }
        let ins = insertions_of(m);
        let v = self.engine.correlator(g as u32, &ins).expect("stable");
        if v.is_zero() {
            return v;
        }
        v / symmetry(m)
    }

    /// Coefficient of `m` in `∂_{vs} F_g`.
    fn deriv_coeff(&self, g: i64, vs: &[TVar], m: &Monomial<TVar>) -> Rational {
        let mut factor = 1i64;
        let mut cur = m.clone();
        for v in vs {
            factor *= i64::from(cur.exponent(v)) + 1;
            cur = cur.mul(&Monomial::var(*v));
        }
        let c = self.coeff(g, &cur);
        if c.is_zero() {
            return c;
        }
        int(factor) * c
    }
}

/// Coefficient of `m` in the operator form of `Σ_n (1/n!) ∫ ch_k(F_α) Π t·τ`.
///
/// Built from derivatives of untwisted potentials: a first-order part with
/// the dilaton-shifted variables `t_1^{[1]} - 1`, and quadratic parts from
/// `F_{g-1}` and from products `F_{g1} F_{g2}`.
pub fn operator_coefficient(engine: &Engine, alpha: usize, k: u32, g: u32, m: &Monomial<TVar>) -> Result<Rational> {
    if alpha >= engine.group().irreps().len() {
        return Err(Error::Query(format!("irrep index {alpha} out of range")));
    }
    Ok(operator_coefficients(engine, k, g, m)?.swap_remove(alpha))
}

/// [`operator_coefficient`] for every irrep at once; the potential
/// derivatives do not depend on `α`, only their Bernoulli weights do.
pub fn operator_coefficients(engine: &Engine, k: u32, g: u32, m: &Monomial<TVar>) -> Result<Vec<Rational>> {
    if k == 0 {
        return Err(Error::ChDegreeZero);
    }
    let group = engine.group();
    let nc = group.num_classes();
    let view = PotentialView { engine };
    let gi = i64::from(g);

    // Σ_β (first-order derivative sum at class β): the total is
    // -Σ_v b(γ_v) q_v ∂_{v+k} F_g with q = t - δ_{v, t_1^{[1]}}
    let mut first = vec![Rational::zero(); nc];
    for (v, _) in m.powers() {
        let rest = m.div(&Monomial::var(*v)).unwrap();
        let shifted = TVar { class: v.class, psi: v.psi + k };
        first[v.class] -= view.deriv_coeff(gi, &[shifted], &rest);
    }
    first[0] += view.deriv_coeff(gi, &[TVar { class: 0, psi: 1 + k }], m);

    // node terms, indexed by the class β⁻¹ whose weight multiplies them
    let divisors = m.divisors();
    let mut node = vec![Rational::zero(); nc];
    for l in 0..k {
        let sign = if l % 2 == 0 { int(1) } else { int(-1) };
        for beta in 0..nc {
            let binv = group.inverse(beta);
            let a = TVar { class: beta, psi: l };
            let b = TVar { class: binv, psi: k - 1 - l };
            let mut inner = view.deriv_coeff(gi - 1, &[a, b], m);
            for d in &divisors {
                // the left factor lives in the genus fixed by its dimension
                let three_g1 = psi_degree(d) + i64::from(l) + 2 - i64::from(d.degree());
                if three_g1 < 0 || three_g1 % 3 != 0 || three_g1 / 3 > gi {
                    continue;
                }
                let g1 = three_g1 / 3;
                let x = view.deriv_coeff(g1, &[a], d);
                if x.is_zero() {
                    continue;
                }
                let rest = m.div(d).unwrap();
                inner += x * view.deriv_coeff(gi - g1, &[b], &rest);
            }
            if !inner.is_zero() {
                node[binv] += &sign * int(group.centralizer_order(beta) as i64) * inner;
            }
        }
    }

    let mut out = Vec::with_capacity(group.irreps().len());
    for alpha in 0..group.irreps().len() {
        let mut total = Rational::zero();
        for c in 0..nc {
            if first[c].is_zero() && node[c].is_zero() {
                continue;
            }
            let b = engine.b_coeff(alpha, k, c)?;
            total += b * (&first[c] + &node[c] / int(2));
        }
        out.push(total);
    }
    Ok(out)
}

/// `Σ_n (1/n!) ∫ ch_k(F_α) Π (Σ t ψ̄)` at genus `g`, truncated.
pub fn twisted_genfun(engine: &Engine, alpha: usize, k: u32, g: u32, trunc: Truncation) -> Result<SeriesPoly> {
    if k == 0 {
        return Err(Error::ChDegreeZero);
    }
    let mut out = SeriesPoly::zero();
    for ins in components(engine, g, trunc, k)? {
        let m = monomial_of(&ins);
        let tc = TwistedCorrelator::new(g, ins, vec![ChInsertion::new(k, alpha)]);
        let direct = engine.twisted_correlator(&tc)? / symmetry(&m);
        let oracle = operator_coefficient(engine, alpha, k, g, &m)?;
        if direct != oracle {
            return Err(Error::Inconsistency(format!(
                "twisted series: recursion gives {direct}, operator form gives {oracle} at {}",
                monomial_string(engine.group(), &m)
            )));
        }
        out.add_term(m, direct);
    }
    Ok(out)
}

/// `J` coefficients keyed by (power of `z`, irrep `β` of `f_β`, monomial in `u^α`).
pub type JTable = BTreeMap<(i32, usize, Monomial<usize>), Rational>;

/// `z + z Σ_α f_α (e^{u^α/z} - 1)` up to `u^max_order`.
pub fn jfunction_closed_form(num_irreps: usize, max_order: u32) -> JTable {
    let mut out = JTable::new();
    for beta in 0..num_irreps {
        out.insert((1, beta, Monomial::one()), Rational::one());
        for m in 1..=max_order {
            let c = Rational::new(BigInt::one(), factorial(m));
            out.insert((1 - m as i32, beta, Monomial::from_powers([(beta, m)])), c);
        }
    }
    out
}

/// `J` from genus-0 correlators, `t = Σ_α u^α f_α`, up to `u^max_order`,
/// checked against the closed form.
pub fn jfunction(engine: &Engine, max_order: u32) -> Result<JTable> {
    let group = engine.group();
    let n = group.num_classes();
    // t^δ = Σ_α (dim V_α/|G|) χ_α(δ^{-1}) u^α
    let t: Vec<Poly<usize, Cyclotomic>> = (0..n)
        .map(|delta| {
            let mut p = Poly::zero();
            for (alpha, irr) in group.irreps().iter().enumerate() {
                let k = rational(irr.dim, group.order()).unwrap();
                p.add_term(Monomial::var(alpha), irr.values[group.inverse(delta)].scale(&k));
            }
            p
        })
        .collect();

    // z^{1-m}: class-basis coefficient vectors
    let mut by_z: BTreeMap<i32, Vec<Poly<usize, Cyclotomic>>> = BTreeMap::new();
    // z · 1 = z e_{[1]}
    let mut unit = vec![Poly::zero(); n];
    unit[0] = Poly::constant(Cyclotomic::one());
    by_z.insert(1, unit);
    by_z.insert(0, t.clone());
    for m in 2..=max_order as usize {
        let mut comp = vec![Poly::<usize, Cyclotomic>::zero(); n];
        for deltas in enumerate_insertions(n, m, 0, 0) {
            let mono = monomial_of(&deltas);
            // multinomial m!/Π m_δ! over the 1/m! of the exponential
            let weight = Rational::one() / symmetry(&mono);
            let mut tp = Poly::constant(Cyclotomic::rational(weight));
            for d in &deltas {
                tp = tp * t[d.class].clone();
            }
            for gamma in 0..n {
                let mut ins = deltas.clone();
                ins.push(Insertion::new(gamma, m as u32 - 2));
                let v = engine.correlator(0, &ins)?;
                if v.is_zero() {
                    continue;
                }
                // φ^γ = |C(γ)| e_{γ^{-1}}
                let c = v * int(group.centralizer_order(gamma) as i64);
                let slot = group.inverse(gamma);
                comp[slot] = comp[slot].clone() + tp.scale(&Cyclotomic::rational(c));
            }
        }
        by_z.insert(1 - m as i32, comp);
    }

    let mut out = JTable::new();
    for (zp, comp) in by_z {
        // gather monomials and change basis coefficientwise
        let mut monos: Vec<Monomial<usize>> = comp.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        monos.sort();
        monos.dedup();
        for mono in monos {
            let v = HVector { basis: Basis::Class, coeffs: comp.iter().map(|p| p.coeff(&mono)).collect() };
            let f = group.basis_change(&v);
            for (beta, c) in f.coeffs.iter().enumerate() {
                let c = c.to_rational()?;
                if !c.is_zero() {
                    out.insert((zp, beta, mono.clone()), c);
                }
            }
        }
    }
    let closed = jfunction_closed_form(n, max_order);
    if out != closed {
        return Err(Error::Inconsistency("J-function: correlator sum differs from the closed form".into()));
    }
    Ok(out)
}

pub fn jtable_entries(table: &JTable) -> Vec<(String, String)> {
    table
        .iter()
        .map(|((zp, beta, mono), c)| {
            let u = if mono.powers().is_empty() {
                "1".to_string()
            } else {
                mono.powers().iter().map(|(a, e)| format!("u{a}^{e}")).collect::<Vec<_>>().join(" ")
            };
            (format!("{u} z^{zp} f{beta}"), format_rational(c))
        })
        .collect()
}

/// `Σ Π s_i^{n_i}/n_i! ∫ e(⊕ E_{α}^∨)` over components with `n_i` points of
/// class `sectors[i]`, all ψ-powers zero.
///
/// Components where a bundle has non-integral or negative rank, or where the
/// total rank differs from the dimension, contribute nothing.
pub fn euler_series(
    engine: &Engine,
    bundles: &[usize],
    sectors: &[usize],
    g: u32,
    max_points: usize,
) -> Result<Poly<SVar, Rational>> {
    let group = engine.group();
    for &a in bundles {
        if a >= group.irreps().len() {
            return Err(Error::Query(format!("irrep index {a} out of range")));
        }
    }
    for &c in sectors {
        if c >= group.num_classes() {
            return Err(Error::Query(format!("class index {c} out of range")));
        }
    }
    let expr = ClassExpr::var(Generator::Euler(bundles.to_vec()));
    let mut out = Poly::zero();
    let mut counts = vec![0usize; sectors.len()];
    loop {
        let n: usize = counts.iter().sum();
        if n > 0 && is_stable(g, n) {
            let ins: Vec<Insertion> =
                counts.iter().zip(sectors).flat_map(|(&c, &s)| std::iter::repeat_n(Insertion::new(s, 0), c)).collect();
            let classes: Vec<usize> = ins.iter().map(|i| i.class).collect();
            if !engine.omega(g, &classes)?.is_zero() && admissible(engine, bundles, g, &classes)? {
                let v = evaluate_class(engine, g, &ins, &expr)?;
                let mono = Monomial::from_powers(counts.iter().enumerate().map(|(i, &c)| (SVar(i), c as u32)));
                let sym = counts.iter().fold(BigInt::one(), |acc, &c| acc * factorial(c as u32));
                out.add_term(mono, v / Rational::from_integer(sym));
            }
        }
        // next composition with total <= max_points
        let mut i = 0;
        loop {
            if i == counts.len() {
                return Ok(out);
            }
            counts[i] += 1;
            if counts.iter().sum::<usize>() <= max_points {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn admissible(engine: &Engine, bundles: &[usize], g: u32, classes: &[usize]) -> Result<bool> {
    let mut total = Rational::zero();
    for &a in bundles {
        let r = engine.rank_r1(a, g, classes)?;
        if !r.is_integer() || r < Rational::zero() {
            return Ok(false);
        }
        total += r;
    }
    Ok(total == int(3 * i64::from(g) - 3 + classes.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic_group;
    use std::sync::Arc;

    fn q(p: i64, r: i64) -> Rational {
        rational(p, r).unwrap()
    }

    fn mono(spec: &[(usize, u32, u32)]) -> Monomial<TVar> {
        Monomial::from_powers(spec.iter().map(|&(c, a, e)| (TVar { class: c, psi: a }, e)))
    }

    #[test]
    fn trivial_group_potential() {
        let e = Engine::new(Arc::new(cyclic_group(1)));
        let f0 = potential(&e, 0, Truncation { max_points: 4, max_psi: 1 }).unwrap();
        assert_eq!(f0.coeff(&mono(&[(0, 0, 3)])), q(1, 6));
        assert_eq!(f0.coeff(&mono(&[(0, 0, 3), (0, 1, 1)])), q(1, 6));
    }

    #[test]
    fn z3_potentials() {
        let e = Engine::new(Arc::new(cyclic_group(3)));
        let f0 = potential(&e, 0, Truncation { max_points: 3, max_psi: 0 }).unwrap();
        assert_eq!(f0.coeff(&mono(&[(0, 0, 1), (1, 0, 1), (2, 0, 1)])), q(1, 3));
        assert_eq!(f0.coeff(&mono(&[(0, 0, 3)])), q(1, 18));
        let f1 = potential(&e, 1, Truncation { max_points: 2, max_psi: 1 }).unwrap();
        assert_eq!(f1.coeff(&mono(&[(0, 1, 1)])), q(1, 8));
        assert_eq!(f1.coeff(&mono(&[(0, 1, 2)])), q(1, 16));
    }

    #[test]
    fn z3_twisted_series_samples() {
        let e = Engine::new(Arc::new(cyclic_group(3)));
        let s0 = twisted_genfun(&e, 1, 1, 0, Truncation { max_points: 4, max_psi: 0 }).unwrap();
        assert_eq!(s0.coeff(&mono(&[(1, 0, 2), (2, 0, 2)])), q(1, 36));
        let s1 = twisted_genfun(&e, 1, 1, 1, Truncation { max_points: 2, max_psi: 1 }).unwrap();
        assert_eq!(s1.coeff(&mono(&[(0, 0, 1)])), q(1, 72));
        assert_eq!(s1.coeff(&mono(&[(0, 0, 1), (0, 1, 1)])), q(1, 72));
    }

    #[test]
    fn operator_form_z2() {
        let e = Engine::new(Arc::new(cyclic_group(2)));
        let m = mono(&[(1, 0, 4)]);
        assert_eq!(operator_coefficient(&e, 1, 1, 0, &m).unwrap() * int(24), q(1, 4));
    }

    #[test]
    fn jfunction_matches_closed_form() {
        for n in [1u32, 2, 3] {
            let e = Engine::new(Arc::new(cyclic_group(n)));
            let j = jfunction(&e, 4).unwrap();
            assert_eq!(j.get(&(-1, 0, Monomial::from_powers([(0usize, 2)]))), Some(&q(1, 2)));
        }
    }

    #[test]
    fn enumerate_counts() {
        // multisets of 3 from {0,1} x {0,1} with psi sum 1
        let v = enumerate_insertions(2, 3, 1, 1);
        assert_eq!(v.len(), 6);
        assert!(v.iter().all(|x| x.iter().map(|i| i.psi).sum::<u32>() == 1));
    }

    #[test]
    fn euler_series_z5() {
        let e = Engine::new(Arc::new(cyclic_group(5)));
        let s = euler_series(&e, &[1, 1, 3], &[1, 2], 0, 3).unwrap();
        let m = Monomial::from_powers([(SVar(0), 1), (SVar(1), 2)]);
        assert_eq!(s.coeff(&m) * int(2), q(1, 5));
        // monodromy: n1 + 2 n2 ≡ 0 mod 5
        for (m, _) in s.terms() {
            let n1 = m.exponent(&SVar(0));
            let n2 = m.exponent(&SVar(1));
            assert_eq!((n1 + 2 * n2) % 5, 0);
        }
    }
}
