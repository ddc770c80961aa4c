//! Twisted correlators: ψ̄-powers at twisted points times `ch_k` of the
//! virtual bundles `F_α = R⁰π_*f*E_α − R¹π_*f*E_α`.
//!
//! One `ch_k(F_α)` at a time is traded for a combination of simpler
//! correlators:
//!
//! * a new untwisted point carrying `ψ^{k+1}`,
//! * `ψ^k` added to each existing point,
//! * a node, either non-separating (genus drops) or separating (the
//!   remaining points and `ch` insertions are distributed over two sides).
//!
//! Every weight is a Bernoulli value `b(α, k, β)`. Correlators without `ch`
//! insertions are `⟨Π τ_{a_i}⟩_g · Ω_g(γ)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use parking_lot::Mutex;

use crate::arith::{bernoulli_poly, factorial, format_rational, int, rational};
use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::omega::OmegaTable;
use crate::wk::{is_stable, psi_correlator};
use crate::Rational;

/// A marked point with monodromy class `class` carrying `ψ̄^psi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Insertion {
    pub class: usize,
    pub psi: u32,
}

impl Insertion {
    pub fn new(class: usize, psi: u32) -> Self {
        Insertion { class, psi }
    }
}

/// `ch_k(F_α)`, `k >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChInsertion {
    pub k: u32,
    pub alpha: usize,
}

impl ChInsertion {
    pub fn new(k: u32, alpha: usize) -> Self {
        ChInsertion { k, alpha }
    }
}

/// A correlator query; both multisets are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedCorrelator {
    pub genus: u32,
    pub insertions: Vec<Insertion>,
    pub chs: Vec<ChInsertion>,
}

impl TwistedCorrelator {
    pub fn new(genus: u32, mut insertions: Vec<Insertion>, mut chs: Vec<ChInsertion>) -> Self {
        insertions.sort_unstable();
        chs.sort_unstable();
        TwistedCorrelator { genus, insertions, chs }
    }

    pub fn classes(&self) -> Vec<usize> {
        self.insertions.iter().map(|i| i.class).collect()
    }

    /// `3g - 3 + n`.
    pub fn dimension(&self) -> i64 {
        3 * i64::from(self.genus) - 3 + self.insertions.len() as i64
    }

    /// Total degree of the integrand.
    pub fn degree(&self) -> i64 {
        let psi: i64 = self.insertions.iter().map(|i| i64::from(i.psi)).sum();
        let ch: i64 = self.chs.iter().map(|c| i64::from(c.k)).sum();
        psi + ch
    }

    /// `g=<g>;ins=<class>:<psi>,...;ch=<k>:<alpha>,...` with class names.
    pub fn canonical_key(&self, group: &FiniteGroupData) -> String {
        let ins: Vec<String> =
            self.insertions.iter().map(|i| format!("{}:{}", group.classes()[i.class].name, i.psi)).collect();
        let chs: Vec<String> = self.chs.iter().map(|c| format!("{}:{}", c.k, c.alpha)).collect();
        format!("g={};ins={};ch={}", self.genus, ins.join(","), chs.join(","))
    }

    pub fn parse_key(group: &FiniteGroupData, key: &str) -> Result<Self> {
        let bad = || Error::Query(format!("malformed correlator key `{key}`"));
        let mut parts = key.split(';');
        let g = parts.next().and_then(|p| p.strip_prefix("g=")).ok_or_else(bad)?;
        let ins = parts.next().and_then(|p| p.strip_prefix("ins=")).ok_or_else(bad)?;
        let chs = parts.next().and_then(|p| p.strip_prefix("ch=")).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let genus: u32 = g.parse().map_err(|_| bad())?;
        let insertions = parse_insertions(group, ins)?;
        let chs = parse_chs(group, chs)?;
        Ok(TwistedCorrelator::new(genus, insertions, chs))
    }
}

/// `class:psi` items with optional `*count`, comma separated.
pub fn parse_insertions(group: &FiniteGroupData, s: &str) -> Result<Vec<Insertion>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (body, count) = match item.split_once('*') {
            Some((b, c)) => (b, c.trim().parse::<usize>().map_err(|_| Error::Query(format!("bad count in `{item}`")))?),
            None => (item, 1),
        };
        let (cname, psi) =
            body.split_once(':').ok_or_else(|| Error::Query(format!("expected class:psi, found `{item}`")))?;
        let class = group
            .class_index(cname.trim())
            .ok_or_else(|| Error::Query(format!("unknown class `{}` in group {}", cname.trim(), group.name())))?;
        let psi: u32 = psi.trim().parse().map_err(|_| Error::Query(format!("bad psi power in `{item}`")))?;
        out.extend(std::iter::repeat_n(Insertion::new(class, psi), count));
    }
    Ok(out)
}

/// `k:alpha` items with optional `*count`, comma separated.
pub fn parse_chs(group: &FiniteGroupData, s: &str) -> Result<Vec<ChInsertion>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (body, count) = match item.split_once('*') {
            Some((b, c)) => (b, c.trim().parse::<usize>().map_err(|_| Error::Query(format!("bad count in `{item}`")))?),
            None => (item, 1),
        };
        let (k, a) = body.split_once(':').ok_or_else(|| Error::Query(format!("expected k:alpha, found `{item}`")))?;
        let k: u32 = k.trim().parse().map_err(|_| Error::Query(format!("bad degree in `{item}`")))?;
        let alpha: usize = a.trim().parse().map_err(|_| Error::Query(format!("bad irrep index in `{item}`")))?;
        if alpha >= group.irreps().len() {
            return Err(Error::Query(format!("irrep index {alpha} out of range")));
        }
        out.extend(std::iter::repeat_n(ChInsertion::new(k, alpha), count));
    }
    Ok(out)
}

impl fmt::Display for TwistedCorrelator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for c in &self.chs {
            write!(f, "ch{}({}) ", c.k, c.alpha)?;
        }
        for i in &self.insertions {
            write!(f, "t{}[{}] ", i.psi, i.class)?;
        }
        write!(f, ">_{}", self.genus)
    }
}

/// Chooses which `ch` insertion the recursion removes.
pub type PivotRule = fn(&[ChInsertion]) -> usize;

/// The largest `k`, ties broken by the largest irrep index.
pub fn largest_k(chs: &[ChInsertion]) -> usize {
    chs.len() - 1
}

/// A sorted multiset as runs of equal items.
fn runs<T: Copy + PartialEq>(items: &[T]) -> Vec<(T, u32)> {
    let mut out: Vec<(T, u32)> = Vec::new();
    for &x in items {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

/// Every split of a multiset into an ordered pair `(I, J)`, weighted by the
/// number of labeled splits it stands for.
fn splits<T: Copy + PartialEq>(items: &[T]) -> Vec<(Vec<T>, Vec<T>, u64)> {
    let mut out = vec![(Vec::new(), Vec::new(), 1u64)];
    for (x, count) in runs(items) {
        let mut next = Vec::with_capacity(out.len() * (count as usize + 1));
        for (l, r, w) in &out {
            let mut c = 1u64;
            for take in 0..=count {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.extend(std::iter::repeat_n(x, take as usize));
                r2.extend(std::iter::repeat_n(x, (count - take) as usize));
                next.push((l2, r2, w * c));
                c = c * u64::from(count - take) / u64::from(take + 1);
            }
        }
        out = next;
    }
    out
}

/// Evaluator with memo tables bound to one group.
pub struct Engine {
    group: Arc<FiniteGroupData>,
    omega: OmegaTable,
    memo: Mutex<HashMap<TwistedCorrelator, Rational>>,
    plain: Mutex<HashMap<(u32, Vec<Insertion>), Rational>>,
    bmemo: Mutex<HashMap<(usize, u32, usize), Rational>>,
    prune_empty: bool,
    pivot: PivotRule,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("group", &self.group.name())
            .field("memo_entries", &self.memo.lock().len())
            .field("prune_empty", &self.prune_empty)
            .finish()
    }
}

impl Engine {
    pub fn new(group: Arc<FiniteGroupData>) -> Self {
        Engine {
            group,
            omega: OmegaTable::new(),
            memo: Mutex::new(HashMap::new()),
            plain: Mutex::new(HashMap::new()),
            bmemo: Mutex::new(HashMap::new()),
            prune_empty: true,
            pivot: largest_k,
        }
    }

    /// With pruning on, a correlator on an empty component (`Ω = 0`) is 0
    /// without recursing.
    pub fn with_pruning(mut self, prune_empty: bool) -> Self {
        self.prune_empty = prune_empty;
        self
    }

    pub fn with_pivot(mut self, pivot: PivotRule) -> Self {
        self.pivot = pivot;
        self
    }

    pub fn group(&self) -> &FiniteGroupData {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<FiniteGroupData> {
        Arc::clone(&self.group)
    }

    pub fn omega(&self, g: u32, classes: &[usize]) -> Result<Rational> {
        self.check_classes(classes)?;
        self.omega.get(&self.group, g, classes)
    }

    fn check_classes(&self, classes: &[usize]) -> Result<()> {
        match classes.iter().find(|&&c| c >= self.group.num_classes()) {
            Some(c) => Err(Error::Query(format!("class index {c} out of range"))),
            None => Ok(()),
        }
    }

    fn check_irrep(&self, alpha: usize) -> Result<()> {
        if alpha >= self.group.irreps().len() {
            return Err(Error::Query(format!("irrep index {alpha} out of range")));
        }
        Ok(())
    }

    /// Virtual rank of `F_α` on the component `(g, classes)`:
    /// `dim V_α (1 - g) - Σ_i Σ_l m_l l / r_i`.
    ///
    /// On a nonempty component the value must be an integer.
    pub fn rank_virtual(&self, alpha: usize, g: u32, classes: &[usize]) -> Result<Rational> {
        self.check_irrep(alpha)?;
        self.check_classes(classes)?;
        let dim = self.group.irreps()[alpha].dim as i64;
        let mut r = int(dim * (1 - i64::from(g)));
        for &c in classes {
            let m = self.group.eig_multiplicities(alpha, c);
            let order = m.len() as i64;
            for (l, &ml) in m.iter().enumerate() {
                r -= rational(ml as i64 * l as i64, order).unwrap();
            }
        }
        if !r.is_integer() && !self.omega.get(&self.group, g, classes)?.is_zero() {
            return Err(Error::Inconsistency(format!(
                "virtual rank {r} of F_{alpha} is not an integer on a nonempty component"
            )));
        }
        Ok(r)
    }

    /// Rank of `R¹π_*f*E_α`, taking `R⁰` to be the invariant part of `V_α`.
    pub fn rank_r1(&self, alpha: usize, g: u32, classes: &[usize]) -> Result<Rational> {
        let f = self.rank_virtual(alpha, g, classes)?;
        Ok(int(self.group.invariant_dim(alpha) as i64) - f)
    }

    /// `b(α, k, β) = Σ_l m_l B_{k+1}(l/r) / (k+1)!`.
    pub fn b_coeff(&self, alpha: usize, k: u32, beta: usize) -> Result<Rational> {
        if k == 0 {
            return Err(Error::ChDegreeZero);
        }
        self.check_irrep(alpha)?;
        self.check_classes(&[beta])?;
        Ok(self.b(alpha, k, beta))
    }

    fn b(&self, alpha: usize, k: u32, beta: usize) -> Rational {
        let key = (alpha, k, beta);
        if let Some(v) = self.bmemo.lock().get(&key) {
            return v.clone();
        }
        let m = self.group.eig_multiplicities(alpha, beta);
        let r = m.len() as i64;
        let mut s = Rational::zero();
        for (l, &ml) in m.iter().enumerate() {
            if ml > 0 {
                s += int(ml as i64) * bernoulli_poly(k + 1, &rational(l as i64, r).unwrap());
            }
        }
        let v = s / Rational::from_integer(factorial(k + 1));
        self.bmemo.lock().insert(key, v.clone());
        v
    }

    /// `⟨Π τ_{a_i}(e_{γ_i})⟩_g` with no `ch` insertions.
    pub fn correlator(&self, g: u32, insertions: &[Insertion]) -> Result<Rational> {
        if !is_stable(g, insertions.len()) {
            return Err(Error::Unstable { genus: g, points: insertions.len() });
        }
        let classes: Vec<usize> = insertions.iter().map(|i| i.class).collect();
        self.check_classes(&classes)?;
        let mut ins = insertions.to_vec();
        ins.sort_unstable();
        Ok(self.plain_correlator(g, ins))
    }

    /// Stable, validated, sorted insertions.
    fn plain_correlator(&self, g: u32, ins: Vec<Insertion>) -> Rational {
        let key = (g, ins);
        if let Some(v) = self.plain.lock().get(&key) {
            return v.clone();
        }
        let classes: Vec<usize> = key.1.iter().map(|i| i.class).collect();
        let om = self.omega.get(&self.group, g, &classes).expect("validated group");
        let v = if om.is_zero() {
            om
        } else {
            let psi: Vec<u32> = key.1.iter().map(|i| i.psi).collect();
            psi_correlator(g, &psi).expect("stable") * om
        };
        self.plain.lock().insert(key, v.clone());
        v
    }

    pub fn twisted_correlator(&self, tc: &TwistedCorrelator) -> Result<Rational> {
        self.check_classes(&tc.classes())?;
        for c in &tc.chs {
            if c.k == 0 {
                return Err(Error::ChDegreeZero);
            }
            self.check_irrep(c.alpha)?;
        }
        if tc.chs.is_empty() {
            return self.correlator(tc.genus, &tc.insertions);
        }
        Ok(self.eval(tc.genus, tc.insertions.clone(), tc.chs.clone()))
    }

    /// Memo contents as canonical key strings, sorted.
    pub fn export_memo(&self) -> Vec<(String, Rational)> {
        let mut out: Vec<(String, Rational)> =
            self.memo.lock().iter().map(|(k, v)| (k.canonical_key(&self.group), v.clone())).collect();
        out.sort();
        out
    }

    /// Seeds the memo with a previously computed value.
    pub fn import(&self, key: &str, value: Rational) -> Result<()> {
        let tc = TwistedCorrelator::parse_key(&self.group, key)?;
        self.memo.lock().insert(tc, value);
        Ok(())
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().len()
    }

    fn eval(&self, g: u32, mut ins: Vec<Insertion>, mut chs: Vec<ChInsertion>) -> Rational {
        let n = ins.len() as i64;
        let dim = 3 * i64::from(g) - 3 + n;
        let deg: i64 =
            ins.iter().map(|i| i64::from(i.psi)).sum::<i64>() + chs.iter().map(|c| i64::from(c.k)).sum::<i64>();
        if deg != dim {
            return Rational::zero();
        }
        if chs.is_empty() && !is_stable(g, ins.len()) {
            return Rational::zero();
        }
        ins.sort_unstable();
        if chs.is_empty() {
            return self.plain_correlator(g, ins);
        }
        if self.prune_empty {
            let classes: Vec<usize> = ins.iter().map(|i| i.class).collect();
            let om = self.omega.get(&self.group, g, &classes).expect("validated group");
            if om.is_zero() {
                return om;
            }
        }
        chs.sort_unstable();
        let key = TwistedCorrelator { genus: g, insertions: ins, chs };
        if let Some(v) = self.memo.lock().get(&key) {
            return v.clone();
        }
        let v = self.expand(&key);
        self.memo.lock().insert(key, v.clone());
        v
    }

    fn expand(&self, tc: &TwistedCorrelator) -> Rational {
        let g = tc.genus;
        let ins = &tc.insertions;
        let mut rest = tc.chs.clone();
        let ChInsertion { k, alpha } = rest.remove((self.pivot)(&tc.chs));
        let mut total = Rational::zero();

        // new untwisted point with ψ^{k+1}
        let b1 = self.b(alpha, k, 0);
        if !b1.is_zero() {
            let mut ins2 = ins.clone();
            ins2.push(Insertion::new(0, k + 1));
            total += b1 * self.eval(g, ins2, rest.clone());
        }

        // ψ^k added to one point; equal points give equal terms
        for (x, count) in runs(ins) {
            let b = self.b(alpha, k, x.class);
            if b.is_zero() {
                continue;
            }
            let pos = ins.iter().position(|y| *y == x).unwrap();
            let mut ins2 = ins.clone();
            ins2[pos].psi += k;
            total -= b * int(i64::from(count)) * self.eval(g, ins2, rest.clone());
        }

        // nodes
        // (left insertions, right insertions, left chs, right chs, weight,
        // left degree, left class product when abelian)
        let mut halves = Vec::new();
        for (i1, j1, wi) in splits(ins) {
            for (c1, c2, wc) in splits(&rest) {
                let ldeg: i64 =
                    i1.iter().map(|i| i64::from(i.psi)).sum::<i64>() + c1.iter().map(|c| i64::from(c.k)).sum::<i64>();
                let classes: Vec<usize> = i1.iter().map(|i| i.class).collect();
                let lprod = self.group.abelian_product(&classes);
                halves.push((i1.clone(), j1.clone(), c1, c2, int((wi * wc) as i64), ldeg, lprod));
            }
        }
        let mut node = Rational::zero();
        for l in 0..k {
            let sign = if l % 2 == 0 { int(1) } else { int(-1) };
            for beta in 0..self.group.num_classes() {
                let binv = self.inverse(beta);
                let w = self.b(alpha, k, binv);
                if w.is_zero() {
                    continue;
                }
                let left_pt = Insertion::new(beta, l);
                let right_pt = Insertion::new(binv, k - 1 - l);
                let mut inner = Rational::zero();
                if g >= 1 {
                    let mut ins2 = ins.clone();
                    ins2.push(left_pt);
                    ins2.push(right_pt);
                    inner += self.eval(g - 1, ins2, rest.clone());
                }
                for g1 in 0..=g {
                    for (i1, j1, c1, c2, wt, ldeg, lprod) in &halves {
                        if ldeg + i64::from(l) != 3 * i64::from(g1) - 2 + i1.len() as i64 {
                            continue;
                        }
                        // Ω vanishes unless the left classes and β multiply to 1
                        if let Some(p) = lprod {
                            if self.prune_empty && self.group.abelian_product(&[*p, beta]) != Some(0) {
                                continue;
                            }
                        }
                        let mut li = i1.clone();
                        li.push(left_pt);
                        let lv = self.eval(g1, li, c1.clone());
                        if lv.is_zero() {
                            continue;
                        }
                        let mut ri = j1.clone();
                        ri.push(right_pt);
                        let rv = self.eval(g - g1, ri, c2.clone());
                        if rv.is_zero() {
                            continue;
                        }
                        inner += wt * lv * rv;
                    }
                }
                if !inner.is_zero() {
                    let c = int(self.group.centralizer_order(beta) as i64);
                    node += &sign * c * w * inner;
                }
            }
        }
        total + node / int(2)
    }

    fn inverse(&self, c: usize) -> usize {
        self.group.inverse(c)
    }
}

/// Debug dump of a value with its key.
pub fn describe(group: &FiniteGroupData, tc: &TwistedCorrelator, v: &Rational) -> String {
    format!("{} = {}", tc.canonical_key(group), format_rational(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic_group, load_group};

    fn q(p: i64, r: i64) -> Rational {
        rational(p, r).unwrap()
    }

    fn engine(n: u32) -> Engine {
        Engine::new(Arc::new(cyclic_group(n)))
    }

    fn ins(spec: &[(usize, u32, usize)]) -> Vec<Insertion> {
        spec.iter().flat_map(|&(c, a, m)| std::iter::repeat_n(Insertion::new(c, a), m)).collect()
    }

    fn tc(g: u32, i: &[(usize, u32, usize)], chs: &[(u32, usize)]) -> TwistedCorrelator {
        TwistedCorrelator::new(g, ins(i), chs.iter().map(|&(k, a)| ChInsertion::new(k, a)).collect())
    }

    #[test]
    fn b_coefficients() {
        let e = engine(5);
        assert_eq!(e.b_coeff(3, 1, 2).unwrap(), q(1, 300));
        // identity class: dim · B_{k+1}(0)/(k+1)!
        assert_eq!(e.b_coeff(3, 1, 0).unwrap(), q(1, 12));
        assert_eq!(e.b_coeff(1, 2, 0).unwrap(), int(0));
        assert!(matches!(e.b_coeff(1, 0, 0), Err(Error::ChDegreeZero)));
        let z2 = engine(2);
        for m in 2..=6u32 {
            let k = 2 * m - 3;
            let expected = bernoulli_poly(2 * m - 2, &q(1, 2)) / Rational::from_integer(factorial(2 * m - 2));
            assert_eq!(z2.b_coeff(1, k, 1).unwrap(), expected);
        }
    }

    #[test]
    fn b_antisymmetry() {
        let s3 = Engine::new(Arc::new(load_group(include_str!("../data/s3.group")).unwrap()));
        for e in [engine(3), engine(5), engine(6), s3] {
            let g = e.group().clone();
            for alpha in 0..g.num_classes() {
                for beta in 0..g.num_classes() {
                    for k in 1..=6 {
                        let sign = if (k + 1) % 2 == 0 { int(1) } else { int(-1) };
                        assert_eq!(
                            e.b_coeff(alpha, k, beta).unwrap(),
                            sign * e.b_coeff(alpha, k, g.inverse(beta)).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn untwisted_correlators() {
        let e = engine(5);
        assert_eq!(e.correlator(0, &ins(&[(1, 0, 1), (2, 0, 2)])).unwrap(), q(1, 5));
        assert_eq!(e.correlator(0, &ins(&[(1, 0, 3), (2, 0, 1), (0, 2, 1)])).unwrap(), q(1, 5));
        assert_eq!(engine(3).correlator(1, &ins(&[(0, 1, 1)])).unwrap(), q(1, 8));
        assert!(matches!(e.correlator(0, &ins(&[(1, 0, 2)])), Err(Error::Unstable { .. })));
    }

    #[test]
    fn z5_recursion_values() {
        let e = engine(5);
        assert_eq!(e.twisted_correlator(&tc(0, &[(1, 0, 3), (2, 0, 1)], &[(1, 3)])).unwrap(), q(1, 25));
        assert_eq!(e.twisted_correlator(&tc(0, &[(1, 0, 5)], &[(2, 3)])).unwrap(), q(1, 50));
        assert_eq!(e.twisted_correlator(&tc(0, &[(1, 0, 5)], &[(1, 3), (1, 3)])).unwrap(), q(1, 25));
        assert_eq!(e.twisted_correlator(&tc(0, &[(1, 1, 1), (1, 0, 4)], &[(1, 3)])).unwrap(), q(3, 25));
        assert_eq!(e.twisted_correlator(&tc(0, &[(1, 0, 5), (0, 2, 1)], &[(1, 3)])).unwrap(), q(1, 5));
    }

    #[test]
    fn z3_and_z2_values() {
        let z3 = engine(3);
        assert_eq!(z3.twisted_correlator(&tc(1, &[(0, 0, 1)], &[(1, 1)])).unwrap(), q(1, 72));
        assert_eq!(z3.twisted_correlator(&tc(0, &[(1, 0, 2), (2, 0, 2)], &[(1, 1)])).unwrap(), q(1, 9));
        assert_eq!(engine(2).twisted_correlator(&tc(0, &[(1, 0, 4)], &[(1, 1)])).unwrap(), q(1, 4));
    }

    #[test]
    fn rank_values() {
        let z5 = engine(5);
        assert_eq!(z5.rank_r1(3, 0, &[1, 1, 1, 2]).unwrap(), int(1));
        assert_eq!(z5.rank_r1(3, 0, &[1, 1, 1, 1, 1]).unwrap(), int(2));
        assert_eq!(z5.rank_r1(1, 0, &[1, 2, 2]).unwrap(), int(0));
        let z3 = engine(3);
        for g in 0..=3 {
            assert_eq!(z3.rank_r1(0, g, &[1, 2]).unwrap(), int(i64::from(g)));
        }
    }

    #[test]
    fn dimension_off_and_errors() {
        let e = engine(5);
        assert_eq!(e.twisted_correlator(&tc(0, &[(1, 0, 5)], &[(1, 3)])).unwrap(), int(0));
        assert!(matches!(e.twisted_correlator(&tc(0, &[(1, 0, 5)], &[(0, 3)])), Err(Error::ChDegreeZero)));
        assert!(e.twisted_correlator(&tc(0, &[(7, 0, 3)], &[])).is_err());
    }

    #[test]
    fn canonical_keys_round_trip() {
        let g = cyclic_group(5);
        let t = tc(0, &[(2, 0, 1), (1, 0, 3)], &[(1, 3)]);
        let key = t.canonical_key(&g);
        assert_eq!(key, "g=0;ins=w:0,w:0,w:0,w2:0;ch=1:3");
        assert_eq!(TwistedCorrelator::parse_key(&g, &key).unwrap(), t);
        assert!(TwistedCorrelator::parse_key(&g, "g=0;ins=q:0;ch=").is_err());
        assert_eq!(parse_insertions(&g, "w:0*5,1:2").unwrap().len(), 6);
    }

    #[test]
    fn export_import() {
        let e = engine(5);
        e.twisted_correlator(&tc(0, &[(1, 0, 5)], &[(2, 3)])).unwrap();
        let dump = e.export_memo();
        assert!(!dump.is_empty());
        let fresh = engine(5);
        for (k, v) in &dump {
            fresh.import(k, v.clone()).unwrap();
        }
        assert_eq!(fresh.export_memo(), dump);
    }

    #[test]
    fn splits_count_labeled_subsets() {
        let s = splits(&[1, 1, 2]);
        let total: u64 = s.iter().map(|(_, _, w)| w).sum();
        assert_eq!(total, 8);
        assert_eq!(splits(&[3; 6]).iter().map(|(_, _, w)| w).collect::<Vec<_>>(), [&1, &6, &15, &20, &15, &6, &1]);
    }
}
