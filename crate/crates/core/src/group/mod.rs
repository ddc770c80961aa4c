//! Finite-group data and the Frobenius algebra of class functions.
//!
//! Classes are indexed in declaration order with the identity at index 0.
//! Irreps are indexed in declaration order with the trivial irrep at index 0.
//! All character arithmetic is cyclotomic; conversion to rationals happens
//! only where the result must be rational, and failure is a hard error.

mod file;

pub use file::load_group;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{as_nonneg_integer, int, rational, Cyclotomic};
use crate::error::{Error, Result};
use crate::scalar::Matrix;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct ConjClass {
    pub name: String,
    pub size: u64,
    /// Order `r` of any element of the class.
    pub order: u32,
    pub inverse: usize,
    /// `powers[j]` is the class of `x^j`, `0 <= j < order`.
    pub powers: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    pub name: String,
    pub dim: u64,
    /// Character value on each class.
    pub values: Vec<Cyclotomic>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Class,
    Rep,
}

/// A vector of the orbifold cohomology `H` of `BG` in one of its two bases.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector {
    pub basis: Basis,
    pub coeffs: Vec<Cyclotomic>,
}

impl HVector {
    pub fn unit(basis: Basis, n: usize, i: usize) -> Self {
        let mut coeffs = vec![Cyclotomic::zero(); n];
        coeffs[i] = Cyclotomic::one();
        HVector { basis, coeffs }
    }

    pub fn to_rationals(&self) -> Result<Vec<Rational>> {
        self.coeffs.iter().map(Cyclotomic::to_rational).collect()
    }
}

/// Validated character-table data of a finite group.
#[derive(Clone, Debug)]
pub struct FiniteGroupData {
    name: String,
    order: u64,
    classes: Vec<ConjClass>,
    irreps: Vec<Irrep>,
    /// `eig[α][c][l]`: multiplicity of the eigenvalue `ζ_r^l` of `c` on `V_α`.
    eig: Vec<Vec<Vec<u64>>>,
    /// Class multiplication table, present when every class is a singleton.
    abelian: Option<Vec<Vec<usize>>>,
}

impl FiniteGroupData {
    /// Checks every invariant of the table before accepting it.
    pub fn new(name: &str, order: u64, classes: Vec<ConjClass>, irreps: Vec<Irrep>) -> Result<Self> {
        let mut g = FiniteGroupData { name: name.to_string(), order, classes, irreps, eig: Vec::new(), abelian: None };
        g.validate_classes()?;
        g.validate_characters()?;
        g.eig = (0..g.irreps.len())
            .map(|a| (0..g.classes.len()).map(|c| g.compute_eig(a, c)).collect())
            .collect::<Result<_>>()?;
        g.validate_structure_constants()?;
        if g.classes.iter().all(|c| c.size == 1) {
            g.abelian = Some(g.derived_abelian_table()?);
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn inverse(&self, c: usize) -> usize {
        self.classes[c].inverse
    }

    /// `|C(γ)| = |G| / |[γ]|`.
    pub fn centralizer_order(&self, c: usize) -> u64 {
        self.order / self.classes[c].size
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian.is_some()
    }

    /// Product of class representatives, available for abelian groups.
    pub fn abelian_product(&self, cs: &[usize]) -> Option<usize> {
        let t = self.abelian.as_ref()?;
        Some(cs.iter().fold(0, |acc, &c| t[acc][c]))
    }

    /// `ν_α = (dim V_α / |G|)²`.
    pub fn nu(&self, alpha: usize) -> Rational {
        let q = rational(self.irreps[alpha].dim, self.order).unwrap();
        &q * &q
    }

    /// Multiplicity of the trivial representation inside `V_α`.
    pub fn invariant_dim(&self, alpha: usize) -> u64 {
        u64::from(alpha == 0)
    }

    fn validate_classes(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        let n = self.classes.len();
        if n == 0 {
            return bad("no conjugacy classes".into());
        }
        if self.irreps.len() != n {
            return bad(format!("{} irreps for {} classes", self.irreps.len(), n));
        }
        let total: u64 = self.classes.iter().map(|c| c.size).sum();
        if total != self.order {
            return bad(format!("class sizes sum to {total}, group order is {}", self.order));
        }
        let ids: Vec<usize> = (0..n).filter(|&i| self.classes[i].size == 1 && self.classes[i].order == 1).collect();
        if ids != [0] {
            return bad("the identity class (size 1, order 1) must be unique and declared first".into());
        }
        for (i, c) in self.classes.iter().enumerate() {
            if c.size == 0 || !self.order.is_multiple_of(c.size) {
                return bad(format!("class {}: size {} does not divide |G|", c.name, c.size));
            }
            if c.order == 0 || !self.order.is_multiple_of(u64::from(c.order)) {
                return bad(format!("class {}: element order {} does not divide |G|", c.name, c.order));
            }
            if c.inverse >= n || self.classes[c.inverse].inverse != i {
                return bad(format!("class {}: inverse map is not an involution", c.name));
            }
            let inv = &self.classes[c.inverse];
            if inv.size != c.size || inv.order != c.order {
                return bad(format!("class {}: inverse class has different size or order", c.name));
            }
            if c.powers.len() != c.order as usize {
                return bad(format!("class {}: expected {} power-map entries", c.name, c.order));
            }
            if c.powers.iter().any(|&p| p >= n) {
                return bad(format!("class {}: power map refers to an unknown class", c.name));
            }
            if c.powers[0] != 0 || (c.order > 1 && c.powers[1] != i) {
                return bad(format!("class {}: power map must start with identity, self", c.name));
            }
            let r = c.order as usize;
            for j in 1..r {
                if self.classes[c.powers[j]].inverse != c.powers[r - j] {
                    return bad(format!("class {}: powers {j} and {} are not inverse", c.name, r - j));
                }
                let expected = c.order / (j as u32).gcd(&c.order);
                if self.classes[c.powers[j]].order != expected {
                    return bad(format!("class {}: power {j} has the wrong element order", c.name));
                }
            }
        }
        Ok(())
    }

    fn validate_characters(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        let n = self.classes.len();
        let g = int(self.order as i64);
        for (a, irr) in self.irreps.iter().enumerate() {
            if irr.values.len() != n {
                return bad(format!("irrep {}: {} values for {n} classes", irr.name, irr.values.len()));
            }
            if irr.values[0] != Cyclotomic::from_int(irr.dim as i64) {
                return bad(format!("irrep {}: value at identity must equal the dimension", irr.name));
            }
            if a == 0 && irr.values.iter().any(|v| *v != Cyclotomic::one()) {
                return bad("irrep 0 must be the trivial representation".into());
            }
        }
        let dims: u64 = self.irreps.iter().map(|r| r.dim * r.dim).sum();
        if dims != self.order {
            return bad(format!("sum of squared dimensions is {dims}, not |G|"));
        }
        for a in 0..n {
            for b in 0..n {
                let mut s = Cyclotomic::zero();
                for c in 0..n {
                    let term =
                        self.irreps[a].values[c].clone() * self.irreps[b].values[self.classes[c].inverse].clone();
                    s = s + term.scale(&int(self.classes[c].size as i64));
                }
                let expected = if a == b { g.clone() } else { Rational::zero() };
                if s != Cyclotomic::rational(expected) {
                    return bad(format!(
                        "row orthogonality fails for irreps {} and {}",
                        self.irreps[a].name, self.irreps[b].name
                    ));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let mut s = Cyclotomic::zero();
                for irr in &self.irreps {
                    s = s + irr.values[self.classes[x].inverse].clone() * irr.values[y].clone();
                }
                let expected = if x == y { int(self.centralizer_order(x) as i64) } else { Rational::zero() };
                if s != Cyclotomic::rational(expected) {
                    return bad(format!(
                        "column orthogonality fails for classes {} and {}",
                        self.classes[x].name, self.classes[y].name
                    ));
                }
            }
        }
        Ok(())
    }

    fn compute_eig(&self, alpha: usize, c: usize) -> Result<Vec<u64>> {
        let class = &self.classes[c];
        let r = class.order;
        let mut out = Vec::with_capacity(r as usize);
        for l in 0..r {
            let mut s = Cyclotomic::zero();
            for j in 0..r {
                let chi = self.irreps[alpha].values[class.powers[j as usize]].clone();
                s = s + chi * Cyclotomic::zeta(r, -i64::from(j * l));
            }
            let m = s.scale(&rational(1, r).unwrap()).to_rational().map_err(|_| {
                Error::Validation(format!(
                    "eigenvalue multiplicity of irrep {} on class {} is irrational",
                    self.irreps[alpha].name, class.name
                ))
            })?;
            let m = as_nonneg_integer(&m).ok_or_else(|| {
                Error::Validation(format!(
                    "eigenvalue multiplicity {m} of irrep {} on class {} is not a non-negative integer",
                    self.irreps[alpha].name, class.name
                ))
            })?;
            out.push(m);
        }
        if out.iter().sum::<u64>() != self.irreps[alpha].dim {
            return Err(Error::Validation(format!(
                "eigenvalue multiplicities of irrep {} on class {} do not sum to its dimension",
                self.irreps[alpha].name, class.name
            )));
        }
        Ok(out)
    }

    /// `m_l` such that the class acts on `V_α` with eigenvalue `ζ_r^l` exactly `m_l` times.
    pub fn eig_multiplicities(&self, alpha: usize, c: usize) -> &[u64] {
        &self.eig[alpha][c]
    }

    /// `(η_{ab}, η^{ab})` in the class basis.
    pub fn metric(&self) -> (Matrix<Rational>, Matrix<Rational>) {
        let eta = Matrix::from_fn(self.num_classes(), |a, b| {
            if a == self.inverse(b) {
                rational(1, self.centralizer_order(a)).unwrap()
            } else {
                Rational::zero()
            }
        });
        let inv = eta.inverse().expect("class-basis metric is nondegenerate");
        (eta, inv)
    }

    /// Structure constant `a^{c3}_{c1 c2}` of the class basis from characters.
    pub fn structure_constant(&self, c1: usize, c2: usize, c3: usize) -> Result<Rational> {
        let mut s = Cyclotomic::zero();
        for irr in &self.irreps {
            let t = irr.values[c1].clone() * irr.values[c2].clone() * irr.values[self.inverse(c3)].clone();
            s = s + t.scale(&rational(1, irr.dim).unwrap());
        }
        let k = rational(self.classes[c1].size * self.classes[c2].size, self.order).unwrap();
        Ok(s.to_rational()? * k)
    }

    /// `e_{c1} e_{c2}` in the class basis.
    pub fn class_product(&self, c1: usize, c2: usize) -> Result<HVector> {
        let coeffs = (0..self.num_classes())
            .map(|c3| self.structure_constant(c1, c2, c3).map(Cyclotomic::rational))
            .collect::<Result<_>>()?;
        Ok(HVector { basis: Basis::Class, coeffs })
    }

    fn validate_structure_constants(&self) -> Result<()> {
        let n = self.num_classes();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let k = self
                        .structure_constant(a, b, c)
                        .map_err(|_| Error::Validation("class structure constants are irrational".into()))?;
                    if as_nonneg_integer(&k).is_none() {
                        return Err(Error::Validation(format!(
                            "class structure constant for ({}, {}; {}) is {k}, not a non-negative integer",
                            self.classes[a].name, self.classes[b].name, self.classes[c].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn derived_abelian_table(&self) -> Result<Vec<Vec<usize>>> {
        let n = self.num_classes();
        let mut t = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let hits: Vec<usize> =
                    (0..n).filter(|&c| !self.structure_constant(a, b, c).unwrap().is_zero()).collect();
                match hits[..] {
                    [c] => t[a][b] = c,
                    _ => return Err(Error::Validation("abelian class product is not a single class".into())),
                }
            }
        }
        Ok(t)
    }

    /// Exchange class basis and representation basis.
    ///
    /// `f_α = (dim V_α/|G|) Σ_γ χ_α(γ⁻¹) e_γ` and
    /// `e_γ = Σ_α (|[γ]|/dim V_α) χ_α(γ) f_α`.
    pub fn basis_change(&self, v: &HVector) -> HVector {
        let n = self.num_classes();
        let mut out = vec![Cyclotomic::zero(); n];
        match v.basis {
            Basis::Class => {
                for (c, x) in v.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (a, irr) in self.irreps.iter().enumerate() {
                        let k = rational(self.classes[c].size, irr.dim).unwrap();
                        out[a] = out[a].clone() + (x.clone() * irr.values[c].clone()).scale(&k);
                    }
                }
                HVector { basis: Basis::Rep, coeffs: out }
            }
            Basis::Rep => {
                for (a, x) in v.coeffs.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let irr = &self.irreps[a];
                    let k = rational(irr.dim, self.order).unwrap();
                    for (c, o) in out.iter_mut().enumerate() {
                        *o = o.clone() + (x.clone() * irr.values[self.inverse(c)].clone()).scale(&k);
                    }
                }
                HVector { basis: Basis::Class, coeffs: out }
            }
        }
    }

    pub fn to_basis(&self, v: &HVector, basis: Basis) -> HVector {
        if v.basis == basis {
            v.clone()
        } else {
            self.basis_change(v)
        }
    }

    /// Product in `H`, computed componentwise in the representation basis.
    pub fn multiply(&self, v: &HVector, w: &HVector) -> HVector {
        let a = self.to_basis(v, Basis::Rep);
        let b = self.to_basis(w, Basis::Rep);
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x * y).collect();
        let prod = HVector { basis: Basis::Rep, coeffs };
        self.to_basis(&prod, v.basis.clone())
    }

    /// The group written back in the group-file format. Used as the fingerprint input.
    pub fn to_document(&self) -> String {
        let mut s = format!("group {}\norder {}\n", self.name, self.order);
        for c in &self.classes {
            s += &format!(
                "class {} size={} elemorder={} inverse={}\n",
                c.name, c.size, c.order, self.classes[c.inverse].name
            );
        }
        for c in &self.classes {
            let p: Vec<&str> = c.powers.iter().map(|&i| self.classes[i].name.as_str()).collect();
            s += &format!("powers {}: {}\n", c.name, p.join(","));
        }
        for irr in &self.irreps {
            let v: Vec<String> = irr.values.iter().map(|x| x.to_string()).collect();
            s += &format!("irrep {} dim={} values= {}\n", irr.name, irr.dim, v.join("; "));
        }
        s
    }
}

impl fmt::Display for FiniteGroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: order {}, {} classes, {}",
            self.name,
            self.order,
            self.classes.len(),
            if self.is_abelian() { "abelian" } else { "nonabelian" }
        )
    }
}

/// The cyclic group `Z_N` with classes `1, w, w2, …` and `χ_α(ω^a) = ζ_N^{aα}`.
pub fn cyclic_group(n: u32) -> FiniteGroupData {
    assert!(n >= 1, "cyclic group needs N >= 1");
    let name = |a: u32| match a {
        0 => "1".to_string(),
        1 => "w".to_string(),
        _ => format!("w{a}"),
    };
    let classes = (0..n)
        .map(|a| {
            let order = n / a.gcd(&n).max(1);
            let order = if a == 0 { 1 } else { order };
            ConjClass {
                name: name(a),
                size: 1,
                order,
                inverse: ((n - a) % n) as usize,
                powers: (0..order).map(|j| ((a * j) % n) as usize).collect(),
            }
        })
        .collect();
    let irreps = (0..n)
        .map(|alpha| Irrep {
            name: alpha.to_string(),
            dim: 1,
            values: (0..n).map(|a| Cyclotomic::zeta(n, i64::from(a * alpha))).collect(),
        })
        .collect();
    let mut g =
        FiniteGroupData::new(&format!("Z{n}"), u64::from(n), classes, irreps).expect("cyclic group tables are valid");
    g.abelian = Some((0..n as usize).map(|a| (0..n as usize).map(|b| (a + b) % n as usize).collect()).collect());
    g
}

/// Identity-free convenience used by tests and the CLI: `1 = Σ_α f_α`.
pub fn unit_in_rep_basis(g: &FiniteGroupData) -> HVector {
    HVector { basis: Basis::Rep, coeffs: vec![Cyclotomic::one(); g.num_classes()] }
}
