//! Built-in acceptance corpus.
//!
//! Every published value the crate reproduces is listed here together with
//! the exact query that reproduces it. Criteria are numbered 1 to 11; the
//! acceptance test binary and `hhodge selftest` both print [`Criterion`]
//! reports from [`run_criterion`].
//!
//! Some displayed series monomials are garbled in the source tables (a ψ
//! subscript swapped with a class superscript, or a dimension that does not
//! match the moduli space). Those are checked against the unique monomial of
//! the correct dimension carrying the printed coefficient, and the reading is
//! shown in the check label. Two genus-one coefficients contradict the
//! `ω ↔ ω²` symmetry of the series; they are reported as
//! [`Outcome::Misprint`] with the mirror value, never silently accepted.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::arith::{
    bernoulli_number, bernoulli_poly, factorial, format_rational, int, parse_rational, pow, rational, root_of_unity_sum,
};
use crate::cache::CacheFile;
use crate::classes::{evaluate_class, parse_class_expr};
use crate::engine::{ChInsertion, Engine, Insertion, TwistedCorrelator};
use crate::error::Result;
use crate::group::{cyclic_group, load_group, FiniteGroupData};
use crate::omega::{check_recursions, class_multisets, omega, omega_abelian, omega_characters};
use crate::poly::Monomial;
use crate::series::{
    enumerate_insertions, jfunction, jfunction_closed_form, operator_coefficient, operator_coefficients, potential,
    twisted_genfun, SeriesPoly, TVar, Truncation,
};
use crate::wk::is_stable;
use crate::Rational;

/// The bundled `S3` character table.
pub const S3_GROUP: &str = include_str!("../data/s3.group");

pub fn bundled_s3() -> FiniteGroupData {
    load_group(S3_GROUP).expect("bundled S3 table is valid")
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// The published value is inconsistent with a symmetry of the published
    /// table itself; the string explains why.
    Misprint(String),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub outcome: Outcome,
}

impl Check {
    fn new(label: impl Into<String>, outcome: Outcome) -> Self {
        Check { label: label.into(), outcome }
    }

    fn from_result(label: impl Into<String>, r: Result<Outcome>) -> Self {
        let outcome = r.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")));
        Check::new(label, outcome)
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    /// Failing only on published values shown to be misprints.
    pub fn fails_only_on_misprints(&self) -> bool {
        !self.passed() && self.checks.iter().all(|c| matches!(c.outcome, Outcome::Pass | Outcome::Misprint(_)))
    }

    pub fn summary_line(&self) -> String {
        let total = self.checks.len();
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("criterion {:>2} {status}  {} ({ok}/{total} checks)", self.id, self.title)
    }
}

impl Criterion {
    /// Failed and misprinted checks, then notes, one per line.
    pub fn detail_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.checks {
            match &c.outcome {
                Outcome::Pass => {}
                Outcome::Fail(why) => out.push(format!("FAIL {}: {why}", c.label)),
                Outcome::Misprint(why) => out.push(format!("MISPRINT {}: {why}", c.label)),
            }
        }
        out.extend(self.notes.iter().map(|n| format!("note: {n}")));
        out
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for line in self.detail_lines() {
            writeln!(f, "    {line}")?;
        }
        Ok(())
    }
}

pub const CRITERIA: std::ops::RangeInclusive<u32> = 1..=11;

pub fn run_criterion(id: u32) -> Criterion {
    match id {
        1 => headline_values(),
        2 => intermediate_values(),
        3 => z3_potentials(),
        4 => z3_twisted_series(),
        5 => z2_family(),
        6 => rank_formula(),
        7 => root_of_unity_identity(),
        8 => bernoulli_half(),
        9 => omega_suite(),
        10 => oracle_equivalence(5),
        11 => jfunction_check(6),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all() -> Vec<Criterion> {
    CRITERIA.map(run_criterion).collect()
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

fn compare(got: &Rational, want: &Rational) -> Outcome {
    if got == want {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("got {}, expected {}", format_rational(got), format_rational(want)))
    }
}

fn engine(n: u32) -> Engine {
    Engine::new(Arc::new(cyclic_group(n)))
}

/// `(class, psi, count)` triples.
fn ins(spec: &[(usize, u32, usize)]) -> Vec<Insertion> {
    spec.iter().flat_map(|&(c, a, k)| std::iter::repeat_n(Insertion::new(c, a), k)).collect()
}

/// `(class, psi, exponent)` triples.
fn mono(spec: &[(usize, u32, u32)]) -> Monomial<TVar> {
    Monomial::from_powers(spec.iter().map(|&(c, a, e)| (TVar { class: c, psi: a }, e)))
}

fn twisted(e: &Engine, g: u32, spec: &[(usize, u32, usize)], chs: &[(u32, usize)]) -> Result<Rational> {
    let chs = chs.iter().map(|&(k, a)| ChInsertion::new(k, a)).collect();
    e.twisted_correlator(&TwistedCorrelator::new(g, ins(spec), chs))
}

/// `(class, psi, count)` triples.
type InsSpec = &'static [(usize, u32, usize)];
/// `(class, psi, exponent)` triples of a monomial.
type MonoSpec = &'static [(usize, u32, u32)];

fn headline_values() -> Criterion {
    let e = engine(5);
    let cases: [(&str, InsSpec, &str, &str); 3] = [
        ("∫ 1 on (w, w2^2), as e(E1 + E1 + E3)", &[(1, 0, 1), (2, 0, 2)], "e(1,1,3)", "1/5"),
        ("∫ c1(E3) on (w^3, w2)", &[(1, 0, 3), (2, 0, 1)], "c1(3)", "-1/25"),
        ("∫ c2(E3) on (w^5)", &[(1, 0, 5)], "c2(3)", "1/25"),
    ];
    let checks = cases
        .iter()
        .map(|(label, spec, expr, want)| {
            Check::from_result(
                *label,
                (|| Ok(compare(&evaluate_class(&e, 0, &ins(spec), &parse_class_expr(expr)?)?, &q(want))))(),
            )
        })
        .collect();
    Criterion { id: 1, title: "Z5 headline Hodge integrals", checks, notes: vec![] }
}

fn intermediate_values() -> Criterion {
    let e = engine(5);
    type Case = (&'static str, &'static [(usize, u32, usize)], &'static [(u32, usize)], &'static str);
    let cases: &[Case] = &[
        ("∫ ch_{1,3} on (w^3, w2)", &[(1, 0, 3), (2, 0, 1)], &[(1, 3)], "1/25"),
        ("∫ ch_{2,3} on (w^5)", &[(1, 0, 5)], &[(2, 3)], "1/50"),
        ("∫ ch_{1,3}^2 on (w^5)", &[(1, 0, 5)], &[(1, 3), (1, 3)], "1/25"),
        ("∫ ch_{1,3} ψ_1 on (w^5)", &[(1, 1, 1), (1, 0, 4)], &[(1, 3)], "3/25"),
        ("∫ ch_{1,3} ψ_6^2 on (w^5, 1)", &[(1, 0, 5), (0, 2, 1)], &[(1, 3)], "1/5"),
        ("∫ 1 on (w^2, w3)", &[(1, 0, 2), (3, 0, 1)], &[], "1/5"),
        ("∫ 1 on (w2^2, w)", &[(2, 0, 2), (1, 0, 1)], &[], "1/5"),
        ("∫ 1 on (w3, w, w)", &[(3, 0, 1), (1, 0, 2)], &[], "1/5"),
        ("∫ ψ_5^2 on (w^3, w2, 1)", &[(1, 0, 3), (2, 0, 1), (0, 2, 1)], &[], "1/5"),
        ("∫ ψ_1 on (w^3, w2)", &[(1, 1, 1), (1, 0, 2), (2, 0, 1)], &[], "1/5"),
        ("∫ ψ_4 on (w^3, w2)", &[(1, 0, 3), (2, 1, 1)], &[], "1/5"),
        ("∫ ψ_6^3 on (w^5, 1)", &[(1, 0, 5), (0, 3, 1)], &[], "1/5"),
        ("∫ ψ_1^2 on (w^5)", &[(1, 2, 1), (1, 0, 4)], &[], "1/5"),
        ("∫ ψ_1 ψ_2 on (w^5)", &[(1, 1, 2), (1, 0, 3)], &[], "2/5"),
        ("∫ ψ_1 ψ_6^2 on (w^5, 1)", &[(1, 1, 1), (1, 0, 4), (0, 2, 1)], &[], "3/5"),
        ("∫ ψ_6^2 ψ_7^2 on (w^5, 1^2)", &[(1, 0, 5), (0, 2, 2)], &[], "6/5"),
    ];
    let checks = cases
        .iter()
        .map(|(label, spec, chs, want)| {
            Check::from_result(*label, twisted(&e, 0, spec, chs).map(|v| compare(&v, &q(want))))
        })
        .collect();
    let mut c = Criterion { id: 2, title: "Z5 intermediate recursion values", checks, notes: vec![] };
    let euler = (|| {
        let half = twisted(&e, 0, &[(1, 0, 5)], &[(1, 3), (1, 3)])? / int(2);
        let two = twisted(&e, 0, &[(1, 0, 5)], &[(2, 3)])?;
        Ok(compare(&(half + two), &q("1/25")))
    })();
    c.checks.push(Check::from_result("∫ (ch_{1,3}^2/2 + ch_{2,3}) on (w^5)", euler));
    c
}

fn series_check(s: &SeriesPoly, label: &str, m: &Monomial<TVar>, want: &str) -> Check {
    Check::new(label, compare(&s.coeff(m), &q(want)))
}

fn z3_potentials() -> Criterion {
    let e = engine(3);
    let mut checks = Vec::new();
    // F_0 items, monomials as (class, psi, exponent)
    let f0_items: &[(&str, MonoSpec, &str)] = &[
        ("t0^0 t0^1 t0^2", &[(0, 0, 1), (1, 0, 1), (2, 0, 1)], "1/3"),
        ("(t0^0)^3", &[(0, 0, 3)], "1/18"),
        ("(t0^1)^3", &[(1, 0, 3)], "1/18"),
        ("(t0^2)^3", &[(2, 0, 3)], "1/18"),
        ("(t0^1)^2 t0^2 t1^2", &[(1, 0, 2), (2, 0, 1), (2, 1, 1)], "1/6"),
        ("(t0^0)^3 t1^0", &[(0, 0, 3), (0, 1, 1)], "1/18"),
        ("t0^0 t0^1 t0^2 t1^0", &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (2, 0, 1)], "1/3"),
        ("(t0^0)^2 t0^1 t1^2", &[(0, 0, 2), (1, 0, 1), (2, 1, 1)], "1/6"),
        ("(t0^0)^2 t0^2 t1^1", &[(0, 0, 2), (2, 0, 1), (1, 1, 1)], "1/6"),
        ("t0^0 (t0^1)^2 t1^1", &[(0, 0, 1), (1, 0, 2), (1, 1, 1)], "1/6"),
        ("t0^0 (t0^2)^2 t1^2", &[(0, 0, 1), (2, 0, 2), (2, 1, 1)], "1/6"),
        ("t0^1 (t0^2)^2 t1^1", &[(1, 0, 1), (2, 0, 2), (1, 1, 1)], "1/6"),
        ("(t0^1)^3 t1^0", &[(1, 0, 3), (0, 1, 1)], "1/18"),
        ("(t0^2)^3 t1^0", &[(2, 0, 3), (0, 1, 1)], "1/18"),
    ];
    match potential(&e, 0, Truncation { max_points: 4, max_psi: 1 }) {
        Ok(f0) => {
            for (label, spec, want) in f0_items {
                checks.push(series_check(&f0, &format!("F0 {label}"), &mono(spec), want));
            }
        }
        Err(err) => checks.push(Check::new("F0", Outcome::Fail(err.to_string()))),
    }
    // F_1: on M_{1,2} the ψ-powers sum to 2, so printed degree-one pairs are
    // read with the ψ-index 1 raised to 2 on the printed t_1.
    let f1_items: &[(&str, MonoSpec, &str)] = &[
        ("t1^0", &[(0, 1, 1)], "1/8"),
        ("t0^2 t1^1 read as t0^2 t2^1", &[(2, 0, 1), (1, 2, 1)], "1/8"),
        ("t0^1 t1^2 read as t0^1 t2^2", &[(1, 0, 1), (2, 2, 1)], "1/8"),
        ("t0^0 t1^2 read as t0^0 t2^0", &[(0, 0, 1), (0, 2, 1)], "1/8"),
        ("t1^1 t1^2", &[(1, 1, 1), (2, 1, 1)], "1/8"),
        ("(t1^0)^2", &[(0, 1, 2)], "1/16"),
    ];
    match potential(&e, 1, Truncation { max_points: 2, max_psi: 2 }) {
        Ok(f1) => {
            for (label, spec, want) in f1_items {
                checks.push(series_check(&f1, &format!("F1 {label}"), &mono(spec), want));
            }
        }
        Err(err) => checks.push(Check::new("F1", Outcome::Fail(err.to_string()))),
    }
    Criterion { id: 3, title: "Z3 potentials F0, F1 (class and representation bases agree)", checks, notes: vec![] }
}

/// Swaps the classes `w` and `w2` of `Z3`.
fn mirror(m: &Monomial<TVar>) -> Monomial<TVar> {
    Monomial::from_powers(m.powers().iter().map(|(v, e)| (TVar { class: (3 - v.class) % 3, psi: v.psi }, *e)))
}

fn z3_twisted_series() -> Criterion {
    let e = engine(3);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let g0_items: &[(&str, MonoSpec, &str)] = &[
        ("(t0^1)^2 (t0^2)^2", &[(1, 0, 2), (2, 0, 2)], "1/36"),
        ("(t0^1)^4 t1^2", &[(1, 0, 4), (2, 1, 1)], "1/216"),
        ("(t0^2)^4 t1^2 read as (t0^2)^4 t1^1", &[(2, 0, 4), (1, 1, 1)], "1/216"),
        ("(t0^1)^2 (t0^2)^2 t0^1 read as t1^0 (t0^1)^2 (t0^2)^2", &[(0, 1, 1), (1, 0, 2), (2, 0, 2)], "1/18"),
        ("t0^0 (t0^1)^2 t0^2 t1^2", &[(0, 0, 1), (1, 0, 2), (2, 0, 1), (2, 1, 1)], "1/18"),
        (
            "t0^0 t1 (t0^2)^2 t1^2 read as t0^0 t0^1 t1^1 (t0^2)^2",
            &[(0, 0, 1), (1, 0, 1), (1, 1, 1), (2, 0, 2)],
            "1/18",
        ),
        ("t0^1 (t0^2)^3 t1^2", &[(1, 0, 1), (2, 0, 3), (2, 1, 1)], "1/27"),
        ("(t0^1)^3 t0^2 t1^2 read as (t0^1)^3 t0^2 t1^1", &[(1, 0, 3), (2, 0, 1), (1, 1, 1)], "1/27"),
    ];
    match twisted_genfun(&e, 1, 1, 0, Truncation { max_points: 5, max_psi: 1 }) {
        Ok(s0) => {
            for (label, spec, want) in g0_items {
                checks.push(series_check(&s0, &format!("genus 0 {label}"), &mono(spec), want));
            }
        }
        Err(err) => checks.push(Check::new("genus 0 series", Outcome::Fail(err.to_string()))),
    }
    // On M_{1,n} with one ch_1 the ψ-powers sum to n - 1.
    let g1_items: &[(&str, MonoSpec, &str)] = &[
        ("t0^0", &[(0, 0, 1)], "1/72"),
        ("t0^1 t1^2", &[(1, 0, 1), (2, 1, 1)], "1/24"),
        ("t0^0 t1^0", &[(0, 0, 1), (0, 1, 1)], "1/72"),
        ("t0^2 t1^1", &[(2, 0, 1), (1, 1, 1)], "1/24"),
        ("(t0^1)^2 t2^1", &[(1, 0, 2), (1, 2, 1)], "5/144"),
        ("t0^1 t0^2 t0^0 read as t0^1 t0^2 t2^0", &[(1, 0, 1), (2, 0, 1), (0, 2, 1)], "5/72"),
        ("t0^0 t1^1 t1^2", &[(0, 0, 1), (1, 1, 1), (2, 1, 1)], "1/12"),
        ("t0^0 t0^1 t2^2", &[(0, 0, 1), (1, 0, 1), (2, 2, 1)], "13/288"),
        ("t0^1 t0^1 t1^2 read as t1^0 t0^1 t1^2", &[(0, 1, 1), (1, 0, 1), (2, 1, 1)], "1/12"),
        ("t0^2 t0^1 t1^1 read as t0^2 t1^0 t1^1", &[(2, 0, 1), (0, 1, 1), (1, 1, 1)], "1/12"),
        ("t0^0 (t0^1)^2 read as t0^0 (t1^0)^2", &[(0, 0, 1), (0, 1, 2)], "1/72"),
        ("(t0^0)^2 t0^2 read as (t0^0)^2 t2^0", &[(0, 0, 2), (0, 2, 1)], "1/144"),
        ("(t0^2)^2 t2^2", &[(2, 0, 2), (2, 2, 1)], "7/192"),
        ("t0^1 (t1^1)^2", &[(1, 0, 1), (1, 1, 2)], "1/18"),
        ("t0^2 (t1^2)^2", &[(2, 0, 1), (2, 1, 2)], "1/18"),
        ("t0^0 t0^2 t1^1 read as t0^0 t0^2 t2^1", &[(0, 0, 1), (2, 0, 1), (1, 2, 1)], "1/24"),
    ];
    match twisted_genfun(&e, 1, 1, 1, Truncation { max_points: 3, max_psi: 2 }) {
        Ok(s1) => {
            let symmetric = s1.terms().all(|(m, c)| s1.coeff(&mirror(m)) == *c);
            checks.push(Check::new(
                "genus 1 series invariant under w <-> w2",
                if symmetric { Outcome::Pass } else { Outcome::Fail("asymmetric".into()) },
            ));
            let listed: BTreeMap<Monomial<TVar>, Rational> =
                g1_items.iter().map(|(_, spec, want)| (mono(spec), q(want))).collect();
            for (label, spec, want) in g1_items {
                let m = mono(spec);
                let got = s1.coeff(&m);
                let want = q(want);
                let label = format!("genus 1 {label}");
                if got == want {
                    checks.push(Check::new(label, Outcome::Pass));
                    continue;
                }
                // A published value is a misprint when its own mirror
                // monomial is published with the value we compute, and the
                // series is provably mirror-symmetric.
                let mirror_listed = listed.get(&mirror(&m));
                let outcome = match mirror_listed {
                    Some(mv) if *mv == got && symmetric => Outcome::Misprint(format!(
                        "published {}, computed {}; its w <-> w2 mirror is published as {}, and for odd k \
                         b(a, k, g) = b(a, k, g^-1) makes the series mirror-symmetric",
                        format_rational(&want),
                        format_rational(&got),
                        format_rational(mv)
                    )),
                    _ => compare(&got, &want),
                };
                checks.push(Check::new(label, outcome));
            }
        }
        Err(err) => checks.push(Check::new("genus 1 series", Outcome::Fail(err.to_string()))),
    }
    notes.push(
        "every series coefficient above is also recomputed from the operator form; a mismatch would be an error".into(),
    );
    Criterion { id: 4, title: "Z3 twisted series with ch_1(F_1)", checks, notes }
}

fn z2_family() -> Criterion {
    let e = engine(2);
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for m in 2..=6u32 {
        let k = 2 * m - 3;
        let formula =
            bernoulli_number(2 * m - 2) / Rational::from_integer(factorial(2 * m - 2)) * int((1i64 << (2 * m - 2)) - 1);
        let n = 2 * m as usize;
        let r = (|| {
            let bare = twisted(&e, 0, &[(1, 0, n)], &[(k, 1)])?;
            let coeff = operator_coefficient(&e, 1, k, 0, &mono(&[(1, 0, n as u32)]))?;
            let via_series = coeff * Rational::from_integer(factorial(n as u32));
            if bare != via_series {
                return Ok(Outcome::Fail(format!(
                    "recursion {} and operator form {} disagree",
                    format_rational(&bare),
                    format_rational(&via_series)
                )));
            }
            if m == 2 {
                let scaled = bare.clone() / Rational::from_integer(factorial(n as u32));
                notes.push(format!(
                    "with the extra 1/(2m)! prefactor the left side at m = 2 would be {}, not {}; the \
                     identity holds for the bare integral",
                    format_rational(&scaled),
                    format_rational(&formula)
                ));
            }
            Ok(compare(&bare, &formula))
        })();
        checks.push(Check::from_result(format!("m = {m}: ∫ ch_{k}(F_1) on (w^{n})"), r));
    }
    Criterion { id: 5, title: "Z2 family B_{2m-2}/(2m-2)! (2^{2m-2} - 1)", checks, notes }
}

fn rank_formula() -> Criterion {
    let mut checks = Vec::new();
    let mut count = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for n_grp in [2u32, 3, 5] {
        let e = engine(n_grp);
        let r = i64::from(n_grp);
        for g in 0..=3u32 {
            for len in 0..=9 {
                for cs in class_multisets(n_grp as usize, len) {
                    if omega_abelian(e.group(), g, &cs).is_some_and(|v| v.is_zero()) {
                        continue;
                    }
                    for alpha in 0..n_grp as usize {
                        let got = match e.rank_r1(alpha, g, &cs) {
                            Ok(v) => v,
                            Err(err) => {
                                failures.push(format!("Z{n_grp} g={g} {cs:?} a={alpha}: {err}"));
                                continue;
                            }
                        };
                        // g - 1 + Σ_i ((alpha * c_i) mod r) / r, and g for the trivial irrep
                        let want = if alpha == 0 {
                            int(i64::from(g))
                        } else {
                            let s: i64 = cs.iter().map(|&c| (alpha as i64 * c as i64) % r).sum();
                            int(i64::from(g) - 1) + rational(s, r).unwrap()
                        };
                        if got != want || !got.is_integer() {
                            failures.push(format!(
                                "Z{n_grp} g={g} {cs:?} a={alpha}: {} vs {}",
                                format_rational(&got),
                                format_rational(&want)
                            ));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        format!("Z2/Z3/Z5 rank tables, g <= 3, n <= 9, {count} nonempty components"),
        if failures.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail(failures.into_iter().take(5).collect::<Vec<_>>().join("; "))
        },
    ));
    // Z2 in the (k trivial, 2m twisted) form: m + g - 1
    let e = engine(2);
    let mut ok = true;
    for g in 0..=3u32 {
        for k in 0..=9usize {
            for m in 0..=(9 - k) / 2 {
                let cs: Vec<usize> = std::iter::repeat_n(0, k).chain(std::iter::repeat_n(1, 2 * m)).collect();
                ok &= e.rank_r1(1, g, &cs).ok() == Some(int(m as i64 + i64::from(g) - 1));
            }
        }
    }
    checks
        .push(Check::new("Z2 rank R1 = m + g - 1", if ok { Outcome::Pass } else { Outcome::Fail("mismatch".into()) }));
    Criterion { id: 6, title: "virtual rank formula", checks, notes: vec![] }
}

fn root_of_unity_identity() -> Criterion {
    let mut bad = Vec::new();
    for m in 2..=12u32 {
        for l in 0..m {
            let want = rational(i64::from(m) - 1, 2).unwrap() - int(i64::from(l));
            match root_of_unity_sum(m, l) {
                Ok(v) if v == want => {}
                Ok(v) => bad.push(format!("m={m} l={l}: {}", format_rational(&v))),
                Err(e) => bad.push(format!("m={m} l={l}: {e}")),
            }
        }
    }
    let outcome = if bad.is_empty() { Outcome::Pass } else { Outcome::Fail(bad.join("; ")) };
    Criterion {
        id: 7,
        title: "Σ_j ζ^{jl}/(1 - ζ^{-j}) = (m-1)/2 - l",
        checks: vec![Check::new("2 <= m <= 12, 0 <= l < m", outcome)],
        notes: vec![],
    }
}

fn bernoulli_half() -> Criterion {
    let half = rational(1, 2).unwrap();
    let checks = (0..=12u32)
        .map(|n| {
            let want = (pow(&int(2), 1 - i64::from(n)) - Rational::one()) * bernoulli_number(n);
            Check::new(format!("n = {n}"), compare(&bernoulli_poly(n, &half), &want))
        })
        .collect();
    Criterion { id: 8, title: "B_n(1/2) = (2^{1-n} - 1) B_n", checks, notes: vec![] }
}

/// Brute-force `Ω` for `S3` by counting homomorphisms from the punctured
/// surface group, classes identified by element order.
fn s3_brute_force(group: &FiniteGroupData, g: u32, classes: &[usize]) -> Rational {
    type Perm = [usize; 3];
    let perms: Vec<Perm> = vec![[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let compose = |a: &Perm, b: &Perm| -> Perm { [a[b[0]], a[b[1]], a[b[2]]] };
    let inverse = |a: &Perm| -> Perm {
        let mut r = [0; 3];
        for i in 0..3 {
            r[a[i]] = i;
        }
        r
    };
    let order = |a: &Perm| -> u32 {
        let mut p = *a;
        let mut k = 1;
        while p != [0, 1, 2] {
            p = compose(&p, a);
            k += 1;
        }
        k
    };
    let members: Vec<Vec<Perm>> = classes
        .iter()
        .map(|&c| perms.iter().copied().filter(|p| order(p) == group.classes()[c].order).collect())
        .collect();
    // products over all choices of the punctures, then of the handles
    let mut products: Vec<Perm> = vec![[0, 1, 2]];
    for m in &members {
        products = products.iter().flat_map(|p| m.iter().map(move |x| compose(p, x))).collect();
    }
    for _ in 0..g {
        let mut next = Vec::with_capacity(products.len() * 36);
        for p in &products {
            for a in &perms {
                for b in &perms {
                    let comm = compose(&compose(a, b), &compose(&inverse(a), &inverse(b)));
                    next.push(compose(p, &comm));
                }
            }
        }
        products = next;
    }
    let count = products.iter().filter(|p| **p == [0, 1, 2]).count();
    rational(count as i64, 6).unwrap()
}

/// The cutting and forgetting recursions for `Ω` on one group, as a single check.
pub fn omega_recursions_check(group: &FiniteGroupData, max_genus: u32, max_points: usize) -> Check {
    let label = format!("{}: tails, loops, trees for g <= {max_genus}, n <= {max_points}", group.name());
    Check::from_result(label, check_recursions(group, max_genus, max_points).map(|_| Outcome::Pass))
}

fn omega_suite() -> Criterion {
    let s3 = bundled_s3();
    let mut checks = vec![
        omega_recursions_check(&cyclic_group(3), 2, 4),
        omega_recursions_check(&cyclic_group(5), 2, 4),
        omega_recursions_check(&s3, 2, 4),
    ];
    let mut bad = Vec::new();
    for n in [2u32, 3, 5] {
        let grp = cyclic_group(n);
        for g in 0..=3 {
            for len in 0..=5 {
                for cs in class_multisets(n as usize, len) {
                    let a = omega_abelian(&grp, g, &cs);
                    let c = omega_characters(&grp, g, &cs).ok();
                    if a != c {
                        bad.push(format!("Z{n} g={g} {cs:?}"));
                    }
                }
            }
        }
    }
    checks.push(Check::new(
        "Z2/Z3/Z5 character formula equals abelian count, g <= 3, n <= 5",
        if bad.is_empty() { Outcome::Pass } else { Outcome::Fail(bad.join("; ")) },
    ));
    let mut bad = Vec::new();
    for g in 0..=2u32 {
        for len in 0..=(4 - g as usize) {
            for cs in class_multisets(s3.num_classes(), len) {
                let got = omega(&s3, g, &cs).ok();
                if got != Some(s3_brute_force(&s3, g, &cs)) {
                    bad.push(format!("g={g} {cs:?}"));
                }
            }
        }
    }
    checks.push(Check::new(
        "S3 character formula equals homomorphism count",
        if bad.is_empty() { Outcome::Pass } else { Outcome::Fail(bad.join("; ")) },
    ));
    Criterion { id: 9, title: "Ω recursions and two evaluation paths", checks, notes: vec![] }
}

/// Every single-ch correlator of dimension `3g - 3 + n <= max_dim` on a
/// nonempty component, recursion against operator form.
pub fn oracle_sweep(e: &Engine, max_dim: i64) -> Result<(usize, Vec<String>)> {
    let group = e.group();
    let nc = group.num_classes();
    let mut count = 0;
    let mut bad = Vec::new();
    for g in 0..=((max_dim + 3) / 3) as u32 {
        for n in 1.. {
            let dim = 3 * i64::from(g) - 3 + n as i64;
            if dim > max_dim {
                break;
            }
            if !is_stable(g, n) {
                continue;
            }
            for k in 1..=dim as u32 {
                for ins in enumerate_insertions(nc, n, dim as u32 - k, dim as u32 - k) {
                    let classes: Vec<usize> = ins.iter().map(|i| i.class).collect();
                    if e.omega(g, &classes)?.is_zero() {
                        continue;
                    }
                    let m = Monomial::from_powers(ins.iter().map(|&i| (TVar::from(i), 1)));
                    let sym: Rational = m.powers().iter().map(|(_, p)| Rational::from_integer(factorial(*p))).product();
                    let oracles = operator_coefficients(e, k, g, &m)?;
                    for (alpha, o) in oracles.into_iter().enumerate() {
                        let tc = TwistedCorrelator::new(g, ins.clone(), vec![ChInsertion::new(k, alpha)]);
                        let direct = e.twisted_correlator(&tc)?;
                        let oracle = o * &sym;
                        if direct != oracle {
                            bad.push(format!(
                                "g={g} {} ch_{k}({alpha}): {} vs {}",
                                tc.canonical_key(group),
                                format_rational(&direct),
                                format_rational(&oracle)
                            ));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok((count, bad))
}

fn oracle_equivalence(max_dim: i64) -> Criterion {
    let mut checks = Vec::new();
    for n in [3u32, 5] {
        let e = engine(n);
        let c = match oracle_sweep(&e, max_dim) {
            Ok((count, bad)) if bad.is_empty() => {
                Check::new(format!("Z{n}: {count} correlators, D <= {max_dim}"), Outcome::Pass)
            }
            Ok((count, bad)) => Check::new(
                format!("Z{n}: {count} correlators, D <= {max_dim}"),
                Outcome::Fail(format!("{} mismatches, first: {}", bad.len(), bad[0])),
            ),
            Err(err) => Check::new(format!("Z{n}"), Outcome::Fail(err.to_string())),
        };
        checks.push(c);
    }
    Criterion { id: 10, title: "recursion equals operator-form extraction", checks, notes: vec![] }
}

fn jfunction_check(order: u32) -> Criterion {
    let checks = [2u32, 3, 5]
        .iter()
        .map(|&n| {
            let e = engine(n);
            let r = jfunction(&e, order).map(|table| {
                let closed = jfunction_closed_form(n as usize, order);
                if table == closed {
                    Outcome::Pass
                } else {
                    Outcome::Fail("tables differ".into())
                }
            });
            Check::from_result(format!("Z{n} to u^{order}"), r)
        })
        .collect();
    Criterion { id: 11, title: "J-function equals z + z Σ f_a (e^{u^a/z} - 1)", checks, notes: vec![] }
}

/// Plants a wrong value in a warm cache and confirms read-verify rejects it.
pub fn corrupted_cache_check() -> Check {
    let r = (|| {
        let e = engine(5);
        twisted(&e, 0, &[(1, 0, 5)], &[(2, 3)])?;
        let mut cache = CacheFile::from_engine(&e);
        let clean = CacheFile::parse(&cache.render())?;
        clean.verify(e.group_arc(), 1)?;
        let key = cache.entries.keys().next().cloned().expect("warm cache has entries");
        let v = cache.entries[&key].clone() + Rational::one();
        cache.entries.insert(key, v);
        let reread = CacheFile::parse(&cache.render())?;
        Ok(match reread.verify(e.group_arc(), 1) {
            Err(_) => Outcome::Pass,
            Ok(()) => Outcome::Fail("corrupted entry was accepted".into()),
        })
    })();
    Check::from_result("corrupted cache entry detected on load", r)
}
