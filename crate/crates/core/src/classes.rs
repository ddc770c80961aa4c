//! Chern, λ and Euler classes of `E_α^∨ = R¹π_*f*E_α`, rewritten as
//! polynomials in `ch_k(F_α)` and evaluated through the engine.
//!
//! Grammar: `e(a,b,..)`, `c<j>(a)`, `lam<j>(a)`, `ch<k>(a)`, rational
//! scalars, `*` or juxtaposition, `^n`, `+`, `-`, parentheses.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{factorial, int, parse_rational};
use crate::engine::{ChInsertion, Engine, Insertion, TwistedCorrelator};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::Rational;

/// Generators of the class algebra before normalization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `ch_k(F_α)`
    Ch(u32, usize),
    /// `c_j(E_α^∨)`
    Chern(u32, usize),
    /// `λ_{j,α}`
    Lambda(u32, usize),
    /// Euler class of `⊕ E_{α_i}^∨`.
    Euler(Vec<usize>),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Ch(k, a) => write!(f, "ch{k}({a})"),
            Generator::Chern(j, a) => write!(f, "c{j}({a})"),
            Generator::Lambda(j, a) => write!(f, "lam{j}({a})"),
            Generator::Euler(v) => {
                let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                write!(f, "e({})", s.join(","))
            }
        }
    }
}

impl fmt::Display for ChInsertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ch{}({})", self.k, self.alpha)
    }
}

pub type ClassExpr = Poly<Generator, Rational>;

/// Polynomial in `ch_k(F_α)`; the constant term is the scalar part.
pub type ChPoly = Poly<ChInsertion, Rational>;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Query(format!("class expression, column {}: {}", self.pos + 1, msg.into()))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<ClassExpr> {
        let mut acc = ClassExpr::zero();
        let mut sign = if self.eat(b'-') {
            -Rational::one()
        } else {
            self.eat(b'+');
            Rational::one()
        };
        loop {
            acc = acc + self.term()?.scale(&sign);
            if self.eat(b'+') {
                sign = Rational::one();
            } else if self.eat(b'-') {
                sign = -Rational::one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ClassExpr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
                continue;
            }
            match self.peek() {
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => acc = acc * self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ClassExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.number()?;
            let mut out = ClassExpr::constant(Rational::one());
            for _ in 0..e {
                out = out * base.clone();
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ClassExpr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let q = parse_rational(text).map_err(|_| self.err(format!("bad scalar `{text}`")))?;
                Ok(ClassExpr::constant(q))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string();
                let gen = match word.as_str() {
                    "e" => {
                        let args = self.args()?;
                        if args.is_empty() {
                            return Err(self.err("e() needs at least one irrep"));
                        }
                        Generator::Euler(args)
                    }
                    "c" | "lam" | "ch" => {
                        let j = self.number()?;
                        let args = self.args()?;
                        let [a] = args[..] else {
                            return Err(self.err(format!("{word}{j}(..) takes one irrep")));
                        };
                        match word.as_str() {
                            "c" => Generator::Chern(j, a),
                            "lam" => Generator::Lambda(j, a),
                            _ => Generator::Ch(j, a),
                        }
                    }
                    _ => return Err(Error::UnknownGenerator(word)),
                };
                Ok(ClassExpr::var(gen))
            }
            Some(c) => Err(self.err(format!("unexpected `{}`", c as char))),
        }
    }

    fn args(&mut self) -> Result<Vec<usize>> {
        if !self.eat(b'(') {
            return Err(self.err("expected `(`"));
        }
        let mut out = Vec::new();
        if self.eat(b')') {
            return Ok(out);
        }
        loop {
            out.push(self.number()? as usize);
            if self.eat(b')') {
                return Ok(out);
            }
            if !self.eat(b',') {
                return Err(self.err("expected `,` or `)`"));
            }
        }
    }
}

pub fn parse_class_expr(s: &str) -> Result<ClassExpr> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Chern classes `c_0..=c_upto` from Chern characters by Newton's identities.
///
/// `ch[i]` is `ch_i` for `i >= 1`; `ch[0]` is ignored.
pub fn chern_from_ch<V: Ord + Clone>(ch: &[Poly<V, Rational>], upto: usize) -> Vec<Poly<V, Rational>> {
    let p = |i: usize| -> Poly<V, Rational> {
        ch.get(i).map(|x| x.scale(&Rational::from_integer(factorial(i as u32)))).unwrap_or_default()
    };
    let mut c = vec![Poly::constant(Rational::one())];
    for j in 1..=upto {
        let mut s = Poly::zero();
        for i in 1..=j {
            let term = p(i) * c[j - i].clone();
            s = if i % 2 == 1 { s + term } else { s - term };
        }
        c.push(s.scale(&Rational::new(1.into(), (j as i64).into())));
    }
    c
}

/// Inverse of [`chern_from_ch`]: `ch_1..=ch_upto` from `c`.
pub fn ch_from_chern<V: Ord + Clone>(c: &[Poly<V, Rational>], upto: usize) -> Vec<Poly<V, Rational>> {
    let cj = |j: usize| c.get(j).cloned().unwrap_or_default();
    let mut p: Vec<Poly<V, Rational>> = vec![Poly::zero()];
    for j in 1..=upto {
        // (-1)^{j-1} p_j = j c_j - Σ_{i<j} (-1)^{i-1} p_i c_{j-i}
        let mut s = cj(j).scale(&int(j as i64));
        for i in 1..j {
            let term = p[i].clone() * cj(j - i);
            s = if i % 2 == 1 { s - term } else { s + term };
        }
        p.push(if j % 2 == 1 { s } else { -s });
    }
    p.into_iter().enumerate().map(|(i, x)| x.scale(&Rational::new(1.into(), factorial(i as u32)))).collect()
}

/// Rewrites `expr` as a `ch_k(F)`-polynomial on the component `(g, classes)`.
///
/// Monomials of degree above `max_degree` are dropped.
pub fn normalize(engine: &Engine, expr: &ClassExpr, g: u32, classes: &[usize], max_degree: u32) -> Result<ChPoly> {
    let keep = |m: &Monomial<ChInsertion>| m.powers().iter().map(|(c, e)| c.k * e).sum::<u32>() <= max_degree;
    let mut out = ChPoly::zero();
    for (mono, coeff) in expr.terms() {
        let mut acc = ChPoly::constant(coeff.clone());
        for (gen, e) in mono.powers() {
            let x = generator_to_ch(engine, gen, g, classes, max_degree)?;
            for _ in 0..*e {
                acc = acc.mul_filtered(&x, keep);
            }
        }
        out = out + acc;
    }
    Ok(out)
}

fn rank_of_r1(engine: &Engine, alpha: usize, g: u32, classes: &[usize]) -> Result<i64> {
    let r = engine.rank_r1(alpha, g, classes)?;
    if !r.is_integer() {
        return Err(Error::Inconsistency(format!("rank of E_{alpha} is {r} on this component")));
    }
    Ok(r.to_integer().try_into().expect("small rank"))
}

/// `c_0..=c_upto` of `E_α^∨` in terms of `ch_k(F_α)`, truncated above the rank.
fn chern_classes(engine: &Engine, alpha: usize, g: u32, classes: &[usize], upto: u32) -> Result<Vec<ChPoly>> {
    let rank = rank_of_r1(engine, alpha, g, classes)?;
    // ch_k(R¹) = -ch_k(F) for k >= 1
    let ch: Vec<ChPoly> =
        (0..=upto).map(|k| if k == 0 { ChPoly::zero() } else { -ChPoly::var(ChInsertion::new(k, alpha)) }).collect();
    let mut c = chern_from_ch(&ch, upto as usize);
    for (j, cj) in c.iter_mut().enumerate() {
        if j as i64 > rank {
            *cj = ChPoly::zero();
        }
    }
    Ok(c)
}

fn generator_to_ch(engine: &Engine, gen: &Generator, g: u32, classes: &[usize], max_degree: u32) -> Result<ChPoly> {
    let n_irreps = engine.group().irreps().len();
    let check = |a: usize| {
        if a < n_irreps {
            Ok(())
        } else {
            Err(Error::Query(format!("irrep index {a} out of range")))
        }
    };
    match gen {
        Generator::Ch(0, a) => {
            check(*a)?;
            Ok(ChPoly::constant(engine.rank_virtual(*a, g, classes)?))
        }
        Generator::Ch(k, a) => {
            check(*a)?;
            Ok(ChPoly::var(ChInsertion::new(*k, *a)))
        }
        Generator::Chern(j, a) | Generator::Lambda(j, a) => {
            check(*a)?;
            if *j > max_degree {
                return Ok(ChPoly::zero());
            }
            let c = chern_classes(engine, *a, g, classes, *j)?;
            let cj = c[*j as usize].clone();
            Ok(match gen {
                Generator::Lambda(..) if j % 2 == 1 => -cj,
                _ => cj,
            })
        }
        Generator::Euler(list) => {
            let mut acc = ChPoly::constant(Rational::one());
            for &a in list {
                check(a)?;
                let rank = rank_of_r1(engine, a, g, classes)?;
                if rank < 0 {
                    return Err(Error::Inconsistency(format!("E_{a} has negative rank {rank}")));
                }
                if rank as u32 > max_degree {
                    return Ok(ChPoly::zero());
                }
                let top = chern_classes(engine, a, g, classes, rank as u32)?.pop().unwrap();
                acc = acc.mul_filtered(&top, |m| m.powers().iter().map(|(c, e)| c.k * e).sum::<u32>() <= max_degree);
            }
            Ok(acc)
        }
    }
}

/// `∫ expr · Π ψ̄_i^{a_i}` over the component of `insertions`.
pub fn evaluate_class(engine: &Engine, g: u32, insertions: &[Insertion], expr: &ClassExpr) -> Result<Rational> {
    let classes: Vec<usize> = insertions.iter().map(|i| i.class).collect();
    if engine.omega(g, &classes)?.is_zero() {
        return Ok(Rational::zero());
    }
    let dim = 3 * i64::from(g) - 3 + insertions.len() as i64;
    let psi: i64 = insertions.iter().map(|i| i64::from(i.psi)).sum();
    let room = dim - psi;
    if room < 0 {
        return Ok(Rational::zero());
    }
    let normal = normalize(engine, expr, g, &classes, room as u32)?;
    let mut total = Rational::zero();
    for (mono, coeff) in normal.terms() {
        let degree: u32 = mono.powers().iter().map(|(c, e)| c.k * e).sum();
        if i64::from(degree) != room {
            continue;
        }
        let chs: Vec<ChInsertion> =
            mono.powers().iter().flat_map(|(c, e)| std::iter::repeat_n(*c, *e as usize)).collect();
        let tc = TwistedCorrelator::new(g, insertions.to_vec(), chs);
        total += coeff * engine.twisted_correlator(&tc)?;
    }
    Ok(total)
}

/// Sum of the degrees of a normalized monomial.
pub fn ch_degree(m: &Monomial<ChInsertion>) -> u32 {
    m.powers().iter().map(|(c, e)| c.k * e).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::group::cyclic_group;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn q(p: i64, r: i64) -> Rational {
        rational(p, r).unwrap()
    }

    fn z5() -> Engine {
        Engine::new(Arc::new(cyclic_group(5)))
    }

    fn ins(spec: &[(usize, u32, usize)]) -> Vec<Insertion> {
        spec.iter().flat_map(|&(c, a, m)| std::iter::repeat_n(Insertion::new(c, a), m)).collect()
    }

    #[test]
    fn parses_grammar() {
        let e = parse_class_expr("1/2 ch1(3)^2 + ch2(3) - 3*c1(1) e(1,1,3) lam2(0)").unwrap();
        assert_eq!(e.len(), 3);
        assert!(matches!(parse_class_expr("foo(1)"), Err(Error::UnknownGenerator(_))));
        assert!(parse_class_expr("c1(1").is_err());
        assert!(parse_class_expr("c1(1,2)").is_err());
        assert!(parse_class_expr("").is_err());
        assert_eq!(parse_class_expr("(ch1(1)+ch1(2))^2").unwrap().len(), 3);
    }

    #[test]
    fn c2_on_rank_two_component() {
        let e = z5();
        let expr = parse_class_expr("c2(3)").unwrap();
        let n = normalize(&e, &expr, 0, &[1; 5], 2).unwrap();
        let expected = parse_class_expr("1/2 ch1(3)^2 + ch2(3)").unwrap();
        let expected = normalize(&e, &expected, 0, &[1; 5], 2).unwrap();
        assert_eq!(n, expected);
    }

    #[test]
    fn zero_ch_gives_zero_chern() {
        let ch = vec![Poly::<u8, Rational>::zero(); 5];
        let c = chern_from_ch(&ch, 4);
        assert_eq!(c[0], Poly::constant(Rational::one()));
        assert!(c[1..].iter().all(Poly::is_zero));
    }

    /// Chern roots x_0..x_{r-1}: c_j = e_j(x), ch_j = Σ x^j / j!.
    #[test]
    fn newton_matches_chern_roots() {
        for r in 1..=4u8 {
            let xs: Vec<Poly<u8, Rational>> = (0..r).map(Poly::var).collect();
            let ch: Vec<_> = (0..=5u32)
                .map(|j| {
                    let s = xs.iter().fold(Poly::zero(), |acc, x| {
                        let mut p = Poly::constant(Rational::one());
                        for _ in 0..j {
                            p = p * x.clone();
                        }
                        acc + p
                    });
                    s.scale(&Rational::new(1.into(), factorial(j)))
                })
                .collect();
            let c = chern_from_ch(&ch, 5);
            // elementary symmetric polynomials by expanding Π (1 + x_i)
            let mut elem = vec![Poly::constant(Rational::one())];
            for x in &xs {
                let mut next = vec![Poly::zero(); elem.len() + 1];
                for (j, e) in elem.iter().enumerate() {
                    next[j] = next[j].clone() + e.clone();
                    next[j + 1] = next[j + 1].clone() + e.clone() * x.clone();
                }
                elem = next;
            }
            for j in 0..=5 {
                let expected = elem.get(j).cloned().unwrap_or_default();
                assert_eq!(c[j], expected, "rank {r}, c_{j}");
            }
            assert_eq!(ch_from_chern(&c, 5)[1..], ch[1..]);
        }
    }

    proptest! {
        #[test]
        fn newton_round_trip(cs in proptest::collection::vec((-20i64..20, 1i64..9), 4)) {
            let mut c: Vec<Poly<u8, Rational>> = vec![Poly::constant(Rational::one())];
            c.extend(cs.iter().map(|&(p, d)| Poly::constant(q(p, d))));
            let ch = ch_from_chern(&c, 4);
            prop_assert_eq!(chern_from_ch(&ch, 4), c);
        }
    }

    #[test]
    fn headline_values() {
        let e = z5();
        let v = evaluate_class(&e, 0, &ins(&[(1, 0, 1), (2, 0, 2)]), &parse_class_expr("e(1,1,3)").unwrap());
        assert_eq!(v.unwrap(), q(1, 5));
        let v = evaluate_class(&e, 0, &ins(&[(1, 0, 3), (2, 0, 1)]), &parse_class_expr("c1(3)").unwrap());
        assert_eq!(v.unwrap(), q(-1, 25));
        let v = evaluate_class(&e, 0, &ins(&[(1, 0, 5)]), &parse_class_expr("c2(3)").unwrap());
        assert_eq!(v.unwrap(), q(1, 25));
    }

    #[test]
    fn lambda_is_signed_chern() {
        let e = z5();
        let i = ins(&[(1, 0, 3), (2, 0, 1)]);
        let lam = evaluate_class(&e, 0, &i, &parse_class_expr("lam1(3)").unwrap()).unwrap();
        let c = evaluate_class(&e, 0, &i, &parse_class_expr("c1(3)").unwrap()).unwrap();
        assert_eq!(lam, -c);
    }

    #[test]
    fn euler_class_is_multiplicative() {
        let e = z5();
        let classes = [1usize; 5];
        let whole = normalize(&e, &parse_class_expr("e(1,3)").unwrap(), 0, &classes, 2).unwrap();
        let prod = normalize(&e, &parse_class_expr("e(1) e(3)").unwrap(), 0, &classes, 2).unwrap();
        assert_eq!(whole, prod);
    }

    #[test]
    fn euler_degree_equals_total_rank() {
        let e = z5();
        let classes = [1usize; 5];
        // ranks: E_1 -> 0, E_3 -> 2
        let n = normalize(&e, &parse_class_expr("e(1,3)").unwrap(), 0, &classes, 10).unwrap();
        assert!(n.terms().all(|(m, _)| ch_degree(m) == 2));
        // a component of the wrong dimension integrates to zero
        let v = evaluate_class(&e, 0, &ins(&[(1, 0, 3), (2, 0, 1)]), &parse_class_expr("e(3,3)").unwrap()).unwrap();
        assert_eq!(v, Rational::zero());
    }

    #[test]
    fn ch_additivity() {
        let e = z5();
        let a = normalize(&e, &parse_class_expr("(ch1(1) + ch1(3))^2").unwrap(), 0, &[1; 5], 2).unwrap();
        let b =
            normalize(&e, &parse_class_expr("ch1(1)^2 + 2 ch1(1) ch1(3) + ch1(3)^2").unwrap(), 0, &[1; 5], 2).unwrap();
        assert_eq!(a, b);
    }
}
