//! Exact Hurwitz–Hodge integrals on moduli spaces of twisted stable maps to
//! the classifying stack `BG` of a finite group.
//!
//! Integrals of ψ̄-classes and Chern characters of the bundles
//! `R¹π_* f^* E_α` are reduced, through a Bernoulli-weighted operator
//! recursion, to Witten–Kontsevich intersection numbers times covering
//! degrees of the forgetful map to `M̄_{g,n}`.
//!
//! ```
//! use hhodge::{cyclic_group, Engine, Insertion, ChInsertion, TwistedCorrelator};
//! use std::sync::Arc;
//!
//! let engine = Engine::new(Arc::new(cyclic_group(5)));
//! let w = |c| Insertion::new(c, 0);
//! let tc = TwistedCorrelator::new(0, vec![w(1), w(1), w(1), w(2)], vec![ChInsertion::new(1, 3)]);
//! assert_eq!(hhodge::format_rational(&engine.twisted_correlator(&tc).unwrap()), "1/25");
//! ```

pub mod arith;
pub mod cache;
pub mod classes;
pub mod engine;
pub mod error;
pub mod group;
pub mod omega;
pub mod poly;
pub mod scalar;
pub mod selftest;
pub mod series;
pub mod wk;

/// Arbitrary-precision fraction in lowest terms.
pub type Rational = num_rational::BigRational;

pub use arith::{format_rational, parse_rational, rational, Cyclotomic};
pub use classes::{evaluate_class, ClassExpr};
pub use engine::{ChInsertion, Engine, Insertion, TwistedCorrelator};
pub use error::{Error, Result};
pub use group::{cyclic_group, load_group, FiniteGroupData, HVector};
pub use scalar::{Matrix, Scalar};

/// Rational-valued matrix, e.g. the metric of the class basis.
pub type RationalMatrix = Matrix<Rational>;
/// Sparse polynomial with rational coefficients.
pub type RationalPoly<V> = poly::Poly<V, Rational>;
/// Sparse polynomial over a cyclotomic field.
pub type CyclotomicPoly<V> = poly::Poly<V, Cyclotomic>;
/// Generating function in the class-basis variables `t_a^[γ]`.
pub type SeriesPoly = poly::Poly<series::TVar, Rational>;
