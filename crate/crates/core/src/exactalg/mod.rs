//! Exact arithmetic over the rationals.
//!
//! No floating point anywhere: every vanishing test downstream is an exact
//! algebraic condition.

mod linsolve;
mod matrix;
mod poly;
mod ratfun;
mod roots;

pub use linsolve::{linsolve, LinearSolution};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use ratfun::RationalFunction;
pub use roots::{is_square_geom, rational_roots, square_free_decomposition, RootSet};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
