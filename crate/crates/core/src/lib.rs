//! Exact computations with logarithmic Hecke presentations of rank-two
//! twisting bundles on the punctured rational curve.
//!
//! Everything here works over the rationals in the single affine chart of
//! the projective line, with the point at infinity handled through degree
//! allowances. The crate is `no_std` and only needs `alloc`.
//!
//! Layout, bottom-up:
//!
//! - [`exactalg`]: rationals, polynomials, rational functions, root finding,
//!   exact linear solving.
//! - [`bundles`]: marked base, section spaces of line bundles, the `beta`
//!   evaluation/residue maps.
//! - [`hecke`]: Hecke data, fiber covectors and slope maps.
//! - [`fields`]: matrix-valued twisted fields, local constraints, lift and
//!   integrability checks.
//! - [`spectral`]: characteristic data, integrality, the marked spectral
//!   scheme and the scalar spectral condition.
//! - [`enhancement`]: the evaluation/residue system, the affine enhancement
//!   scheme and the round trip between sections and lifted fields.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bundles;
pub mod enhancement;
mod error;
pub mod exactalg;
pub mod fields;
pub mod fixtures;
pub mod hecke;
pub mod sample;
pub mod spectral;

pub use error::{Error, Result};
pub use exactalg::{int, rat, Matrix, Polynomial, Rational, RationalFunction};
