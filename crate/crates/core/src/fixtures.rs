//! Small hand-checkable instances.

use alloc::vec;

use crate::bundles::{MarkedBase, SectionSpace};
use crate::enhancement::companion_field;
use crate::exactalg::{int, Polynomial, RationalFunction};
use crate::fields::MatrixField;
use crate::hecke::{FiberPair, HeckeData};
use crate::spectral::CharData;

/// `S(P)`- or `L(P)`-type twist: degree `deg`, simple poles at every puncture.
pub fn log_twist(base: &MarkedBase, deg: i64) -> SectionSpace {
    SectionSpace::uniform(base, deg, 1)
}

/// One puncture at 0, one Hecke point at 1, `q_1 = (1, -1)`, `ℓ_0 = (1, 1)`
/// (slope 1 at both points), with the given degrees of `S` and `L`.
pub fn hecke_with_degrees(s_deg: i64, l_deg: i64) -> HeckeData {
    HeckeData {
        base: MarkedBase::new(vec![int(0)], vec![int(1)]).expect("distinct points"),
        s_deg,
        l_deg,
        quotients: [(int(1), FiberPair::new(int(1), int(-1)))].into_iter().collect(),
        lines: [(int(0), FiberPair::new(int(1), int(1)))].into_iter().collect(),
    }
}

#[derive(Clone, Debug)]
pub struct StandardFixture {
    pub hecke: HeckeData,
    /// `τ = 3`, `δ = (z² + 2z - 1)/z²`.
    pub char_data: CharData,
    /// Companion field `[[0, -δ], [1, τ]]` on `O ⊕ S(P)^{-1}`.
    pub theta: MatrixField,
}

impl StandardFixture {
    /// `Θ` itself regarded as an `L(P)`-twisted field.
    pub fn theta_prime_equal(&self) -> MatrixField {
        self.theta.with_twist(log_twist(&self.hecke.base, self.hecke.l_deg))
    }
}

/// `deg S = 0`, `deg L = 4` over [`hecke_with_degrees`]. The spectral curve
/// is integral with marked fibers `{1, 2}` over 1 and `{-1, 1}` over 0.
pub fn standard() -> StandardFixture {
    let hecke = hecke_with_degrees(0, 4);
    let tau = RationalFunction::constant(int(3));
    let delta = RationalFunction::new(
        Polynomial::new(vec![int(-1), int(2), int(1)]),
        Polynomial::monomial(int(1), 2),
    )
    .expect("nonzero denominator");
    let char_data = CharData::rank_two(log_twist(&hecke.base, 0), tau, delta).expect("valid coefficients");
    let theta = companion_field(&char_data, &hecke).expect("valid companion");
    StandardFixture { hecke, char_data, theta }
}

/// `τ = 0`, `δ = -z²` with `deg S = 1`: `χ = (t - z)(t + z)`.
pub fn reducible() -> CharData {
    let base = hecke_with_degrees(1, 4).base;
    let delta = RationalFunction::from_poly(Polynomial::monomial(int(-1), 2));
    CharData::rank_two(log_twist(&base, 1), RationalFunction::constant(int(0)), delta).expect("valid coefficients")
}

/// `τ = 0`, `δ = -z` with `deg S = 1`: discriminant `4z`.
pub fn odd_discriminant() -> CharData {
    let base = hecke_with_degrees(1, 4).base;
    let delta = RationalFunction::from_poly(Polynomial::monomial(int(-1), 1));
    CharData::rank_two(log_twist(&base, 1), RationalFunction::constant(int(0)), delta).expect("valid coefficients")
}
