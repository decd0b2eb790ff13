use alloc::string::String;

use crate::exactalg::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rational function has a pole at {0}")]
    PoleAtPoint(Rational),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("section space has no nonzero sections")]
    EmptySpace,
    #[error("{0} is neither a puncture nor a Hecke point")]
    PointNotMarked(Rational),
    #[error("pole of order {order} at {at} exceeds the allowed order {allowed}")]
    ExcessPole { at: Rational, order: i64, allowed: i64 },
    #[error("invalid marked base: {0}")]
    InvalidBase(String),
    #[error("invalid Hecke data: {0}")]
    InvalidHecke(String),
    #[error("incompatible fields: {0}")]
    FieldMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid characteristic data: {0}")]
    InvalidCharData(String),
    #[error("slope map undefined at {0}")]
    SlopeUndefined(Rational),
    #[error("operation requires rank 2, got rank {0}")]
    UnsupportedRank(usize),
    #[error("marked fiber over {0} is not reduced")]
    NonReduced(Rational),
    #[error("marked fiber over {0} has eigenvalues outside the rationals")]
    NonSplit(Rational),
    #[error("fields do not commute")]
    NotCommuting,
    #[error("field is scalar over the function field; decomposition is not unique")]
    ScalarTheta,
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("framed symbols do not share an eigenvector over {0}")]
    NotEigenvector(Rational),
    #[error("spectral curve is not integral")]
    IntegralityFailure,
}

impl Error {
    /// Instances outside the supported scope (as opposed to malformed input).
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedRank(_)
                | Error::NonReduced(_)
                | Error::NonSplit(_)
                | Error::SlopeUndefined(_)
                | Error::ScalarTheta
        )
    }
}
