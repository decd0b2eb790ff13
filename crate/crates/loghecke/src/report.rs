//! Machine-readable report documents.

use loghecke_core::bundles::PointKind;
use loghecke_core::enhancement::{EnhBasis, EvResSystem, RoundtripReport, SampleOutcome};
use loghecke_core::fields::LiftReport;
use loghecke_core::spectral::{MarkedFiber, MarkedPoint, ScalarReport};
use loghecke_core::{Matrix, Rational, RationalFunction};
use serde::Serialize;

use crate::instance::{RfJson, Q};

/// Process exit status of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ConditionFails,
    InvalidInput,
    Unsupported,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ConditionFails => 1,
            Status::InvalidInput => 2,
            Status::Unsupported => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub instance_sha256: Option<String>,
    pub seed: u64,
    pub status: Status,
    pub exit_code: i32,
    /// Human-readable certificates, one line each.
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub result: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub command: String,
    pub directory: String,
    pub exit_code: i32,
    pub reports: Vec<Report>,
}

pub fn kind_name(k: PointKind) -> &'static str {
    match k {
        PointKind::Hecke => "hecke",
        PointKind::Puncture => "puncture",
    }
}

pub fn q(r: &Rational) -> Q {
    Q::from(r)
}

pub fn qvec(v: &[Rational]) -> Vec<Q> {
    v.iter().map(q).collect()
}

pub fn qmat(m: &Matrix<Rational>) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| q(&m[(i, j)])).collect()).collect()
}

pub fn rf(f: &RationalFunction) -> RfJson {
    RfJson::from(f)
}

#[derive(Serialize)]
pub struct PointView {
    pub point: Q,
    pub kind: &'static str,
}

#[derive(Serialize)]
pub struct ConstraintView {
    pub point: Q,
    pub kind: &'static str,
    pub slope: Option<Q>,
    pub constraint: Vec<Vec<Q>>,
    pub vanishes: bool,
}

#[derive(Serialize)]
pub struct LiftView {
    pub lift: bool,
    pub integrable: bool,
    pub commutator_zero: bool,
    pub failures: Vec<Q>,
    pub constraints: Vec<ConstraintView>,
}

impl LiftView {
    pub fn new(rep: &LiftReport, constraints: Vec<ConstraintView>) -> Self {
        LiftView {
            lift: rep.lift,
            integrable: rep.integrable,
            commutator_zero: rep.commutator_zero,
            failures: rep.failures.iter().map(|(a, _)| q(a)).collect(),
            constraints,
        }
    }
}

#[derive(Serialize)]
pub struct MarkedPointView {
    pub point: Q,
    pub kind: &'static str,
    pub lambda: Q,
}

impl From<&MarkedPoint> for MarkedPointView {
    fn from(y: &MarkedPoint) -> Self {
        MarkedPointView { point: q(&y.a), kind: kind_name(y.kind), lambda: q(&y.lambda) }
    }
}

#[derive(Serialize)]
pub struct FiberView {
    pub point: Q,
    pub kind: &'static str,
    /// Ascending coefficients of the specialized or residual polynomial.
    pub polynomial: Vec<Q>,
    pub roots: Vec<(Q, usize)>,
    pub reduced: bool,
    pub split: bool,
}

impl From<&MarkedFiber> for FiberView {
    fn from(f: &MarkedFiber) -> Self {
        FiberView {
            point: q(&f.a),
            kind: kind_name(f.kind),
            polynomial: qvec(f.polynomial.coeffs()),
            roots: f.roots.iter().map(|(r, m)| (q(r), *m)).collect(),
            reduced: f.reduced,
            split: f.split,
        }
    }
}

#[derive(Serialize)]
pub struct ScalarPointView {
    #[serde(flatten)]
    pub point: MarkedPointView,
    pub lhs: Q,
    pub rhs: Q,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct ScalarView {
    pub f: RfJson,
    pub g: RfJson,
    pub points: Vec<ScalarPointView>,
    pub pass: bool,
}

impl From<&ScalarReport> for ScalarView {
    fn from(r: &ScalarReport) -> Self {
        ScalarView {
            f: rf(&r.decomposition.f),
            g: rf(&r.decomposition.g),
            points: r
                .points
                .iter()
                .map(|p| ScalarPointView {
                    point: MarkedPointView::from(&p.point),
                    lhs: q(&p.lhs),
                    rhs: q(&p.rhs),
                    pass: p.pass,
                })
                .collect(),
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
pub struct RowView {
    #[serde(flatten)]
    pub point: MarkedPointView,
    pub row: Vec<Q>,
    pub target: Q,
}

#[derive(Serialize)]
pub struct SectionView {
    pub coeffs: Vec<Q>,
    pub f: RfJson,
    pub g: RfJson,
}

impl SectionView {
    pub fn new(coeffs: &[Rational], b: &EnhBasis) -> Self {
        let (f, g) = b.decode(coeffs).expect("coefficient vector of basis length");
        SectionView { coeffs: qvec(coeffs), f: rf(&f), g: rf(&g) }
    }
}

pub fn rows_view(sys: &EvResSystem) -> Vec<RowView> {
    sys.rows
        .iter()
        .enumerate()
        .map(|(i, y)| RowView {
            point: MarkedPointView::from(y),
            row: (0..sys.matrix.cols()).map(|j| q(&sys.matrix[(i, j)])).collect(),
            target: q(&sys.target[i]),
        })
        .collect()
}

#[derive(Serialize)]
pub struct SampleView {
    pub coeffs: Vec<Q>,
    pub in_fiber: bool,
    pub lift: bool,
    pub integrable: bool,
    pub scalar_pass: Option<bool>,
    pub expected_failures: Vec<Q>,
    pub actual_failures: Vec<Q>,
    pub ok: bool,
}

impl From<&SampleOutcome> for SampleView {
    fn from(s: &SampleOutcome) -> Self {
        SampleView {
            coeffs: qvec(&s.coeffs),
            in_fiber: s.in_fiber,
            lift: s.lift,
            integrable: s.integrable,
            scalar_pass: s.scalar_pass,
            expected_failures: qvec(&s.expected_failures),
            actual_failures: qvec(&s.actual_failures),
            ok: s.ok,
        }
    }
}

#[derive(Serialize)]
pub struct RoundtripView {
    pub status: &'static str,
    pub dimension: Option<usize>,
    pub kernel_dim: usize,
    pub predicted_kernel_dim: usize,
    pub in_fiber: Vec<SampleView>,
    pub off_fiber: Vec<SampleView>,
    pub pass: bool,
}

impl From<&RoundtripReport> for RoundtripView {
    fn from(r: &RoundtripReport) -> Self {
        RoundtripView {
            status: if r.empty { "empty" } else { "nonempty" },
            dimension: r.dimension,
            kernel_dim: r.kernel_dim,
            predicted_kernel_dim: r.predicted_kernel_dim,
            in_fiber: r.in_fiber.iter().map(SampleView::from).collect(),
            off_fiber: r.off_fiber.iter().map(SampleView::from).collect(),
            pass: r.pass,
        }
    }
}
