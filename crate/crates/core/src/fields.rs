//! Matrix-valued logarithmic twisted fields on split bundles, the local
//! constraints at marked points and the lift/integrability decision.
//!
//! A field `Θ` on `E = ⊕ O_i` twisted by `M` has entry `(i, j)` in
//! `H⁰(O_i ⊗ O_j^{-1} ⊗ M)`. At a marked point the *framed symbol* reads
//! off, per entry, the leading coefficient that survives the frame: the
//! coefficient of `(z - a)^e` with `e = ord_j - ord_i - m_a`. At Hecke points
//! this is plain evaluation, at punctures it is the residue in the frames
//! `(z - p)^{-ord}` of the summands.
//!
//! The lift of a pair `(Θ, Θ')` is not built as a separate section: it is
//! unique when it exists, so the verified pair stands for it.

use alloc::format;
use alloc::vec::Vec;


use crate::bundles::{MarkedBase, PointKind, SectionSpace, SectionViolation};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Polynomial, Rational, RationalFunction};
use crate::hecke::HeckeData;

/// Split bundle `⊕ O_i`, each summand given by its section allowances.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartBundle {
    summands: Vec<SectionSpace>,
}

impl ChartBundle {
    pub fn new(summands: Vec<SectionSpace>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::InvalidField("bundle has no summands".into()));
        }
        Ok(Self { summands })
    }

    /// `O ⊕ O` with zero allowances at the given punctures.
    pub fn trivial(base: &MarkedBase, rank: usize) -> Self {
        Self { summands: (0..rank.max(1)).map(|_| SectionSpace::uniform(base, 0, 0)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn summands(&self) -> &[SectionSpace] {
        &self.summands
    }

    /// Allowance of entry `(i, j)` of a field twisted by `twist`.
    pub fn entry_space(&self, i: usize, j: usize, twist: &SectionSpace) -> SectionSpace {
        self.summands[i].tensor(&self.summands[j].dual()).tensor(twist)
    }

    /// Every summand's degree allowance shifted by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self { summands: self.summands.iter().map(|s| s.shifted(k)).collect() }
    }
}

/// A section of `End(E) ⊗ M` in the chart frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixField {
    bundle: ChartBundle,
    twist: SectionSpace,
    entries: Matrix<RationalFunction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryViolation {
    pub row: usize,
    pub col: usize,
    pub violations: Vec<SectionViolation>,
}

impl MatrixField {
    /// Checks only the shape; allowances are checked by [`MatrixField::violations`].
    pub fn new(bundle: ChartBundle, twist: SectionSpace, entries: Matrix<RationalFunction>) -> Result<Self> {
        let r = bundle.rank();
        if entries.rows() != r || entries.cols() != r {
            return Err(Error::FieldMismatch(format!(
                "{}x{} entries on a rank {r} bundle",
                entries.rows(),
                entries.cols()
            )));
        }
        Ok(Self { bundle, twist, entries })
    }

    pub fn zero(bundle: ChartBundle, twist: SectionSpace) -> Self {
        let r = bundle.rank();
        Self { bundle, twist, entries: Matrix::zeros(r, r) }
    }

    pub fn bundle(&self) -> &ChartBundle {
        &self.bundle
    }

    pub fn twist(&self) -> &SectionSpace {
        &self.twist
    }

    pub fn entries(&self) -> &Matrix<RationalFunction> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[(i, j)]
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    pub fn entry_space(&self, i: usize, j: usize) -> SectionSpace {
        self.bundle.entry_space(i, j, &self.twist)
    }

    pub fn violations(&self) -> Vec<EntryViolation> {
        let mut out = Vec::new();
        for ((row, col), f) in self.entries.indexed() {
            let violations = self.entry_space(row, col).violations(f);
            if !violations.is_empty() {
                out.push(EntryViolation { row, col, violations });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn with_twist(&self, twist: SectionSpace) -> Self {
        Self { twist, ..self.clone() }
    }

    /// The same entries on the bundle with every degree shifted by `k`.
    pub fn with_bundle_shift(&self, k: i64) -> Self {
        Self { bundle: self.bundle.shifted(k), ..self.clone() }
    }

    pub fn map_entries(&self, f: impl FnMut(&RationalFunction) -> RationalFunction) -> Self {
        Self { entries: self.entries.map(f), ..self.clone() }
    }

    /// Replaces one entry.
    pub fn with_entry(&self, i: usize, j: usize, value: RationalFunction) -> Self {
        let mut out = self.clone();
        out.entries[(i, j)] = value;
        out
    }

    /// Laurent exponent read by the framed symbol at `a` for entry `(i, j)`.
    pub fn symbol_exponent(&self, i: usize, j: usize, a: &Rational, kind: PointKind) -> i64 {
        match kind {
            PointKind::Hecke => 0,
            PointKind::Puncture => {
                let s = self.bundle.summands();
                s[j].pole_order(a) - s[i].pole_order(a) - self.twist.pole_order(a)
            }
        }
    }

    /// Leading coefficients of the entries at a marked point, in the chart frames.
    pub fn framed_symbol(&self, a: &Rational, base: &MarkedBase) -> Result<Matrix<Rational>> {
        let kind = base.kind(a).ok_or_else(|| Error::PointNotMarked(a.clone()))?;
        Ok(Matrix::from_fn(self.rank(), self.rank(), |i, j| {
            self.entries[(i, j)].laurent_coeff(a, self.symbol_exponent(i, j, a, kind))
        }))
    }
}

fn same_bundle(theta: &MatrixField, theta_prime: &MatrixField) -> Result<()> {
    if theta.bundle != theta_prime.bundle {
        return Err(Error::FieldMismatch("fields live on different bundles".into()));
    }
    Ok(())
}

/// Twist compatibility for the pair `(Θ, Θ')`: `S(P)` and `L(P)` twists with
/// simple poles allowed at every puncture, on one bundle.
fn check_pair(h: &HeckeData, theta: &MatrixField, theta_prime: &MatrixField) -> Result<()> {
    same_bundle(theta, theta_prime)?;
    let log_twist = |f: &MatrixField, deg: i64, name: &str| {
        let t = f.twist();
        if t.deg_inf != deg {
            return Err(Error::FieldMismatch(format!(
                "{name} has degree twist {}, expected {deg}",
                t.deg_inf
            )));
        }
        if !t.is_keyed_by(&h.base) || t.pole_orders.values().any(|&o| o != 1) {
            return Err(Error::FieldMismatch(format!("{name} must allow simple poles exactly at P")));
        }
        Ok(())
    };
    log_twist(theta, h.s_deg, "theta")?;
    log_twist(theta_prime, h.l_deg, "theta_prime")
}

/// `ξ_{1,a} · symbol(Θ) + ξ_{2,a} · symbol(Θ')`, the local constraint at `a`.
pub fn constraint(
    h: &HeckeData,
    theta: &MatrixField,
    theta_prime: &MatrixField,
    a: &Rational,
) -> Result<Matrix<Rational>> {
    check_pair(h, theta, theta_prime)?;
    let xi = h.xi_covector(a)?;
    let s1 = theta.framed_symbol(a, &h.base)?;
    let s2 = theta_prime.framed_symbol(a, &h.base)?;
    Ok(Matrix::from_fn(s1.rows(), s1.cols(), |i, j| &xi.s * &s1[(i, j)] + &xi.l * &s2[(i, j)]))
}

/// `symbol(Θ') - ρ^a · symbol(Θ)`; vanishes exactly when [`constraint`] does.
pub fn graph_constraint(
    h: &HeckeData,
    theta: &MatrixField,
    theta_prime: &MatrixField,
    a: &Rational,
) -> Result<Matrix<Rational>> {
    check_pair(h, theta, theta_prime)?;
    let rho = h.require_slope(a)?;
    let s1 = theta.framed_symbol(a, &h.base)?;
    let s2 = theta_prime.framed_symbol(a, &h.base)?;
    Ok(Matrix::from_fn(s1.rows(), s1.cols(), |i, j| &s2[(i, j)] - &rho * &s1[(i, j)]))
}

/// `ΘΘ' - Θ'Θ` over the function field.
pub fn commutator(theta: &MatrixField, theta_prime: &MatrixField) -> Result<Matrix<RationalFunction>> {
    same_bundle(theta, theta_prime)?;
    let (a, da) = cleared(theta.entries());
    let (b, db) = cleared(theta_prime.entries());
    let den = &da * &db;
    let r = theta.rank();
    Ok(Matrix::from_fn(r, r, |i, j| {
        let num = (0..r).fold(Polynomial::zero(), |acc, k| {
            &(&acc + &(&a[(i, k)] * &b[(k, j)])) - &(&b[(i, k)] * &a[(k, j)])
        });
        RationalFunction::new(num, den.clone()).expect("nonzero denominator")
    }))
}

/// Numerators over a common denominator, so products stay polynomial.
fn cleared(m: &Matrix<RationalFunction>) -> (Matrix<Polynomial>, Polynomial) {
    let den = m.iter().fold(Polynomial::one(), |acc, f| {
        let g = Polynomial::gcd(&acc, f.den());
        &acc * &f.den().exact_div(&g)
    });
    let nums = m.map(|f| f.num() * &den.exact_div(f.den()));
    (nums, den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    /// All local constraints vanish.
    pub lift: bool,
    /// The lift exists and `Θ`, `Θ'` commute.
    pub integrable: bool,
    /// Marked points with a nonvanishing constraint, with the certificate.
    pub failures: Vec<(Rational, Matrix<Rational>)>,
    pub commutator_zero: bool,
}

pub fn lift_check(h: &HeckeData, theta: &MatrixField, theta_prime: &MatrixField) -> Result<LiftReport> {
    check_pair(h, theta, theta_prime)?;
    let mut failures = Vec::new();
    for (a, _) in h.base.marked_points() {
        let c = constraint(h, theta, theta_prime, a)?;
        if !c.is_zero() {
            failures.push((a.clone(), c));
        }
    }
    let commutator_zero = commutator(theta, theta_prime)?.is_zero();
    let lift = failures.is_empty();
    Ok(LiftReport { lift, integrable: lift && commutator_zero, failures, commutator_zero })
}
