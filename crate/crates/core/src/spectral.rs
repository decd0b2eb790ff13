//! Characteristic data of a twisted field, integrality of the spectral curve,
//! the marked spectral scheme over `D ∪ P` and the scalar spectral condition.
//!
//! The spectral curve is never modelled as a plane curve. Its fibers over
//! marked points come from specialized coefficients `c_k(x)` over Hecke
//! points and residual coefficients (the `(z - p)^{-k}` coefficient of
//! `c_k`) over punctures.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::bundles::{MarkedBase, PointKind, SectionSpace};
use crate::error::{Error, Result};
use crate::exactalg::{is_square_geom, linsolve, rational_roots, Matrix, Polynomial, Rational, RationalFunction};
use crate::fields::{commutator, MatrixField};
use crate::hecke::HeckeData;

/// Coefficients of `χ(t) = t^r + Σ (-1)^k c_k t^{r-k}`; for rank two
/// `c_1` is the trace and `c_2` the determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharData {
    /// Twist of the field (`S(P)` in practice); `c_k` lives in its `k`-th power.
    twist: SectionSpace,
    coeffs: Vec<RationalFunction>,
}

impl CharData {
    pub fn new(twist: SectionSpace, coeffs: Vec<RationalFunction>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCharData("rank must be positive".into()));
        }
        for (k, c) in coeffs.iter().enumerate() {
            let v = twist.power(k as i64 + 1).violations(c);
            if !v.is_empty() {
                return Err(Error::InvalidCharData(format!("c_{} = {c}: {}", k + 1, v[0])));
            }
        }
        Ok(Self { twist, coeffs })
    }

    pub fn rank_two(twist: SectionSpace, tau: RationalFunction, delta: RationalFunction) -> Result<Self> {
        Self::new(twist, vec![tau, delta])
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn twist(&self) -> &SectionSpace {
        &self.twist
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    fn require_rank_two(&self) -> Result<()> {
        if self.rank() != 2 {
            return Err(Error::UnsupportedRank(self.rank()));
        }
        Ok(())
    }

    pub fn tau(&self) -> Result<&RationalFunction> {
        self.require_rank_two()?;
        Ok(&self.coeffs[0])
    }

    pub fn delta(&self) -> Result<&RationalFunction> {
        self.require_rank_two()?;
        Ok(&self.coeffs[1])
    }

    /// `τ² - 4δ`.
    pub fn discriminant(&self) -> Result<RationalFunction> {
        let (tau, delta) = (self.tau()?, self.delta()?);
        Ok(tau * tau - delta.scale(&Rational::from_integer(4.into())))
    }

    /// Rank two only: the discriminant is a nonzero non-square.
    pub fn is_integral(&self) -> Result<bool> {
        let disc = self.discriminant()?;
        Ok(!disc.is_zero() && !is_square_geom(&disc))
    }

    /// The fiber polynomial in `t` over a marked point.
    pub fn fiber_polynomial(&self, a: &Rational, kind: PointKind) -> Result<Polynomial> {
        let r = self.rank();
        let mut coeffs = vec![Rational::zero(); r + 1];
        coeffs[r] = Rational::one();
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = idx + 1;
            let gamma = match kind {
                PointKind::Hecke => c.eval(a)?,
                PointKind::Puncture => c.laurent_coeff(a, -(k as i64)),
            };
            coeffs[r - k] = if k % 2 == 0 { gamma } else { -gamma };
        }
        Ok(Polynomial::new(coeffs))
    }
}

/// Characteristic coefficients of a valid field (Faddeev–LeVerrier).
pub fn char_poly(theta: &MatrixField) -> Result<CharData> {
    if let Some(v) = theta.violations().first() {
        return Err(Error::InvalidField(format!(
            "entry ({}, {}): {}",
            v.row, v.col, v.violations[0]
        )));
    }
    let a = theta.entries();
    let r = theta.rank();
    let mul = |x: &Matrix<RationalFunction>, y: &Matrix<RationalFunction>| {
        Matrix::from_fn(r, r, |i, j| {
            (0..r).fold(RationalFunction::zero(), |acc, k| acc + &(&x[(i, k)] * &y[(k, j)]))
        })
    };
    let trace = |x: &Matrix<RationalFunction>| (0..r).fold(RationalFunction::zero(), |acc, i| acc + &x[(i, i)]);

    let mut m: Matrix<RationalFunction> = Matrix::identity(r);
    let mut coeffs = Vec::with_capacity(r);
    for k in 1..=r {
        let am = mul(a, &m);
        // coefficient of t^{r-k} in det(t - A)
        let next = -trace(&am).scale(&Rational::new(1.into(), (k as i64).into()));
        coeffs.push(if k % 2 == 0 { next.clone() } else { -next.clone() });
        m = am;
        for i in 0..r {
            m[(i, i)] = &m[(i, i)] + &next;
        }
    }
    CharData::new(theta.twist().clone(), coeffs)
        .map_err(|e| Error::InvalidField(format!("characteristic coefficient out of range: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedPoint {
    pub a: Rational,
    pub kind: PointKind,
    pub lambda: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedFiber {
    pub a: Rational,
    pub kind: PointKind,
    pub polynomial: Polynomial,
    /// Rational roots with multiplicity, ascending.
    pub roots: Vec<(Rational, usize)>,
    /// Distinct roots over an algebraic closure.
    pub reduced: bool,
    /// All roots rational.
    pub split: bool,
}

/// The fibers of the spectral curve over every marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedScheme {
    pub rank: usize,
    pub fibers: Vec<MarkedFiber>,
}

impl MarkedScheme {
    pub fn reduced(&self) -> bool {
        self.fibers.iter().all(|f| f.reduced)
    }

    pub fn split(&self) -> bool {
        self.fibers.iter().all(|f| f.split)
    }

    /// One point per distinct rational root, fibers in order.
    pub fn points(&self) -> Vec<MarkedPoint> {
        self.fibers
            .iter()
            .flat_map(|f| {
                f.roots.iter().map(|(l, _)| MarkedPoint { a: f.a.clone(), kind: f.kind, lambda: l.clone() })
            })
            .collect()
    }

    pub fn fiber(&self, a: &Rational) -> Option<&MarkedFiber> {
        self.fibers.iter().find(|f| &f.a == a)
    }

    /// Errors on the first fiber that is non-reduced or non-split.
    pub fn require_reduced_split(&self) -> Result<()> {
        for f in &self.fibers {
            if !f.reduced {
                return Err(Error::NonReduced(f.a.clone()));
            }
            if !f.split {
                return Err(Error::NonSplit(f.a.clone()));
            }
        }
        Ok(())
    }
}

pub fn marked_scheme(cd: &CharData, base: &MarkedBase) -> Result<MarkedScheme> {
    let mut fibers = Vec::new();
    for (a, kind) in base.marked_points() {
        let polynomial = cd.fiber_polynomial(a, kind)?;
        let rs = rational_roots(&polynomial)?;
        let reduced = Polynomial::gcd(&polynomial, &polynomial.derivative()).is_constant();
        fibers.push(MarkedFiber {
            a: a.clone(),
            kind,
            polynomial,
            roots: rs.roots,
            reduced,
            split: rs.split,
        });
    }
    Ok(MarkedScheme { rank: cd.rank(), fibers })
}

/// `b(y) = ρ^{a(y)} · λ(y)` at every point of a reduced split scheme.
pub fn b_vector(h: &HeckeData, z: &MarkedScheme) -> Result<Vec<(MarkedPoint, Rational)>> {
    z.require_reduced_split()?;
    z.points()
        .into_iter()
        .map(|y| {
            let rho = h.require_slope(&y.a)?;
            let b = &rho * &y.lambda;
            Ok((y, b))
        })
        .collect()
}

/// `Θ' = f·I + g·Θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub f: RationalFunction,
    pub g: RationalFunction,
}

/// Writes a field commuting with a non-scalar rank-two `Θ` as `f·I + g·Θ`,
/// and checks that `f` is a section of the twist of `Θ'` and `g` of the
/// quotient twist.
pub fn decompose(theta: &MatrixField, theta_prime: &MatrixField) -> Result<Decomposition> {
    if theta.rank() != 2 {
        return Err(Error::UnsupportedRank(theta.rank()));
    }
    if !commutator(theta, theta_prime)?.is_zero() {
        return Err(Error::NotCommuting);
    }
    let (t, tp) = (theta.entries(), theta_prime.entries());
    let g = if !t[(1, 0)].is_zero() {
        tp[(1, 0)].checked_div(&t[(1, 0)])
    } else if !t[(0, 1)].is_zero() {
        tp[(0, 1)].checked_div(&t[(0, 1)])
    } else {
        (&tp[(0, 0)] - &tp[(1, 1)]).checked_div(&(&t[(0, 0)] - &t[(1, 1)]))
    }
    .ok_or(Error::ScalarTheta)?;
    let f = &tp[(0, 0)] - &(&g * &t[(0, 0)]);
    for i in 0..2 {
        for j in 0..2 {
            let diag = if i == j { f.clone() } else { RationalFunction::zero() };
            if tp[(i, j)] != diag + &(&g * &t[(i, j)]) {
                return Err(Error::NotCommuting);
            }
        }
    }
    let f_space = theta_prime.twist().clone();
    let g_space = theta_prime.twist().tensor(&theta.twist().dual());
    if let Some(v) = f_space.violations(&f).first() {
        return Err(Error::ValidationFailure(format!("scalar part f = {f}: {v}")));
    }
    if let Some(v) = g_space.violations(&g).first() {
        return Err(Error::ValidationFailure(format!("multiplier g = {g}: {v}")));
    }
    Ok(Decomposition { f, g })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarPoint {
    pub point: MarkedPoint,
    /// `β^L` of the induced scalar at the point.
    pub lhs: Rational,
    /// `ρ^a(λ)`.
    pub rhs: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarReport {
    pub decomposition: Decomposition,
    pub points: Vec<ScalarPoint>,
    pub pass: bool,
}

/// Value of `f + g·t` along the branch through `y`: evaluation at Hecke
/// points, residue at punctures (`g` is regular there).
pub fn induced_scalar(d: &Decomposition, y: &MarkedPoint) -> Result<Rational> {
    let f_part = match y.kind {
        PointKind::Hecke => d.f.eval(&y.a)?,
        PointKind::Puncture => d.f.residue(&y.a),
    };
    Ok(f_part + d.g.eval(&y.a)? * &y.lambda)
}

/// Checks `β_a^L(μ_y) = ρ^a(λ_a(y))` at every point of the marked scheme.
pub fn scalar_condition(h: &HeckeData, theta: &MatrixField, theta_prime: &MatrixField) -> Result<ScalarReport> {
    let decomposition = decompose(theta, theta_prime)?;
    let cd = char_poly(theta)?;
    let z = marked_scheme(&cd, &h.base)?;
    let mut points = Vec::new();
    for (y, rhs) in b_vector(h, &z)? {
        let lhs = induced_scalar(&decomposition, &y)?;
        let pass = lhs == rhs;
        points.push(ScalarPoint { point: y, lhs, rhs, pass });
    }
    let pass = points.iter().all(|p| p.pass);
    Ok(ScalarReport { decomposition, points, pass })
}

/// Eigenvector route to the induced scalar: an eigenvector `v` of the framed
/// symbol of `Θ` for `λ(y)` must be an eigenvector of the framed symbol of
/// `Θ'`; the eigenvalue is returned.
pub fn mu_oracle(
    theta: &MatrixField,
    theta_prime: &MatrixField,
    y: &MarkedPoint,
    base: &MarkedBase,
) -> Result<Rational> {
    if theta.rank() != 2 {
        return Err(Error::UnsupportedRank(theta.rank()));
    }
    if !commutator(theta, theta_prime)?.is_zero() {
        return Err(Error::NotCommuting);
    }
    let a_sym = theta.framed_symbol(&y.a, base)?;
    let b_sym = theta_prime.framed_symbol(&y.a, base)?;
    let shifted = Matrix::from_fn(2, 2, |i, j| {
        if i == j {
            &a_sym[(i, j)] - &y.lambda
        } else {
            a_sym[(i, j)].clone()
        }
    });
    let sol = linsolve(&shifted, &[Rational::zero(), Rational::zero()])?;
    let [v] = sol.kernel_basis.as_slice() else {
        return Err(Error::NotEigenvector(y.a.clone()));
    };
    let bv = b_sym.mul_vec(v);
    let i = v.iter().position(|x| !x.is_zero()).expect("kernel vector is nonzero");
    let mu = &bv[i] / &v[i];
    if bv.iter().zip(v).any(|(w, x)| *w != &mu * x) {
        return Err(Error::NotEigenvector(y.a.clone()));
    }
    Ok(mu)
}
