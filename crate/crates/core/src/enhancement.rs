//! Sections of the pulled-back twist on the spectral curve, the
//! evaluation/residue system over the marked scheme, and the affine
//! enhancement scheme cut out by it.
//!
//! With `φ_* O_Ȳ = O ⊕ S(P)^{-1}` (basis `1, t`), a global section of
//! `φ^* L(P)` is a pair `(f, g)` standing for `f + g·t`, with
//! `f ∈ H⁰(L(P))` and `g ∈ H⁰(L ⊗ S^{-1})`. Along the branch of `Ȳ` through
//! `y = (a, λ)` it restricts to `f + g·λ`, so
//!
//! - at a Hecke point the row is `[f_i(x) | λ g_j(x)]`,
//! - at a puncture the row is `[Res_p f_i | λ g_j(p)]`.
//!
//! The target of the system is `b_Z(y) = ρ^a(λ)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundles::{PointKind, SectionSpace};
use crate::error::{Error, Result};
use crate::exactalg::{linsolve, Matrix, Rational, RationalFunction};
use crate::fields::{lift_check, ChartBundle, MatrixField};
use crate::hecke::HeckeData;
use crate::sample;
use crate::spectral::{b_vector, char_poly, marked_scheme, scalar_condition, CharData, MarkedPoint, MarkedScheme};

/// Monomial bases of the two parts of `H⁰(Ȳ, φ^* L(P))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnhBasis {
    /// `L(P)`: degree `l`, simple poles at `P`.
    pub f_space: SectionSpace,
    /// `L ⊗ S^{-1}`: degree `l - s`, regular at `P`.
    pub g_space: SectionSpace,
    pub f_part: Vec<RationalFunction>,
    pub g_part: Vec<RationalFunction>,
}

impl EnhBasis {
    pub fn dim(&self) -> usize {
        self.f_part.len() + self.g_part.len()
    }

    /// Decodes a coefficient column into `(f, g)`.
    pub fn decode(&self, coeffs: &[Rational]) -> Result<(RationalFunction, RationalFunction)> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for an enhancement space of dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        let (cf, cg) = coeffs.split_at(self.f_part.len());
        Ok((self.f_space.combine(cf)?, self.g_space.combine(cg)?))
    }
}

pub fn enh_basis(h: &HeckeData) -> EnhBasis {
    let f_space = SectionSpace::uniform(&h.base, h.l_deg, 1);
    let g_space = SectionSpace::uniform(&h.base, h.l_deg - h.s_deg, 0);
    EnhBasis {
        f_part: f_space.basis().unwrap_or_default(),
        g_part: g_space.basis().unwrap_or_default(),
        f_space,
        g_space,
    }
}

/// One row per point of the marked scheme, one column per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvResSystem {
    pub rows: Vec<MarkedPoint>,
    pub matrix: Matrix<Rational>,
    pub target: Vec<Rational>,
}

/// Row of the evaluation/residue map at `y` on the basis `b`.
pub fn evres_row(y: &MarkedPoint, b: &EnhBasis) -> Result<Vec<Rational>> {
    let mut row = Vec::with_capacity(b.dim());
    for f in &b.f_part {
        row.push(match y.kind {
            PointKind::Hecke => f.eval(&y.a)?,
            PointKind::Puncture => f.residue(&y.a),
        });
    }
    for g in &b.g_part {
        row.push(g.eval(&y.a)? * &y.lambda);
    }
    Ok(row)
}

pub fn evres_system(h: &HeckeData, z: &MarkedScheme, b: &EnhBasis) -> Result<EvResSystem> {
    let targets = b_vector(h, z)?;
    let mut rows = Vec::with_capacity(targets.len());
    let mut matrix_rows = Vec::with_capacity(targets.len());
    let mut target = Vec::with_capacity(targets.len());
    for (y, bz) in targets {
        matrix_rows.push(evres_row(&y, b)?);
        rows.push(y);
        target.push(bz);
    }
    let matrix = if matrix_rows.is_empty() {
        Matrix::zeros(0, b.dim())
    } else {
        Matrix::from_rows(matrix_rows)?
    };
    Ok(EvResSystem { rows, matrix, target })
}

/// Rational points of the affine enhancement scheme: empty, or
/// `particular + span(kernel_basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AZSolution {
    pub particular: Option<Vec<Rational>>,
    /// Basis of `ker(evres)`; the solution set is a torsor under it.
    pub kernel_basis: Vec<Vec<Rational>>,
    pub rank: usize,
}

impl AZSolution {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.kernel_basis.len())
    }

    /// `dim ker(evres)`, defined whether or not the fiber is empty.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn point(&self, coeffs: &[Rational]) -> Option<Vec<Rational>> {
        let mut x = self.particular.clone()?;
        for (c, k) in coeffs.iter().zip(&self.kernel_basis) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += c * ki;
            }
        }
        Some(x)
    }
}

pub fn solve_az(sys: &EvResSystem) -> Result<AZSolution> {
    let sol = linsolve(&sys.matrix, &sys.target)?;
    Ok(AZSolution { particular: sol.particular, kernel_basis: sol.kernel_basis, rank: sol.rank })
}

/// `dim H⁰(L(-D)) + dim H⁰(L(-D) ⊗ S(P)^{-1})`.
pub fn predicted_kernel_dim(h: &HeckeData) -> usize {
    let d = h.base.hecke_points().len() as i64;
    let p = h.base.punctures().len() as i64;
    let first = (h.l_deg - d + 1).max(0);
    let second = (h.l_deg - d - h.s_deg - p + 1).max(0);
    (first + second) as usize
}

/// Multiplication by `t` on `φ_* O_Ȳ = O ⊕ S(P)^{-1}` in the basis `{1, t}`.
pub fn companion_field(cd: &CharData, h: &HeckeData) -> Result<MatrixField> {
    companion_field_shifted(cd, h, 0)
}

/// [`companion_field`] on the bundle with both summand degrees shifted by `k`.
pub fn companion_field_shifted(cd: &CharData, h: &HeckeData, k: i64) -> Result<MatrixField> {
    let twist = SectionSpace::uniform(&h.base, h.s_deg, 1);
    if cd.twist() != &twist {
        return Err(Error::InvalidCharData(format!(
            "characteristic data twisted by degree {}, expected S(P) with deg S = {}",
            cd.twist().deg_inf,
            h.s_deg
        )));
    }
    let (tau, delta) = (cd.tau()?, cd.delta()?);
    let bundle = ChartBundle::new(vec![
        SectionSpace::uniform(&h.base, k, 0),
        SectionSpace::uniform(&h.base, k - h.s_deg, -1),
    ])?;
    let entries = Matrix::from_rows(vec![
        vec![RationalFunction::zero(), -delta],
        vec![RationalFunction::constant(Rational::from_integer(1.into())), tau.clone()],
    ])?;
    let theta = MatrixField::new(bundle, twist, entries)?;
    if !theta.is_valid() {
        return Err(Error::InvalidCharData("companion field violates its allowances".into()));
    }
    if char_poly(&theta)? != *cd {
        return Err(Error::InvalidCharData("companion round trip failed".into()));
    }
    Ok(theta)
}

/// `f·I + g·Θ` for the section encoded by `coeffs`, as an `L(P)`-twisted field.
pub fn theta_prime_from_section(coeffs: &[Rational], b: &EnhBasis, theta: &MatrixField) -> Result<MatrixField> {
    let (f, g) = b.decode(coeffs)?;
    let r = theta.rank();
    let entries = Matrix::from_fn(r, r, |i, j| {
        let gt = &g * theta.entry(i, j);
        if i == j {
            gt + &f
        } else {
            gt
        }
    });
    let field = MatrixField::new(theta.bundle().clone(), b.f_space.clone(), entries)?;
    if let Some(v) = field.violations().first() {
        return Err(Error::ValidationFailure(format!(
            "entry ({}, {}) of f·I + g·Θ: {}",
            v.row, v.col, v.violations[0]
        )));
    }
    Ok(field)
}

/// Outcome of one sampled section in the round trip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub coeffs: Vec<Rational>,
    /// Whether the section lies in the enhancement fiber (linear algebra route).
    pub in_fiber: bool,
    pub lift: bool,
    pub integrable: bool,
    /// Only evaluated for in-fiber samples.
    pub scalar_pass: Option<bool>,
    /// Base points of the violated rows.
    pub expected_failures: Vec<Rational>,
    /// Base points where the constraint route reports a failure.
    pub actual_failures: Vec<Rational>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub empty: bool,
    pub dimension: Option<usize>,
    pub kernel_dim: usize,
    pub predicted_kernel_dim: usize,
    pub in_fiber: Vec<SampleOutcome>,
    pub off_fiber: Vec<SampleOutcome>,
    pub pass: bool,
}

/// Everything the round trip needs, computed once.
#[derive(Clone, Debug)]
pub struct EnhancementProblem {
    pub hecke: HeckeData,
    pub theta: MatrixField,
    pub scheme: MarkedScheme,
    pub basis: EnhBasis,
    pub system: EvResSystem,
    pub solution: AZSolution,
}

impl EnhancementProblem {
    pub fn new(h: &HeckeData, cd: &CharData) -> Result<Self> {
        let theta = companion_field(cd, h)?;
        let scheme = marked_scheme(cd, &h.base)?;
        let basis = enh_basis(h);
        let system = evres_system(h, &scheme, &basis)?;
        let solution = solve_az(&system)?;
        Ok(Self { hecke: h.clone(), theta, scheme, basis, system, solution })
    }

    /// Checks one section through the constraint route and compares with
    /// the linear algebra route.
    pub fn check_section(&self, coeffs: Vec<Rational>) -> Result<SampleOutcome> {
        let values = self.system.matrix.mul_vec(&coeffs);
        let mut expected_failures: Vec<Rational> = Vec::new();
        for ((y, v), t) in self.system.rows.iter().zip(&values).zip(&self.system.target) {
            if v != t && !expected_failures.contains(&y.a) {
                expected_failures.push(y.a.clone());
            }
        }
        expected_failures.sort();
        let in_fiber = expected_failures.is_empty();

        let tp = theta_prime_from_section(&coeffs, &self.basis, &self.theta)?;
        let rep = lift_check(&self.hecke, &self.theta, &tp)?;
        let mut actual_failures: Vec<Rational> = rep.failures.iter().map(|(a, _)| a.clone()).collect();
        actual_failures.sort();
        let scalar_pass = if in_fiber {
            Some(scalar_condition(&self.hecke, &self.theta, &tp)?.pass)
        } else {
            None
        };
        let ok = if in_fiber {
            rep.lift && rep.integrable && scalar_pass == Some(true)
        } else {
            !rep.lift && actual_failures == expected_failures
        };
        Ok(SampleOutcome {
            coeffs,
            in_fiber,
            lift: rep.lift,
            integrable: rep.integrable,
            scalar_pass,
            expected_failures,
            actual_failures,
            ok,
        })
    }
}

/// Samples points of `A_Z` and off-fiber perturbations and checks that the
/// constraint route agrees with membership in `A_Z`.
///
/// In-fiber samples are `particular + Σ c_i k_i` with random small `c_i`.
/// Off-fiber samples add a preimage of a single standard basis vector when
/// `evres` is surjective (violating exactly one row), and otherwise a random
/// column vector with nonzero image. Deterministic in `seed`.
pub fn roundtrip(h: &HeckeData, cd: &CharData, n_samples: usize, seed: u64) -> Result<RoundtripReport> {
    if !cd.is_integral()? {
        return Err(Error::IntegralityFailure);
    }
    let scheme = marked_scheme(cd, &h.base)?;
    scheme.require_reduced_split()?;
    let prob = EnhancementProblem::new(h, cd)?;
    let sol = &prob.solution;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = prob.basis.dim();
    let n_rows = prob.system.rows.len();

    let mut in_fiber = Vec::new();
    let mut off_fiber = Vec::new();
    let surjective = sol.rank == n_rows;
    let preimages: Vec<Vec<Rational>> = if surjective {
        (0..n_rows)
            .map(|k| {
                let mut e = vec![Rational::zero(); n_rows];
                e[k] = Rational::from_integer(1.into());
                linsolve(&prob.system.matrix, &e).map(|s| s.particular.expect("surjective system"))
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    for i in 0..n_samples {
        let base_point = match sol.particular {
            Some(_) => {
                let c: Vec<Rational> = (0..sol.kernel_dim()).map(|_| sample::rational(&mut rng, 5, 4)).collect();
                let s = sol.point(&c).expect("nonempty");
                in_fiber.push(prob.check_section(s.clone())?);
                s
            }
            None => vec![Rational::zero(); dim],
        };
        let perturbation = if surjective && n_rows > 0 {
            let k = i % n_rows;
            let c = sample::nonzero_rational(&mut rng, 5, 4);
            Some(preimages[k].iter().map(|x| x * &c).collect::<Vec<_>>())
        } else {
            random_off_fiber_direction(&mut rng, &prob.system.matrix)
        };
        if let Some(w) = perturbation {
            let s: Vec<Rational> = base_point.iter().zip(&w).map(|(a, b)| a + b).collect();
            let out = prob.check_section(s)?;
            if sol.particular.is_some() || !out.in_fiber {
                off_fiber.push(out);
            }
        }
    }

    let pass = in_fiber.iter().all(|s| s.ok && s.in_fiber) && off_fiber.iter().all(|s| s.ok && !s.in_fiber);
    Ok(RoundtripReport {
        empty: sol.is_empty(),
        dimension: sol.dimension(),
        kernel_dim: sol.kernel_dim(),
        predicted_kernel_dim: predicted_kernel_dim(h),
        in_fiber,
        off_fiber,
        pass,
    })
}

/// A random coefficient vector with nonzero image, if `matrix` is nonzero.
fn random_off_fiber_direction<R: Rng>(rng: &mut R, matrix: &Matrix<Rational>) -> Option<Vec<Rational>> {
    if matrix.is_zero() {
        return None;
    }
    loop {
        let w: Vec<Rational> = (0..matrix.cols()).map(|_| sample::rational(rng, 5, 4)).collect();
        if !matrix.mul_vec(&w).iter().all(Zero::is_zero) {
            return Some(w);
        }
    }
}
