//! Seeded random instances for property tests and the round-trip check.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bundles::{MarkedBase, PointKind, SectionSpace};
use crate::exactalg::{linsolve, Matrix, Rational, RationalFunction};
use crate::fields::{ChartBundle, MatrixField};
use crate::hecke::{FiberPair, HeckeData};
use crate::spectral::{marked_scheme, CharData};

/// Numerator in `[-max_num, max_num]`, denominator in `[1, max_den]`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    let n = rng.random_range(-max_num..=max_num);
    let d = rng.random_range(1..=max_den.max(1));
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    loop {
        let q = rational(rng, max_num.max(1), max_den);
        if !q.is_zero() {
            return q;
        }
    }
}

/// `n` distinct rationals drawn from a pool of small values.
pub fn distinct_points<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    let mut pool: Vec<Rational> = Vec::new();
    for d in 1..=3i64 {
        for k in -6..=6i64 {
            let q = Rational::new(BigInt::from(k), BigInt::from(d));
            if !pool.contains(&q) {
                pool.push(q);
            }
        }
    }
    pool.shuffle(rng);
    pool.truncate(n);
    pool
}

pub fn marked_base<R: Rng + ?Sized>(rng: &mut R, punctures: usize, hecke: usize) -> MarkedBase {
    let mut pts = distinct_points(rng, punctures + hecke);
    let d = pts.split_off(punctures);
    MarkedBase::new(pts, d).expect("distinct points")
}

/// Small sections: a combination of at most a few basis elements.
pub fn section<R: Rng + ?Sized>(rng: &mut R, sp: &SectionSpace) -> RationalFunction {
    let coeffs: Vec<Rational> = (0..sp.dim()).map(|_| rational(rng, 3, 2)).collect();
    sp.combine(&coeffs).expect("matching length")
}

fn pair<R: Rng + ?Sized>(rng: &mut R, transverse: bool) -> FiberPair {
    if transverse || rng.random_range(0..4) != 0 {
        return FiberPair::new(nonzero_rational(rng, 4, 3), nonzero_rational(rng, 4, 3));
    }
    let c = nonzero_rational(rng, 4, 3);
    if rng.random_bool(0.5) {
        FiberPair::new(c, Rational::zero())
    } else {
        FiberPair::new(Rational::zero(), c)
    }
}

/// Valid Hecke data over `base`. With `transverse` every slope is defined;
/// otherwise about a quarter of the marked points get a coordinate covector.
pub fn hecke_data<R: Rng + ?Sized>(rng: &mut R, base: MarkedBase, s_deg: i64, l_deg: i64, transverse: bool) -> HeckeData {
    let quotients = base.hecke_points().iter().map(|x| (x.clone(), pair(rng, transverse))).collect();
    let lines = base.punctures().iter().map(|p| (p.clone(), pair(rng, transverse))).collect();
    HeckeData { base, s_deg, l_deg, quotients, lines }
}

/// Sum of `rank` line bundles with degrees in `[-2, 2]` and orders in `[-1, 1]`.
pub fn split_bundle<R: Rng + ?Sized>(rng: &mut R, base: &MarkedBase, rank: usize) -> ChartBundle {
    let summands = (0..rank)
        .map(|_| {
            let deg = rng.random_range(-2..=2);
            let orders = base.punctures().iter().map(|p| (p.clone(), rng.random_range(-1..=1))).collect();
            SectionSpace::new(deg, orders)
        })
        .collect();
    ChartBundle::new(summands).expect("nonempty")
}

/// Random valid field, each entry drawn from its allowance.
pub fn field<R: Rng + ?Sized>(rng: &mut R, bundle: &ChartBundle, twist: &SectionSpace) -> MatrixField {
    let r = bundle.rank();
    let entries = Matrix::from_fn(r, r, |i, j| section(rng, &bundle.entry_space(i, j, twist)));
    MatrixField::new(bundle.clone(), twist.clone(), entries).expect("square entries")
}

/// A section of `sp` with prescribed Laurent coefficients `(a, k, value)`,
/// random among all solutions; `None` when the conditions are inconsistent.
pub fn interpolating_section<R: Rng + ?Sized>(
    rng: &mut R,
    sp: &SectionSpace,
    conditions: &[(Rational, i64, Rational)],
) -> Option<RationalFunction> {
    let basis = match sp.basis() {
        Ok(b) => b,
        Err(_) => {
            return conditions.iter().all(|c| c.2.is_zero()).then(RationalFunction::zero);
        }
    };
    if conditions.is_empty() {
        return Some(section(rng, sp));
    }
    let m = Matrix::from_fn(conditions.len(), basis.len(), |i, j| basis[j].laurent_coeff(&conditions[i].0, conditions[i].1));
    let rhs: Vec<Rational> = conditions.iter().map(|c| c.2.clone()).collect();
    let sol = linsolve(&m, &rhs).ok()?;
    let mut x = sol.particular?;
    for k in &sol.kernel_basis {
        let c = rational(rng, 3, 2);
        for (xi, ki) in x.iter_mut().zip(k) {
            *xi += &c * ki;
        }
    }
    sp.combine(&x).ok()
}

/// Laurent exponent of the leading term of a `twist^k` section at a marked point.
fn char_exponent(kind: PointKind, k: i64) -> i64 {
    match kind {
        PointKind::Hecke => 0,
        PointKind::Puncture => -k,
    }
}

/// Rank-two characteristic data in `S(P)` whose marked fibers are reduced
/// and split: distinct rational eigenvalue pairs are prescribed at every
/// marked point and `τ`, `δ` interpolated. Falls back to rejection sampling.
pub fn char_data_with_split_fibers<R: Rng + ?Sized>(rng: &mut R, h: &HeckeData) -> Option<CharData> {
    let twist = SectionSpace::uniform(&h.base, h.s_deg, 1);
    let mut tau_cond = Vec::new();
    let mut delta_cond = Vec::new();
    for (a, kind) in h.base.marked_points() {
        let l1 = rational(rng, 4, 2);
        let l2 = loop {
            let l = rational(rng, 4, 2);
            if l != l1 {
                break l;
            }
        };
        tau_cond.push((a.clone(), char_exponent(kind, 1), &l1 + &l2));
        delta_cond.push((a.clone(), char_exponent(kind, 2), &l1 * &l2));
    }
    let interpolated = interpolating_section(rng, &twist, &tau_cond)
        .zip(interpolating_section(rng, &twist.power(2), &delta_cond))
        .and_then(|(tau, delta)| CharData::rank_two(twist.clone(), tau, delta).ok());
    if let Some(cd) = interpolated {
        return Some(cd);
    }
    for _ in 0..32 {
        let cd = CharData::rank_two(twist.clone(), section(rng, &twist), section(rng, &twist.power(2))).ok()?;
        let z = marked_scheme(&cd, &h.base).ok()?;
        if z.reduced() && z.split() {
            return Some(cd);
        }
    }
    None
}

/// Rank-two `S(P)`-twisted field on `bundle` whose framed symbols are upper
/// triangular with distinct diagonal entries at every marked point, so the
/// marked scheme is reduced and split.
pub fn field_with_split_fibers<R: Rng + ?Sized>(rng: &mut R, h: &HeckeData, bundle: &ChartBundle) -> Option<MatrixField> {
    let twist = SectionSpace::uniform(&h.base, h.s_deg, 1);
    let template = MatrixField::zero(bundle.clone(), twist.clone());
    for _ in 0..32 {
        let lower_cond: Vec<_> = h
            .base
            .marked_points()
            .map(|(a, kind)| (a.clone(), template.symbol_exponent(1, 0, a, kind), Rational::zero()))
            .collect();
        let Some(c) = interpolating_section(rng, &template.entry_space(1, 0), &lower_cond) else {
            return None;
        };
        let entries = Matrix::from_fn(2, 2, |i, j| {
            if (i, j) == (1, 0) {
                c.clone()
            } else {
                section(rng, &template.entry_space(i, j))
            }
        });
        let theta = MatrixField::new(bundle.clone(), twist.clone(), entries).ok()?;
        let Ok(cd) = crate::spectral::char_poly(&theta) else {
            continue;
        };
        if let Ok(z) = marked_scheme(&cd, &h.base) {
            if z.reduced() && z.split() {
                return Some(theta);
            }
        }
    }
    None
}

/// A section of the `(i, j)` allowance of `field` whose framed symbol is 1
/// at `a` and 0 at every other marked point.
pub fn symbol_bump<R: Rng + ?Sized>(
    rng: &mut R,
    field: &MatrixField,
    base: &MarkedBase,
    a: &Rational,
    i: usize,
    j: usize,
) -> Option<RationalFunction> {
    let conds: Vec<_> = base
        .marked_points()
        .map(|(b, kind)| {
            let v = if b == a { Rational::one() } else { Rational::zero() };
            (b.clone(), field.symbol_exponent(i, j, b, kind), v)
        })
        .collect();
    interpolating_section(rng, &field.entry_space(i, j), &conds)
}

/// An `L(P)`-twisted field on the bundle of `theta` whose local constraints
/// all vanish: its symbol is `ρ^a · symbol(Θ)` where the slope is defined,
/// zero where `ξ_1 = 0`. `None` if some `ξ_2` vanishes at a point where the
/// symbol of `Θ` does not, or if interpolation is impossible.
pub fn lifting_partner<R: Rng + ?Sized>(rng: &mut R, h: &HeckeData, theta: &MatrixField) -> Option<MatrixField> {
    let twist = SectionSpace::uniform(&h.base, h.l_deg, 1);
    let template = MatrixField::zero(theta.bundle().clone(), twist.clone());
    let mut targets = Vec::new();
    for (a, _) in h.base.marked_points() {
        let xi = h.xi_covector(a).ok()?;
        let sym = theta.framed_symbol(a, &h.base).ok()?;
        if xi.l.is_zero() {
            if !sym.is_zero() {
                return None;
            }
            targets.push((a.clone(), Matrix::zeros(sym.rows(), sym.cols())));
        } else {
            let rho = -(&xi.s / &xi.l);
            targets.push((a.clone(), sym.scale(&rho)));
        }
    }
    let r = theta.rank();
    let mut rows = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            let conds: Vec<_> = targets
                .iter()
                .map(|(a, m)| {
                    let kind = h.base.kind(a).expect("marked");
                    (a.clone(), template.symbol_exponent(i, j, a, kind), m[(i, j)].clone())
                })
                .collect();
            row.push(interpolating_section(rng, &template.entry_space(i, j), &conds)?);
        }
        rows.push(row);
    }
    MatrixField::new(theta.bundle().clone(), twist, Matrix::from_rows(rows).ok()?).ok()
}
