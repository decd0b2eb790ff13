//! Line bundles on the rational base curve in the affine chart.
//!
//! A line bundle is recorded by its section allowances: a degree allowance
//! at infinity and a pole allowance at each puncture (negative allowances
//! demand vanishing). Its global sections are the rational functions that
//! respect those allowances and are regular everywhere else. Every such
//! space has the monomial basis `z^j * prod (z - p)^{-ord_p}`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational, RationalFunction};

/// Whether a marked point is a Hecke point or a puncture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKind {
    Hecke,
    Puncture,
}

/// The punctures `P` and Hecke points `D` on the affine line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedBase {
    punctures: Vec<Rational>,
    hecke_points: Vec<Rational>,
}

impl MarkedBase {
    /// Both lists are stored sorted. Punctures must be nonempty and all
    /// points pairwise distinct.
    pub fn new(mut punctures: Vec<Rational>, mut hecke_points: Vec<Rational>) -> Result<Self> {
        if punctures.is_empty() {
            return Err(Error::InvalidBase("no punctures".into()));
        }
        punctures.sort();
        hecke_points.sort();
        for list in [&punctures, &hecke_points] {
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidBase(format!("repeated point {}", w[0])));
            }
        }
        if let Some(x) = hecke_points.iter().find(|x| punctures.contains(x)) {
            return Err(Error::InvalidBase(format!("{x} is both a puncture and a Hecke point")));
        }
        Ok(Self { punctures, hecke_points })
    }

    pub fn punctures(&self) -> &[Rational] {
        &self.punctures
    }

    pub fn hecke_points(&self) -> &[Rational] {
        &self.hecke_points
    }

    pub fn kind(&self, a: &Rational) -> Option<PointKind> {
        if self.hecke_points.binary_search(a).is_ok() {
            Some(PointKind::Hecke)
        } else if self.punctures.binary_search(a).is_ok() {
            Some(PointKind::Puncture)
        } else {
            None
        }
    }

    /// `D_tot = D ∪ P`, Hecke points first.
    pub fn marked_points(&self) -> impl Iterator<Item = (&Rational, PointKind)> {
        self.hecke_points
            .iter()
            .map(|x| (x, PointKind::Hecke))
            .chain(self.punctures.iter().map(|p| (p, PointKind::Puncture)))
    }
}

/// Section allowances of a line bundle: degree at infinity and pole orders
/// at the punctures. Missing punctures count as allowance 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SectionSpace {
    pub deg_inf: i64,
    pub pole_orders: BTreeMap<Rational, i64>,
}

/// Why a function is not a section of a given [`SectionSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionViolation {
    /// `order` is minus the valuation, so a negative allowance reports how
    /// far the required vanishing falls short.
    ExcessPole { at: Rational, order: i64, allowed: i64 },
    /// Leftover denominator vanishing away from the punctures.
    PoleOutsidePunctures { denominator: Polynomial },
    DegreeAtInfinity { degree: i64, allowed: i64 },
}

impl fmt::Display for SectionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionViolation::ExcessPole { at, order, allowed } => {
                write!(f, "pole order {order} at {at} exceeds allowance {allowed}")
            }
            SectionViolation::PoleOutsidePunctures { denominator } => {
                write!(f, "pole outside P (denominator factor {denominator})")
            }
            SectionViolation::DegreeAtInfinity { degree, allowed } => {
                write!(f, "degree {degree} at infinity exceeds allowance {allowed}")
            }
        }
    }
}

impl SectionSpace {
    pub fn new(deg_inf: i64, pole_orders: BTreeMap<Rational, i64>) -> Self {
        Self { deg_inf, pole_orders }
    }

    /// The same pole allowance `ord` at every puncture of `base`.
    pub fn uniform(base: &MarkedBase, deg_inf: i64, ord: i64) -> Self {
        Self {
            deg_inf,
            pole_orders: base.punctures().iter().map(|p| (p.clone(), ord)).collect(),
        }
    }

    pub fn pole_order(&self, p: &Rational) -> i64 {
        self.pole_orders.get(p).copied().unwrap_or(0)
    }

    /// Degree of the underlying line bundle.
    pub fn degree(&self) -> i64 {
        self.deg_inf + self.pole_orders.values().sum::<i64>()
    }

    pub fn dim(&self) -> usize {
        (self.degree() + 1).max(0) as usize
    }

    /// Monomial basis `z^j * prod (z - p)^{-ord_p}`, `0 <= j <= degree`.
    pub fn basis(&self) -> Result<Vec<RationalFunction>> {
        if self.dim() == 0 {
            return Err(Error::EmptySpace);
        }
        Ok((0..self.dim())
            .map(|j| self.over_frame(Polynomial::monomial(Rational::one(), j)))
            .collect())
    }

    /// `prod (z - p)^{-ord_p}`, the local generator used at every puncture.
    pub fn frame(&self) -> RationalFunction {
        self.over_frame(Polynomial::one())
    }

    /// `c * frame`, cancelling the common linear factors directly.
    fn over_frame(&self, mut c: Polynomial) -> RationalFunction {
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for (p, &o) in &self.pole_orders {
            let lin = Polynomial::linear_factor(p);
            if o < 0 {
                num = &num * &lin.pow((-o) as u32);
            } else if o > 0 {
                let k = c.order_at(p).min(o as usize);
                if k > 0 && !c.is_zero() {
                    c = c.exact_div(&lin.pow(k as u32));
                }
                den = &den * &lin.pow((o as usize - k) as u32);
            }
        }
        RationalFunction::from_coprime(&c * &num, den)
    }

    /// Lists every way `f` fails to be a section; empty means valid.
    pub fn violations(&self, f: &RationalFunction) -> Vec<SectionViolation> {
        let mut out = Vec::new();
        if f.is_zero() {
            return out;
        }
        let mut residual = f.den().clone();
        for (p, &allowed) in &self.pole_orders {
            let v = f.valuation_at(p).expect("nonzero");
            if v < -allowed {
                out.push(SectionViolation::ExcessPole { at: p.clone(), order: -v, allowed });
            }
            let k = residual.order_at(p);
            if k > 0 {
                residual = residual.exact_div(&Polynomial::linear_factor(p).pow(k as u32));
            }
        }
        if !residual.is_constant() {
            out.push(SectionViolation::PoleOutsidePunctures { denominator: residual });
        }
        let degree = f.degree_at_infinity().expect("nonzero");
        if degree > self.deg_inf {
            out.push(SectionViolation::DegreeAtInfinity { degree, allowed: self.deg_inf });
        }
        out
    }

    pub fn contains(&self, f: &RationalFunction) -> bool {
        self.violations(f).is_empty()
    }

    pub fn tensor(&self, other: &SectionSpace) -> SectionSpace {
        let mut pole_orders = self.pole_orders.clone();
        for (p, &o) in &other.pole_orders {
            *pole_orders.entry(p.clone()).or_insert(0) += o;
        }
        SectionSpace { deg_inf: self.deg_inf + other.deg_inf, pole_orders }
    }

    pub fn dual(&self) -> SectionSpace {
        self.power(-1)
    }

    /// `k`-th tensor power (negative `k` allowed).
    pub fn power(&self, k: i64) -> SectionSpace {
        SectionSpace {
            deg_inf: k * self.deg_inf,
            pole_orders: self.pole_orders.iter().map(|(p, &o)| (p.clone(), k * o)).collect(),
        }
    }

    pub fn shifted(&self, k: i64) -> SectionSpace {
        SectionSpace { deg_inf: self.deg_inf + k, pole_orders: self.pole_orders.clone() }
    }

    /// The allowance keys are exactly the punctures of `base`.
    pub fn is_keyed_by(&self, base: &MarkedBase) -> bool {
        self.pole_orders.len() == base.punctures().len()
            && base.punctures().iter().all(|p| self.pole_orders.contains_key(p))
    }

    /// Combination `sum c_i b_i` of the monomial basis.
    pub fn combine(&self, coeffs: &[Rational]) -> Result<RationalFunction> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                self.dim()
            )));
        }
        Ok(self.over_frame(Polynomial::new(coeffs.to_vec())))
    }
}

/// Evaluation at a Hecke point, residue at a puncture.
pub fn beta(f: &RationalFunction, a: &Rational, base: &MarkedBase) -> Result<Rational> {
    let kind = base.kind(a).ok_or_else(|| Error::PointNotMarked(a.clone()))?;
    let order = f.pole_order_at(a);
    match kind {
        PointKind::Hecke if order > 0 => Err(Error::ExcessPole { at: a.clone(), order, allowed: 0 }),
        PointKind::Hecke => f.eval(a),
        PointKind::Puncture if order > 1 => Err(Error::ExcessPole { at: a.clone(), order, allowed: 1 }),
        PointKind::Puncture => Ok(if order == 0 { Rational::zero() } else { f.residue(a) }),
    }
}
