//! Logarithmic Hecke data: twist degrees of `S` and `L`, quotient covectors
//! at the Hecke points and distinguished lines at the punctures.
//!
//! Fibers of `S` and `L` are identified with the rationals through the chart
//! frames, so `q_x` and `ℓ_p` are plain pairs of rationals. Only vanishing
//! statements built from them are frame independent.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::bundles::{MarkedBase, PointKind};
use crate::error::{Error, Result};
use crate::exactalg::Rational;

/// A vector or covector on `S_a ⊕ L_a` in the chart frames.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiberPair {
    pub s: Rational,
    pub l: Rational,
}

impl FiberPair {
    pub fn new(s: Rational, l: Rational) -> Self {
        Self { s, l }
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.l.is_zero()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self { s: &self.s * c, l: &self.l * c }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeData {
    pub base: MarkedBase,
    pub s_deg: i64,
    pub l_deg: i64,
    /// Quotient covector `q_x` at each Hecke point.
    pub quotients: BTreeMap<Rational, FiberPair>,
    /// Distinguished line `ℓ_p` at each puncture, by a spanning vector.
    pub lines: BTreeMap<Rational, FiberPair>,
}

impl HeckeData {
    /// Every way the data fails the presentation conditions; empty means valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (x, q) in &self.quotients {
            if self.base.kind(x) != Some(PointKind::Hecke) {
                out.push(format!("quotient given at {x}, which is not a Hecke point"));
            }
            if q.is_zero() {
                out.push(format!("zero quotient at {x}"));
            }
        }
        for x in self.base.hecke_points() {
            if !self.quotients.contains_key(x) {
                out.push(format!("missing quotient at Hecke point {x}"));
            }
        }
        for (p, v) in &self.lines {
            if self.base.kind(p) != Some(PointKind::Puncture) {
                out.push(format!("line given at {p}, which is not a puncture"));
            }
            if v.is_zero() {
                out.push(format!("zero line at {p}"));
            }
        }
        for p in self.base.punctures() {
            if !self.lines.contains_key(p) {
                out.push(format!("missing line at puncture {p}"));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Fails with the joined violation list.
    pub fn validated(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidHecke(v.join("; ")))
        }
    }

    /// `deg V = deg S + deg L + |P| - |D|`.
    pub fn kernel_degree(&self) -> i64 {
        self.s_deg + self.l_deg + self.base.punctures().len() as i64
            - self.base.hecke_points().len() as i64
    }

    /// Components `(ξ_{1,a}, ξ_{2,a})` of the fiber map at a marked point.
    ///
    /// At a puncture the covector is the annihilator `(-v2, v1)` of the
    /// line `(v1, v2)`.
    pub fn xi_covector(&self, a: &Rational) -> Result<FiberPair> {
        match self.base.kind(a) {
            Some(PointKind::Hecke) => self
                .quotients
                .get(a)
                .cloned()
                .ok_or_else(|| Error::InvalidHecke(format!("missing quotient at {a}"))),
            Some(PointKind::Puncture) => {
                let v = self
                    .lines
                    .get(a)
                    .ok_or_else(|| Error::InvalidHecke(format!("missing line at {a}")))?;
                Ok(FiberPair::new(-v.l.clone(), v.s.clone()))
            }
            None => Err(Error::PointNotMarked(a.clone())),
        }
    }

    /// Slope `ρ^a = -ξ_{1,a} / ξ_{2,a}`; `None` when either component vanishes.
    ///
    /// At a puncture this is `v2 / v1`, the line being the graph of `ρ^p`.
    pub fn slope(&self, a: &Rational) -> Result<Option<Rational>> {
        let xi = self.xi_covector(a)?;
        if xi.s.is_zero() || xi.l.is_zero() {
            return Ok(None);
        }
        Ok(Some(-xi.s / xi.l))
    }

    pub fn require_slope(&self, a: &Rational) -> Result<Rational> {
        self.slope(a)?.ok_or_else(|| Error::SlopeUndefined(a.clone()))
    }
}

/// Presentation with `S = O`, `L = O(-P)`, no Hecke points and every line
/// equal to `{0} ⊕ L_p`; its kernel is the trivial rank-two bundle.
pub fn canonical_presentation(base: &MarkedBase) -> HeckeData {
    let lines = base
        .punctures()
        .iter()
        .map(|p| (p.clone(), FiberPair::new(Rational::zero(), Rational::from_integer(1.into()))))
        .collect();
    let base = MarkedBase::new(base.punctures().to_vec(), Vec::new()).expect("punctures already validated");
    HeckeData {
        s_deg: 0,
        l_deg: -(base.punctures().len() as i64),
        base,
        quotients: BTreeMap::new(),
        lines,
    }
}
