//! JSON instance files.
//!
//! Rationals are strings `"p/q"` or `"p"` (bare JSON integers are accepted
//! on input), polynomials are ascending coefficient arrays and rational
//! functions are `{ "num": [...], "den": [...] }`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use loghecke_core::bundles::{MarkedBase, SectionSpace};
use loghecke_core::fields::{ChartBundle, MatrixField};
use loghecke_core::hecke::{FiberPair, HeckeData};
use loghecke_core::spectral::{char_poly, CharData};
use loghecke_core::{Matrix, Polynomial, Rational, RationalFunction};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational that serializes as a decimal-free string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub Rational);

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t.contains(['.', 'e', 'E']) {
            return Err(format!("{s:?} is not an exact rational (use \"p/q\")"));
        }
        let r = Rational::from_str(t).map_err(|_| format!("{s:?} is not a rational of the form \"p/q\" or \"p\""))?;
        Ok(Q(r))
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

impl From<&Rational> for Q {
    fn from(r: &Rational) -> Self {
        Q(r.clone())
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct QVisitor;

        impl Visitor<'_> for QVisitor {
            type Value = Q;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Q, E> {
                Err(E::custom(format!("floating point value {v} is not allowed; write rationals as strings")))
            }
        }

        d.deserialize_any(QVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfJson {
    pub num: Vec<Q>,
    #[serde(default = "one_poly")]
    pub den: Vec<Q>,
}

fn one_poly() -> Vec<Q> {
    vec![Q(Rational::from_integer(1.into()))]
}

impl RfJson {
    pub fn to_core(&self) -> Result<RationalFunction, InstanceError> {
        let poly = |c: &[Q]| Polynomial::new(c.iter().map(|q| q.0.clone()).collect());
        RationalFunction::new(poly(&self.num), poly(&self.den))
            .map_err(|_| InstanceError::Invalid("rational function with zero denominator".into()))
    }
}

impl From<&RationalFunction> for RfJson {
    fn from(f: &RationalFunction) -> Self {
        RfJson {
            num: f.num().coeffs().iter().map(Q::from).collect(),
            den: f.den().coeffs().iter().map(Q::from).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseJson {
    pub punctures: Vec<Q>,
    #[serde(default)]
    pub hecke_points: Vec<Q>,
}

/// One line-bundle summand: degree allowance at infinity and pole orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandJson {
    pub deg_inf: i64,
    #[serde(default)]
    pub pole_orders: BTreeMap<Q, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharJson {
    pub tau: RfJson,
    pub delta: RfJson,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub base: BaseJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_deg: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_deg: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub quotients: BTreeMap<Q, [Q; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lines: BTreeMap<Q, [Q; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<Vec<SummandJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Vec<RfJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_prime: Option<Vec<Vec<RfJson>>>,
    #[serde(default, rename = "char", skip_serializing_if = "Option::is_none")]
    pub char_data: Option<CharJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<OptionsJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] loghecke_core::Error),
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn print(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances always serialize")
    }

    pub fn marked_base(&self) -> Result<MarkedBase, InstanceError> {
        let v = |x: &[Q]| x.iter().map(|q| q.0.clone()).collect();
        Ok(MarkedBase::new(v(&self.base.punctures), v(&self.base.hecke_points))?)
    }

    pub fn hecke(&self) -> Result<HeckeData, InstanceError> {
        let pairs = |m: &BTreeMap<Q, [Q; 2]>| {
            m.iter()
                .map(|(k, [a, b])| (k.0.clone(), FiberPair::new(a.0.clone(), b.0.clone())))
                .collect()
        };
        let h = HeckeData {
            base: self.marked_base()?,
            s_deg: self.s_deg.ok_or(InstanceError::Missing("s_deg"))?,
            l_deg: self.l_deg.ok_or(InstanceError::Missing("l_deg"))?,
            quotients: pairs(&self.quotients),
            lines: pairs(&self.lines),
        };
        Ok(h.validated()?)
    }

    pub fn chart_bundle(&self) -> Result<ChartBundle, InstanceError> {
        let summands = self.bundle.as_ref().ok_or(InstanceError::Missing("bundle"))?;
        let base = self.marked_base()?;
        let spaces = summands
            .iter()
            .map(|s| {
                let orders: BTreeMap<Rational, i64> = s.pole_orders.iter().map(|(k, &o)| (k.0.clone(), o)).collect();
                if let Some(p) = orders.keys().find(|p| !base.punctures().contains(p)) {
                    return Err(InstanceError::Invalid(format!("bundle pole order given at {p}, which is not a puncture")));
                }
                let mut sp = SectionSpace::uniform(&base, s.deg_inf, 0);
                sp.pole_orders.extend(orders);
                Ok(sp)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChartBundle::new(spaces)?)
    }

    fn field(&self, entries: &[Vec<RfJson>], twist_deg: i64, name: &str) -> Result<MatrixField, InstanceError> {
        let bundle = self.chart_bundle()?;
        let base = self.marked_base()?;
        let rows = entries
            .iter()
            .map(|row| row.iter().map(RfJson::to_core).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let m = Matrix::from_rows(rows).map_err(|e| InstanceError::Invalid(format!("{name}: {e}")))?;
        let field = MatrixField::new(bundle, SectionSpace::uniform(&base, twist_deg, 1), m)
            .map_err(|e| InstanceError::Invalid(format!("{name}: {e}")))?;
        let violations = field.violations();
        if !violations.is_empty() {
            let msgs: Vec<String> = violations
                .iter()
                .map(|v| {
                    let what: Vec<String> = v.violations.iter().map(|x| x.to_string()).collect();
                    format!("{name} entry ({}, {}): {}", v.row, v.col, what.join(", "))
                })
                .collect();
            return Err(InstanceError::Invalid(msgs.join("; ")));
        }
        Ok(field)
    }

    /// `Θ`, twisted by `S(P)`.
    pub fn theta(&self) -> Result<MatrixField, InstanceError> {
        let e = self.theta.as_ref().ok_or(InstanceError::Missing("theta"))?;
        self.field(e, self.s_deg.ok_or(InstanceError::Missing("s_deg"))?, "theta")
    }

    /// `Θ'`, twisted by `L(P)`.
    pub fn theta_prime(&self) -> Result<MatrixField, InstanceError> {
        let e = self.theta_prime.as_ref().ok_or(InstanceError::Missing("theta_prime"))?;
        self.field(e, self.l_deg.ok_or(InstanceError::Missing("l_deg"))?, "theta_prime")
    }

    /// Characteristic data from `char` if present, else from `Θ`.
    pub fn char_data(&self) -> Result<CharData, InstanceError> {
        match &self.char_data {
            Some(c) => {
                let base = self.marked_base()?;
                let s = self.s_deg.ok_or(InstanceError::Missing("s_deg"))?;
                Ok(CharData::rank_two(SectionSpace::uniform(&base, s, 1), c.tau.to_core()?, c.delta.to_core()?)?)
            }
            None if self.theta.is_some() => Ok(char_poly(&self.theta()?)?),
            None => Err(InstanceError::Missing("char or theta")),
        }
    }

    /// Writes the Hecke data of `h` into the corresponding fields.
    pub fn set_hecke(&mut self, h: &HeckeData) {
        let pairs = |m: &BTreeMap<Rational, FiberPair>| {
            m.iter().map(|(k, v)| (Q::from(k), [Q::from(&v.s), Q::from(&v.l)])).collect()
        };
        self.base = BaseJson {
            punctures: h.base.punctures().iter().map(Q::from).collect(),
            hecke_points: h.base.hecke_points().iter().map(Q::from).collect(),
        };
        self.s_deg = Some(h.s_deg);
        self.l_deg = Some(h.l_deg);
        self.quotients = pairs(&h.quotients);
        self.lines = pairs(&h.lines);
    }

    /// Instance carrying `h`, the bundle of `theta` and both fields.
    pub fn from_parts(h: &HeckeData, theta: &MatrixField, theta_prime: Option<&MatrixField>) -> Self {
        let bundle = theta
            .bundle()
            .summands()
            .iter()
            .map(|s| SummandJson {
                deg_inf: s.deg_inf,
                pole_orders: s.pole_orders.iter().map(|(k, &o)| (Q::from(k), o)).collect(),
            })
            .collect();
        let mut out = InstanceFile {
            base: BaseJson { punctures: Vec::new(), hecke_points: Vec::new() },
            s_deg: None,
            l_deg: None,
            quotients: BTreeMap::new(),
            lines: BTreeMap::new(),
            bundle: Some(bundle),
            theta: Some(field_json(theta)),
            theta_prime: theta_prime.map(field_json),
            char_data: None,
            options: None,
        };
        out.set_hecke(h);
        out
    }
}

pub fn field_json(f: &MatrixField) -> Vec<Vec<RfJson>> {
    f.entries().clone().into_rows().iter().map(|r| r.iter().map(RfJson::from).collect()).collect()
}
