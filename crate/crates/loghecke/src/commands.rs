//! Command dispatch: one instance in, one report out.

use std::fs;
use std::path::{Path, PathBuf};

use loghecke_core::enhancement::{enh_basis, evres_system, predicted_kernel_dim, roundtrip, solve_az};
use loghecke_core::fields::{constraint, lift_check};
use loghecke_core::hecke::canonical_presentation;
use loghecke_core::spectral::{b_vector, marked_scheme, scalar_condition};
use loghecke_core::Error;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::instance::{InstanceError, InstanceFile};
use crate::report::{
    kind_name, q, qmat, rf, rows_view, BatchReport, ConstraintView, ErrorInfo, FiberView, LiftView, MarkedPointView,
    Report, RoundtripView, ScalarView, SectionView, Status,
};

pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Lift and integrability of (theta, theta_prime).
    Check,
    /// Characteristic data, integrality, marked scheme and b_Z.
    Spectral,
    /// Scalar spectral condition for (theta, theta_prime).
    Scalar,
    /// The evaluation/residue system and the affine enhancement scheme.
    Enhance,
    /// Sampled round trip between enhancement sections and lifted fields.
    Roundtrip,
    /// Canonical presentation over the given punctures.
    Canonical,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Spectral => "spectral",
            Command::Scalar => "scalar",
            Command::Enhance => "enhance",
            Command::Roundtrip => "roundtrip",
            Command::Canonical => "canonical",
        }
    }
}

/// Flags that override the instance's `options`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

struct Outcome {
    status: Status,
    notes: Vec<String>,
    result: Value,
    error: Option<ErrorInfo>,
}

impl Outcome {
    fn ok_if(pass: bool, notes: Vec<String>, result: Value) -> Self {
        let status = if pass { Status::Ok } else { Status::ConditionFails };
        Outcome { status, notes, result, error: None }
    }

    fn failed(e: InstanceError, result: Value) -> Self {
        let (status, error) = classify(&e);
        Outcome { status, notes: vec![error.message.clone()], result, error: Some(error) }
    }
}

fn classify(e: &InstanceError) -> (Status, ErrorInfo) {
    let (status, kind) = match e {
        InstanceError::Io { .. } => (Status::InvalidInput, "Io".to_string()),
        InstanceError::Parse(_) => (Status::InvalidInput, "Parse".to_string()),
        InstanceError::Missing(_) => (Status::InvalidInput, "MissingField".to_string()),
        InstanceError::Invalid(_) => (Status::InvalidInput, "InvalidInstance".to_string()),
        InstanceError::Core(c) => {
            let kind = format!("{c:?}").split(['(', ' ', '{']).next().unwrap_or_default().to_string();
            let status = if c.is_unsupported() {
                Status::Unsupported
            } else if matches!(
                c,
                Error::NotCommuting | Error::ValidationFailure(_) | Error::IntegralityFailure | Error::NotEigenvector(_)
            ) {
                Status::ConditionFails
            } else {
                Status::InvalidInput
            };
            (status, kind)
        }
    };
    (status, ErrorInfo { kind, message: e.to_string() })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads, hashes, parses and runs one instance file.
pub fn run_file(cmd: Command, path: &Path, opts: RunOptions) -> Report {
    match fs::read(path) {
        Ok(bytes) => run_bytes(cmd, &path.display().to_string(), &bytes, opts),
        Err(source) => {
            let e = InstanceError::Io { path: path.display().to_string(), source };
            finish(cmd, path.display().to_string(), None, opts.seed.unwrap_or(0), Outcome::failed(e, Value::Null))
        }
    }
}

pub fn run_bytes(cmd: Command, input: &str, bytes: &[u8], opts: RunOptions) -> Report {
    let hash = Some(sha256_hex(bytes));
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            let err = InstanceError::Invalid(format!("input is not UTF-8: {e}"));
            return finish(cmd, input.into(), hash, opts.seed.unwrap_or(0), Outcome::failed(err, Value::Null));
        }
    };
    match InstanceFile::parse(text) {
        Ok(inst) => {
            let seed = effective_seed(&inst, opts);
            finish(cmd, input.into(), hash, seed, dispatch(cmd, &inst, seed, effective_samples(&inst, opts)))
        }
        Err(e) => finish(cmd, input.into(), hash, opts.seed.unwrap_or(0), Outcome::failed(e, Value::Null)),
    }
}

/// Runs a command on an already parsed instance.
pub fn run_instance(cmd: Command, input: &str, inst: &InstanceFile, opts: RunOptions) -> Report {
    let hash = Some(sha256_hex(inst.print().as_bytes()));
    let seed = effective_seed(inst, opts);
    finish(cmd, input.into(), hash, seed, dispatch(cmd, inst, seed, effective_samples(inst, opts)))
}

fn effective_seed(inst: &InstanceFile, opts: RunOptions) -> u64 {
    opts.seed.or(inst.options.as_ref().and_then(|o| o.seed)).unwrap_or(0)
}

fn effective_samples(inst: &InstanceFile, opts: RunOptions) -> usize {
    opts.samples.or(inst.options.as_ref().and_then(|o| o.samples)).unwrap_or(DEFAULT_SAMPLES)
}

fn finish(cmd: Command, input: String, hash: Option<String>, seed: u64, o: Outcome) -> Report {
    Report {
        command: cmd.name().into(),
        input,
        instance_sha256: hash,
        seed,
        status: o.status,
        exit_code: o.status.exit_code(),
        notes: o.notes,
        error: o.error,
        result: o.result,
    }
}

/// Runs every `*.json` file in `dir` concurrently; reports are sorted by path.
pub fn run_batch(cmd: Command, dir: &Path, opts: RunOptions) -> std::io::Result<BatchReport> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut reports: Vec<Report> = files.par_iter().map(|p| run_file(cmd, p, opts)).collect();
    reports.sort_by(|a, b| a.input.cmp(&b.input));
    let exit_code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
    Ok(BatchReport { command: cmd.name().into(), directory: dir.display().to_string(), exit_code, reports })
}

fn dispatch(cmd: Command, inst: &InstanceFile, seed: u64, samples: usize) -> Outcome {
    match cmd {
        Command::Check => check(inst),
        Command::Spectral => spectral(inst),
        Command::Scalar => scalar(inst),
        Command::Enhance => enhance(inst),
        Command::Roundtrip => roundtrip_cmd(inst, seed, samples),
        Command::Canonical => canonical(inst),
    }
}

fn to_value<T: serde::Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn check(inst: &InstanceFile) -> Outcome {
    let run = || -> Result<Outcome, InstanceError> {
        let h = inst.hecke()?;
        let theta = inst.theta()?;
        let tp = inst.theta_prime()?;
        let rep = lift_check(&h, &theta, &tp)?;
        let mut constraints = Vec::new();
        let mut notes = Vec::new();
        for (a, kind) in h.base.marked_points() {
            let c = constraint(&h, &theta, &tp, a)?;
            let vanishes = c.is_zero();
            if !vanishes {
                notes.push(format!("constraint at {} point {a} does not vanish: {:?}", kind_name(kind), qmat(&c)));
            }
            constraints.push(ConstraintView {
                point: q(a),
                kind: kind_name(kind),
                slope: h.slope(a)?.as_ref().map(q),
                constraint: qmat(&c),
                vanishes,
            });
        }
        if !rep.commutator_zero {
            notes.push("theta and theta_prime do not commute".into());
        }
        let view = LiftView::new(&rep, constraints);
        Ok(Outcome::ok_if(rep.lift && rep.integrable, notes, to_value(view)))
    };
    run().unwrap_or_else(|e| Outcome::failed(e, Value::Null))
}

fn spectral(inst: &InstanceFile) -> Outcome {
    let mut result = Map::new();
    let mut run = || -> Result<Outcome, InstanceError> {
        let cd = inst.char_data()?;
        let base = inst.marked_base()?;
        result.insert("rank".into(), json!(cd.rank()));
        result.insert("twist_degree".into(), json!(cd.twist().deg_inf));
        result.insert("coefficients".into(), to_value(cd.coeffs().iter().map(rf).collect::<Vec<_>>()));
        let z = marked_scheme(&cd, &base)?;
        result.insert("fibers".into(), to_value(z.fibers.iter().map(FiberView::from).collect::<Vec<_>>()));
        result.insert("reduced".into(), json!(z.reduced()));
        result.insert("split".into(), json!(z.split()));
        let integral = cd.is_integral()?;
        result.insert("discriminant".into(), to_value(rf(&cd.discriminant()?)));
        result.insert("integral".into(), json!(integral));
        z.require_reduced_split()?;
        let h = inst.hecke()?;
        let bz: Vec<Value> = b_vector(&h, &z)?
            .iter()
            .map(|(y, b)| {
                let mut v = to_value(MarkedPointView::from(y));
                v["b_z"] = to_value(q(b));
                v
            })
            .collect();
        result.insert("b_z".into(), Value::Array(bz));
        let mut notes = Vec::new();
        if !integral {
            notes.push("discriminant is a square: the spectral curve is not integral".into());
        }
        Ok(Outcome::ok_if(integral, notes, Value::Null))
    };
    let mut out = run().unwrap_or_else(|e| Outcome::failed(e, Value::Null));
    out.result = Value::Object(result);
    out
}

fn scalar(inst: &InstanceFile) -> Outcome {
    let run = || -> Result<Outcome, InstanceError> {
        let h = inst.hecke()?;
        let theta = inst.theta()?;
        let tp = inst.theta_prime()?;
        let rep = scalar_condition(&h, &theta, &tp)?;
        let notes = rep
            .points
            .iter()
            .filter(|p| !p.pass)
            .map(|p| {
                format!(
                    "scalar condition fails at ({}, {}): induced scalar {} but slope gives {}",
                    p.point.a, p.point.lambda, p.lhs, p.rhs
                )
            })
            .collect();
        Ok(Outcome::ok_if(rep.pass, notes, to_value(ScalarView::from(&rep))))
    };
    run().unwrap_or_else(|e| Outcome::failed(e, Value::Null))
}

fn enhance(inst: &InstanceFile) -> Outcome {
    let run = || -> Result<Outcome, InstanceError> {
        let h = inst.hecke()?;
        let cd = inst.char_data()?;
        let z = marked_scheme(&cd, &h.base)?;
        z.require_reduced_split()?;
        let b = enh_basis(&h);
        let sys = evres_system(&h, &z, &b)?;
        let sol = solve_az(&sys)?;
        let predicted = predicted_kernel_dim(&h);
        let mut notes = Vec::new();
        if sol.is_empty() {
            notes.push("A_Z is empty: evres(s) = b_Z has no solution".into());
        }
        if sol.kernel_dim() != predicted {
            notes.push(format!("kernel dimension {} differs from predicted {predicted}", sol.kernel_dim()));
        }
        let result = json!({
            "dim_v": b.dim(),
            "rank": sol.rank,
            "rows": to_value(rows_view(&sys)),
            "status": if sol.is_empty() { "empty" } else { "nonempty" },
            "dimension": sol.dimension(),
            "particular": sol.particular.as_ref().map(|p| to_value(SectionView::new(p, &b))),
            "kernel_basis": to_value(sol.kernel_basis.iter().map(|k| SectionView::new(k, &b)).collect::<Vec<_>>()),
            "kernel_dim": sol.kernel_dim(),
            "predicted_kernel_dim": predicted,
        });
        Ok(Outcome::ok_if(!sol.is_empty() && sol.kernel_dim() == predicted, notes, result))
    };
    run().unwrap_or_else(|e| Outcome::failed(e, Value::Null))
}

fn roundtrip_cmd(inst: &InstanceFile, seed: u64, samples: usize) -> Outcome {
    let run = || -> Result<Outcome, InstanceError> {
        let h = inst.hecke()?;
        let cd = inst.char_data()?;
        let rep = roundtrip(&h, &cd, samples, seed)?;
        let mut notes = Vec::new();
        for s in rep.in_fiber.iter().filter(|s| !s.ok) {
            notes.push(format!("in-fiber sample {:?} does not lift", s.coeffs.iter().map(q).collect::<Vec<_>>()));
        }
        for s in rep.off_fiber.iter().filter(|s| !s.ok) {
            notes.push(format!(
                "off-fiber sample fails at {:?}, rows violated at {:?}",
                s.actual_failures.iter().map(q).collect::<Vec<_>>(),
                s.expected_failures.iter().map(q).collect::<Vec<_>>()
            ));
        }
        Ok(Outcome::ok_if(rep.pass, notes, to_value(RoundtripView::from(&rep))))
    };
    run().unwrap_or_else(|e| Outcome::failed(e, Value::Null))
}

fn canonical(inst: &InstanceFile) -> Outcome {
    let run = || -> Result<Outcome, InstanceError> {
        let base = inst.marked_base()?;
        let h = canonical_presentation(&base);
        let mut presentation = InstanceFile::parse("{\"base\": {\"punctures\": []}}")?;
        presentation.set_hecke(&h);
        let slopes: Vec<Value> = h
            .base
            .punctures()
            .iter()
            .map(|p| json!({ "point": q(p), "slope": h.slope(p).ok().flatten().map(|s| q(&s)) }))
            .collect();
        let result = json!({
            "presentation": presentation,
            "kernel_degree": h.kernel_degree(),
            "slopes": slopes,
        });
        Ok(Outcome::ok_if(true, Vec::new(), result))
    };
    run().unwrap_or_else(|e| Outcome::failed(e, Value::Null))
}
