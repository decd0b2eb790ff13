//! Acceptance suite: one PASS/FAIL line per criterion, exact checks only.
//!
//! Run with `cargo test -p loghecke --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use loghecke::{run_instance, Command, InstanceFile, RunOptions, Status};
use loghecke_core::bundles::{MarkedBase, SectionSpace};
use loghecke_core::enhancement::{
    companion_field, companion_field_shifted, enh_basis, evres_system, predicted_kernel_dim, roundtrip, solve_az,
    theta_prime_from_section,
};
use loghecke_core::fields::{constraint, graph_constraint, lift_check, MatrixField};
use loghecke_core::hecke::{canonical_presentation, FiberPair, HeckeData};
use loghecke_core::spectral::{char_poly, marked_scheme, mu_oracle, scalar_condition, CharData};
use loghecke_core::{fixtures, int, sample, Matrix, Polynomial, Rational, RationalFunction};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "lift verdict equals vanishing of all local constraints", limit: Some(Duration::from_secs(10)), run: lift_equivalence },
        Criterion { id: 2, name: "constraint and graph form vanish together", limit: None, run: constraint_forms },
        Criterion { id: 3, name: "eigenvector oracle equals scalar condition lhs", limit: None, run: scalar_oracles },
        Criterion { id: 4, name: "kernel dimension law and standard enhancement system", limit: None, run: kernel_law },
        Criterion { id: 5, name: "round trip on the standard fixture", limit: Some(Duration::from_secs(5)), run: standard_roundtrip },
        Criterion { id: 6, name: "marked scheme of the standard fixture", limit: None, run: standard_marked_scheme },
        Criterion { id: 7, name: "integrality verdicts", limit: None, run: integrality },
        Criterion { id: 8, name: "canonical presentation over one puncture", limit: None, run: canonical },
        Criterion { id: 9, name: "rescaling and bundle shifts never change verdicts", limit: None, run: invariance },
        Criterion { id: 10, name: "instance serialization round trip", limit: None, run: serialization },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed >= limit => {
                Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
            }
            (o, _) => o,
        };
        let timing = match c.limit {
            Some(l) => format!("{:.2} s < {} s", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2}  {}  [{detail}; {timing}]", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}  {}  [{why}; {timing}]", c.id, c.name);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Framed symbol entry obtained by multiplying out the frame and evaluating,
/// without Laurent expansion.
fn symbol_oracle(field: &MatrixField, base: &MarkedBase, a: &Rational, i: usize, j: usize) -> Rational {
    let kind = base.kind(a).expect("marked point");
    let e = field.symbol_exponent(i, j, a, kind);
    (field.entry(i, j) * &RationalFunction::power_of_linear(a, -e)).eval(a).expect("valid entry")
}

fn constraint_oracle_vanishes(h: &HeckeData, theta: &MatrixField, tp: &MatrixField, a: &Rational) -> bool {
    let xi = h.xi_covector(a).unwrap();
    let r = theta.rank();
    (0..r).all(|i| {
        (0..r).all(|j| {
            (&xi.s * symbol_oracle(theta, &h.base, a, i, j) + &xi.l * symbol_oracle(tp, &h.base, a, i, j)).is_zero()
        })
    })
}

fn random_hecke(r: &mut ChaCha8Rng, transverse: bool, s: (i64, i64), l: (i64, i64)) -> HeckeData {
    let np = r.random_range(1..=2);
    let nd = r.random_range(0..=2);
    let base = sample::marked_base(r, np, nd);
    let s = r.random_range(s.0..=s.1);
    let l = r.random_range(l.0..=l.1);
    sample::hecke_data(r, base, s, l, transverse)
}

fn random_field_pair(r: &mut ChaCha8Rng, transverse: bool) -> (HeckeData, MatrixField, MatrixField, bool) {
    let h = random_hecke(r, transverse, (0, 3), (0, 4));
    let rank = r.random_range(1..=3);
    let bundle = sample::split_bundle(r, &h.base, rank);
    let theta = sample::field(r, &bundle, &SectionSpace::uniform(&h.base, h.s_deg, 1));
    if r.random_bool(0.6) {
        if let Some(tp) = sample::lifting_partner(r, &h, &theta) {
            return (h, theta, tp, true);
        }
    }
    let tp = sample::field(r, &bundle, &SectionSpace::uniform(&h.base, h.l_deg, 1));
    (h, theta, tp, false)
}

fn lift_equivalence() -> Check {
    let mut r = rng(101);
    let (mut instances, mut lifts, mut flips) = (0, 0, 0);
    while instances < 100 {
        let (h, theta, tp, recipe) = random_field_pair(&mut r, false);
        let rep = lift_check(&h, &theta, &tp).map_err(|e| e.to_string())?;
        let oracle: Vec<Rational> = h
            .base
            .marked_points()
            .filter(|(a, _)| !constraint_oracle_vanishes(&h, &theta, &tp, a))
            .map(|(a, _)| a.clone())
            .collect();
        let mut reported: Vec<Rational> = rep.failures.iter().map(|f| f.0.clone()).collect();
        reported.sort();
        let mut oracle_sorted = oracle.clone();
        oracle_sorted.sort();
        ensure!(rep.lift == oracle.is_empty(), "lift = {} but oracle failures {oracle:?}", rep.lift);
        ensure!(reported == oracle_sorted, "failures {reported:?} vs oracle {oracle_sorted:?}");
        ensure!(!recipe || rep.lift, "admissible recipe did not lift");
        instances += 1;
        lifts += rep.lift as usize;
        if !rep.lift {
            continue;
        }
        // perturb one entry's symbol at one marked point
        let points: Vec<Rational> = h.base.marked_points().map(|(a, _)| a.clone()).collect();
        let a = &points[r.random_range(0..points.len())];
        let (i, j) = (r.random_range(0..theta.rank()), r.random_range(0..theta.rank()));
        let xi = h.xi_covector(a).unwrap();
        let perturbed = if !xi.l.is_zero() {
            sample::symbol_bump(&mut r, &tp, &h.base, a, i, j)
                .map(|b| (theta.clone(), tp.with_entry(i, j, tp.entry(i, j) + &b)))
        } else {
            sample::symbol_bump(&mut r, &theta, &h.base, a, i, j)
                .map(|b| (theta.with_entry(i, j, theta.entry(i, j) + &b), tp.clone()))
        };
        let Some((t2, tp2)) = perturbed else { continue };
        let rep2 = lift_check(&h, &t2, &tp2).map_err(|e| e.to_string())?;
        let failing: Vec<Rational> = rep2.failures.iter().map(|f| f.0.clone()).collect();
        ensure!(failing == vec![a.clone()], "perturbation at {a} flipped {failing:?}");
        ensure!(!constraint_oracle_vanishes(&h, &t2, &tp2, a), "oracle disagrees after perturbation at {a}");
        flips += 1;
    }
    ensure!(lifts > 0 && lifts < instances, "only one verdict exercised ({lifts}/{instances})");
    ensure!(flips >= 20, "only {flips} perturbations exercised");
    Ok(format!("{instances} instances, {lifts} lifting, {flips} single-point flips"))
}

fn constraint_forms() -> Check {
    let mut r = rng(102);
    let (mut instances, mut points, mut vanishing) = (0, 0, 0);
    while instances < 100 {
        let (h, theta, tp, _) = random_field_pair(&mut r, false);
        for (a, _) in h.base.marked_points() {
            if h.slope(a).unwrap().is_none() {
                continue;
            }
            let c = constraint(&h, &theta, &tp, a).map_err(|e| e.to_string())?;
            let g = graph_constraint(&h, &theta, &tp, a).map_err(|e| e.to_string())?;
            ensure!(c.is_zero() == g.is_zero(), "forms disagree at {a}");
            points += 1;
            vanishing += c.is_zero() as usize;
        }
        instances += 1;
    }
    ensure!(vanishing > 0 && vanishing < points, "only one verdict exercised");
    Ok(format!("{instances} instances, {points} points, {vanishing} vanishing"))
}

/// Rank-two field with reduced split marked scheme.
fn split_theta(r: &mut ChaCha8Rng, h: &HeckeData) -> Option<MatrixField> {
    if r.random_bool(0.5) {
        let cd = sample::char_data_with_split_fibers(r, h)?;
        companion_field(&cd, h).ok()
    } else {
        let bundle = sample::split_bundle(r, &h.base, 2);
        sample::field_with_split_fibers(r, h, &bundle)
    }
}

fn scalar_oracles() -> Check {
    let mut r = rng(103);
    let (mut pairs, mut points, mut passes) = (0, 0, 0);
    while pairs < 100 {
        let h = random_hecke(&mut r, true, (0, 2), (0, 4));
        let Some(theta) = split_theta(&mut r, &h) else { continue };
        let b = enh_basis(&h);
        let coeffs: Vec<Rational> = if r.random_bool(0.5) {
            (0..b.dim()).map(|_| sample::rational(&mut r, 4, 3)).collect()
        } else {
            let z = marked_scheme(&char_poly(&theta).unwrap(), &h.base).unwrap();
            let sol = solve_az(&evres_system(&h, &z, &b).unwrap()).unwrap();
            let c: Vec<Rational> = (0..sol.kernel_dim()).map(|_| sample::rational(&mut r, 3, 2)).collect();
            match sol.point(&c) {
                Some(p) => p,
                None => continue,
            }
        };
        let tp = theta_prime_from_section(&coeffs, &b, &theta).map_err(|e| e.to_string())?;
        let rep = scalar_condition(&h, &theta, &tp).map_err(|e| e.to_string())?;
        for p in &rep.points {
            let mu = mu_oracle(&theta, &tp, &p.point, &h.base).map_err(|e| e.to_string())?;
            ensure!(mu == p.lhs, "mu {mu} vs lhs {} at ({}, {})", p.lhs, p.point.a, p.point.lambda);
            points += 1;
        }
        let lift = lift_check(&h, &theta, &tp).map_err(|e| e.to_string())?;
        ensure!(lift.lift == rep.pass, "lift {} but scalar {}", lift.lift, rep.pass);
        passes += rep.pass as usize;
        pairs += 1;
    }
    ensure!(passes > 0 && passes < pairs, "only one verdict exercised");
    Ok(format!("{pairs} commuting pairs, {points} marked points, {passes} passing"))
}

fn kernel_law() -> Check {
    // standard fixture against a hand-assembled system
    let fx = fixtures::standard();
    let cd = &fx.char_data;
    let z = marked_scheme(cd, &fx.hecke.base).map_err(|e| e.to_string())?;
    let b = enh_basis(&fx.hecke);
    let sys = evres_system(&fx.hecke, &z, &b).map_err(|e| e.to_string())?;
    let sol = solve_az(&sys).map_err(|e| e.to_string())?;
    // f-part basis z^(j-1), j = 0..5; g-part basis z^j, j = 0..4; slope 1 at both points
    let mut expected: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for lambda in [int(1), int(2)] {
        let mut row = vec![int(1); 6];
        row.extend(std::iter::repeat_n(lambda.clone(), 5));
        expected.push((row, lambda));
    }
    for lambda in [int(-1), int(1)] {
        let mut row = vec![int(0); 11];
        row[0] = int(1);
        row[6] = lambda.clone();
        expected.push((row, lambda));
    }
    let mut got: Vec<(Vec<Rational>, Rational)> = (0..sys.matrix.rows())
        .map(|i| (sys.matrix.row(i).to_vec(), sys.target[i].clone()))
        .collect();
    got.sort();
    expected.sort();
    ensure!(got == expected, "standard system differs from the hand-derived rows");
    ensure!(b.dim() == 11, "dim V = {}", b.dim());
    ensure!(sol.rank == 4, "rank = {}", sol.rank);
    ensure!(sol.dimension() == Some(7), "dim A_Z = {:?}", sol.dimension());
    let mut fg = vec![int(0); 11];
    fg[6] = int(1);
    ensure!(sys.matrix.mul_vec(&fg) == sys.target, "(f, g) = (0, 1) is not in A_Z");
    let (f, g) = b.decode(sol.particular.as_ref().unwrap()).map_err(|e| e.to_string())?;
    ensure!(f.is_zero() && g == RationalFunction::constant(int(1)), "particular solution is ({f}, {g})");

    let mut r = rng(104);
    let mut configs = 0;
    let mut nonempty = 0;
    while configs < 100 {
        let np = r.random_range(1..=3);
        let nd = r.random_range(0..=3);
        let base = sample::marked_base(&mut r, np, nd);
        let (s, l) = (r.random_range(-2..=8), r.random_range(-2..=8));
        let h = sample::hecke_data(&mut r, base, s, l, true);
        let Some(cd) = sample::char_data_with_split_fibers(&mut r, &h) else { continue };
        let z = marked_scheme(&cd, &h.base).map_err(|e| e.to_string())?;
        if !(z.reduced() && z.split()) {
            continue;
        }
        let b = enh_basis(&h);
        let sys = evres_system(&h, &z, &b).map_err(|e| e.to_string())?;
        let sol = solve_az(&sys).map_err(|e| e.to_string())?;
        ensure!(
            sol.kernel_dim() == predicted_kernel_dim(&h),
            "kernel {} vs predicted {} at s={s} l={l} |P|={np} |D|={nd}",
            sol.kernel_dim(),
            predicted_kernel_dim(&h)
        );
        nonempty += !sol.is_empty() as usize;
        configs += 1;
    }
    Ok(format!("standard: dim V 11, rank 4, dim A_Z 7, particular (0, 1); {configs} random configurations ({nonempty} nonempty)"))
}

fn standard_roundtrip() -> Check {
    let fx = fixtures::standard();
    let rep = roundtrip(&fx.hecke, &fx.char_data, 20, 0).map_err(|e| e.to_string())?;
    ensure!(rep.in_fiber.len() == 20, "{} in-fiber samples", rep.in_fiber.len());
    ensure!(rep.off_fiber.len() == 20, "{} off-fiber samples", rep.off_fiber.len());
    for s in &rep.in_fiber {
        ensure!(s.in_fiber && s.lift && s.integrable && s.scalar_pass == Some(true), "in-fiber sample failed: {:?}", s.coeffs);
    }
    for s in &rep.off_fiber {
        ensure!(!s.in_fiber && !s.lift, "off-fiber sample lifted");
        ensure!(s.actual_failures == s.expected_failures, "failing points {:?} vs violated rows {:?}", s.actual_failures, s.expected_failures);
        // independent check through the constraint oracle
        let b = enh_basis(&fx.hecke);
        let tp = theta_prime_from_section(&s.coeffs, &b, &fx.theta).map_err(|e| e.to_string())?;
        let oracle: Vec<Rational> = fx
            .hecke
            .base
            .marked_points()
            .filter(|(a, _)| !constraint_oracle_vanishes(&fx.hecke, &fx.theta, &tp, a))
            .map(|(a, _)| a.clone())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        ensure!(oracle == s.expected_failures, "oracle failures {oracle:?}");
    }
    ensure!(rep.pass, "report does not pass");
    Ok("20 in-fiber samples lift, 20 off-fiber samples fail exactly at violated rows".into())
}

fn quadratic_roots(b: &Rational, c: &Rational) -> Vec<Rational> {
    // roots of t^2 + b t + c via an exact square root of the discriminant
    let disc = b * b - c * int(4);
    let (n, d) = (disc.numer().clone(), disc.denom().clone());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    assert!(&sn * &sn == n && &sd * &sd == d, "irrational roots");
    let s = Rational::new(sn, sd);
    let mut v = vec![(-b - &s) / int(2), (-b + &s) / int(2)];
    v.sort();
    v.dedup();
    v
}

fn standard_marked_scheme() -> Check {
    let fx = fixtures::standard();
    let z = marked_scheme(&fx.char_data, &fx.hecke.base).map_err(|e| e.to_string())?;
    ensure!(z.reduced() && z.split(), "not reduced and split");
    let roots = |a: i64| -> Vec<Rational> { z.fiber(&int(a)).unwrap().roots.iter().map(|x| x.0.clone()).collect() };
    // specialized quadratic at 1: t^2 - tau(1) t + delta(1)
    let tau1 = fx.char_data.tau().unwrap().eval(&int(1)).unwrap();
    let delta1 = fx.char_data.delta().unwrap().eval(&int(1)).unwrap();
    let at1 = quadratic_roots(&-tau1, &delta1);
    ensure!(at1 == vec![int(1), int(2)] && roots(1) == at1, "fiber over 1 is {:?}", roots(1));
    // residual quadratic at 0 from z-multiples, no Laurent expansion
    let z1 = RationalFunction::z();
    let g1 = (fx.char_data.tau().unwrap() * &z1).eval(&int(0)).unwrap();
    let g2 = (fx.char_data.delta().unwrap() * &z1.pow(2)).eval(&int(0)).unwrap();
    let at0 = quadratic_roots(&-g1, &g2);
    ensure!(at0 == vec![int(-1), int(1)] && roots(0) == at0, "fiber over 0 is {:?}", roots(0));
    let sym = Matrix::from_fn(2, 2, |i, j| symbol_oracle(&fx.theta, &fx.hecke.base, &int(0), i, j));
    let expected = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
    ensure!(sym == expected, "framed residue matrix differs");
    ensure!(fx.theta.framed_symbol(&int(0), &fx.hecke.base).unwrap() == expected, "library symbol differs");
    let tr = &sym[(0, 0)] + &sym[(1, 1)];
    let det = &sym[(0, 0)] * &sym[(1, 1)] - &sym[(0, 1)] * &sym[(1, 0)];
    ensure!(quadratic_roots(&-tr, &det) == at0, "residue eigenvalues differ from the fiber");
    Ok("{1, 2} over 1, {-1, 1} over 0, residue [[0, 1], [1, 0]]".into())
}

fn integrality() -> Check {
    let fx = fixtures::standard();
    let disc = fx.char_data.discriminant().map_err(|e| e.to_string())?;
    let expected = RationalFunction::new(
        Polynomial::new(vec![int(4), int(-8), int(5)]),
        Polynomial::monomial(int(1), 2),
    )
    .unwrap();
    ensure!(disc == expected, "discriminant is {disc}");
    // multiplicity parity: 5z^2 - 8z + 4 has nonzero discriminant, so two simple
    // roots; z^2 contributes even multiplicity. Odd multiplicities mean non-square.
    let n = disc.num().coeffs();
    let d2 = &n[1] * &n[1] - int(4) * &n[2] * &n[0];
    ensure!(!d2.is_zero(), "numerator has a repeated root");
    ensure!(fx.char_data.is_integral().unwrap(), "standard fixture declared non-integral");
    let red = fixtures::reducible();
    ensure!(red.discriminant().unwrap() == RationalFunction::from_poly(Polynomial::monomial(int(4), 2)), "reducible discriminant");
    ensure!(!red.is_integral().unwrap(), "reducible fixture declared integral");
    Ok("(5z^2 - 8z + 4)/z^2 non-square; 4z^2 square".into())
}

fn canonical() -> Check {
    let base = MarkedBase::new(vec![int(0)], vec![]).unwrap();
    let h = canonical_presentation(&base);
    ensure!((h.s_deg, h.l_deg) == (0, -1), "degrees ({}, {})", h.s_deg, h.l_deg);
    ensure!(h.base.hecke_points().is_empty() && h.quotients.is_empty(), "D not empty");
    ensure!(h.lines[&int(0)] == FiberPair::new(int(0), int(1)), "line at 0");
    ensure!(h.kernel_degree() == 0, "kernel degree {}", h.kernel_degree());
    ensure!(h.slope(&int(0)).unwrap().is_none(), "slope defined at 0");
    let inst = InstanceFile::parse(r#"{"base": {"punctures": ["0"]}}"#).map_err(|e| e.to_string())?;
    let rep = run_instance(Command::Canonical, "inline", &inst, RunOptions::default());
    ensure!(rep.status == Status::Ok, "CLI status {:?}", rep.status);
    ensure!(rep.result["kernel_degree"] == 0 && rep.result["presentation"]["l_deg"] == -1, "CLI report");
    ensure!(rep.result["slopes"][0]["slope"].is_null(), "CLI slope");
    Ok("s = 0, l = -1, D empty, line (0, 1), kernel degree 0, slope undefined".into())
}

fn invariance() -> Check {
    let mut r = rng(109);
    let mut n = 0;
    while n < 100 {
        let h = random_hecke(&mut r, true, (0, 2), (0, 4));
        let Some(cd) = sample::char_data_with_split_fibers(&mut r, &h) else { continue };
        let Ok(theta) = companion_field(&cd, &h) else { continue };
        let b = enh_basis(&h);
        let z = marked_scheme(&cd, &h.base).unwrap();
        let sol = solve_az(&evres_system(&h, &z, &b).unwrap()).unwrap();
        let coeffs: Vec<Rational> = match (&sol.particular, r.random_bool(0.5)) {
            (Some(_), true) => {
                let c: Vec<Rational> = (0..sol.kernel_dim()).map(|_| sample::rational(&mut r, 3, 2)).collect();
                sol.point(&c).unwrap()
            }
            _ => (0..b.dim()).map(|_| sample::rational(&mut r, 3, 2)).collect(),
        };
        let tp = theta_prime_from_section(&coeffs, &b, &theta).unwrap();
        let verdicts = |h: &HeckeData, t: &MatrixField, tp: &MatrixField| -> Result<(bool, bool, bool, Option<usize>), String> {
            let lift = lift_check(h, t, tp).map_err(|e| e.to_string())?;
            let scalar = scalar_condition(h, t, tp).map_err(|e| e.to_string())?;
            let z = marked_scheme(&char_poly(t).map_err(|e| e.to_string())?, &h.base).map_err(|e| e.to_string())?;
            let sol = solve_az(&evres_system(h, &z, &enh_basis(h)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            Ok((lift.lift, lift.integrable, scalar.pass, sol.dimension()))
        };
        let reference = verdicts(&h, &theta, &tp)?;
        let mut h2 = h.clone();
        for v in h2.quotients.values_mut().chain(h2.lines.values_mut()) {
            *v = v.scaled(&sample::nonzero_rational(&mut r, 5, 3));
        }
        ensure!(verdicts(&h2, &theta, &tp)? == reference, "rescaling changed a verdict");
        let k = r.random_range(-3..=3);
        ensure!(
            verdicts(&h, &theta.with_bundle_shift(k), &tp.with_bundle_shift(k))? == reference,
            "bundle shift {k} changed a verdict"
        );
        let shifted = companion_field_shifted(&cd, &h, k).map_err(|e| e.to_string())?;
        let tps = theta_prime_from_section(&coeffs, &b, &shifted).map_err(|e| e.to_string())?;
        ensure!(verdicts(&h2, &shifted, &tps)? == reference, "combined change altered a verdict");
        n += 1;
    }
    Ok(format!("{n} instances, lift/integrable/scalar/A_Z verdicts unchanged"))
}

fn random_instance(r: &mut ChaCha8Rng) -> InstanceFile {
    let h = random_hecke(r, false, (-1, 3), (-1, 5));
    let rank = r.random_range(1..=3);
    let bundle = sample::split_bundle(r, &h.base, rank);
    let theta = sample::field(r, &bundle, &SectionSpace::uniform(&h.base, h.s_deg, 1));
    let tp = sample::field(r, &bundle, &SectionSpace::uniform(&h.base, h.l_deg, 1));
    let mut inst = InstanceFile::from_parts(&h, &theta, r.random_bool(0.7).then_some(&tp));
    if r.random_bool(0.5) {
        let twist = SectionSpace::uniform(&h.base, h.s_deg, 1);
        let cd = CharData::rank_two(twist.clone(), sample::section(r, &twist), sample::section(r, &twist.power(2))).unwrap();
        inst.char_data = Some(loghecke::instance::CharJson {
            tau: (&cd.coeffs()[0]).into(),
            delta: (&cd.coeffs()[1]).into(),
        });
    }
    if r.random_bool(0.3) {
        inst.options = Some(loghecke::instance::OptionsJson { seed: Some(r.random()), samples: Some(r.random_range(0..50)) });
    }
    inst
}

fn serialization() -> Check {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("instances");
    let mut files: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    files.sort();
    ensure!(!files.is_empty(), "no instance fixtures found");
    let round = |inst: &InstanceFile, what: &str| -> Result<(), String> {
        let text = inst.print();
        let back = InstanceFile::parse(&text).map_err(|e| format!("{what}: {e}"))?;
        ensure!(&back == inst, "{what}: parse(print(x)) != x");
        ensure!(back.print() == text, "{what}: printed form not stable");
        Ok(())
    };
    for f in &files {
        let text = std::fs::read_to_string(f).map_err(|e| e.to_string())?;
        let inst = InstanceFile::parse(&text).map_err(|e| format!("{}: {e}", f.display()))?;
        round(&inst, &f.display().to_string())?;
    }
    let fx = fixtures::standard();
    round(&InstanceFile::from_parts(&fx.hecke, &fx.theta, Some(&fx.theta_prime_equal())), "standard fixture")?;
    let mut r = rng(110);
    for i in 0..100 {
        let inst = random_instance(&mut r);
        round(&inst, &format!("random instance {i}"))?;
        let back = InstanceFile::parse(&inst.print()).unwrap();
        ensure!(back.hecke().map_err(|e| e.to_string())? == inst.hecke().unwrap(), "random instance {i}: Hecke data changed");
        ensure!(back.theta().map_err(|e| e.to_string())? == inst.theta().unwrap(), "random instance {i}: theta changed");
    }
    Ok(format!("{} fixture files, standard fixture, 100 random instances", files.len()))
}
