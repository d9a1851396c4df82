//! The subcommands.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{parse_complex, parse_points, Command, JobConfig};
use super::output::{Cell, Report};
use super::{CliError, Status};
use crate::fracops::{apply, conjugated_op, FracKind, FracSpec};
use crate::funcspace::{parse_complex_expr, parse_expr, AdmissiblePsi, Expr, Weight};
use crate::mellinops::{
    builtin_suite, fde_case1, fde_closed_case3, fde_preset_sources, fde_residual, run_suite, solve_fde, FdeProblem,
    Identity, FDE_PRESET_ALPHA,
};
use crate::quad::QuadResult;
use crate::transforms::{
    estimate_strip, fourier_psi_omega, laplace_bilateral, mellin_forward, mellin_inverse, Method, Strip,
};

fn config<T>(key: &str, r: crate::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Config(format!("--{key}: {e}")))
}

fn expr(job: &JobConfig, key: &str) -> Result<Expr, CliError> {
    config(key, parse_expr(job.require(key)?))
}

fn psi_of(job: &JobConfig) -> Result<AdmissiblePsi, CliError> {
    config("psi", AdmissiblePsi::parse(job.get("psi").unwrap_or("x")))
}

fn omega_of(job: &JobConfig) -> Result<Weight, CliError> {
    config("omega", Weight::parse(job.get("omega").unwrap_or("1")))
}

/// Rows that failed outright, and rows that did not converge.
#[derive(Default)]
struct Tally {
    errors: Vec<String>,
    unconverged: usize,
}

impl Tally {
    fn record(&mut self, label: String, r: &crate::Result<QuadResult>) {
        match r {
            Ok(q) if q.converged => {}
            Ok(_) => self.unconverged += 1,
            Err(e) => self.errors.push(format!("{label}: {e}")),
        }
    }

    fn finish(self, report: &mut Report) -> Status {
        report.summarize("unconverged", self.unconverged);
        report.summarize("errors", self.errors.clone());
        if self.errors.is_empty() && self.unconverged == 0 {
            Status::Ok
        } else {
            let mut msgs = self.errors;
            if self.unconverged > 0 {
                msgs.push(format!("{} row(s) did not converge", self.unconverged));
            }
            Status::Numerical(msgs)
        }
    }
}

fn quad_cells(r: &crate::Result<QuadResult>) -> Vec<Cell> {
    match r {
        Ok(q) => vec![q.value.re.into(), q.value.im.into(), q.err_abs.into(), q.converged.into()],
        Err(_) => vec![f64::NAN.into(), f64::NAN.into(), f64::NAN.into(), false.into()],
    }
}

fn strip_json(s: &Strip) -> Value {
    let end = |v: f64| if v.is_finite() { json!(v + 0.0) } else { json!(v.to_string()) };
    json!({ "lower": end(s.lower), "upper": end(s.upper) })
}

pub fn transform(job: &JobConfig) -> Result<(Report, Status), CliError> {
    let tol = job.tolerance()?;
    let f = expr(job, "f")?;
    let points = parse_points("p", job.require("p")?)?;
    let method: Method = config("method", job.get("method").unwrap_or("direct").parse())?;
    let kind = job.get("kind").unwrap_or("mellin");
    let mut report = Report::new(&["p_re", "p_im", "value_re", "value_im", "err_abs", "converged"]);
    let mut outside = vec![false; points.len()];
    let results: Vec<crate::Result<QuadResult>> = match kind {
        "mellin" => {
            let (psi, omega) = (psi_of(job)?, omega_of(job)?);
            if let Ok(est) = estimate_strip(&f, &psi, &omega) {
                for (o, p) in outside.iter_mut().zip(&points) {
                    *o = est.empty || !est.strip.contains(*p);
                }
                report.summarize("strip", strip_json(&est.strip));
                report.summarize("strip_warnings", est.warnings);
            }
            points.par_iter().map(|&p| mellin_forward(&f, &psi, &omega, p, method, &tol)).collect()
        }
        "laplace" | "fourier" => {
            let psi = config("psi", parse_expr(job.get("psi").unwrap_or("x")))?;
            let omega = config("omega", parse_expr(job.get("omega").unwrap_or("1")))?;
            if kind == "laplace" {
                points.par_iter().map(|&p| laplace_bilateral(&f, &psi, &omega, p, &tol)).collect()
            } else {
                points.par_iter().map(|&p| fourier_psi_omega(&f, &psi, &omega, p.re, &tol)).collect()
            }
        }
        other => return Err(CliError::Config(format!("--kind: unknown transform '{other}'"))),
    };
    let mut tally = Tally::default();
    for ((p, r), out) in points.iter().zip(&results).zip(&outside) {
        let r = match r {
            Ok(q) if *out => Ok(QuadResult { converged: false, ..*q }),
            other => other.clone(),
        };
        tally.record(format!("p = {p}"), &r);
        let mut row = vec![p.re.into(), p.im.into()];
        row.extend(quad_cells(&r));
        report.push(row);
    }
    if outside.iter().any(|&o| o) {
        report.summarize("note", "points outside the estimated strip are marked unconverged");
    }
    let status = tally.finish(&mut report);
    Ok((report, status))
}

/// Real part of the integration line inside `strip`.
fn default_gamma(strip: &Strip) -> f64 {
    match (strip.lower.is_finite(), strip.upper.is_finite()) {
        (true, true) => 0.5 * (strip.lower + strip.upper),
        (true, false) => strip.lower + 1.0,
        (false, true) => strip.upper - 1.0,
        (false, false) => 1.0,
    }
}

pub fn invert(job: &JobConfig) -> Result<(Report, Status), CliError> {
    let tol = job.tolerance()?;
    let xs = job.grid("x")?;
    let (psi, omega) = (psi_of(job)?, omega_of(job)?);
    let roundtrip = job.flag("roundtrip")?;
    let user_strip = match job.get("strip") {
        Some(s) => {
            let b = parse_complex("strip", s)?;
            Some(Strip { lower: b.re, upper: b.im })
        }
        None => None,
    };
    let big_f_expr = match (job.get("F"), roundtrip) {
        (Some(_), true) => return Err(CliError::Config("give either --F or --roundtrip, not both".into())),
        (Some(src), false) => Some(config("F", parse_complex_expr(src))?),
        (None, true) => None,
        (None, false) => return Err(CliError::Config("missing required --F (or --roundtrip)".into())),
    };
    let f = if roundtrip { Some(expr(job, "f")?) } else { None };
    let mut report;
    let mut strip = user_strip;
    if let Some(f) = &f {
        report = Report::new(&["x", "y_re", "y_im", "err_abs", "converged", "f", "abs_diff"]);
        if let Ok(est) = estimate_strip(f, &psi, &omega) {
            report.summarize("estimated_strip", strip_json(&est.strip));
            let s = match strip {
                Some(u) => Strip { lower: u.lower.max(est.strip.lower), upper: u.upper.min(est.strip.upper) },
                None => est.strip,
            };
            strip = Some(s);
        }
    } else {
        report = Report::new(&["x", "y_re", "y_im", "err_abs", "converged"]);
    }
    let gamma = match (job.opt_f64("gamma")?, &strip) {
        (Some(g), _) => g,
        (None, Some(s)) if !s.is_empty() => default_gamma(s),
        (None, Some(_)) => return Ok((report, Status::Numerical(vec!["the strip of analyticity is empty".into()]))),
        (None, None) => return Err(CliError::Config("missing required --gamma (or --strip)".into())),
    };
    report.summarize("gamma", gamma);
    if let Some(s) = &strip {
        report.summarize("strip", strip_json(s));
        if !s.contains(Complex64::new(gamma, 0.0)) {
            let msg = format!("integration line Re p = {gamma} lies outside the strip ({}, {})", s.lower, s.upper);
            return Ok((report, Status::Numerical(vec![msg])));
        }
    }
    let big_f = |p: Complex64| -> crate::Result<Complex64> {
        match (&big_f_expr, &f) {
            (Some(e), _) => e.eval_complex(p),
            (None, Some(f)) => Ok(mellin_forward(f, &psi, &omega, p, Method::Direct, &tol)?.value),
            (None, None) => unreachable!("one source is always configured"),
        }
    };
    let results: Vec<crate::Result<QuadResult>> =
        xs.par_iter().map(|&x| mellin_inverse(big_f, &psi, &omega, x, gamma, &tol)).collect();
    let mut tally = Tally::default();
    let mut max_diff: f64 = 0.0;
    for (&x, r) in xs.iter().zip(&results) {
        tally.record(format!("x = {x}"), r);
        let mut row: Vec<Cell> = vec![x.into()];
        row.extend(quad_cells(r));
        if let Some(f) = &f {
            let fx = f.eval(x).unwrap_or(f64::NAN);
            let d = match r {
                Ok(q) => (q.value - fx).norm(),
                Err(_) => f64::NAN,
            };
            max_diff = if d.is_nan() { f64::NAN } else { max_diff.max(d) };
            row.push(fx.into());
            row.push(d.into());
        }
        report.push(row);
    }
    if f.is_some() {
        report.summarize("max_abs_diff", max_diff);
    }
    let status = tally.finish(&mut report);
    Ok((report, status))
}

pub fn convolve(job: &JobConfig) -> Result<(Report, Status), CliError> {
    let tol = job.tolerance()?;
    let (f, g) = (expr(job, "f")?, expr(job, "g")?);
    let xs = job.grid("x")?;
    let (psi, omega) = (psi_of(job)?, omega_of(job)?);
    let results: Vec<crate::Result<QuadResult>> =
        xs.par_iter().map(|&x| crate::mellinops::convolve(&f, &g, &psi, &omega, x, &tol)).collect();
    let mut report = Report::new(&["x", "value_re", "value_im", "err_abs", "converged"]);
    let mut tally = Tally::default();
    for (&x, r) in xs.iter().zip(&results) {
        tally.record(format!("x = {x}"), r);
        let mut row: Vec<Cell> = vec![x.into()];
        row.extend(quad_cells(r));
        report.push(row);
    }
    let status = tally.finish(&mut report);
    Ok((report, status))
}

pub fn fracop(job: &JobConfig) -> Result<(Report, Status), CliError> {
    let tol = job.tolerance()?;
    let f = expr(job, "f")?;
    let xs = job.grid("x")?;
    let (psi, omega) = (psi_of(job)?, omega_of(job)?);
    let kind: FracKind = config("kind", job.get("kind").unwrap_or("ri").parse())?;
    let alpha = parse_complex("alpha", job.require("alpha")?)?;
    let spec = config("alpha", FracSpec::new(kind, alpha, job.f64_or("beta", 0.5)?, job.f64_or("a", 0.0)?))?;
    let complex = alpha.im != 0.0;
    let mut cols = vec!["x", "direct", "conjugated", "abs_diff", "err_abs", "converged"];
    if complex {
        cols.splice(2..2, ["direct_im"]);
        cols.splice(4..4, ["conjugated_im"]);
    }
    let mut report = Report::new(&cols);
    let results: Vec<(crate::Result<QuadResult>, crate::Result<QuadResult>)> = xs
        .par_iter()
        .map(|&x| (apply(&f, &psi, &omega, &spec, x, &tol), conjugated_op(&f, &psi, &omega, &spec, x, &tol)))
        .collect();
    let mut tally = Tally::default();
    let mut max_diff: f64 = 0.0;
    for (&x, (d, c)) in xs.iter().zip(&results) {
        tally.record(format!("x = {x} (direct)"), d);
        tally.record(format!("x = {x} (conjugated)"), c);
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let dv = d.as_ref().map_or(nan, |q| q.value);
        let cv = c.as_ref().map_or(nan, |q| q.value);
        let diff = (dv - cv).norm();
        max_diff = if diff.is_nan() { f64::NAN } else { max_diff.max(diff) };
        let err = match (d, c) {
            (Ok(a), Ok(b)) => a.err_abs + b.err_abs,
            _ => f64::NAN,
        };
        let ok = matches!((d, c), (Ok(a), Ok(b)) if a.converged && b.converged);
        let mut row: Vec<Cell> = vec![x.into(), dv.re.into()];
        if complex {
            row.push(dv.im.into());
        }
        row.push(cv.re.into());
        if complex {
            row.push(cv.im.into());
        }
        row.extend([diff.into(), err.into(), ok.into()]);
        report.push(row);
    }
    report.summarize("max_abs_diff", max_diff);
    let status = tally.finish(&mut report);
    Ok((report, status))
}

fn fde_problem(job: &JobConfig) -> Result<(FdeProblem, Option<String>), CliError> {
    let preset = job.get("preset");
    let (mut psi, mut omega, mut g, mut alpha) = ("x", "1", None, None);
    if let Some(name) = preset {
        let (p, w, src) = config("preset", fde_preset_sources(name))?;
        (psi, omega, g, alpha) = (p, w, Some(src), Some(FDE_PRESET_ALPHA));
    }
    let overrides = ["g", "psi", "omega", "alpha"].iter().any(|k| job.get(k).is_some());
    let psi = config("psi", AdmissiblePsi::parse(job.get("psi").unwrap_or(psi)))?;
    let omega = config("omega", Weight::parse(job.get("omega").unwrap_or(omega)))?;
    let g = job.get("g").or(g).ok_or_else(|| CliError::Config("missing required --g (or --preset)".into()))?;
    let g = config("g", parse_expr(g))?;
    let alpha = match job.opt_f64("alpha")? {
        Some(a) => a,
        None => alpha.ok_or_else(|| CliError::Config("missing required --alpha (or --preset)".into()))?,
    };
    let problem = config("alpha", FdeProblem::new(alpha, g, psi, omega))?;
    Ok((problem, if overrides { None } else { preset.map(str::to_string) }))
}

pub fn solve_fde_cmd(job: &JobConfig) -> Result<(Report, Status), CliError> {
    let tol = job.tolerance()?;
    let xs = job.grid("x")?;
    let (problem, preset) = fde_problem(job)?;
    let residual = job.flag("residual")?;
    let reference = match preset.as_deref() {
        Some("case1") => Some("case1 formula"),
        Some("case3") => Some("closed form"),
        _ => None,
    };
    let mut cols = vec!["x", "y", "err_abs", "converged"];
    if reference.is_some() {
        cols.push("reference");
    }
    if residual {
        cols.push("residual");
    }
    let mut report = Report::new(&cols);
    let y_fn = |t: f64| -> crate::Result<Complex64> { Ok(solve_fde(&problem, t, &tol)?.value) };
    type Row = (crate::Result<QuadResult>, Option<crate::Result<f64>>, Option<crate::Result<QuadResult>>);
    let rows: Vec<Row> = xs
        .par_iter()
        .map(|&x| {
            let y = solve_fde(&problem, x, &tol);
            let r = reference.map(|_| match preset.as_deref() {
                Some("case1") => fde_case1(&problem.g, problem.alpha, x, &tol).map(|q| q.value.re),
                _ => fde_closed_case3(1.0, -2.0, problem.alpha, x),
            });
            let res = if residual && y.is_ok() { Some(fde_residual(&problem, &y_fn, x, &tol)) } else { None };
            (y, r, res)
        })
        .collect();
    let mut tally = Tally::default();
    let (mut max_ref, mut max_res): (f64, f64) = (0.0, 0.0);
    for (&x, (y, r, res)) in xs.iter().zip(&rows) {
        tally.record(format!("x = {x}"), y);
        let yv = y.as_ref().map_or(f64::NAN, |q| q.value.re);
        let mut row: Vec<Cell> = vec![x.into()];
        row.extend(quad_cells(y).into_iter().enumerate().filter(|(i, _)| *i != 1).map(|(_, c)| c));
        if let Some(r) = r {
            let rv = r.as_ref().copied().unwrap_or(f64::NAN);
            max_ref = max_ref.max((yv - rv).abs() / rv.abs());
            row.push(rv.into());
        }
        if residual {
            let v = match res {
                Some(r) => {
                    tally.record(format!("x = {x} (residual)"), r);
                    r.as_ref().map_or(f64::NAN, |q| q.value.re)
                }
                None => f64::NAN,
            };
            let g = problem.g.eval(x).unwrap_or(f64::NAN);
            max_res = max_res.max(v.abs() / g.abs());
            row.push(v.into());
        }
        report.push(row);
    }
    report.summarize("alpha", problem.alpha);
    if let Some(p) = &preset {
        report.summarize("preset", p.as_str());
    }
    if let Some(r) = reference {
        report.summarize("reference", r);
        report.summarize("max_rel_diff_reference", max_ref);
    }
    if residual {
        report.summarize("max_rel_residual", max_res);
    }
    let status = tally.finish(&mut report);
    Ok((report, status))
}

pub fn verify(job: &JobConfig) -> Result<(Report, Status), CliError> {
    let tol = job.tolerance()?;
    let threshold = job.opt_f64("tol")?;
    if let Some(t) = threshold {
        if !(t > 0.0) {
            return Err(CliError::Config("--tol must be positive".into()));
        }
    }
    let suite = builtin_suite();
    let filter = job.get("identity");
    if let Some(name) = filter {
        let known = name == "convolution"
            || name.parse::<Identity>().is_ok()
            || suite.iter().any(|e| e.label == name);
        if !known {
            return Err(CliError::Config(format!("--identity: unknown identity '{name}'")));
        }
    }
    let (reports, summary) = run_suite(&suite, filter, &tol, threshold);
    let mut report = Report::new(&[
        "identity_name",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_diff",
        "rel_diff",
        "threshold",
        "passed",
        "diagnostic",
        "notes",
    ]);
    for r in &reports {
        report.push(vec![
            r.identity_name.clone().into(),
            r.lhs.re.into(),
            r.lhs.im.into(),
            r.rhs.re.into(),
            r.rhs.im.into(),
            r.abs_diff.into(),
            r.rel_diff.into(),
            r.threshold.into(),
            r.passed.into(),
            r.diagnostic.into(),
            r.notes.clone().into(),
        ]);
    }
    report.json_rows = Some(reports.iter().map(|r| serde_json::to_value(r).expect("reports serialize")).collect());
    for (k, v) in serde_json::to_value(&summary).expect("summary serializes").as_object().into_iter().flatten() {
        report.summarize(k, v.clone());
    }
    let status = if summary.errors > 0 {
        let msgs = reports.iter().filter(|r| r.notes.contains("error:")).map(|r| r.notes.clone()).collect();
        Status::Numerical(msgs)
    } else if summary.failed > 0 {
        let names = reports.iter().filter(|r| r.is_failure()).map(|r| r.identity_name.clone()).collect();
        Status::Failed(names)
    } else {
        Status::Ok
    };
    Ok((report, status))
}

pub fn run(job: &JobConfig) -> Result<(Report, Status), CliError> {
    match job.command {
        Command::Transform => transform(job),
        Command::Invert => invert(job),
        Command::Convolve => convolve(job),
        Command::Fracop => fracop(job),
        Command::SolveFde => solve_fde_cmd(job),
        Command::Verify => verify(job),
    }
}
