//! The builtin identity suite.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_convolution_theorem, check_identity, Identity, IdentityParams, IdentityReport};
use crate::error::Result;
use crate::funcspace::{parse_expr, AdmissiblePsi, Weight};
use crate::quad::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub enum SuiteCheck {
    Identity(Identity, IdentityParams),
    /// The product rule with a second function g.
    Convolution { g: String },
}

/// One suite item; functions are kept as source text.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub label: String,
    pub check: SuiteCheck,
    pub f: String,
    pub psi: String,
    pub omega: String,
    pub p: Complex64,
}

impl SuiteEntry {
    /// The identity name used for filtering.
    pub fn family(&self) -> &str {
        self.label.split('/').next().unwrap_or(&self.label)
    }

    pub fn run(&self, tol: &Tolerance, threshold: Option<f64>) -> Result<IdentityReport> {
        let f = parse_expr(&self.f)?;
        let psi = AdmissiblePsi::parse(&self.psi)?;
        let omega = Weight::parse(&self.omega)?;
        let mut report = match &self.check {
            SuiteCheck::Identity(id, params) => {
                let params = IdentityParams { threshold: threshold.or(params.threshold), ..*params };
                check_identity(*id, &f, &psi, &omega, self.p, &params, tol)?
            }
            SuiteCheck::Convolution { g } => {
                let g = parse_expr(g)?;
                let mut r = check_convolution_theorem(&f, &g, &psi, &omega, self.p, tol)?;
                if let Some(t) = threshold {
                    r = IdentityReport { threshold: t, ..r };
                    let measure = if r.rhs.norm() < super::RHS_ZERO { r.abs_diff } else { r.rel_diff };
                    r.passed = measure < t;
                }
                r
            }
        };
        report.identity_name = self.label.clone();
        Ok(report)
    }
}

fn entry(label: &str, check: SuiteCheck, f: &str, psi: &str, omega: &str, p: f64) -> SuiteEntry {
    SuiteEntry {
        label: label.to_string(),
        check,
        f: f.to_string(),
        psi: psi.to_string(),
        omega: omega.to_string(),
        p: Complex64::new(p, 0.0),
    }
}

fn id(identity: Identity, params: IdentityParams) -> SuiteCheck {
    SuiteCheck::Identity(identity, params)
}

/// Classical cases plus general (ψ, ω) cases for every rule.
pub fn builtin_suite() -> Vec<SuiteEntry> {
    let d = IdentityParams::default();
    let (lp, wl) = ("ln(1+x)", "1+x");
    let (qp, wq) = ("x + x^2/2", "1+x");
    let e = "exp(-x)";
    let xe = "x*exp(-x)";
    let neg = IdentityParams { alpha: Complex64::new(-0.5, 0.0), ..d };
    let two = IdentityParams { n: 2, ..d };
    let half = IdentityParams { shift: Complex64::new(0.5, 0.0), ..d };
    let cplx = IdentityParams { shift: Complex64::new(2.0, 1.0), ..d };
    vec![
        entry("shifting/general", id(Identity::Shifting, d), e, lp, wl, 0.8),
        entry("shifting/complex-shift", id(Identity::Shifting, cplx), e, lp, wl, 0.8),
        entry("shifting/quadratic", id(Identity::Shifting, half), e, qp, wq, 0.8),
        entry("shifting-literal/general", id(Identity::ShiftingLiteral, d), e, lp, wl, 0.8),
        entry("derivative/classical", id(Identity::Derivative, d), e, "x", "1", 1.7),
        entry("derivative/general", id(Identity::Derivative, two), e, lp, wl, 2.5),
        entry("rl-integral/classical", id(Identity::RlIntegral, d), e, "x", "1", 0.3),
        entry("rl-integral/general", id(Identity::RlIntegral, d), e, qp, wq, 0.3),
        entry("rl-integral-negative-order/general", id(Identity::RlIntegralNegativeOrder, neg), e, qp, wq, 0.8),
        entry("rl-derivative/classical", id(Identity::RlDerivative, d), e, "x", "1", 0.8),
        entry("rl-derivative/general", id(Identity::RlDerivative, d), e, qp, wq, 0.8),
        entry("rl-derivative-mu/general", id(Identity::RlDerivativeMu, d), e, qp, wq, 0.5),
        entry("rl-derivative-mu-literal/general", id(Identity::RlDerivativeMuLiteral, d), e, qp, wq, 0.5),
        entry("caputo/general", id(Identity::Caputo, d), xe, qp, wq, 0.8),
        entry("hilfer/general", id(Identity::Hilfer, d), xe, qp, wq, 0.8),
        entry("inversion/general", id(Identity::Inversion, d), e, lp, wl, 1.5),
        entry("laplace/classical", id(Identity::Laplace, d), e, "x", "1", 1.5),
        entry("laplace/general", id(Identity::Laplace, d), e, lp, wl, 1.5),
        entry("fourier/classical", id(Identity::Fourier, d), "exp(-x^2)", "x", "1", 0.0),
        entry("convolution/classical", SuiteCheck::Convolution { g: e.into() }, e, "x", "1", 1.5),
        entry("convolution/log", SuiteCheck::Convolution { g: "(1+x)^(-2)".into() }, "(1+x)^(-2)", lp, "1", 1.0),
        entry("convolution/general", SuiteCheck::Convolution { g: xe.into() }, e, qp, wq, 1.5),
    ]
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub diagnostics: usize,
    /// Entries that stopped with an error.
    pub errors: usize,
}

/// Runs the entries whose identity name matches `filter` (all if `None`),
/// in parallel, returning reports in suite order.
pub fn run_suite(
    entries: &[SuiteEntry],
    filter: Option<&str>,
    tol: &Tolerance,
    threshold: Option<f64>,
) -> (Vec<IdentityReport>, SuiteSummary) {
    let chosen: Vec<&SuiteEntry> =
        entries.iter().filter(|e| filter.map_or(true, |f| e.family() == f || e.label == f)).collect();
    let outcomes: Vec<(IdentityReport, bool)> = chosen
        .par_iter()
        .map(|e| match e.run(tol, threshold) {
            Ok(r) => (r, false),
            Err(err) => {
                let nan = Complex64::new(f64::NAN, f64::NAN);
                let mut r = IdentityReport::compare(&e.label, nan, nan, threshold.unwrap_or(0.0));
                r.passed = false;
                r.note(format!("error: {err}"));
                if let SuiteCheck::Identity(id, _) = &e.check {
                    r.diagnostic = id.is_diagnostic();
                }
                (r, true)
            }
        })
        .collect();
    let mut summary = SuiteSummary { total: outcomes.len(), ..Default::default() };
    for (r, errored) in &outcomes {
        if r.diagnostic {
            summary.diagnostics += 1;
        } else if r.passed {
            summary.passed += 1;
        } else {
            summary.failed += 1;
        }
        if *errored {
            summary.errors += 1;
        }
    }
    (outcomes.into_iter().map(|(r, _)| r).collect(), summary)
}
