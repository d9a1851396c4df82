use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{AdmissiblePsi, Expr, Function, Weight};
use crate::quad::{integrate_semi_infinite, integrate_semi_infinite_nodes, Node, QuadResult, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// ∫₀^∞ ψ^{p-1} ω f ψ' dx.
    Direct,
    /// Classical transform of u ↦ ω(ψ⁻¹u) f(ψ⁻¹u).
    Conjugated,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "conjugated" => Ok(Method::Conjugated),
            other => Err(Error::invalid(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransformJob {
    pub f: Expr,
    pub psi: AdmissiblePsi,
    pub omega: Weight,
    pub p_points: Vec<Complex64>,
    pub tol: Tolerance,
    pub method: Method,
}

fn is_zero(v: Complex64) -> bool {
    v.re == 0.0 && v.im == 0.0
}

/// u^{p-1} for u > 0.
pub(crate) fn power(u: f64, p: Complex64) -> Complex64 {
    ((p - 1.0) * u.ln()).exp()
}

/// ∫₀^∞ u^{p-1} φ(u) du.
pub fn mellin_classical<F>(phi: &F, p: Complex64, tol: &Tolerance) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    integrate_semi_infinite(
        |u| {
            let v = phi.at(u)?;
            if is_zero(v) {
                return Ok(v);
            }
            Ok(v * power(u, p))
        },
        tol,
    )
}

/// The transform of a general (possibly complex) function.
pub fn mellin_of<F>(
    f: &F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    p: Complex64,
    method: Method,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    match method {
        Method::Direct => integrate_semi_infinite_nodes(
            |n: Node| {
                let x = n.x;
                let v = f.at(x)?;
                if is_zero(v) {
                    return Ok(v);
                }
                let u = psi.eval(x)?;
                if u <= 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                Ok(v * omega.eval(x)? * psi.prime(x)? * power(u, p))
            },
            tol,
        ),
        Method::Conjugated => {
            let phi = |u: f64| {
                let x = psi.inverse(u)?;
                if !x.is_finite() {
                    return Ok(vanished_tail(f, omega));
                }
                let v = f.at(x)?;
                if is_zero(v) {
                    return Ok(v);
                }
                Ok(v * omega.eval(x)?)
            };
            mellin_classical(&phi, p, tol)
        }
    }
}

/// Value used past the point where ψ⁻¹ overflows: zero if ω·f has already
/// vanished at the largest finite x, NaN otherwise.
fn vanished_tail<F: Function + ?Sized>(f: &F, omega: &Weight) -> Complex64 {
    let x = f64::MAX;
    match (f.at(x), omega.eval(x)) {
        (Ok(v), Ok(w)) if is_zero(v * w) => Complex64::new(0.0, 0.0),
        _ => Complex64::new(f64::NAN, 0.0),
    }
}

/// F(p) = ∫₀^∞ ψ(x)^{p-1} ω(x) f(x) ψ'(x) dx.
pub fn mellin_forward(
    f: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    p: Complex64,
    method: Method,
    tol: &Tolerance,
) -> Result<QuadResult> {
    mellin_of(f, psi, omega, p, method, tol)
}

/// One result per p-point, in input order.
pub fn mellin_forward_job(job: &TransformJob) -> Result<Vec<Result<QuadResult>>> {
    if job.p_points.is_empty() {
        return Err(Error::invalid("no p-points given"));
    }
    Ok(job
        .p_points
        .par_iter()
        .map(|&p| mellin_forward(&job.f, &job.psi, &job.omega, p, job.method, &job.tol))
        .collect())
}
