//! The convolution matched to the transform and its product rule.

use std::sync::Mutex;

use num_complex::Complex64;

use super::{IdentityReport, FD_THRESHOLD};
use crate::error::Result;
use crate::funcspace::{AdmissiblePsi, Expr, Function, Weight};
use crate::quad::{integrate_semi_infinite, QuadResult, Tolerance};
use crate::transforms::{mellin_of, Method};

/// (f ∗ g)(x) = 1/ω(x) ∫₀^∞ ω(s) f(s) ω(Y) g(Y) ψ'(s)/ψ(s) ds with
/// Y = ψ⁻¹(ψ(x)/ψ(s)), for arbitrary functions.
///
/// Nodes where ψ⁻¹ overflows contribute nothing.
pub fn convolve_functions<F, G>(
    f: &F,
    g: &G,
    psi: &AdmissiblePsi,
    omega: &Weight,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
    G: Function + ?Sized,
{
    if !(x > 0.0) {
        return Err(crate::error::Error::domain(format!("convolution needs x > 0, got {x}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let psi_x = psi.eval(x)?;
    let r = integrate_semi_infinite(
        |s: f64| {
            let fv = f.at(s)?;
            if fv == zero {
                return Ok(zero);
            }
            let psi_s = psi.eval(s)?;
            if psi_s <= 0.0 {
                return Ok(zero);
            }
            let ratio = psi_x / psi_s;
            if !ratio.is_finite() {
                return Ok(zero);
            }
            let y = psi.inverse(ratio)?;
            if !y.is_finite() {
                return Ok(zero);
            }
            let gv = g.at(y)?;
            if gv == zero {
                return Ok(zero);
            }
            let w = omega.eval(s)? * omega.eval(y)? * psi.prime(s)? / psi_s;
            Ok(fv * gv * w)
        },
        tol,
    )?;
    Ok(r.scale(Complex64::new(1.0 / omega.eval(x)?, 0.0)))
}

/// (f ∗ g)(x) for expressions.
pub fn convolve(
    f: &Expr,
    g: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    convolve_functions(f, g, psi, omega, x, tol)
}

/// 𝓜[f ∗ g](p) against 𝓜[f](p)·𝓜[g](p).
pub fn check_convolution_theorem(
    f: &Expr,
    g: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    p: Complex64,
    tol: &Tolerance,
) -> Result<IdentityReport> {
    let outer = Tolerance { rel_tol: tol.rel_tol.max(1e-8), abs_tol: tol.abs_tol.max(1e-12), ..*tol };
    let inner_ok = Mutex::new(true);
    let conv = |x: f64| {
        let r = convolve(f, g, psi, omega, x, tol)?;
        *inner_ok.lock().unwrap() &= r.converged;
        Ok(r.value)
    };
    let lhs = mellin_of(&conv, psi, omega, p, Method::Direct, &outer)?;
    let big_f = mellin_of(f, psi, omega, p, Method::Direct, tol)?;
    let big_g = mellin_of(g, psi, omega, p, Method::Direct, tol)?;
    let rhs = QuadResult {
        value: big_f.value * big_g.value,
        err_abs: big_f.err_abs * big_g.value.norm() + big_g.err_abs * big_f.value.norm(),
        n_evals: big_f.n_evals + big_g.n_evals,
        converged: big_f.converged && big_g.converged,
    };
    let mut report = IdentityReport::from_results("convolution", &lhs, &rhs, FD_THRESHOLD);
    if !*inner_ok.lock().unwrap() {
        report.note("some inner convolution integrals did not converge");
    }
    Ok(report)
}
