use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::{AdmissiblePsi, Weight};
use crate::quad::{bromwich, integrate_vertical_line_panels, QuadResult, Tolerance};

/// Panel width on the line: at most one period of ψ(x)^{-iτ}.
pub fn inversion_panel_width(psi_x: f64) -> f64 {
    let l = psi_x.ln().abs();
    if l > 0.0 {
        (2.0 * PI / l).min(1.0)
    } else {
        1.0
    }
}

fn prefactor(psi: &AdmissiblePsi, omega: &Weight, x: f64) -> Result<(f64, Complex64)> {
    if !(x > 0.0) {
        return Err(Error::invalid(format!("inversion point x = {x} must be positive")));
    }
    let u = psi.eval(x)?;
    let w = omega.eval(x)?;
    if w == 0.0 || !w.is_finite() {
        return Err(Error::domain(format!("omega({x}) = {w} cannot be divided out")));
    }
    Ok((u, Complex64::new(0.0, 2.0 * PI * w)))
}

/// (1 / (2πi ω(x))) ∫_{γ-i∞}^{γ+i∞} F(p) ψ(x)^{-p} dp, truncated by doubling.
pub fn mellin_inverse<F>(
    big_f: F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    x: f64,
    gamma: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let (u, scale) = prefactor(psi, omega, x)?;
    let ln_u = u.ln();
    let g = |p: Complex64| Ok(big_f(p)? * (-p * ln_u).exp());
    let line_tol = Tolerance { abs_tol: tol.abs_tol * scale.norm(), ..*tol };
    let r = bromwich(g, gamma, inversion_panel_width(u), &line_tol)?;
    Ok(r.result.scale(scale.inv()))
}

/// As [`mellin_inverse`] on the fixed segment |Im p| ≤ T.
pub fn mellin_inverse_segment<F>(
    big_f: F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    x: f64,
    gamma: f64,
    t_max: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let (u, scale) = prefactor(psi, omega, x)?;
    let ln_u = u.ln();
    let g = |p: Complex64| Ok(big_f(p)? * (-p * ln_u).exp());
    let line_tol = Tolerance { abs_tol: tol.abs_tol * scale.norm(), ..*tol };
    let r = integrate_vertical_line_panels(g, gamma, t_max, inversion_panel_width(u), &line_tol)?;
    Ok(r.scale(scale.inv()))
}
