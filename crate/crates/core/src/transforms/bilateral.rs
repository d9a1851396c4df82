use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::funcspace::Expr;
use crate::quad::{integrate_whole_line, QuadResult, Tolerance};

/// ∫_{-∞}^{∞} K(ψ(x)) ω(x) f(x) ψ'(x) dx for a kernel K.
fn whole_line_transform<K>(
    f: &Expr,
    psi: &Expr,
    omega: &Expr,
    kernel: K,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    K: Fn(f64) -> Complex64 + Sync,
{
    let psi_prime = psi.derivative()?;
    integrate_whole_line(
        |x| {
            let v = f.eval(x)?;
            if v == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let w = omega.eval(x)? * psi_prime.eval(x)?;
            if w == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            Ok(kernel(psi.eval(x)?) * (v * w))
        },
        tol,
    )
}

/// ∫_{-∞}^{∞} e^{-pψ(x)} ω(x) f(x) ψ'(x) dx with ψ, ω given on ℝ.
pub fn laplace_bilateral(
    f: &Expr,
    psi: &Expr,
    omega: &Expr,
    p: Complex64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    whole_line_transform(f, psi, omega, |u| (-p * u).exp(), tol)
}

/// (1/√(2π)) ∫_{-∞}^{∞} e^{-ikψ(x)} ω(x) f(x) ψ'(x) dx with ψ, ω given on ℝ.
pub fn fourier_psi_omega(
    f: &Expr,
    psi: &Expr,
    omega: &Expr,
    k: f64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    let r = whole_line_transform(f, psi, omega, |u| Complex64::new(0.0, -k * u).exp(), tol)?;
    Ok(r.scale(Complex64::new(1.0 / (2.0 * PI).sqrt(), 0.0)))
}
