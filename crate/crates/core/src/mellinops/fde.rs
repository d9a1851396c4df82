//! ψ(x)^α 𝒟^α y = g for 1 < α ≤ 2, solved as y = h ∗ g with
//! h(x) = (1 − ψ(x))₊^{α−1} / (ω(x) ψ(x)^α Γ(α)).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fracops::rl_derivative;
use crate::funcspace::{parse_expr, AdmissiblePsi, Expr, Function, Weight};
use crate::quad::{integrate_finite_nodes, Node, QuadResult, Tolerance};
use crate::special::{gamma, gamma_ratio};

#[derive(Debug, Clone)]
pub struct FdeProblem {
    pub alpha: f64,
    pub g: Expr,
    pub psi: AdmissiblePsi,
    pub omega: Weight,
}

impl FdeProblem {
    pub fn new(alpha: f64, g: Expr, psi: AdmissiblePsi, omega: Weight) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("alpha = {alpha} outside (1, 2]")));
        }
        Ok(FdeProblem { alpha, g, psi, omega })
    }
}

/// Sources (ψ, ω, g) of the named problems `case1` … `case5`; all use α = 1.5.
pub fn fde_preset_sources(name: &str) -> Result<(&'static str, &'static str, &'static str)> {
    Ok(match name {
        "case1" => ("x", "1", "exp(-x)"),
        "case2" => ("ln(1+x)", "1", "exp(-x)"),
        "case3" => ("x", "1", "x^(-2)"),
        "case4" => ("ln(1+x)", "exp(x)", "x^2"),
        "case5" => ("ln(x)", "x^1.5", "exp(-x)"),
        other => return Err(Error::invalid(format!("unknown preset '{other}'"))),
    })
}

/// Order shared by the presets.
pub const FDE_PRESET_ALPHA: f64 = 1.5;

/// Named problems: `case1` … `case4`; `case5` has an inadmissible ψ and
/// is rejected.
pub fn fde_preset(name: &str) -> Result<FdeProblem> {
    let (psi, omega, g) = fde_preset_sources(name)?;
    FdeProblem::new(FDE_PRESET_ALPHA, parse_expr(g)?, AdmissiblePsi::parse(psi)?, Weight::parse(omega)?)
}

pub fn fde_kernel_h(psi: &AdmissiblePsi, omega: &Weight, alpha: f64, x: f64) -> Result<f64> {
    let u = psi.eval(x)?;
    if u >= 1.0 {
        return Ok(0.0);
    }
    Ok((1.0 - u).powf(alpha - 1.0) / (omega.eval(x)? * u.powf(alpha) * gamma(alpha)?))
}

/// (1−ψ(s))^{α−1} ψ(s)^{−α−1} ψ'(s) ω(Y) g(Y), assembled in logarithms.
fn core(p: &FdeProblem, psi_x: f64, s: f64, one_minus: f64) -> Result<f64> {
    if !(one_minus > 0.0) {
        return Ok(0.0);
    }
    let psi_s = p.psi.eval(s)?;
    if !(psi_s > 0.0) {
        return Err(Error::domain(format!("psi({s}) = {psi_s} is not positive")));
    }
    let ratio = psi_x / psi_s;
    let y = if ratio.is_finite() { p.psi.inverse(ratio)? } else { f64::INFINITY };
    let gy = p.g.eval(y)?;
    if gy == 0.0 {
        return Ok(0.0);
    }
    let wy = p.omega.eval(y)?;
    if wy == 0.0 {
        return Ok(0.0);
    }
    let mag = (p.alpha - 1.0) * one_minus.ln() - (p.alpha + 1.0) * psi_s.ln()
        + p.psi.prime(s)?.ln()
        + wy.ln()
        + gy.abs().ln();
    let v = gy.signum() * mag.exp();
    if !v.is_finite() {
        return Err(Error::Divergence { x: s, detail: format!("integrand overflows at s = {s:e}") });
    }
    Ok(v)
}

/// The solution integrand in s, including the 1/(ω(x)Γ(α)) prefactor.
pub fn fde_integrand(problem: &FdeProblem, x: f64, s: f64) -> Result<f64> {
    let psi_s = problem.psi.eval(s)?;
    let pre = problem.omega.eval(x)? * gamma(problem.alpha)?;
    Ok(core(problem, problem.psi.eval(x)?, s, 1.0 - psi_s)? / pre)
}

/// y(x) from the integral over (0, ψ⁻¹(1)).
pub fn solve_fde(problem: &FdeProblem, x: f64, tol: &Tolerance) -> Result<QuadResult> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("solution needs x > 0, got {x}")));
    }
    let psi = &problem.psi;
    let b = psi.inverse(1.0)?;
    let gap_b = 1.0 - psi.eval(b)?;
    let psi_x = psi.eval(x)?;
    let r = integrate_finite_nodes(
        |n: Node| {
            let one_minus = gap_b + psi.increment(b, n.to_hi)?;
            Ok(Complex64::new(core(problem, psi_x, n.x, one_minus)?, 0.0))
        },
        0.0,
        b,
        tol,
    )?;
    let pre = problem.omega.eval(x)? * gamma(problem.alpha)?;
    Ok(r.scale(Complex64::new(1.0 / pre, 0.0)))
}

/// (1/Γ(α)) ∫₀¹ (1−s)^{α−1} s^{−α−1} g(x/s) ds.
pub fn fde_case1(g: &Expr, alpha: f64, x: f64, tol: &Tolerance) -> Result<QuadResult> {
    let r = integrate_finite_nodes(
        |n: Node| {
            let s = n.x;
            let gv = g.eval(x / s)?;
            if gv == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let mag = (alpha - 1.0) * n.to_hi.ln() - (alpha + 1.0) * s.ln() + gv.abs().ln();
            Ok(Complex64::new(gv.signum() * mag.exp(), 0.0))
        },
        0.0,
        1.0,
        tol,
    )?;
    Ok(r.scale(Complex64::new(1.0 / gamma(alpha)?, 0.0)))
}

/// xⁿ Γ(−α−n/k)/Γ(−n/k) for ψ = x^k, ω = 1, g = xⁿ.
pub fn fde_closed_case3(k: f64, n: f64, alpha: f64, x: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::invalid(format!("k = {k} must be positive")));
    }
    let e = -alpha - n / k;
    if !(e > 0.0) {
        return Err(Error::Divergence {
            x: 0.0,
            detail: format!("exponent -alpha - n/k = {e} is not positive; the integral diverges at s = 0"),
        });
    }
    let r = gamma_ratio(Complex64::new(e, 0.0), Complex64::new(-n / k, 0.0));
    let v = r.finite().ok_or(Error::Pole(Complex64::new(e, 0.0)))?;
    Ok(x.powf(n) * v.re)
}

/// ψ(x)^α D^α y(x) − g(x), with the RL derivative based at 0.
pub fn fde_residual<F>(problem: &FdeProblem, y: &F, x: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    let alpha = Complex64::new(problem.alpha, 0.0);
    let d = rl_derivative(y, &problem.psi, &problem.omega, alpha, 0.0, x, tol)?;
    let scale = problem.psi.eval(x)?.powf(problem.alpha);
    let mut r = d.scale(Complex64::new(scale, 0.0));
    r.value -= problem.g.eval(x)?;
    Ok(r)
}

/// The Case 4 integrand as printed: ω = e^x, ψ = ln(1+x), g = x².
pub fn paper_case4_integrand(alpha: f64, x: f64, s: f64) -> Result<f64> {
    let l = (s + 1.0).ln();
    let trunc = if 1.0 - l > 0.0 { (1.0 - l).powf(alpha - 1.0) } else { 0.0 };
    if trunc == 0.0 {
        return Ok(0.0);
    }
    let inner = ((x + 1.0).ln() / l).exp() - 1.0;
    let v = trunc / l.powf(alpha) * inner.exp() * inner * inner / (s + 1.0) / l;
    Ok(v / (x.exp() * gamma(alpha)?))
}

/// The Case 5 integrand as printed: ω = x^α, ψ = log x.
pub fn paper_case5_integrand(alpha: f64, g: &Expr, x: f64, s: f64) -> Result<f64> {
    let l = s.ln();
    let trunc = if 1.0 - l > 0.0 { (1.0 - l).powf(alpha - 1.0) } else { 0.0 };
    if trunc == 0.0 {
        return Ok(0.0);
    }
    let y = x.powf(1.0 / l);
    let v = trunc * x.powf(alpha / l) * g.eval(y)? / (s * l);
    Ok(v / (x.powf(alpha) * gamma(alpha)?))
}

/// The general integrand with ω = x^α, ψ = log x, on the principal branch.
pub fn rederived_case5_integrand(alpha: f64, g: &Expr, x: f64, s: f64) -> Result<Complex64> {
    let psi = |t: f64| t.ln();
    let omega = |t: f64| t.powf(alpha);
    let psi_s = Complex64::new(psi(s), 0.0);
    let one_minus = 1.0 - psi(s);
    if !(one_minus > 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let y = (psi(x) / psi(s)).exp();
    let h = one_minus.powf(alpha - 1.0) / psi_s.powf(alpha);
    let v = h * omega(y) * g.eval(y)? * (1.0 / s) / psi_s;
    Ok(v / (omega(x) * gamma(alpha)?))
}
