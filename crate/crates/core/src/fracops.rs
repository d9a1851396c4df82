//! Weighted fractional integrals and derivatives with respect to ψ.
//!
//! With 𝒟 = (1/ψ')(d/dx + ω'/ω) and n the derivative order attached to α:
//!
//! ```text
//! I^α f(x)      = 1/(Γ(α) ω(x)) ∫ₐˣ (ψ(x) − ψ(t))^{α−1} ω(t) f(t) ψ'(t) dt
//! RL:  D^α f    = 𝒟ⁿ I^{n−α} f
//! Caputo        = I^{n−α} 𝒟ⁿ f
//! Hilfer        = I^{β(n−α)} 𝒟ⁿ I^{(1−β)(n−α)} f
//! ```
//!
//! Every operator also has a conjugated form: the classical operator applied
//! to u ↦ ω(ψ⁻¹u) f(ψ⁻¹u), read at u = ψ(x) and divided by ω(x).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::funcspace::{d_psi_omega_expr, AdmissiblePsi, Expr, Function, Weight};
use crate::quad::{integrate_finite_nodes, Node, QuadResult, Tolerance};
use crate::special::gamma_complex;

/// Finite-difference step relative to the distance from the base point.
const FD_REL_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FracKind {
    RlIntegral,
    RlDerivative,
    Caputo,
    Hilfer,
}

impl std::str::FromStr for FracKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ri" | "rl-integral" => Ok(FracKind::RlIntegral),
            "rd" | "rl-derivative" => Ok(FracKind::RlDerivative),
            "caputo" => Ok(FracKind::Caputo),
            "hilfer" => Ok(FracKind::Hilfer),
            other => Err(Error::invalid(format!("unknown operator kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracSpec {
    #[serde(serialize_with = "crate::ser_complex")]
    pub alpha: Complex64,
    pub kind: FracKind,
    /// Hilfer type, ignored by the other kinds.
    pub beta: f64,
    pub base_point: f64,
}

impl FracSpec {
    pub fn new(kind: FracKind, alpha: Complex64, beta: f64, base_point: f64) -> Result<Self> {
        if !(alpha.re > 0.0) {
            return Err(Error::invalid(format!("order alpha = {alpha} needs a positive real part")));
        }
        if kind == FracKind::Hilfer && !(0.0..=1.0).contains(&beta) {
            return Err(Error::invalid(format!("Hilfer type beta = {beta} outside [0, 1]")));
        }
        if !(base_point >= 0.0) {
            return Err(Error::invalid(format!("base point {base_point} must be non-negative")));
        }
        Ok(FracSpec { alpha, kind, beta, base_point })
    }

    pub fn n(&self) -> usize {
        derivative_order(self.alpha)
    }
}

/// n with n − 1 < Re α < n, and n = α for positive integer orders.
pub fn derivative_order(alpha: Complex64) -> usize {
    if alpha.im == 0.0 && alpha.re.fract() == 0.0 && alpha.re >= 1.0 {
        alpha.re as usize
    } else {
        alpha.re.floor() as usize + 1
    }
}

fn check_order(alpha: Complex64) -> Result<()> {
    if !(alpha.re > 0.0) {
        return Err(Error::invalid(format!("order alpha = {alpha} needs a positive real part")));
    }
    Ok(())
}

fn check_point(a: f64, x: f64) -> Result<()> {
    if !(a >= 0.0) || !(x >= a) {
        return Err(Error::invalid(format!("need 0 <= a <= x, got a = {a}, x = {x}")));
    }
    Ok(())
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Tolerance for integrals that are later differenced.
fn inner_tolerance(tol: &Tolerance) -> Tolerance {
    Tolerance { abs_tol: f64::MIN_POSITIVE, rel_tol: tol.rel_tol.min(1e-13), ..*tol }
}

/// Weighted RL integral of order α with base point a.
pub fn rl_integral<F>(
    f: &F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    alpha: Complex64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    check_order(alpha)?;
    check_point(a, x)?;
    if x == a {
        return Ok(QuadResult::exact(zero()));
    }
    let one = alpha == Complex64::new(1.0, 0.0);
    // For Re α < 1 the value ω(x)f(x) is taken out of the integrand and
    // integrated against the kernel in closed form.
    let pinned = if alpha.re < 1.0 {
        let g = f.at(x).and_then(|v| Ok(v * omega.eval(x)?)).ok();
        g.filter(|g| g.re.is_finite() && g.im.is_finite() && *g != zero())
    } else {
        None
    };
    let g_x = pinned.unwrap_or_else(zero);
    let r = integrate_finite_nodes(
        |n: Node| {
            let v = f.at(n.x)?;
            if v == zero() && pinned.is_none() {
                return Ok(v);
            }
            let w = omega.eval(n.x)?;
            let dpsi = psi.prime(n.x)?;
            if one {
                return Ok(v * w * dpsi);
            }
            let gap = psi.increment(x, n.to_hi)?;
            if !(gap > 0.0) {
                return Err(Error::NonFinite { x: n.x });
            }
            let body = if v == zero() { -g_x } else { v * w - g_x };
            Ok(body * dpsi * ((alpha - 1.0) * gap.ln()).exp())
        },
        a,
        x,
        tol,
    )?;
    let mut r = r;
    if let Some(g) = pinned {
        let span = psi.increment(x, x - a)?;
        r.value += g * (alpha * span.ln()).exp() / alpha;
    }
    let scale = 1.0 / (gamma_complex(alpha)? * omega.eval(x)?);
    Ok(r.scale(scale))
}

/// exp(z) − 1 without cancellation for small z.
fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        z * (1.0 + z * (0.5 + z / 6.0))
    } else {
        z.exp() - 1.0
    }
}

/// I^γ h at x where ω h ψ' is the derivative of a known G, with
/// `delta` = G(x) − G(a).
///
/// The kernel is split at its value on t = a so that the part carried by
/// `delta` is exact; h(x) is also taken out near t = x.
fn rl_integral_anchored<F>(
    h: &F,
    delta: Complex64,
    psi: &AdmissiblePsi,
    omega: &Weight,
    gamma: Complex64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    check_order(gamma)?;
    check_point(a, x)?;
    if x == a {
        return Ok(QuadResult::exact(zero()));
    }
    let psi_a = psi.eval(a)?;
    let span = psi.increment(x, x - a)?;
    let k_a = ((gamma - 1.0) * span.ln()).exp();
    let v_x = h
        .at(x)
        .and_then(|v| Ok(v * omega.eval(x)?))
        .ok()
        .filter(|v| v.re.is_finite() && v.im.is_finite())
        .unwrap_or_else(zero);
    let r = integrate_finite_nodes(
        |n: Node| {
            let v = h.at(n.x)? * omega.eval(n.x)? - v_x;
            if v == zero() {
                return Ok(v);
            }
            let gap = psi.increment(x, n.to_hi)?;
            if !(gap > 0.0) {
                return Err(Error::NonFinite { x: n.x });
            }
            let lo = psi.eval(n.x)? - psi_a;
            let ln_q = if lo < 0.5 * span { (-lo / span).ln_1p() } else { (gap / span).ln() };
            Ok(k_a * expm1_c((gamma - 1.0) * ln_q) * v * psi.prime(n.x)?)
        },
        a,
        x,
        tol,
    )?;
    let closed = k_a * delta + v_x * (gamma * span.ln()).exp() * (1.0 / gamma - 1.0);
    let scale = 1.0 / (gamma_complex(gamma)? * omega.eval(x)?);
    Ok(QuadResult { value: r.value + closed, ..r }.scale(scale))
}

/// Coefficients c_k with (ψ'⁻¹ d/dx)ⁿ G = Σ_k c_k G^{(k)}, k = 1..n.
fn chain_coefficients(psi: &AdmissiblePsi, n: usize) -> Result<Vec<Expr>> {
    let inv = Expr::Const(1.0) / psi.prime_expr().clone();
    let mut c = vec![inv.clone()];
    for _ in 1..n {
        let mut next = Vec::with_capacity(c.len() + 1);
        for k in 0..=c.len() {
            let own = if k < c.len() { c[k].derivative()? } else { Expr::Const(0.0) };
            let lower = if k > 0 { c[k - 1].clone() } else { Expr::Const(0.0) };
            next.push((own + lower) * inv.clone());
        }
        c = next;
    }
    Ok(c)
}

/// 𝒟ⁿ I^γ f at x by finite differences of t ↦ ω(t) I^γ f(t); γ = 0 means f itself.
pub fn d_n_of_integral<F>(
    f: &F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    n: usize,
    gamma: Complex64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    check_point(a, x)?;
    let h = FD_REL_STEP * (x - a).min(1.0f64.max(1e-3 * x));
    if x <= a {
        return Err(Error::StepUnderflow { x });
    }
    let inner = inner_tolerance(tol);
    let stats = std::sync::Mutex::new((0usize, 0.0f64, true));
    let g = |t: f64| -> Result<Complex64> {
        let w = omega.eval(t)?;
        if gamma == zero() {
            return Ok(f.at(t)? * w);
        }
        let r = rl_integral(f, psi, omega, gamma, a, t, &inner)?;
        let mut s = stats.lock().unwrap();
        s.0 += r.n_evals;
        s.1 = s.1.max(r.err_abs * w);
        s.2 &= r.converged;
        Ok(r.value * w)
    };
    let derivs = fd::derivatives(g, x, n, h)?;
    let coeffs = chain_coefficients(psi, n)?;
    let mut value = zero();
    let mut err = 0.0;
    let (n_evals, inner_err, converged) = *stats.lock().unwrap();
    for (k, (c, d)) in coeffs.iter().zip(&derivs).enumerate() {
        let ck = c.eval(x)?;
        value += d * ck;
        err += ck.abs() * inner_err * 4f64.powi(k as i32 + 1) / h.powi(k as i32 + 1);
    }
    let w = omega.eval(x)?;
    Ok(QuadResult { value: value / w, err_abs: err / w, n_evals: n_evals.max(1), converged })
}

/// RL derivative 𝒟ⁿ I^{n−α} f.
pub fn rl_derivative<F>(
    f: &F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    alpha: Complex64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    check_order(alpha)?;
    let n = derivative_order(alpha);
    d_n_of_integral(f, psi, omega, n, Complex64::new(n as f64, 0.0) - alpha, a, x, tol)
}

/// Caputo derivative I^{n−α} 𝒟ⁿ f with 𝒟ⁿ f differentiated exactly.
pub fn caputo_derivative(
    f: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    alpha: Complex64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    check_order(alpha)?;
    check_point(a, x)?;
    let n = derivative_order(alpha);
    let dn = d_psi_omega_expr(f, psi, omega, n)?;
    let order = Complex64::new(n as f64, 0.0) - alpha;
    if order == zero() {
        return Ok(QuadResult::exact(Complex64::new(dn.eval(x)?, 0.0)));
    }
    let g = if n == 1 { f.clone() } else { d_psi_omega_expr(f, psi, omega, n - 1)? };
    let wg = omega.expr().clone() * g;
    match (wg.eval(x), wg.eval(a)) {
        (Ok(gx), Ok(ga)) if gx.is_finite() && ga.is_finite() => {
            rl_integral_anchored(&dn, Complex64::new(gx - ga, 0.0), psi, omega, order, a, x, tol)
        }
        _ => rl_integral(&dn, psi, omega, order, a, x, tol),
    }
}

/// I^{β(n−α)} 𝒟ⁿ I^{(1−β)(n−α)} f by three nested stages.
fn hilfer_staged<F>(
    f: &F,
    psi: &AdmissiblePsi,
    omega: &Weight,
    alpha: Complex64,
    beta: f64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    F: Function + ?Sized,
{
    let n = derivative_order(alpha);
    let rest = Complex64::new(n as f64, 0.0) - alpha;
    let inner_order = rest * (1.0 - beta);
    let outer_order = rest * beta;
    if outer_order == zero() {
        return d_n_of_integral(f, psi, omega, n, inner_order, a, x, tol);
    }
    let inner = inner_tolerance(tol);
    let stats = std::sync::Mutex::new((0usize, true));
    let middle = |t: f64| -> Result<Complex64> {
        let r = d_n_of_integral(f, psi, omega, n, inner_order, a, t, &inner)?;
        let mut s = stats.lock().unwrap();
        s.0 += r.n_evals;
        s.1 &= r.converged;
        Ok(r.value)
    };
    // for n = 1, ω·middle·ψ' is the derivative of ω I^{inner} f
    let bounded_at_a = f.at(a).and_then(|v| Ok(v * omega.eval(a)?)).map(|v| v.norm().is_finite());
    let mut r = if n == 1 && bounded_at_a.unwrap_or(false) {
        let delta = if inner_order == zero() {
            f.at(x)? * omega.eval(x)? - f.at(a)? * omega.eval(a)?
        } else {
            let i = rl_integral(f, psi, omega, inner_order, a, x, &inner)?;
            i.value * omega.eval(x)?
        };
        rl_integral_anchored(&middle, delta, psi, omega, outer_order, a, x, tol)?
    } else {
        rl_integral(&middle, psi, omega, outer_order, a, x, tol)?
    };
    let (n_evals, converged) = *stats.lock().unwrap();
    r.n_evals += n_evals;
    r.converged &= converged;
    Ok(r)
}

/// Hilfer derivative of type β ∈ [0, 1]; β = 0 is the RL derivative and
/// β = 1 the Caputo derivative.
pub fn hilfer_derivative(
    f: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    alpha: Complex64,
    beta: f64,
    a: f64,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    check_order(alpha)?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::invalid(format!("Hilfer type beta = {beta} outside [0, 1]")));
    }
    if beta == 0.0 {
        return rl_derivative(f, psi, omega, alpha, a, x, tol);
    }
    if beta == 1.0 {
        return caputo_derivative(f, psi, omega, alpha, a, x, tol);
    }
    // for n = 1 and ω f bounded at a, every β < 1 gives Caputo plus the boundary term
    let at_a = f.eval(a).and_then(|v| Ok(v * omega.eval(a)?)).ok().filter(|v| v.is_finite());
    match at_a {
        Some(g_a) if derivative_order(alpha) == 1 => {
            check_point(a, x)?;
            let r = caputo_derivative(f, psi, omega, alpha, a, x, tol)?;
            let span = psi.increment(x, x - a)?;
            let boundary = if alpha == Complex64::new(1.0, 0.0) {
                zero()
            } else {
                g_a * (-alpha * span.ln()).exp() / (gamma_complex(1.0 - alpha)? * omega.eval(x)?)
            };
            Ok(QuadResult { value: r.value + boundary, ..r })
        }
        _ => hilfer_staged(f, psi, omega, alpha, beta, a, x, tol),
    }
}

/// Applies `spec` through the classical operator on u ↦ ω(ψ⁻¹u) f(ψ⁻¹u).
pub fn conjugated_op(
    f: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    spec: &FracSpec,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    check_point(spec.base_point, x)?;
    let id = AdmissiblePsi::identity();
    let unit = Weight::unit();
    let u = psi.eval(x)?;
    let ua = psi.eval(spec.base_point)?;
    let phi = |s: f64| -> Result<Complex64> {
        let t = psi.inverse(s)?;
        Ok(Complex64::new(omega.eval(t)? * f.eval(t)?, 0.0))
    };
    let alpha = spec.alpha;
    let r = match spec.kind {
        FracKind::RlIntegral => rl_integral(&phi, &id, &unit, alpha, ua, u, tol)?,
        FracKind::RlDerivative => rl_derivative(&phi, &id, &unit, alpha, ua, u, tol)?,
        FracKind::Caputo | FracKind::Hilfer => {
            let beta = if spec.kind == FracKind::Caputo { 1.0 } else { spec.beta };
            let symbolic = psi
                .inverse_expr()
                .map(|inv| (omega.expr().clone() * f.clone()).substitute(inv));
            match symbolic {
                Some(phi_expr) => hilfer_derivative(&phi_expr, &id, &unit, alpha, beta, ua, u, tol)?,
                None if beta == 0.0 => rl_derivative(&phi, &id, &unit, alpha, ua, u, tol)?,
                None if beta < 1.0 && derivative_order(alpha) == 1 && phi(ua).is_ok_and(|v| v.is_finite()) => {
                    rl_derivative(&phi, &id, &unit, alpha, ua, u, tol)?
                }
                None => hilfer_staged(&phi, &id, &unit, alpha, beta, ua, u, tol)?,
            }
        }
    };
    Ok(r.scale(Complex64::new(1.0 / omega.eval(x)?, 0.0)))
}

/// The direct operator described by `spec`.
pub fn apply(
    f: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    spec: &FracSpec,
    x: f64,
    tol: &Tolerance,
) -> Result<QuadResult> {
    let (alpha, a) = (spec.alpha, spec.base_point);
    match spec.kind {
        FracKind::RlIntegral => rl_integral(f, psi, omega, alpha, a, x, tol),
        FracKind::RlDerivative => rl_derivative(f, psi, omega, alpha, a, x, tol),
        FracKind::Caputo => caputo_derivative(f, psi, omega, alpha, a, x, tol),
        FracKind::Hilfer => hilfer_derivative(f, psi, omega, alpha, spec.beta, a, x, tol),
    }
}
