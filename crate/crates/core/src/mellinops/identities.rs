//! Both sides of the operational rules, evaluated numerically.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{IdentityReport, FD_THRESHOLD, QUAD_THRESHOLD};
use crate::error::{Error, Result};
use crate::fracops::{caputo_derivative, d_n_of_integral, hilfer_derivative, rl_derivative, rl_integral};
use crate::funcspace::{d_psi_omega_expr, AdmissiblePsi, Expr, Func, Function, Weight};
use crate::quad::{integrate_whole_line, QuadResult, Tolerance};
use crate::special::gamma_ratio;
use crate::transforms::{fourier_psi_omega, laplace_bilateral, mellin_classical, mellin_inverse, mellin_of, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    /// 𝓜[ψ^a f](p) = 𝓜[f](p + a).
    Shifting,
    /// 𝓜[ψ^a ω f](p) against 𝓜[f](p + a); double-weighted.
    ShiftingLiteral,
    /// 𝓜[𝒟ⁿ f](p) = Γ(1−p+n)/Γ(1−p) 𝓜[f](p−n).
    Derivative,
    /// 𝓜[I^α f](p) = Γ(1−p−α)/Γ(1−p) 𝓜[f](p+α), Re(α+p) < 1.
    RlIntegral,
    /// The same rule for −n < Re α ≤ 1−n with I^α = 𝒟ⁿ I^{α+n}.
    RlIntegralNegativeOrder,
    /// 𝓜[D^α f](p) = Γ(1−p+α)/Γ(1−p) 𝓜[f](p−α).
    RlDerivative,
    /// 𝓜[ψ^μ D^α f](p) = Γ(1−μ−p+α)/Γ(1−μ−p) 𝓜[f](μ+p−α).
    RlDerivativeMu,
    /// 𝓜[ψ^μ ω D^α f](p) against the same right-hand side; double-weighted.
    RlDerivativeMuLiteral,
    /// Caputo derivative under the RL multiplier.
    Caputo,
    /// Hilfer derivative under the RL multiplier.
    Hilfer,
    /// 𝓜⁻¹[𝓜[f]](x) = f(x) on the line Re q = Re p.
    Inversion,
    /// 𝓜_{ψ,ω}[f](p) = L_B[φ(e^{−t})](p) with φ = (ωf)∘ψ⁻¹.
    Laplace,
    /// F_{ψ,ω}[f](k) = (2π)^{−1/2} 𝓜[φ(ln x)](−ik) with φ = (ωf)∘ψ⁻¹.
    Fourier,
}

impl Identity {
    pub const ALL: [Identity; 13] = [
        Identity::Shifting,
        Identity::ShiftingLiteral,
        Identity::Derivative,
        Identity::RlIntegral,
        Identity::RlIntegralNegativeOrder,
        Identity::RlDerivative,
        Identity::RlDerivativeMu,
        Identity::RlDerivativeMuLiteral,
        Identity::Caputo,
        Identity::Hilfer,
        Identity::Inversion,
        Identity::Laplace,
        Identity::Fourier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Shifting => "shifting",
            Identity::ShiftingLiteral => "shifting-literal",
            Identity::Derivative => "derivative",
            Identity::RlIntegral => "rl-integral",
            Identity::RlIntegralNegativeOrder => "rl-integral-negative-order",
            Identity::RlDerivative => "rl-derivative",
            Identity::RlDerivativeMu => "rl-derivative-mu",
            Identity::RlDerivativeMuLiteral => "rl-derivative-mu-literal",
            Identity::Caputo => "caputo",
            Identity::Hilfer => "hilfer",
            Identity::Inversion => "inversion",
            Identity::Laplace => "laplace",
            Identity::Fourier => "fourier",
        }
    }

    /// Default comparison threshold.
    pub fn threshold(self) -> f64 {
        match self {
            Identity::Shifting | Identity::ShiftingLiteral => 1e-9,
            Identity::Derivative | Identity::Laplace | Identity::Fourier => QUAD_THRESHOLD,
            Identity::RlIntegral => 1e-5,
            _ => FD_THRESHOLD,
        }
    }

    /// Literal forms that are reported but never counted as failures.
    pub fn is_diagnostic(self) -> bool {
        matches!(self, Identity::ShiftingLiteral | Identity::RlDerivativeMuLiteral | Identity::Fourier)
    }
}

impl std::fmt::Display for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown identity '{s}'")))
    }
}

/// Parameters beyond (f, ψ, ω, p); each identity reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    /// Shift exponent a.
    #[serde(with = "complex_pair")]
    pub shift: Complex64,
    /// Integer derivative order n.
    pub n: usize,
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    pub beta: f64,
    pub mu: f64,
    /// Fourier frequency k.
    pub k: f64,
    /// Evaluation point of the inversion round trip.
    pub x: f64,
    /// Overrides [`Identity::threshold`].
    pub threshold: Option<f64>,
}

impl Default for IdentityParams {
    fn default() -> Self {
        IdentityParams {
            shift: Complex64::new(1.0, 0.0),
            n: 1,
            alpha: Complex64::new(0.5, 0.0),
            beta: 0.5,
            mu: 0.3,
            k: 0.7,
            x: 1.0,
            threshold: None,
        }
    }
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        crate::ser_complex(z, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        #[derive(serde::Deserialize)]
        struct Pair {
            re: f64,
            im: f64,
        }
        let p = Pair::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }
}

/// Collects convergence of the operator evaluations inside an outer integral.
struct Inner(Mutex<(bool, usize)>);

impl Inner {
    fn new() -> Self {
        Inner(Mutex::new((true, 0)))
    }

    fn record(&self, r: &QuadResult) -> Complex64 {
        let mut s = self.0.lock().unwrap();
        s.0 &= r.converged;
        s.1 += r.n_evals;
        r.value
    }

    fn report(&self, rep: &mut IdentityReport) {
        let s = self.0.lock().unwrap();
        if !s.0 {
            rep.note("some inner operator evaluations did not converge");
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// ψ(x)^e, zero where ψ vanishes.
fn psi_power(psi: &AdmissiblePsi, x: f64, e: Complex64) -> Result<Complex64> {
    let u = psi.eval(x)?;
    if u <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((e * u.ln()).exp())
}

/// Γ(num)/Γ(den) with pole information added to the report notes.
fn multiplier(num: Complex64, den: Complex64, notes: &mut Vec<String>) -> Result<Complex64> {
    let r = gamma_ratio(num, den);
    match r.finite() {
        Some(v) => {
            if r.pole {
                notes.push(format!("Gamma({den}) at a pole; multiplier is 0"));
            }
            Ok(v)
        }
        None => Err(Error::Pole(num)),
    }
}

/// φ = (ω f)∘ψ⁻¹ as an expression, when ψ has a closed-form inverse.
fn conjugate_expr(f: &Expr, psi: &AdmissiblePsi, omega: &Weight) -> Result<Expr> {
    let wf = omega.expr().clone() * f.clone();
    if psi.is_identity() {
        return Ok(wf);
    }
    psi.inverse_expr()
        .map(|inv| wf.substitute(inv))
        .ok_or_else(|| Error::Unsupported("psi has no closed-form inverse".into()))
}

/// Evaluates both sides of `identity` at `p`.
pub fn check_identity(
    identity: Identity,
    f: &Expr,
    psi: &AdmissiblePsi,
    omega: &Weight,
    p: Complex64,
    params: &IdentityParams,
    tol: &Tolerance,
) -> Result<IdentityReport> {
    let threshold = params.threshold.unwrap_or_else(|| identity.threshold());
    // Outer integrals over operator values need not be tighter than the
    // operators themselves.
    let outer = Tolerance {
        rel_tol: tol.rel_tol.max(1e-3 * threshold),
        abs_tol: tol.abs_tol.max(1e-4 * threshold),
        ..*tol
    };
    let op = Tolerance { abs_tol: f64::MIN_POSITIVE, ..*tol };
    let tol = &op;
    let transform = |g: &dyn Function, q: Complex64, t: &Tolerance| mellin_of(g, psi, omega, q, Method::Direct, t);
    let mut notes: Vec<String> = Vec::new();
    let inner = Inner::new();
    let alpha = params.alpha;

    let (lhs, rhs): (QuadResult, QuadResult) = match identity {
        Identity::Shifting | Identity::ShiftingLiteral => {
            let weighted = identity == Identity::ShiftingLiteral;
            let a = params.shift;
            let g = |x: f64| -> Result<Complex64> {
                let mut v = psi_power(psi, x, a)? * f.eval(x)?;
                if weighted {
                    v *= omega.eval(x)?;
                }
                Ok(v)
            };
            (transform(&g, p, tol)?, transform(f, p + a, tol)?)
        }
        Identity::Derivative => {
            let n = params.n;
            let dn = d_psi_omega_expr(f, psi, omega, n)?;
            let m = multiplier(c(1.0 + n as f64) - p, c(1.0) - p, &mut notes)?;
            (transform(&dn, p, tol)?, transform(f, p - n as f64, tol)?.scale(m))
        }
        Identity::RlIntegral => {
            if !(alpha.re + p.re < 1.0) {
                notes.push(format!("Re(alpha + p) = {} is not below 1", alpha.re + p.re));
            }
            let g = |x: f64| Ok(inner.record(&rl_integral(f, psi, omega, alpha, 0.0, x, tol)?));
            let m = multiplier(c(1.0) - p - alpha, c(1.0) - p, &mut notes)?;
            (transform(&g, p, &outer)?, transform(f, p + alpha, tol)?.scale(m))
        }
        Identity::RlIntegralNegativeOrder => {
            let n = (1.0 - alpha.re).floor();
            if !(n >= 1.0 && alpha.re > -n && alpha.re <= 1.0 - n) {
                return Err(Error::invalid(format!("order {alpha} is not in (-n, 1-n] for a positive n")));
            }
            let shifted = alpha + n;
            let g = |x: f64| Ok(inner.record(&d_n_of_integral(f, psi, omega, n as usize, shifted, 0.0, x, tol)?));
            let m = multiplier(c(1.0) - p - alpha, c(1.0) - p, &mut notes)?;
            (transform(&g, p, &outer)?, transform(f, p + alpha, tol)?.scale(m))
        }
        Identity::RlDerivative | Identity::Caputo | Identity::Hilfer => {
            let g = |x: f64| {
                let r = match identity {
                    Identity::RlDerivative => rl_derivative(f, psi, omega, alpha, 0.0, x, tol)?,
                    Identity::Caputo => caputo_derivative(f, psi, omega, alpha, 0.0, x, tol)?,
                    _ => hilfer_derivative(f, psi, omega, alpha, params.beta, 0.0, x, tol)?,
                };
                Ok(inner.record(&r))
            };
            let m = multiplier(c(1.0) - p + alpha, c(1.0) - p, &mut notes)?;
            (transform(&g, p, &outer)?, transform(f, p - alpha, tol)?.scale(m))
        }
        Identity::RlDerivativeMu | Identity::RlDerivativeMuLiteral => {
            let weighted = identity == Identity::RlDerivativeMuLiteral;
            let mu = c(params.mu);
            let g = |x: f64| {
                let d = inner.record(&rl_derivative(f, psi, omega, alpha, 0.0, x, tol)?);
                let mut v = psi_power(psi, x, mu)? * d;
                if weighted {
                    v *= omega.eval(x)?;
                }
                Ok(v)
            };
            let m = multiplier(c(1.0) - mu - p + alpha, c(1.0) - mu - p, &mut notes)?;
            (transform(&g, p, &outer)?, transform(f, mu + p - alpha, tol)?.scale(m))
        }
        Identity::Inversion => {
            let x = params.x;
            let forward = |q: Complex64| Ok(mellin_of(f, psi, omega, q, Method::Direct, tol)?.value);
            let y = mellin_inverse(forward, psi, omega, x, p.re, &outer)?;
            (y, QuadResult::exact(c(f.eval(x)?)))
        }
        Identity::Laplace => {
            let lhs = transform(f, p, tol)?;
            let rhs = if psi.is_identity() && omega.is_unit() {
                let composed = f.substitute(&Expr::call(Func::Exp, -Expr::Var));
                laplace_bilateral(&composed, &Expr::Var, &Expr::Const(1.0), p, tol)?
            } else {
                // φ(u) = ω(ψ⁻¹u) f(ψ⁻¹u), zero once f vanishes
                let phi = |u: f64| -> Result<f64> {
                    let x = psi.inverse(u)?;
                    let v = f.eval(x)?;
                    if v == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(v * omega.eval(x)?)
                };
                integrate_whole_line(
                    |t: f64| {
                        let v = phi((-t).exp())?;
                        if v == 0.0 {
                            return Ok(Complex64::new(0.0, 0.0));
                        }
                        Ok((-p * t).exp() * v)
                    },
                    tol,
                )?
            };
            (lhs, rhs)
        }
        Identity::Fourier => {
            let k = params.k;
            let lhs = fourier_psi_omega(f, psi.expr(), omega.expr(), k, tol)?;
            let phi = conjugate_expr(f, psi, omega)?;
            let composed = phi.substitute(&Expr::call(Func::Ln, Expr::Var));
            let scale = c(1.0 / (2.0 * PI).sqrt());
            let rhs = mellin_classical(&composed, Complex64::new(0.0, -k), tol)?.scale(scale);
            match mellin_classical(&composed, Complex64::new(1.0, -k), tol) {
                Ok(lit) => notes.push(format!(
                    "at 1 - ik the right side is {:.10e}{:+.10e}i",
                    lit.value.re * scale.re,
                    lit.value.im * scale.re
                )),
                Err(e) => notes.push(format!("at 1 - ik the right side fails: {e}")),
            }
            (lhs, rhs)
        }
    };

    let mut report = IdentityReport::from_results(identity.name(), &lhs, &rhs, threshold);
    inner.report(&mut report);
    for n in notes {
        report.note(n);
    }
    if identity.is_diagnostic() {
        report = report.as_diagnostic();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::parse_expr;
    use crate::special::gamma;

    #[test]
    fn names_round_trip() {
        for i in Identity::ALL {
            assert_eq!(i.name().parse::<Identity>().unwrap(), i);
        }
        assert!("nope".parse::<Identity>().is_err());
    }

    #[test]
    fn classical_derivative_rule() {
        let f = parse_expr("exp(-x)").unwrap();
        let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());
        let p = c(1.7);
        let r = check_identity(Identity::Derivative, &f, &id, &unit, p, &IdentityParams::default(), &Tolerance::default())
            .unwrap();
        assert!(r.passed, "{r:?}");
        let want = -gamma(1.7).unwrap();
        assert!((r.lhs.re - want).abs() < 1e-8 * want.abs());
        assert!((want + 0.908_638_7).abs() < 1e-7);
    }

    #[test]
    fn shifting_rule() {
        let f = parse_expr("exp(-x)").unwrap();
        let psi = AdmissiblePsi::parse("ln(1+x)").unwrap();
        let omega = Weight::parse("1+x").unwrap();
        let params = IdentityParams::default();
        let tol = Tolerance::default();
        let r = check_identity(Identity::Shifting, &f, &psi, &omega, c(0.8), &params, &tol).unwrap();
        assert!(r.passed && r.rel_diff < 1e-9, "{r:?}");
        let lit = check_identity(Identity::ShiftingLiteral, &f, &psi, &omega, c(0.8), &params, &tol).unwrap();
        assert!(lit.diagnostic && !lit.is_failure());
        assert!(lit.rel_diff > 1e-3);
    }

    #[test]
    fn rl_integral_rule_classical() {
        let f = parse_expr("exp(-x)").unwrap();
        let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());
        let params = IdentityParams::default();
        let r = check_identity(Identity::RlIntegral, &f, &id, &unit, c(0.3), &params, &Tolerance::default()).unwrap();
        assert!(r.rel_diff < 1e-5, "{r:?}");
        // Γ(0.2)/Γ(0.7) Γ(0.8)
        let want = gamma(0.2).unwrap() / gamma(0.7).unwrap() * gamma(0.8).unwrap();
        assert!((r.rhs.re - want).abs() < 1e-9 * want);
    }

    #[test]
    fn laplace_classical() {
        let f = parse_expr("exp(-x)").unwrap();
        let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());
        let r = check_identity(Identity::Laplace, &f, &id, &unit, c(1.5), &IdentityParams::default(), &Tolerance::default())
            .unwrap();
        assert!(r.passed, "{r:?}");
    }
}
