//! Composition with ψ, multiplication by ω, and the first-order operator
//! 𝒟 = (1/ψ')(d/dx + ω'/ω).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::{AdmissiblePsi, Expr, Function, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Forward: x ↦ f(ψ(x)). Inverse: x ↦ f(ψ⁻¹(x)).
pub fn q_psi<'a, F: Function + ?Sized>(
    f: &'a F,
    psi: &'a AdmissiblePsi,
    direction: Direction,
) -> impl Function + 'a {
    move |x: f64| match direction {
        Direction::Forward => f.at(psi.eval(x)?),
        Direction::Inverse => f.at(psi.inverse(x)?),
    }
}

/// Forward: x ↦ ω(x) f(x). Inverse: x ↦ f(x) / ω(x).
pub fn m_omega<'a, F: Function + ?Sized>(
    f: &'a F,
    omega: &'a Weight,
    direction: Direction,
) -> impl Function + 'a {
    move |x: f64| {
        let w = omega.eval(x)?;
        let v = f.at(x)?;
        match direction {
            Direction::Forward => Ok(v * w),
            Direction::Inverse => {
                if w == 0.0 || !w.is_finite() {
                    return Err(Error::domain(format!("cannot divide by omega({x:e}) = {w}")));
                }
                Ok(v / w)
            }
        }
    }
}

/// One application of 𝒟 as an expression.
fn d_once(f: &Expr, psi: &AdmissiblePsi, omega: &Weight) -> Result<Expr> {
    let df = f.derivative()?;
    let inner = if omega.is_unit() {
        df
    } else {
        df + omega.prime_expr().clone() / omega.expr().clone() * f.clone()
    };
    if psi.is_identity() {
        Ok(inner)
    } else {
        Ok(inner / psi.prime_expr().clone())
    }
}

/// 𝒟ⁿ f as an expression.
pub fn d_psi_omega_expr(f: &Expr, psi: &AdmissiblePsi, omega: &Weight, n: usize) -> Result<Expr> {
    let mut e = f.clone();
    for _ in 0..n {
        e = d_once(&e, psi, omega)?;
    }
    Ok(e)
}

/// (𝒟ⁿ f)(x).
pub fn d_psi_omega(f: &Expr, psi: &AdmissiblePsi, omega: &Weight, n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("order n must be positive"));
    }
    d_psi_omega_expr(f, psi, omega, n)?.eval(x)
}

/// f as a complex-valued function.
pub fn as_complex(f: &Expr) -> impl Function + '_ {
    move |x: f64| Ok(Complex64::new(f.eval(x)?, 0.0))
}
