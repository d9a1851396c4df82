//! Functions of one variable: expressions, the admissible ψ, the weight ω,
//! and the pointwise operators built from them.

pub mod expr;
pub mod ops;
pub mod psi;
pub mod weight;

use num_complex::Complex64;

use crate::error::Result;

pub use expr::{parse_complex_expr, parse_expr, Expr, Func, Grammar};
pub use ops::{d_psi_omega, d_psi_omega_expr, m_omega, q_psi, Direction};
pub use psi::AdmissiblePsi;
pub use weight::Weight;

/// Logarithmic sample grid used by the admissibility checks.
pub fn sample_grid() -> Vec<f64> {
    (0..64).map(|i| 10f64.powf(-6.0 + 12.0 * i as f64 / 63.0)).collect()
}

/// A possibly complex-valued function of a positive real variable.
pub trait Function: Sync {
    fn at(&self, x: f64) -> Result<Complex64>;
}

impl Function for Expr {
    fn at(&self, x: f64) -> Result<Complex64> {
        Ok(Complex64::new(self.eval(x)?, 0.0))
    }
}

impl<F> Function for F
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    fn at(&self, x: f64) -> Result<Complex64> {
        self(x)
    }
}
