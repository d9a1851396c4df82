//! Numerical integration of complex-valued integrands.
//!
//! Double-exponential rules cover finite intervals, the half line and the
//! whole line; adaptive Gauss–Kronrod panels cover segments of vertical lines
//! in the complex plane.

mod de;
mod kronrod;
mod line;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use de::{
    integrate_finite, integrate_finite_nodes, integrate_semi_infinite,
    integrate_semi_infinite_nodes, integrate_whole_line, Node,
};
pub use kronrod::gauss_kronrod_21;
pub use line::{bromwich, integrate_vertical_line, integrate_vertical_line_panels, BromwichResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-10, rel_tol: 1e-10, max_evals: 2_000_000 }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Tolerance { abs_tol, rel_tol, ..Default::default() }
    }

    pub fn with_max_evals(self, max_evals: usize) -> Self {
        Tolerance { max_evals, ..self }
    }

    /// Tightens both tolerances by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerance { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..self }
    }

    pub fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    #[serde(serialize_with = "crate::ser_complex")]
    pub value: Complex64,
    pub err_abs: f64,
    pub n_evals: usize,
    pub converged: bool,
}

impl QuadResult {
    /// An exactly known value that needed no evaluations.
    pub fn exact(value: Complex64) -> Self {
        QuadResult { value, err_abs: 0.0, n_evals: 0, converged: true }
    }

    pub fn scale(self, c: Complex64) -> Self {
        QuadResult { value: self.value * c, err_abs: self.err_abs * c.norm(), ..self }
    }

    /// Combines two results whose values are added.
    pub fn combine(self, other: QuadResult) -> Self {
        QuadResult {
            value: self.value + other.value,
            err_abs: self.err_abs + other.err_abs,
            n_evals: self.n_evals + other.n_evals,
            converged: self.converged && other.converged,
        }
    }
}
