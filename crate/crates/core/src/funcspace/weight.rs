//! The positive weight ω.

use crate::error::{Error, Result};
use crate::funcspace::expr::{parse_expr, Expr};
use crate::funcspace::sample_grid;

#[derive(Debug, Clone)]
pub struct Weight {
    omega: Expr,
    prime: Expr,
    unit: bool,
    warnings: Vec<String>,
}

impl Weight {
    pub fn parse(source: &str) -> Result<Self> {
        Self::new(parse_expr(source)?)
    }

    /// ω ≡ 1.
    pub fn unit() -> Self {
        Self::new(Expr::Const(1.0)).expect("unit weight is valid")
    }

    pub fn new(omega: Expr) -> Result<Self> {
        let prime = omega.derivative()?;
        let unit = omega == Expr::Const(1.0);
        let mut warnings = Vec::new();
        for x in sample_grid() {
            let v = omega
                .eval(x)
                .map_err(|e| Error::InvalidWeight(format!("{e} at x = {x:e}")))?;
            if v == f64::INFINITY && x >= 1.0 {
                if warnings.is_empty() {
                    warnings.push(format!("omega appears unbounded, overflowing from x = {x:e} on"));
                }
                continue;
            }
            if v == 0.0 && x >= 1.0 {
                // underflow of a decaying weight
                continue;
            }
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidWeight(format!("omega({x:e}) = {v}")));
            }
        }
        let (mid, far) = (omega.eval(1e3)?, omega.eval(1e6)?);
        if mid == 0.0 && far == 0.0 && omega.eval(1.0)? == 0.0 {
            return Err(Error::InvalidWeight("omega vanishes for x >= 1".into()));
        }
        if warnings.is_empty() && far > 10.0 * mid {
            warnings.push(format!(
                "omega appears unbounded (omega(1e3) = {mid:e}, omega(1e6) = {far:e})"
            ));
        }
        Ok(Weight { omega, prime, unit, warnings })
    }

    pub fn expr(&self) -> &Expr {
        &self.omega
    }

    pub fn prime_expr(&self) -> &Expr {
        &self.prime
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if self.unit {
            return Ok(1.0);
        }
        // zero and infinity are accepted as under- and overflow
        let v = self.omega.eval(x)?;
        if !(v >= 0.0) {
            return Err(Error::InvalidWeight(format!("omega({x:e}) = {v}")));
        }
        Ok(v)
    }

    pub fn prime(&self, x: f64) -> Result<f64> {
        if self.unit {
            return Ok(0.0);
        }
        self.prime.eval(x)
    }
}
