//! The increasing function ψ with ψ(0) = 0, its derivatives and its inverse.

use crate::error::{Error, Result};
use crate::funcspace::expr::{parse_expr, Expr, Func};
use crate::funcspace::sample_grid;

/// Number of derivative expressions kept (ψ' through ψ'''').
const N_DERIVS: usize = 4;

#[derive(Debug, Clone)]
enum Inverse {
    Symbolic(Expr),
    Numeric,
}

#[derive(Debug, Clone)]
pub struct AdmissiblePsi {
    psi: Expr,
    derivs: Vec<Expr>,
    inverse: Inverse,
    identity: bool,
}

impl AdmissiblePsi {
    pub fn parse(source: &str) -> Result<Self> {
        Self::new(parse_expr(source)?)
    }

    /// ψ(x) = x.
    pub fn identity() -> Self {
        Self::new(Expr::Var).expect("identity is admissible")
    }

    pub fn new(psi: Expr) -> Result<Self> {
        let mut derivs = Vec::with_capacity(N_DERIVS);
        let mut d = psi.clone();
        for _ in 0..N_DERIVS {
            d = d.derivative()?;
            derivs.push(d.clone());
        }
        let identity = psi == Expr::Var;
        let inverse = match symbolic_inverse(&psi) {
            Some(e) => Inverse::Symbolic(e),
            None => Inverse::Numeric,
        };
        let out = AdmissiblePsi { psi, derivs, inverse, identity };
        out.check()?;
        Ok(out)
    }

    fn check(&self) -> Result<()> {
        let at_zero = match self.psi.eval(0.0) {
            Ok(v) => v,
            Err(_) => self.psi.eval(1e-14).map_err(|e| {
                Error::InadmissiblePsi(format!("cannot evaluate near 0: {e}"))
            })?,
        };
        if at_zero.abs() > 1e-10 {
            return Err(Error::InadmissiblePsi(format!("psi(0) = {at_zero}, expected 0")));
        }
        let mut prev: Option<f64> = None;
        for x in sample_grid() {
            let bad = |what: String| Error::InadmissiblePsi(format!("{what} at x = {x:e}"));
            let v = self.psi.eval(x).map_err(|e| bad(e.to_string()))?;
            let dv = self.derivs[0].eval(x).map_err(|e| bad(e.to_string()))?;
            if !v.is_finite() || !dv.is_finite() {
                return Err(bad("non-finite value".into()));
            }
            if dv <= 0.0 {
                return Err(bad(format!("psi' = {dv} is not positive")));
            }
            if let Some(p) = prev {
                if v <= p {
                    return Err(bad("psi is not strictly increasing".into()));
                }
            }
            prev = Some(v);
            let back = self.inverse(v).map_err(|e| bad(e.to_string()))?;
            if ((back - x) / x).abs() >= 1e-9 {
                return Err(bad(format!("inverse round trip gives {back}")));
            }
        }
        Ok(())
    }

    pub fn expr(&self) -> &Expr {
        &self.psi
    }

    /// Symbolic ψ^{(k)} for 1 ≤ k ≤ 4.
    pub fn derivative_expr(&self, k: usize) -> &Expr {
        &self.derivs[k - 1]
    }

    pub fn prime_expr(&self) -> &Expr {
        &self.derivs[0]
    }

    /// ψ⁻¹ as an expression, when a closed form is known.
    pub fn inverse_expr(&self) -> Option<&Expr> {
        match &self.inverse {
            Inverse::Symbolic(e) => Some(e),
            Inverse::Numeric => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if self.identity {
            return Ok(x);
        }
        self.psi.eval(x)
    }

    pub fn prime(&self, x: f64) -> Result<f64> {
        if self.identity {
            return Ok(1.0);
        }
        self.derivs[0].eval(x)
    }

    /// ψ(x) - ψ(x - d), accurate when d is tiny compared with x.
    pub fn increment(&self, x: f64, d: f64) -> Result<f64> {
        if self.identity {
            return Ok(d);
        }
        if d <= 1e-3 * x {
            let mut acc = 0.0;
            let mut term = 1.0;
            for (k, e) in self.derivs.iter().enumerate() {
                term *= d / (k as f64 + 1.0);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * e.eval(x)? * term;
            }
            return Ok(acc);
        }
        Ok(self.eval(x)? - self.eval(x - d)?)
    }

    pub fn inverse(&self, u: f64) -> Result<f64> {
        if self.identity {
            return Ok(u);
        }
        if let Inverse::Symbolic(e) = &self.inverse {
            return e.eval(u);
        }
        self.solve(u)
    }

    fn solve(&self, u: f64) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        if !(u > 0.0) || !u.is_finite() {
            return Err(Error::domain(format!("psi^-1 undefined at {u}")));
        }
        let no_bracket = || Error::domain(format!("cannot bracket psi^-1({u})"));
        let f = |x: f64| self.psi.eval(x).map(|v| v - u);
        let mut hi = 1.0;
        let mut f_hi = f(hi)?;
        while f_hi < 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(no_bracket());
            }
            f_hi = f(hi).map_err(|_| no_bracket())?;
        }
        let mut lo = hi / 2.0;
        let mut f_lo = f(lo)?;
        while f_lo > 0.0 {
            hi = lo;
            f_hi = f_lo;
            lo /= 2.0;
            if lo < 1e-300 {
                lo = 0.0;
                f_lo = -u;
                break;
            }
            f_lo = f(lo)?;
        }
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let fx = f(x)?;
            if fx == 0.0 {
                return Ok(x);
            }
            if fx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.derivs[0].eval(x)?;
            let mut next = x - fx / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

/// Closed-form inverses for the common shapes of ψ.
fn symbolic_inverse(psi: &Expr) -> Option<Expr> {
    let x = || Expr::Var;
    let pos_const = |e: &Expr| match e {
        Expr::Const(c) if *c > 0.0 => Some(*c),
        _ => None,
    };
    let power_of_x = |e: &Expr| match e {
        Expr::Var => Some(1.0),
        Expr::Pow(b, k) if **b == Expr::Var => pos_const(k),
        _ => None,
    };
    let invert_power = |e: Expr, k: f64| {
        if k == 1.0 {
            e
        } else {
            e.powf(Expr::Const(1.0 / k))
        }
    };
    if let Some(k) = power_of_x(psi) {
        return Some(invert_power(x(), k));
    }
    match psi {
        Expr::Mul(a, b) => {
            let (c, rest) = match (pos_const(a), pos_const(b)) {
                (Some(c), None) => (c, b.as_ref()),
                (None, Some(c)) => (c, a.as_ref()),
                _ => return None,
            };
            let k = power_of_x(rest)?;
            Some(invert_power(x() / Expr::Const(c), k))
        }
        Expr::Div(a, b) => {
            let c = pos_const(b)?;
            let k = power_of_x(a)?;
            Some(invert_power(Expr::Const(c) * x(), k))
        }
        Expr::Call(Func::Ln, arg) => match arg.as_ref() {
            Expr::Add(l, r)
                if (pos_const(l) == Some(1.0) && **r == Expr::Var)
                    || (**l == Expr::Var && pos_const(r) == Some(1.0)) =>
            {
                Some(Expr::call(Func::Exp, x()) - Expr::Const(1.0))
            }
            _ => None,
        },
        _ => None,
    }
}
