//! Integrals along vertical lines Re p = γ.

use num_complex::Complex64;
use rayon::prelude::*;

use super::kronrod::gauss_kronrod_21;
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

const EVALS_PER_PANEL: usize = 21;
const T_START: f64 = 8.0;
const T_CAP: f64 = 1e4;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

fn on_line<G>(g: &G, gamma: f64) -> impl Fn(f64) -> Result<Complex64> + Sync + '_
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    move |tau: f64| {
        let p = Complex64::new(gamma, tau);
        let v = g(p).map_err(|e| match e {
            Error::Pole(_) | Error::Domain(_) => Error::PoleOnContour(p),
            other => other,
        })?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::PoleOnContour(p));
        }
        Ok(v * Complex64::i())
    }
}

fn panel<F>(h: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let (value, err) = gauss_kronrod_21(h, a, b)?;
    Ok(Panel { a, b, value, err })
}

fn adaptive<F>(h: &F, a: f64, b: f64, width: f64, tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let n = (((b - a) / width).ceil() as usize).max(1);
    let step = (b - a) / n as f64;
    let mut panels: Vec<Panel> = (0..n)
        .into_par_iter()
        .map(|i| {
            let lo = a + i as f64 * step;
            let hi = if i + 1 == n { b } else { lo + step };
            panel(h, lo, hi)
        })
        .collect::<Result<_>>()?;
    let mut n_evals = n * EVALS_PER_PANEL;
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let target = tol.target(value);
        if err <= target {
            return Ok(QuadResult { value, err_abs: err, n_evals, converged: true });
        }
        let share = target / panels.len() as f64;
        let worst = panels.iter().map(|p| p.err).fold(0.0, f64::max);
        let split: Vec<usize> = (0..panels.len())
            .filter(|&i| panels[i].err > share.max(0.1 * worst))
            .collect();
        let cost = split.len() * 2 * EVALS_PER_PANEL;
        let too_narrow = split.iter().any(|&i| {
            let p = panels[i];
            let mid = 0.5 * (p.a + p.b);
            mid <= p.a || mid >= p.b
        });
        if n_evals + cost > tol.max_evals || too_narrow {
            return Ok(QuadResult { value, err_abs: err, n_evals, converged: false });
        }
        let halves: Vec<(Panel, Panel)> = split
            .par_iter()
            .map(|&i| {
                let p = panels[i];
                let mid = 0.5 * (p.a + p.b);
                Ok((panel(h, p.a, mid)?, panel(h, mid, p.b)?))
            })
            .collect::<Result<_>>()?;
        n_evals += cost;
        let mut next = Vec::with_capacity(panels.len() + split.len());
        let mut k = 0;
        for (i, p) in panels.iter().enumerate() {
            if k < split.len() && split[k] == i {
                next.push(halves[k].0);
                next.push(halves[k].1);
                k += 1;
            } else {
                next.push(*p);
            }
        }
        panels = next;
    }
}

/// ∫ G(p) dp over p = γ + iτ, τ ∈ [−T, T], with unit-width starting panels.
/// The result is the raw line integral; no 1/(2πi) factor is applied.
pub fn integrate_vertical_line<G>(g: G, gamma: f64, t_max: f64, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    integrate_vertical_line_panels(g, gamma, t_max, 1.0, tol)
}

/// As [`integrate_vertical_line`] with starting panels of the given width.
pub fn integrate_vertical_line_panels<G>(
    g: G,
    gamma: f64,
    t_max: f64,
    width: f64,
    tol: &Tolerance,
) -> Result<QuadResult>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(t_max > 0.0) || !(width > 0.0) {
        return Err(Error::invalid("segment half-length and panel width must be positive"));
    }
    let h = on_line(&g, gamma);
    adaptive(&h, -t_max, t_max, width, tol)
}

#[derive(Debug, Clone, Copy)]
pub struct BromwichResult {
    pub result: QuadResult,
    /// Half-length of the final segment.
    pub t_max: f64,
}

/// Line integral with the truncation doubled from T = 8 until the last
/// doubling changes the value by less than the tolerance and the integrand
/// is below the absolute tolerance at the ends; T is capped at 10⁴.
pub fn bromwich<G>(g: G, gamma: f64, width: f64, tol: &Tolerance) -> Result<BromwichResult>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let h = on_line(&g, gamma);
    let mut t = T_START;
    let mut total = adaptive(&h, -t, t, width, tol)?;
    loop {
        let t2 = (2.0 * t).min(T_CAP);
        let left = adaptive(&h, -t2, -t, width, tol)?;
        let right = adaptive(&h, t, t2, width, tol)?;
        let inc = left.combine(right);
        total = total.combine(inc);
        let edge = h(-t2)?.norm().max(h(t2)?.norm());
        total.n_evals += 2;
        let settled = inc.value.norm() < tol.target(total.value) && edge < tol.abs_tol;
        t = t2;
        if settled {
            return Ok(BromwichResult { result: total, t_max: t });
        }
        if t >= T_CAP {
            total.converged = false;
            return Ok(BromwichResult { result: total, t_max: t });
        }
    }
}
