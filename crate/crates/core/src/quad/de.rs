//! Double-exponential quadrature: tanh-sinh on [a, b], exp-sinh on (0, ∞),
//! sinh-sinh on ℝ.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

const H0: f64 = 0.5;
const MIN_LEVEL: usize = 3;
const MAX_LEVEL: usize = 12;
/// Level-0 walk never stops before |t| reaches this many steps.
const MIN_STEPS: usize = 4;
const NEGLIGIBLE: f64 = 1e-17;
const PAR_THRESHOLD: usize = 32;

/// A quadrature node with exact distances to the interval ends. Integrands
/// with endpoint singularities should use the distances, not `x - a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub from_lo: f64,
    pub to_hi: f64,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Finite { a: f64, b: f64, half: f64 },
    Half,
    Whole,
}

impl Map {
    fn infinite(&self) -> bool {
        !matches!(self, Map::Finite { .. })
    }

    /// Node and weight at t, or None past the representable range.
    fn node(&self, t: f64, exact_ends: bool) -> Option<(Node, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let dudt = FRAC_PI_2 * t.cosh();
        match *self {
            Map::Finite { a, b, half } => {
                let e = (-2.0 * u.abs()).exp();
                let near = 2.0 * half * e / (1.0 + e);
                let far = 2.0 * half / (1.0 + e);
                let (from_lo, to_hi) = if u >= 0.0 { (far, near) } else { (near, far) };
                let w = half * dudt * 4.0 * e / ((1.0 + e) * (1.0 + e));
                if from_lo <= 0.0 || to_hi <= 0.0 || w <= 0.0 || !w.is_finite() {
                    return None;
                }
                let x = if u < 0.0 { a + from_lo } else { b - to_hi };
                if !exact_ends && (x <= a || x >= b) {
                    return None;
                }
                Some((Node { x, from_lo, to_hi }, w))
            }
            Map::Half => {
                let x = u.exp();
                let w = dudt * x;
                if x <= 0.0 || !x.is_finite() || !w.is_finite() {
                    return None;
                }
                Some((Node { x, from_lo: x, to_hi: f64::INFINITY }, w))
            }
            Map::Whole => {
                let x = u.sinh();
                let w = dudt * u.cosh();
                if !x.is_finite() || !w.is_finite() {
                    return None;
                }
                Some((Node { x, from_lo: f64::INFINITY, to_hi: f64::INFINITY }, w))
            }
        }
    }
}

enum Step {
    Beyond,
    Term(Complex64),
    Blowup,
}

struct Engine<'a, G> {
    map: Map,
    g: &'a G,
    exact_ends: bool,
}

impl<'a, G> Engine<'a, G>
where
    G: Fn(Node) -> Result<Complex64> + Sync,
{
    fn step(&self, t: f64) -> Result<Step> {
        let Some((node, w)) = self.map.node(t, self.exact_ends) else {
            return Ok(Step::Beyond);
        };
        let v = (self.g)(node)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            if self.map.infinite() {
                return Ok(Step::Blowup);
            }
            return Err(Error::NonFinite { x: node.x });
        }
        if v.re == 0.0 && v.im == 0.0 {
            return Ok(Step::Term(Complex64::new(0.0, 0.0)));
        }
        let term = v * w;
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Ok(Step::Blowup);
        }
        Ok(Step::Term(term))
    }

    fn run(&self, tol: &Tolerance) -> Result<QuadResult> {
        let mut n_evals = 0usize;
        let mut diverged = false;

        // level 0: walk outward to find the extent
        let centre = match self.step(0.0)? {
            Step::Term(v) => v,
            Step::Blowup => {
                diverged = true;
                Complex64::new(0.0, 0.0)
            }
            Step::Beyond => Complex64::new(0.0, 0.0),
        };
        n_evals += 1;
        let mut sum = centre;
        let mut abs_sum = centre.norm();
        let mut max_term = centre.norm();
        let mut extent = [0.0f64; 2];
        let mut tail = 0.0f64;
        for (side, sign) in [(0usize, -1.0f64), (1, 1.0)] {
            let mut quiet = 0;
            let mut last = 0.0;
            let mut j = 1usize;
            loop {
                let t = sign * j as f64 * H0;
                match self.step(t)? {
                    Step::Beyond => {
                        tail += last * H0;
                        break;
                    }
                    Step::Blowup => {
                        diverged = true;
                        n_evals += 1;
                        extent[side] = j as f64 * H0;
                        break;
                    }
                    Step::Term(v) => {
                        n_evals += 1;
                        extent[side] = j as f64 * H0;
                        let m = v.norm();
                        sum += v;
                        abs_sum += m;
                        max_term = max_term.max(m);
                        last = m;
                        if max_term > 0.0 && m <= NEGLIGIBLE * max_term {
                            quiet += 1;
                        } else {
                            quiet = 0;
                        }
                        if quiet >= 2 && j >= MIN_STEPS {
                            break;
                        }
                    }
                }
                j += 1;
            }
        }
        let mut estimate = sum * H0;
        let mut abs_estimate = abs_sum * H0;
        let mut err = f64::INFINITY;

        for level in 1..=MAX_LEVEL {
            let h = H0 / (1u64 << level) as f64;
            let lo = -(extent[0] / h).round() as i64;
            let hi = (extent[1] / h).round() as i64;
            let ts: Vec<f64> = (lo..=hi).filter(|j| j.rem_euclid(2) == 1).map(|j| j as f64 * h).collect();
            if n_evals + ts.len() > tol.max_evals {
                break;
            }
            let steps: Vec<Result<Step>> = if ts.len() >= PAR_THRESHOLD {
                ts.par_iter().map(|&t| self.step(t)).collect()
            } else {
                ts.iter().map(|&t| self.step(t)).collect()
            };
            let mut new_sum = Complex64::new(0.0, 0.0);
            let mut new_abs = 0.0;
            for s in steps {
                match s? {
                    Step::Beyond => {}
                    Step::Blowup => {
                        n_evals += 1;
                        diverged = true;
                    }
                    Step::Term(v) => {
                        n_evals += 1;
                        new_sum += v;
                        new_abs += v.norm();
                    }
                }
            }
            let next = estimate * 0.5 + new_sum * h;
            abs_estimate = abs_estimate * 0.5 + new_abs * h;
            let floor = 4.0 * f64::EPSILON * abs_estimate;
            let change = (next - estimate).norm();
            err = change.max(floor) + tail;
            estimate = next;
            if diverged {
                break;
            }
            let target = tol.target(estimate);
            // below the rounding floor no further level can improve the sum
            let at_floor = change <= floor && tail <= target.max(floor);
            if level >= MIN_LEVEL && (err <= target || at_floor) {
                return Ok(QuadResult { value: estimate, err_abs: err, n_evals, converged: true });
            }
        }
        if diverged {
            err = f64::INFINITY;
        }
        Ok(QuadResult { value: estimate, err_abs: err, n_evals, converged: false })
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid(format!("interval [{a}, {b}] must be finite")));
    }
    if a > b {
        return Err(Error::invalid(format!("interval [{a}, {b}] is reversed")));
    }
    Ok(())
}

/// ∫ₐᵇ g(node) with node distances to both ends.
pub fn integrate_finite_nodes<G>(g: G, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(Node) -> Result<Complex64> + Sync,
{
    check_interval(a, b)?;
    if a == b {
        return Ok(QuadResult::exact(Complex64::new(0.0, 0.0)));
    }
    let map = Map::Finite { a, b, half: 0.5 * (b - a) };
    Engine { map, g: &g, exact_ends: true }.run(tol)
}

/// ∫ₐᵇ g(t) dt.
pub fn integrate_finite<G>(g: G, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<Complex64> + Sync,
{
    check_interval(a, b)?;
    if a == b {
        return Ok(QuadResult::exact(Complex64::new(0.0, 0.0)));
    }
    let map = Map::Finite { a, b, half: 0.5 * (b - a) };
    let nodes = |n: Node| g(n.x);
    Engine { map, g: &nodes, exact_ends: false }.run(tol)
}

/// ∫₀^∞ g(node); `from_lo` equals `x`.
pub fn integrate_semi_infinite_nodes<G>(g: G, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(Node) -> Result<Complex64> + Sync,
{
    Engine { map: Map::Half, g: &g, exact_ends: true }.run(tol)
}

/// ∫₀^∞ g(x) dx.
pub fn integrate_semi_infinite<G>(g: G, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<Complex64> + Sync,
{
    let nodes = |n: Node| g(n.x);
    Engine { map: Map::Half, g: &nodes, exact_ends: true }.run(tol)
}

/// ∫_{-∞}^{∞} g(x) dx.
pub fn integrate_whole_line<G>(g: G, tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<Complex64> + Sync,
{
    let nodes = |n: Node| g(n.x);
    Engine { map: Map::Whole, g: &nodes, exact_ends: true }.run(tol)
}
