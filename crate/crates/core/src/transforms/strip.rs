use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::funcspace::{AdmissiblePsi, Expr, Weight};

const SAMPLES: usize = 16;
const DIVERGENCE: f64 = 0.5;
const MAX_RMS: f64 = 0.05;

/// The vertical strip lower < Re p < upper; infinite ends allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Strip {
    pub lower: f64,
    pub upper: f64,
}

impl Strip {
    pub fn contains(&self, p: Complex64) -> bool {
        p.re > self.lower && p.re < self.upper
    }

    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripEstimate {
    pub strip: Strip,
    pub empty: bool,
    pub warnings: Vec<String>,
}

enum Fit {
    Slope(f64),
    /// Faster than any power, in the direction of the limit.
    Vanishing,
    Exploding,
    Inconclusive,
}

fn least_squares(s: &[f64], y: &[f64]) -> (f64, f64) {
    let n = s.len() as f64;
    let ms = s.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = s.iter().zip(y).map(|(a, b)| (a - ms) * (b - my)).sum();
    let sxx: f64 = s.iter().map(|a| (a - ms) * (a - ms)).sum();
    let slope = sxy / sxx;
    let rms = (s
        .iter()
        .zip(y)
        .map(|(a, b)| (b - my - slope * (a - ms)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, rms)
}

/// Fits ln|ωf| against ln ψ on samples ordered towards the limit.
fn fit_end(xs: &[f64], f: &Expr, psi: &AdmissiblePsi, omega: &Weight) -> Fit {
    let mut s = Vec::with_capacity(xs.len());
    let mut y = Vec::with_capacity(xs.len());
    for &x in xs {
        let value = match (f.eval(x), omega.eval(x), psi.eval(x)) {
            (Ok(v), Ok(w), Ok(u)) if u > 0.0 => (v * w).abs(),
            _ => return Fit::Inconclusive,
        };
        if value == 0.0 {
            return Fit::Vanishing;
        }
        if !value.is_finite() {
            return Fit::Exploding;
        }
        s.push(psi.eval(x).unwrap().ln());
        y.push(value.ln());
    }
    let half = s.len() / 2;
    let (slope, rms) = least_squares(&s, &y);
    let (first, _) = least_squares(&s[..half], &y[..half]);
    let (second, _) = least_squares(&s[half..], &y[half..]);
    // s moves towards the limit, so the sign of the change tells the direction
    let towards_inf = s[s.len() - 1] > s[0];
    let change = second - first;
    if change.abs() > DIVERGENCE * (1.0 + first.abs()) {
        let faster_decay = if towards_inf { change < 0.0 } else { change > 0.0 };
        return if faster_decay { Fit::Vanishing } else { Fit::Exploding };
    }
    if rms > MAX_RMS {
        return Fit::Inconclusive;
    }
    Fit::Slope((slope * 1000.0).round() / 1000.0)
}

fn geometric(from: f64, to: f64) -> Vec<f64> {
    let (a, b) = (from.ln(), to.ln());
    (0..SAMPLES)
        .map(|i| (a + (b - a) * i as f64 / (SAMPLES - 1) as f64).exp())
        .collect()
}

/// Asymptotic exponents of ωf in powers of ψ near 0 and ∞ give the strip
/// (−α, −β).
pub fn estimate_strip(f: &Expr, psi: &AdmissiblePsi, omega: &Weight) -> Result<StripEstimate> {
    let mut warnings = Vec::new();
    let near_zero = geometric(1e-3, 1e-8);
    let near_inf = geometric(1e3, 1e8);
    let lower = match fit_end(&near_zero, f, psi, omega) {
        Fit::Slope(a) => -a,
        Fit::Vanishing => f64::NEG_INFINITY,
        Fit::Exploding => f64::INFINITY,
        Fit::Inconclusive => {
            warnings.push("inconclusive fit near 0; lower end left unbounded".to_string());
            f64::NEG_INFINITY
        }
    };
    let upper = match fit_end(&near_inf, f, psi, omega) {
        Fit::Slope(b) => -b,
        Fit::Vanishing => f64::INFINITY,
        Fit::Exploding => f64::NEG_INFINITY,
        Fit::Inconclusive => {
            warnings.push("inconclusive fit near infinity; upper end left unbounded".to_string());
            f64::INFINITY
        }
    };
    let strip = Strip { lower, upper };
    let empty = strip.is_empty();
    if empty {
        warnings.push(format!("empty strip ({lower}, {upper})"));
    }
    Ok(StripEstimate { strip, empty, warnings })
}
