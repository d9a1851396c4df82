//! Central finite differences with three-level Richardson extrapolation.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Stencil coefficients on offsets -2..=2 for derivative orders 1 to 4.
const STENCILS: [[f64; 5]; 4] = [
    [0.0, -0.5, 0.0, 0.5, 0.0],
    [0.0, 1.0, -2.0, 1.0, 0.0],
    [-0.5, 1.0, 0.0, -1.0, 0.5],
    [1.0, -4.0, 6.0, -4.0, 1.0],
];

pub const MAX_ORDER: usize = 4;

/// f', f'', ... up to order `n` at `x`, from steps h, h/2, h/4.
///
/// The samples lie in [x - 2h, x + 2h]; evaluations are shared between
/// orders and run in parallel.
pub fn derivatives<F>(f: F, x: f64, n: usize, h: f64) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    if n == 0 || n > MAX_ORDER {
        return Err(Error::invalid(format!("derivative order {n} outside 1..={MAX_ORDER}")));
    }
    let quarter = h / 4.0;
    if !(h > 0.0) || x + quarter == x || x - quarter == x {
        return Err(Error::StepUnderflow { x });
    }
    let reach: i64 = if n <= 2 { 1 } else { 2 };
    let mut offsets: Vec<i64> = Vec::new();
    for scale in [4i64, 2, 1] {
        for j in -reach..=reach {
            offsets.push(j * scale);
        }
    }
    offsets.sort_unstable();
    offsets.dedup();
    let values: Vec<Complex64> = offsets
        .par_iter()
        .map(|&m| f(x + m as f64 * quarter))
        .collect::<Result<_>>()?;
    let cache: BTreeMap<i64, Complex64> = offsets.into_iter().zip(values).collect();

    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let stencil = &STENCILS[k - 1];
        let estimate = |scale: i64| {
            let step = scale as f64 * quarter;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &c) in stencil.iter().enumerate() {
                if c != 0.0 {
                    acc += cache[&((j as i64 - 2) * scale)] * c;
                }
            }
            acc / step.powi(k as i32)
        };
        let (d0, d1, d2) = (estimate(4), estimate(2), estimate(1));
        let r0 = (d1 * 4.0 - d0) / 3.0;
        let r1 = (d2 * 4.0 - d1) / 3.0;
        out.push((r1 * 16.0 - r0) / 15.0);
    }
    Ok(out)
}

/// First derivative of a real function.
pub fn derivative<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let d = derivatives(|t| Ok(Complex64::new(f(t)?, 0.0)), x, 1, h)?;
    Ok(d[0].re)
}
