//! Gamma, log-gamma, gamma ratios and Beta for complex arguments.
//!
//! Lanczos approximation with g = 7 and nine coefficients, reflected into the
//! right half-plane for `Re z < 0.5`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const POLE_EPS: f64 = 1e-12;

/// Returns the integer `-n` if `z` sits on a pole of Γ.
pub fn pole_index(z: Complex64) -> Option<i64> {
    if z.im.abs() > POLE_EPS || z.re > POLE_EPS {
        return None;
    }
    let r = z.re.round();
    if (z.re - r).abs() <= POLE_EPS {
        Some(r as i64)
    } else {
        None
    }
}

fn lanczos_sum(z: Complex64) -> Complex64 {
    // z is the shifted argument (original minus one)
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// sin(πz) with the real part reduced first, so values near integers keep
/// their relative accuracy.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    (Complex64::new(r, z.im) * PI).sin()
}

/// A branch of ln sin(πz) that stays finite for large |Im z|.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    let w = Complex64::new(r, z.im);
    if w.im.abs() < 5.0 {
        return sin_pi(w).ln();
    }
    if w.im > 0.0 {
        // sin(πw) = e^{-iπw} (e^{2iπw} - 1) / (2i)
        let i = Complex64::i();
        -i * PI * w + ((2.0 * i * PI * w).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        ln_sin_pi(w.conj()).conj()
    }
}

/// A branch of ln Γ(z); exp of it is Γ(z).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if pole_index(z).is_some() {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let lg = ln_gamma(1.0 - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - lg);
    }
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + lanczos_sum(zm).ln())
}

fn gamma_right(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    let s = lanczos_sum(zm);
    (LN_SQRT_2PI + (zm + 0.5) * t.ln() - t).exp() * s
}

pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if pole_index(z).is_some() {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        return Ok(gamma_right(z));
    }
    if z.im.abs() < 20.0 {
        Ok(PI / (sin_pi(z) * gamma_right(1.0 - z)))
    } else {
        Ok(ln_gamma(z)?.exp())
    }
}

pub fn gamma(x: f64) -> Result<f64> {
    Ok(gamma_complex(Complex64::new(x, 0.0))?.re)
}

/// Γ(a)/Γ(b) with pole bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRatio {
    #[serde(serialize_with = "crate::ser_complex")]
    pub numerator_arg: Complex64,
    #[serde(serialize_with = "crate::ser_complex")]
    pub denominator_arg: Complex64,
    /// Infinite when `pole` is set.
    #[serde(serialize_with = "crate::ser_complex")]
    pub value: Complex64,
    pub pole: bool,
}

impl GammaRatio {
    pub fn finite(&self) -> Option<Complex64> {
        (!self.pole).then_some(self.value)
    }
}

fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn gamma_ratio(a: Complex64, b: Complex64) -> GammaRatio {
    let make = |value, pole| GammaRatio { numerator_arg: a, denominator_arg: b, value, pole };
    match (pole_index(a), pole_index(b)) {
        (Some(na), Some(nb)) => {
            // limit of Γ(-n+ε)/Γ(-m+ε)
            let (n, m) = (na.unsigned_abs(), nb.unsigned_abs());
            let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
            make(Complex64::new(sign * factorial(m) / factorial(n), 0.0), false)
        }
        (Some(_), None) => make(Complex64::new(f64::INFINITY, 0.0), true),
        (None, Some(_)) => make(Complex64::new(0.0, 0.0), false),
        (None, None) => {
            if a == b {
                return make(Complex64::new(1.0, 0.0), false);
            }
            if a.norm() <= 100.0 && b.norm() <= 100.0 {
                if let (Ok(ga), Ok(gb)) = (gamma_complex(a), gamma_complex(b)) {
                    let v = ga / gb;
                    if v.re.is_finite() && v.im.is_finite() && gb.norm() > 0.0 {
                        return make(v, false);
                    }
                }
            }
            // both arguments are off the poles, so the logs exist
            let v = (ln_gamma(a).unwrap() - ln_gamma(b).unwrap()).exp();
            make(v, false)
        }
    }
}

pub fn beta(a: Complex64, b: Complex64) -> Result<Complex64> {
    if pole_index(a).is_some() {
        return Err(Error::Pole(a));
    }
    if pole_index(b).is_some() {
        return Err(Error::Pole(b));
    }
    if pole_index(a + b).is_some() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let direct = gamma_complex(a)? * gamma_complex(b)? / gamma_complex(a + b)?;
    if direct.re.is_finite() && direct.im.is_finite() && direct.norm() > 0.0 {
        return Ok(direct);
    }
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn known_values() {
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma_complex(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma_complex(c(0.5, 0.0)).unwrap(), c(sqrt_pi, 0.0)) < 1e-13);
        assert!(rel(gamma_complex(c(2.5, 0.0)).unwrap(), c(0.75 * sqrt_pi, 0.0)) < 1e-13);
        assert!((gamma(2.5).unwrap() - 1.329_340_388_179_137).abs() < 1e-13);
        // Γ(-0.5) = -2√π
        assert!(rel(gamma_complex(c(-0.5, 0.0)).unwrap(), c(-2.0 * sqrt_pi, 0.0)) < 1e-13);
        // factorials
        let mut f = 1.0;
        for n in 1..30 {
            f *= n as f64;
            let g = gamma(n as f64 + 1.0).unwrap();
            assert!((g - f).abs() / f < 1e-13, "{n}");
        }
        // |Γ(iy)|² = π/(y sinh(πy))
        for y in [0.5_f64, 3.0, 12.0, 30.0] {
            let g = gamma_complex(c(0.0, y)).unwrap();
            let want = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() - want).abs() / want < 1e-11, "{y}");
        }
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for y in [1.0_f64, 10.0, 40.0] {
            let g = gamma_complex(c(0.5, y)).unwrap();
            let want = PI / (PI * y).cosh();
            assert!((g.norm_sqr() - want).abs() / want < 1e-11, "{y}");
        }
    }

    #[test]
    fn poles_are_errors() {
        for n in 0..5 {
            assert!(matches!(gamma_complex(c(-(n as f64), 0.0)), Err(Error::Pole(_))));
        }
        assert!(gamma_complex(c(-1.0, 1e-6)).is_ok());
    }

    #[test]
    fn ratio_examples() {
        assert!(rel(gamma_ratio(c(3.7, 0.0), c(3.7, 0.0)).value, c(1.0, 0.0)) < 1e-15);
        assert!(rel(gamma_ratio(c(3.0, 0.0), c(2.0, 0.0)).value, c(2.0, 0.0)) < 1e-14);
        assert!(rel(gamma_ratio(c(0.5, 0.0), c(2.0, 0.0)).value, c(PI.sqrt(), 0.0)) < 1e-13);
        let r = gamma_ratio(c(-2.0, 0.0), c(1.5, 0.0));
        assert!(r.pole && r.finite().is_none());
        let r = gamma_ratio(c(1.5, 0.0), c(-3.0, 0.0));
        assert_eq!(r.value, c(0.0, 0.0));
        // Γ(-1+ε)/Γ(-2+ε) → -2
        let r = gamma_ratio(c(-1.0, 0.0), c(-2.0, 0.0));
        assert!(!r.pole);
        assert!((r.value.re + 2.0).abs() < 1e-15);
        let near = gamma_complex(c(-1.0 + 1e-7, 0.0)).unwrap() / gamma_complex(c(-2.0 + 1e-7, 0.0)).unwrap();
        assert!((near.re + 2.0).abs() < 1e-5);
        // large arguments go through the logarithms
        let r = gamma_ratio(c(180.5, 0.0), c(180.0, 0.0));
        assert!((r.value.re - 180.0_f64.sqrt()).abs() / 180.0_f64.sqrt() < 1e-3);
        let r = gamma_ratio(c(300.0, 0.0), c(299.0, 0.0));
        assert!((r.value.re - 299.0).abs() / 299.0 < 1e-10);
    }

    #[test]
    fn beta_examples() {
        assert!(rel(beta(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(beta(c(0.5, 0.0), c(1.5, 0.0)).unwrap(), c(PI / 2.0, 0.0)) < 1e-13);
        assert!(rel(beta(c(2.0, 0.0), c(3.0, 0.0)).unwrap(), c(1.0 / 12.0, 0.0)) < 1e-14);
        assert!(matches!(beta(c(0.0, 0.0), c(1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for z in [c(0.3, 0.1), c(7.5, -3.0), c(-4.2, 2.0), c(-0.7, -25.0), c(40.0, 10.0)] {
            let g = gamma_complex(z).unwrap();
            let lg = ln_gamma(z).unwrap().exp();
            assert!(rel(lg, g) < 1e-11, "{z}");
        }
        // stays finite where Γ under/overflows
        assert!(ln_gamma(c(500.0, 0.0)).unwrap().re.is_finite());
        assert!(ln_gamma(c(-0.5, 400.0)).unwrap().re.is_finite());
    }
}
