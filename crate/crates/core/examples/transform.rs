//! The forward transform in direct and conjugated form, its strip of
//! existence, and the bilateral Laplace and Fourier transforms taken with
//! respect to a function.
//!
//! ```bash
//! cargo run --release --example transform
//! ```

use psi_mellin::prelude::*;
use psi_mellin::transforms::{fourier_psi_omega, laplace_bilateral};

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let f = parse_expr("exp(-x)")?;

    // Classical case: the transform of e^{-x} is Γ(p).
    let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());
    for p in [c64(0.5, 0.0), c64(2.5, 0.0), c64(1.5, 2.0)] {
        let r = mellin_forward(&f, &id, &unit, p, Method::Direct, &tol)?;
        let exact = gamma_complex(p)?;
        println!("p = {p:<8}  F = {:.12}  |F - gamma(p)| = {:.1e}", r.value, (r.value - exact).norm());
    }

    // A general pair: the direct integral against the classical transform
    // of (ωf)∘ψ⁻¹.
    let psi = AdmissiblePsi::parse("ln(1+x)")?;
    let omega = Weight::parse("1+x^2")?;
    let g = parse_expr("exp(-2*x)")?;
    let strip = estimate_strip(&g, &psi, &omega)?;
    println!("strip of existence: ({}, {})", strip.strip.lower, strip.strip.upper);
    let p = c64(1.5, 0.5);
    let direct = mellin_forward(&g, &psi, &omega, p, Method::Direct, &tol)?;
    let conj = mellin_forward(&g, &psi, &omega, p, Method::Conjugated, &tol)?;
    println!("direct     {:.14}", direct.value);
    println!("conjugated {:.14}", conj.value);

    // Transforms over the whole line with ψ, ω given on ℝ.
    let gauss = parse_expr("exp(-x^2)")?;
    let (x, one) = (parse_expr("x")?, parse_expr("1")?);
    let l = laplace_bilateral(&gauss, &x, &one, c64(1.0, 0.0), &tol)?;
    println!("Laplace of exp(-x^2) at 1: {:.14} (sqrt(pi) e^(1/4) = {:.14})", l.value.re, std::f64::consts::PI.sqrt() * 0.25f64.exp());
    let fr = fourier_psi_omega(&gauss, &x, &one, 2.0, &tol)?;
    println!("Fourier of exp(-x^2) at 2: {:.14} (e^-1/sqrt(2) = {:.14})", fr.value.re, (-1.0f64).exp() / 2f64.sqrt());
    Ok(())
}
