//! The inverse transform along a vertical line, from a closed-form F(p)
//! and as a round trip through the forward transform.
//!
//! ```bash
//! cargo run --release --example inversion
//! ```

use psi_mellin::prelude::*;

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());

    // Γ(p) on Re p = 1 inverts to e^{-x}.
    for x in [0.5, 1.0, 3.0] {
        let y = mellin_inverse(gamma_complex, &id, &unit, x, 1.0, &tol)?;
        println!("x = {x}: y = {:.14}  e^-x = {:.14}", y.value.re, (-x).exp());
    }

    // Round trip with a general pair.
    let f = parse_expr("x*exp(-x)")?;
    let psi = AdmissiblePsi::parse("x + x^2/2")?;
    let omega = Weight::parse("1+x")?;
    let strip = estimate_strip(&f, &psi, &omega)?.strip;
    let gamma = strip.lower + 1.0;
    println!("strip ({}, {}), line Re p = {gamma}", strip.lower, strip.upper);
    let big_f = |p: Complex64| Ok(mellin_forward(&f, &psi, &omega, p, Method::Direct, &tol)?.value);
    for x in [0.3, 1.0, 2.5] {
        let y = mellin_inverse(big_f, &psi, &omega, x, gamma, &tol)?;
        println!("x = {x}: y = {:.12}  f = {:.12}", y.value.re, f.eval(x)?);
    }
    Ok(())
}
