//! Parsing functions, differentiating them symbolically, and building the
//! admissible ψ and weight ω that every other part of the crate takes.
//!
//! ```bash
//! cargo run --example expressions
//! ```

use psi_mellin::funcspace::d_psi_omega;
use psi_mellin::prelude::*;

fn main() -> Result<()> {
    let f = parse_expr("x^2 * exp(-x) + sin(3*x)/x")?;
    let df = f.derivative()?;
    println!("f    = {f}");
    println!("f'   = {df}");
    println!("f'(1.2) = {:.15}", df.eval(1.2)?);

    // Complex grammar: variable p, imaginary unit i, and gamma.
    let big_f = parse_complex_expr("gamma(p) * 2^(-p)")?;
    println!("F(1.5+2i) = {}", big_f.eval_complex(c64(1.5, 2.0))?);

    // ψ must vanish at 0 and increase; its inverse is found numerically
    // when no closed form is known.
    let psi = AdmissiblePsi::parse("x + x^2/2")?;
    let u = psi.eval(3.0)?;
    println!("psi(3) = {u}, psi^-1(psi(3)) = {:.15}", psi.inverse(u)?);
    match AdmissiblePsi::parse("ln(x)") {
        Ok(_) => println!("ln(x) accepted"),
        Err(e) => println!("ln(x) rejected: {e}"),
    }

    let omega = Weight::parse("1 + x")?;
    // 𝒟 = (1/ψ')(d/dx + ω'/ω), applied twice.
    let d2 = d_psi_omega(&parse_expr("exp(-x)")?, &psi, &omega, 2, 1.0)?;
    println!("D^2 exp(-x) at 1 = {d2:.15}");
    Ok(())
}
