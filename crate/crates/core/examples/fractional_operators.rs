//! Weighted fractional integrals and derivatives taken with respect to ψ,
//! computed directly and through conjugation to the classical operators.
//!
//! ```bash
//! cargo run --release --example fractional_operators
//! ```

use psi_mellin::fracops::apply;
use psi_mellin::prelude::*;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let c = |re| c64(re, 0.0);

    // I^{1/2} 1 = 2 sqrt(x/π) in the classical case.
    let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());
    let one = parse_expr("1")?;
    let r = rl_integral(&one, &id, &unit, c(0.5), 0.0, 2.0, &tol)?;
    println!("I^0.5 1 at 2 = {:.14}  exact {:.14}", r.value.re, 2.0 * (2.0 / PI).sqrt());

    let f = parse_expr("x*exp(-x)")?;
    let psi = AdmissiblePsi::parse("x + x^2/2")?;
    let omega = Weight::parse("1+x")?;
    let x = 1.5;
    println!("f = x e^-x, psi = x + x^2/2, omega = 1 + x, x = {x}");
    for (kind, alpha, beta) in [
        (FracKind::RlIntegral, 0.7, 0.0),
        (FracKind::RlDerivative, 0.6, 0.0),
        (FracKind::Caputo, 0.6, 0.0),
        (FracKind::Hilfer, 0.6, 0.5),
        (FracKind::RlDerivative, 1.4, 0.0),
    ] {
        let spec = FracSpec::new(kind, c(alpha), beta, 0.0)?;
        let direct = apply(&f, &psi, &omega, &spec, x, &tol)?;
        let conj = conjugated_op(&f, &psi, &omega, &spec, x, &tol)?;
        println!(
            "{kind:?} alpha = {alpha} beta = {beta}: direct {:.12}  conjugated {:.12}  diff {:.1e}",
            direct.value.re,
            conj.value.re,
            (direct.value - conj.value).norm()
        );
    }

    // Semigroup: I^a I^b = I^{a+b}.
    let inner = |t: f64| Ok(rl_integral(&f, &psi, &omega, c(0.4), 0.0, t, &tol)?.value);
    let ab = rl_integral(&inner, &psi, &omega, c(0.5), 0.0, x, &tol)?;
    let sum = rl_integral(&f, &psi, &omega, c(0.9), 0.0, x, &tol)?;
    println!("I^0.5 I^0.4 f = {:.12}  I^0.9 f = {:.12}", ab.value.re, sum.value.re);
    Ok(())
}
