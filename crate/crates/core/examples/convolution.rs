//! The convolution matched to the transform and the product rule
//! 𝓜[f ∗ g] = 𝓜[f]·𝓜[g].
//!
//! ```bash
//! cargo run --release --example convolution
//! ```

use psi_mellin::prelude::*;

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let e = parse_expr("exp(-x)")?;
    let (id, unit) = (AdmissiblePsi::identity(), Weight::unit());

    // Classical: (e^{-x} ∗ e^{-x})(x) = 2 K₀(2√x).
    let r = convolve(&e, &e, &id, &unit, 1.0, &tol)?;
    println!("(e^-x * e^-x)(1) = {:.14}", r.value.re);

    let rep = check_convolution_theorem(&e, &e, &id, &unit, c64(1.5, 0.0), &tol)?;
    println!("classical at p = 1.5: lhs {:.12}  rhs {:.12}  rel {:.1e}", rep.lhs.re, rep.rhs.re, rep.rel_diff);

    let psi = AdmissiblePsi::parse("x + x^2/2")?;
    let omega = Weight::parse("1+x")?;
    let g = parse_expr("x*exp(-x)")?;
    let rep = check_convolution_theorem(&e, &g, &psi, &omega, c64(1.2, 0.3), &tol)?;
    println!(
        "general at p = 1.2+0.3i: lhs {:.10}  rhs {:.10}  rel {:.1e}  passed {}",
        rep.lhs, rep.rhs, rep.rel_diff, rep.passed
    );
    Ok(())
}
