//! Solving ψ(x)^α 𝒟^α y = g for 1 < α ≤ 2 with the named problems and
//! closed-form references.
//!
//! ```bash
//! cargo run --release --example fde_solution
//! ```

use psi_mellin::mellinops::{fde_case1, fde_preset};
use psi_mellin::prelude::*;

fn main() -> Result<()> {
    let tol = Tolerance::default();

    // ψ = x, g = x^{-2}: y = √π x^{-2}.
    let p3 = fde_preset("case3")?;
    for x in [0.5, 1.0, 2.0] {
        let y = solve_fde(&p3, x, &tol)?;
        let exact = fde_closed_case3(1.0, -2.0, 1.5, x)?;
        println!("case3 x = {x}: y = {:.14}  closed form {:.14}", y.value.re, exact);
    }

    // ψ = x, g = e^{-x}: the generic solver against the reduced formula.
    let p1 = fde_preset("case1")?;
    let y = solve_fde(&p1, 1.0, &tol)?;
    let reduced = fde_case1(&p1.g, p1.alpha, 1.0, &tol)?;
    println!("case1 x = 1: generic {:.15}  reduced {:.15}", y.value.re, reduced.value.re);

    let p2 = fde_preset("case2")?;
    println!("case2 x = 1: y = {:.12}", solve_fde(&p2, 1.0, &tol)?.value.re);

    // ω = e^x, g = x²: the integrand grows without bound at s = 0.
    match solve_fde(&fde_preset("case4")?, 1.0, &tol) {
        Ok(y) => println!("case4 x = 1: y = {:.12}", y.value.re),
        Err(e) => println!("case4 x = 1: {e}"),
    }
    // ψ = ln x does not vanish at 0.
    if let Err(e) = fde_preset("case5") {
        println!("case5: {e}");
    }
    Ok(())
}
