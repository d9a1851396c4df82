//! Operational rules of the transform checked numerically, one identity at
//! a time and through the builtin suite.
//!
//! ```bash
//! cargo run --release --example identities
//! cargo run --release --example identities -- rl-derivative
//! ```

use psi_mellin::mellinops::{builtin_suite, run_suite, Identity, IdentityParams};
use psi_mellin::prelude::*;

fn main() -> Result<()> {
    let tol = Tolerance::default();
    let f = parse_expr("exp(-x)")?;
    let psi = AdmissiblePsi::parse("x + x^2/2")?;
    let omega = Weight::parse("1+x")?;

    let params = IdentityParams { shift: c64(0.5, 0.0), ..Default::default() };
    for id in [Identity::Shifting, Identity::ShiftingLiteral, Identity::Derivative] {
        let r = check_identity(id, &f, &psi, &omega, c64(1.7, 0.0), &params, &tol)?;
        println!(
            "{:<18} lhs {:.12}  rhs {:.12}  rel {:.1e}  passed {}  diagnostic {}",
            id.name(),
            r.lhs.re,
            r.rhs.re,
            r.rel_diff,
            r.passed,
            r.diagnostic
        );
    }

    let filter = std::env::args().nth(1).unwrap_or_else(|| "convolution".to_string());
    let (reports, summary) = run_suite(&builtin_suite(), Some(&filter), &tol, None);
    for r in &reports {
        println!("{:<34} rel {:.1e}  passed {}", r.identity_name, r.rel_diff, r.passed);
    }
    println!("{summary:?}");
    Ok(())
}
