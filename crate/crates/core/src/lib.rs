//! Weighted Mellin transform with respect to a function.
//!
//! For an increasing ψ with ψ(0) = 0 and a positive weight ω the transform is
//!
//! ```text
//! F(p) = ∫₀^∞ ψ(x)^{p-1} ω(x) f(x) ψ'(x) dx
//! ```
//!
//! The crate provides the transform and its inverse, the matching
//! convolution, weighted fractional integrals and derivatives taken with
//! respect to ψ, numerical checks of the operational rules that tie them
//! together, and a solver for the associated fractional equation.
//!
//! ```
//! use psi_mellin::prelude::*;
//!
//! let f = parse_expr("exp(-x)").unwrap();
//! let psi = AdmissiblePsi::identity();
//! let omega = Weight::unit();
//! let r = mellin_forward(&f, &psi, &omega, c64(2.5, 0.0), Method::Direct, &Tolerance::default()).unwrap();
//! assert!((r.value.re - 1.329_340_388_179_137).abs() < 1e-9);
//! ```

pub mod error;
pub mod fd;
pub mod fracops;
pub mod funcspace;
pub mod mellinops;
pub mod quad;
pub mod special;
pub mod transforms;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// The transform parameter p.
pub type ComplexVal = Complex64;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub mod prelude {
    pub use crate::c64;
    pub use crate::error::{Error, Result};
    pub use crate::fracops::{
        caputo_derivative, conjugated_op, hilfer_derivative, rl_derivative, rl_integral, FracKind,
        FracSpec,
    };
    pub use crate::funcspace::{parse_complex_expr, parse_expr, AdmissiblePsi, Expr, Weight};
    pub use crate::mellinops::{
        check_convolution_theorem, check_identity, convolve, fde_closed_case3, fde_kernel_h,
        solve_fde, FdeProblem, IdentityReport,
    };
    pub use crate::quad::{QuadResult, Tolerance};
    pub use crate::special::{beta, gamma_complex, gamma_ratio};
    pub use crate::transforms::{estimate_strip, mellin_forward, mellin_inverse, Method, Strip};
    pub use num_complex::Complex64;
}

pub(crate) fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}
