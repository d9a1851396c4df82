//! The forward transform in direct and conjugated form, strip estimation,
//! inversion, and the bilateral Laplace and Fourier transforms taken with
//! respect to a function.

mod bilateral;
mod inverse;
mod mellin;
mod strip;

pub use bilateral::{fourier_psi_omega, laplace_bilateral};
pub use inverse::{inversion_panel_width, mellin_inverse, mellin_inverse_segment};
pub use mellin::{
    mellin_classical, mellin_forward, mellin_forward_job, mellin_of, Method, TransformJob,
};
pub use strip::{estimate_strip, Strip, StripEstimate};
