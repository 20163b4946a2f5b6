//! Modified Bessel functions, the Bessel-potential kernels built from them, and the
//! dimensional constants `κ` and `κ̃`.

mod bessel;
mod constants;
mod kernels;

pub use bessel::{bessel_k, bessel_k_integral, bessel_k_prime, KernelValue};
pub use constants::{kappa, kappa_bessel_form, kappa_cosh_form, kappa_tilde};
pub use kernels::{KernelContext, ThreeDimKernels, T_MIN};
