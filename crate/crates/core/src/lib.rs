//! Numerical verification of inequalities for the Gagliardo seminorm of the Gauss map
//! of a closed surface and of the Bessel-potential functional that interpolates between
//! the nonlocal and the classical regime.

// Input guards are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel_kernels;
pub mod error;
pub mod functionals;
pub mod quadrature;
pub mod surface_geometry;

pub use error::{Error, Result};
