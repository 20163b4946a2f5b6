//! Seminorms, nonlocal perimeter, the monotone functional `Φ(Ω, a)` and its derivative,
//! and the residuals and slacks of the identities and inequalities relating them.
//!
//! Boundary double sums exclude the diagonal; their error is the change from the grid at
//! half resolution. Solid double integrals over `Ω × Ω^c` are Monte Carlo estimates.

mod checks;
mod pairs;
mod perimeter;
mod phi;
mod seminorms;
mod solid;
mod values;

pub use checks::{
    check_endpoint_inequality, check_fractional_inequality, check_l1_inequality, check_perimeter_forms,
    check_projected_normal_identity, check_solid_boundary_inequality, constants_checks,
    derivative_identity_checks, projected_normal_identity_residual, weight_identity_checks, KernelCheck,
    CONSTANTS_TOL, IDENTITY_TOL,
};
pub use perimeter::{nonlocal_perimeter_boundary, nonlocal_perimeter_mc, perimeter_tail_bound, perimeter_trunc_radius};
pub use phi::{phi, phi_curve, phi_derivative, PhiCurve, PhiPoint};
pub use seminorms::{abs_seminorm, frac_fundamental_form_sq, gagliardo_seminorm_sq, sphere_distance_moment};
pub use solid::{solid_f_term, solid_green_derivative_term};
pub use values::{FunctionalValue, InequalityReport, DECISION_FACTOR};

use crate::bessel_kernels::{KernelContext, ThreeDimKernels};
use crate::error::{Error, Result};
use crate::surface_geometry::QuadratureSurface;

/// Largest Helmholtz parameter the lat-long grid of parameter `n` resolves.
pub fn regime_cap(resolution: usize) -> f64 {
    resolution as f64 / 20.0
}

pub(crate) fn check_regime(surface: &QuadratureSurface, a: f64) -> Result<()> {
    let a_max = regime_cap(surface.resolution());
    if a > a_max {
        return Err(Error::Regime { a, a_max, resolution: surface.resolution() });
    }
    Ok(())
}

/// Closed-form kernels; surfaces live in ℝ³, so the context must be three-dimensional.
pub(crate) fn three_dim(ctx: &KernelContext) -> Result<ThreeDimKernels> {
    ctx.closed_form_3d()
        .ok_or_else(|| Error::Domain(format!("surface functionals are three-dimensional, got d = {}", ctx.d())))
}

/// Evaluates `f` on the surface and at half resolution; returns values and `|fine − coarse|`.
pub(crate) fn refined(
    surface: &QuadratureSurface,
    f: impl Fn(&QuadratureSurface) -> Result<Vec<f64>>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let fine = f(surface)?;
    let coarse = f(&surface.coarsened()?)?;
    let err = fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
    Ok((fine, err))
}
