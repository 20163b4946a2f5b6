//! Solid double integrals `∫_Ω ∫_{Ω^c} k(|x − y|) dy dx` for radial kernels.
//!
//! For an inside point `x` the inner integral is `∫_{S²} Σ ∫_{exit intervals} k(ρ) ρ² dρ dω`.
//! Along each ray the outside set is `[c₁, c₂] ∪ [c₃, c₄] ∪ … ∪ [c_last, ∞)`, so with the
//! exact radial tail `T(L) = ∫_L^∞ k(ρ) ρ² dρ` the radial part is
//! `T(c₁) − T(c₂) + T(c₃) − … + T(c_last)`. The angular part uses twelve icosahedral
//! directions under a random rotation per point, and the outer integral is the sample mean
//! over inside points. This avoids truncating `Ω^c` and the large variance of sampling
//! singular kernels at random pairs.

use super::three_dim;
use super::values::FunctionalValue;
use crate::bessel_kernels::KernelContext;
use crate::error::Result;
use crate::quadrature::compensated_sum;
use crate::surface_geometry::{VolumeSampler, RAY_DIRECTIONS};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Per-inside-point estimates of several solid integrals, `n_points × n_columns`.
pub(crate) struct SolidSamples {
    rows: Vec<Vec<f64>>,
    scale: f64,
}

impl SolidSamples {
    /// Estimate and standard error of `Σ_c coeff_c · column_c`, using the paired spread.
    pub fn combination(&self, coeffs: &[(usize, f64)]) -> (f64, f64) {
        let n = self.rows.len() as f64;
        let vals: Vec<f64> = self.rows.iter().map(|r| coeffs.iter().map(|&(c, k)| k * r[c]).sum()).collect();
        let mean = compensated_sum(vals.iter().copied()) / n;
        let var = compensated_sum(vals.iter().map(|v| (v - mean).powi(2))) / (n - 1.0);
        (self.scale * mean, self.scale * (var / n).sqrt())
    }

    pub fn column(&self, c: usize) -> (f64, f64) {
        self.combination(&[(c, 1.0)])
    }

    pub fn n_points(&self) -> u64 {
        self.rows.len() as u64
    }
}

/// `tails(L, out)` writes the radial tail of every column at distance `L` into `out`.
pub(crate) fn solid_samples<F>(sampler: &VolumeSampler, columns: usize, tails: F) -> SolidSamples
where
    F: Fn(f64, &mut [f64]) + Sync,
{
    let rays = sampler.rays();
    let rows: Vec<Vec<f64>> = (0..sampler.inside_points().len())
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![0.0; columns];
            let mut t = vec![0.0; columns];
            for k in 0..RAY_DIRECTIONS {
                for (q, &c) in rays.crossings(i, k).iter().enumerate() {
                    tails(c, &mut t);
                    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                    acc.iter_mut().zip(&t).for_each(|(a, v)| *a += sign * v);
                }
            }
            acc.iter_mut().for_each(|a| *a /= RAY_DIRECTIONS as f64);
            acc
        })
        .collect();
    SolidSamples { rows, scale: sampler.volume() * 4.0 * PI }
}

/// `4 ∫_{Ω^c} ∫_Ω F_a(x − y)/|x − y| dx dy`, the solid part of `Φ`.
pub fn solid_f_term(sampler: &VolumeSampler, ctx: &KernelContext) -> Result<FunctionalValue> {
    let k = three_dim(ctx)?;
    let s = solid_samples(sampler, 1, |l, out| out[0] = k.tail_f_over_r(l));
    let (v, e) = s.column(0);
    Ok(FunctionalValue::new("phi_solid_term", 4.0 * v, 4.0 * e, s.n_points()))
}

/// `∫_{Ω^c} ∫_Ω ∂_a(G_a(x − y)/|x − y|²) dx dy`, negative for every domain.
pub fn solid_green_derivative_term(sampler: &VolumeSampler, ctx: &KernelContext) -> Result<FunctionalValue> {
    let k = three_dim(ctx)?;
    let s = solid_samples(sampler, 1, |l, out| out[0] = k.tail_green_over_r2_da(l));
    let (v, e) = s.column(0);
    Ok(FunctionalValue::new("solid_green_derivative", v, e, s.n_points()))
}
