//! The nonlocal perimeter `Λ(Ω, a) = ∫_{Ω^c} ∫_Ω G_a(x − y) dx dy` in boundary and solid form.

use super::pairs::{pair_count, pair_sums};
use super::values::FunctionalValue;
use super::{check_regime, refined, three_dim};
use crate::bessel_kernels::{KernelContext, ThreeDimKernels};
use crate::error::Result;
use crate::quadrature::compensated_sum;
use crate::surface_geometry::{auto_trunc_radius, Shape, VolumeSampler};
use crate::surface_geometry::QuadratureSurface;
use std::f64::consts::PI;

/// Pair shifts per inside point in the Monte Carlo estimator.
const PAIR_SHIFTS: usize = 8;

/// `Λ = a^{-2} Σ_{i≠j} w_i w_j G_a(|x_i − x_j|) ν_i·ν_j`.
pub fn nonlocal_perimeter_boundary(surface: &QuadratureSurface, ctx: &KernelContext) -> Result<FunctionalValue> {
    let k = three_dim(ctx)?;
    check_regime(surface, ctx.a())?;
    let (v, e) = refined(surface, |s| Ok(perimeter_sum(s, k)))?;
    let a2 = ctx.a() * ctx.a();
    Ok(FunctionalValue::new("lambda_boundary", v[0] / a2, e[0] / a2, pair_count(surface)))
}

pub(crate) fn perimeter_sum(s: &QuadratureSurface, k: ThreeDimKernels) -> Vec<f64> {
    pair_sums(s, 1, move |p, w, acc| acc[0] += w * k.green_g(p.r()) * p.dot())
}

/// Bound on the part of `Λ` from pairs with `|x − y| > L`: `|Ω| · 4π ∫_L^∞ G_a ρ² dρ`.
pub fn perimeter_tail_bound(shape: &Shape, ctx: &KernelContext, distance: f64) -> Result<f64> {
    let k = three_dim(ctx)?;
    Ok(shape.volume() * 4.0 * PI * k.tail_green(distance))
}

/// Truncation radius for [`nonlocal_perimeter_mc`] whose tail bound is within `tol · reference`.
pub fn perimeter_trunc_radius(shape: &Shape, ctx: &KernelContext, reference: f64, tol: f64) -> Result<f64> {
    let k = three_dim(ctx)?;
    let vol = shape.volume();
    Ok(auto_trunc_radius(shape, |l| vol * 4.0 * PI * k.tail_green(l), reference, tol))
}

/// Monte Carlo estimate of `Λ` over inside × outside pairs.
///
/// Each inside point is paired with `PAIR_SHIFTS` outside points. The standard error
/// combines the spread of the per-inside-point and per-outside-point means; the error
/// also carries the bound on the part of `Ω^c` beyond the truncation radius.
pub fn nonlocal_perimeter_mc(sampler: &VolumeSampler, ctx: &KernelContext) -> Result<FunctionalValue> {
    let k = three_dim(ctx)?;
    let xs = sampler.inside_points();
    let ys = sampler.outside_points();
    let (n, m) = (xs.len(), ys.len());
    let mut row_means = Vec::with_capacity(n);
    let mut col_sums = vec![0.0; m];
    let mut col_counts = vec![0u32; m];
    for (i, x) in xs.iter().enumerate() {
        let mut row = 0.0;
        for s in 0..PAIR_SHIFTS {
            let j = (i * PAIR_SHIFTS + s) % m;
            let y = ys[j];
            let r = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
            let g = k.green_g(r);
            row += g;
            col_sums[j] += g;
            col_counts[j] += 1;
        }
        row_means.push(row / PAIR_SHIFTS as f64);
    }
    let col_means: Vec<f64> =
        col_sums.iter().zip(&col_counts).filter(|(_, &c)| c > 0).map(|(s, &c)| s / c as f64).collect();
    let mean = compensated_sum(row_means.iter().copied()) / n as f64;
    let var = |v: &[f64]| {
        let mu = compensated_sum(v.iter().copied()) / v.len() as f64;
        compensated_sum(v.iter().map(|x| (x - mu).powi(2))) / (v.len() as f64 - 1.0)
    };
    let se = (var(&row_means) / n as f64 + var(&col_means) / col_means.len() as f64).sqrt();
    let scale = sampler.volume() * sampler.exact_shell_volume();
    let rc = sampler.shape().circumradius();
    let tail = perimeter_tail_bound(sampler.shape(), ctx, sampler.trunc_radius() - rc)?;
    Ok(FunctionalValue::new("lambda_mc", scale * mean, scale * se + tail, (n * PAIR_SHIFTS) as u64))
}
