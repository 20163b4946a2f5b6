//! The monotone functional
//! `Φ(Ω, a) = ∫∫ W_a(x−y) |ν(x)−ν(y)|²/|x−y|² dσ dσ + 4 ∫_{Ω^c}∫_Ω F_a(x−y)/|x−y| dx dy`
//! and its derivative
//! `∂_aΦ = −∫∫ G_a |ν(x)−ν(y)|² dσ dσ − 4 ∫∫ ∂_a(a² ∂_a(G_a/|x−y|²)) dx dy`.
//!
//! A whole curve over several `a` is computed from one pass over node pairs and one
//! pass over the sampler, so all points share the same quadrature grid and random
//! numbers, and differences between neighbouring points get paired error estimates.

use super::pairs::{pair_count, pair_sums};
use super::solid::solid_samples;
use super::values::{FunctionalValue, InequalityReport, DECISION_FACTOR};
use super::{check_regime, three_dim};
use crate::bessel_kernels::{KernelContext, ThreeDimKernels};
use crate::error::{Error, Result};
use crate::surface_geometry::{QuadratureSurface, VolumeSampler};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `Φ` and related quantities at one value of `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiPoint {
    pub a: f64,
    pub phi: FunctionalValue,
    /// The `W_a`-weighted boundary double integral.
    pub boundary_term: FunctionalValue,
    /// The solid `F_a` term, including its factor 4.
    pub solid_term: FunctionalValue,
    pub derivative: FunctionalValue,
    /// `Λ(Ω, a)` from the boundary form.
    pub lambda: FunctionalValue,
    /// `0 ≤ 4 ∫∫ ∂_a(a² ∂_a(G_a/ρ²)) + ∫∫ G_a |Δν|²`, whose slack is `−∂_aΦ`.
    pub solid_boundary: InequalityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiCurve {
    pub points: Vec<PhiPoint>,
    /// Error of `Φ(a_{k+1}) − Φ(a_k)` from paired estimates.
    pub step_errors: Vec<f64>,
}

impl PhiCurve {
    /// `(Φ(a_{k+1}) − Φ(a_k), error)` for consecutive points.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        self.points
            .windows(2)
            .zip(&self.step_errors)
            .map(|(w, &e)| (w[1].phi.value - w[0].phi.value, e))
            .collect()
    }

    /// Every step decreases by more than the decision threshold.
    pub fn strictly_decreasing(&self) -> bool {
        self.steps().iter().all(|&(d, e)| d < -DECISION_FACTOR * e)
    }

    /// No step increases beyond the decision threshold.
    pub fn non_increasing(&self) -> bool {
        self.steps().iter().all(|&(d, e)| d <= DECISION_FACTOR * e)
    }

    /// `(max Φ − min Φ) / mean Φ`.
    pub fn relative_spread(&self) -> f64 {
        let v: Vec<f64> = self.points.iter().map(|p| p.phi.value).collect();
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        (max - min) / (v.iter().sum::<f64>() / v.len() as f64)
    }
}

const BOUNDARY_COLUMNS: usize = 3;

fn boundary_sums(s: &QuadratureSurface, kernels: &[ThreeDimKernels]) -> Vec<f64> {
    let m = kernels.len();
    let a: Vec<f64> = kernels.iter().map(|k| k.a).collect();
    pair_sums(s, BOUNDARY_COLUMNS * m, move |p, w, acc| {
        let r = p.r();
        let dn2 = p.dn2();
        let g0 = w / (4.0 * PI * r);
        let wterm = g0 * dn2 / r;
        let bterm = g0 * dn2;
        let lterm = g0 * p.dot();
        for (k, &ak) in a.iter().enumerate() {
            let e = (-ak * r).exp();
            acc[3 * k] += e * wterm;
            acc[3 * k + 1] += e * bterm;
            acc[3 * k + 2] += e * lterm;
        }
    })
}

/// `Φ` over `a_values` with shared quadrature and random numbers.
pub fn phi_curve(
    surface: &QuadratureSurface,
    sampler: &VolumeSampler,
    ctx: &KernelContext,
    a_values: &[f64],
) -> Result<PhiCurve> {
    three_dim(ctx)?;
    if a_values.is_empty() {
        return Err(Error::Configuration("the list of Helmholtz parameters is empty".into()));
    }
    let mut kernels = Vec::with_capacity(a_values.len());
    for &a in a_values {
        let c = ctx.with_a(a)?;
        check_regime(surface, a)?;
        kernels.push(three_dim(&c)?);
    }
    if sampler.shape() != surface.shape() {
        return Err(Error::Configuration("sampler and surface describe different shapes".into()));
    }
    let m = kernels.len();
    let fine = boundary_sums(surface, &kernels);
    let coarse = boundary_sums(&surface.coarsened()?, &kernels);
    let solid = solid_samples(sampler, 2 * m, |l, out| {
        for (k, kern) in kernels.iter().enumerate() {
            out[2 * k] = kern.tail_f_over_r(l);
            out[2 * k + 1] = kern.tail_solid_derivative(l);
        }
    });
    let pairs = pair_count(surface);
    let samples = solid.n_points();

    let mut points = Vec::with_capacity(m);
    for (k, &a) in a_values.iter().enumerate() {
        let col = |c: usize| (fine[3 * k + c], (fine[3 * k + c] - coarse[3 * k + c]).abs());
        let (wv, we) = col(0);
        let (bv, be) = col(1);
        let (lv, le) = col(2);
        let (sb, sbe) = solid.column(2 * k);
        let (sd, sde) = solid.column(2 * k + 1);
        let boundary_term = FunctionalValue::new("phi_boundary_term", wv, we, pairs);
        let solid_term = FunctionalValue::new("phi_solid_term", 4.0 * sb, 4.0 * sbe, samples);
        let phi = boundary_term.plus(&solid_term, "phi");
        let b = FunctionalValue::new("green_normal_deficit", bv, be, pairs);
        let d = FunctionalValue::new("solid_derivative_term", 4.0 * sd, 4.0 * sde, samples);
        let lhs = b.plus(&d, "solid_boundary_sum");
        let derivative = lhs.scaled(-1.0, "phi_derivative");
        let a2 = a * a;
        let lambda = FunctionalValue::new("lambda_boundary", lv / a2, le / a2, pairs);
        let solid_boundary = InequalityReport::new(lhs, FunctionalValue::exact("zero", 0.0));
        points.push(PhiPoint { a, phi, boundary_term, solid_term, derivative, lambda, solid_boundary });
    }

    let step_errors = (1..m)
        .map(|k| {
            let dw_fine = fine[3 * k] - fine[3 * (k - 1)];
            let dw_coarse = coarse[3 * k] - coarse[3 * (k - 1)];
            let (_, se) = solid.combination(&[(2 * k, 4.0), (2 * (k - 1), -4.0)]);
            (dw_fine - dw_coarse).abs().hypot(se)
        })
        .collect();
    Ok(PhiCurve { points, step_errors })
}

/// `Φ(Ω, a)` at the context's `a`.
pub fn phi(surface: &QuadratureSurface, sampler: &VolumeSampler, ctx: &KernelContext) -> Result<FunctionalValue> {
    Ok(phi_curve(surface, sampler, ctx, &[ctx.a()])?.points.remove(0).phi)
}

/// `∂Φ/∂a` at the context's `a`, from the analytic derivative of both terms.
pub fn phi_derivative(
    surface: &QuadratureSurface,
    sampler: &VolumeSampler,
    ctx: &KernelContext,
) -> Result<FunctionalValue> {
    Ok(phi_curve(surface, sampler, ctx, &[ctx.a()])?.points.remove(0).derivative)
}
