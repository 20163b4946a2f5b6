//! Gagliardo seminorms of the Gauss map and the fractional second fundamental form.

use super::pairs::{node_sums, pair_count, pair_sums};
use super::refined;
use super::values::FunctionalValue;
use crate::error::{Error, Result};
use crate::surface_geometry::QuadratureSurface;
use std::f64::consts::PI;

/// `[ν]²_r = Σ_{i≠j} w_i w_j |ν_i − ν_j|² / |x_i − x_j|^{2+2r}` for `r ∈ [0, 1)`.
pub fn gagliardo_seminorm_sq(surface: &QuadratureSurface, r: f64) -> Result<FunctionalValue> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("seminorm order must lie in [0, 1), got {r}")));
    }
    let (v, e) = refined(surface, |s| Ok(seminorm_sum(s, r)))?;
    Ok(FunctionalValue::new(format!("gagliardo_seminorm_sq(r={r})"), v[0], e[0], pair_count(surface)))
}

fn seminorm_sum(s: &QuadratureSurface, r: f64) -> Vec<f64> {
    if r == 0.0 {
        pair_sums(s, 1, |p, w, acc| acc[0] += w * p.dn2() / p.r2)
    } else {
        let expo = -(1.0 + r);
        pair_sums(s, 1, move |p, w, acc| acc[0] += w * p.dn2() * p.r2.powf(expo))
    }
}

/// `Σ_{i≠j} w_i w_j |ν_i − ν_j| / |x_i − x_j|²`, the L¹ variant of the endpoint seminorm.
pub fn abs_seminorm(surface: &QuadratureSurface) -> Result<FunctionalValue> {
    let (v, e) =
        refined(surface, |s| Ok(pair_sums(s, 1, |p, w, acc| acc[0] += w * p.dn2().sqrt() / p.r2)))?;
    Ok(FunctionalValue::new("abs_seminorm", v[0], e[0], pair_count(surface)))
}

/// Per-node `c²_s(x_i) = ½ Σ_{j≠i} w_j |ν_i − ν_j|² / |x_i − x_j|^{3+s}` for `s ∈ (−1, 1)`.
///
/// The error of each node adds the contribution of the excluded self-disk of area `w_i`,
/// bounded with the surface's normal Lipschitz estimate, and the largest single term of
/// the row, which dominates near the poles where neighbours crowd together.
pub fn frac_fundamental_form_sq(surface: &QuadratureSurface, s: f64) -> Result<Vec<FunctionalValue>> {
    if !(s > -1.0 && s < 1.0) {
        return Err(Error::Domain(format!("fractional order must lie in (−1, 1), got {s}")));
    }
    let expo = -(3.0 + s) / 2.0;
    let sums = node_sums(surface, 2, move |p, w, acc| {
        let t = w * p.dn2() * p.r2.powf(expo);
        acc[0] += t;
        acc[1] = acc[1].max(t);
    });
    let m2 = surface.lipschitz_estimate().powi(2);
    let terms = surface.len() as u64 - 1;
    Ok(sums
        .iter()
        .zip(surface.weights())
        .map(|(row, &w)| {
            let h = (w / PI).sqrt();
            let disk = PI * m2 * h.powf(1.0 - s) / (1.0 - s);
            let tag = format!("frac_fundamental_form_sq(s={s})");
            FunctionalValue::new(tag, 0.5 * row[0], disk + 0.5 * row[1], terms)
        })
        .collect())
}

/// `∫_{S²} |x − e|^{-p} dσ(x) = 2^{3-p} π / (2 − p)` for `p < 2`.
///
/// With `v = sin(θ/2)` the polar reduction `2π ∫₀^π (2 sin(θ/2))^{-p} sin θ dθ` becomes
/// `8π 2^{-p} ∫₀^1 v^{1-p} dv`.
pub fn sphere_distance_moment(p: f64) -> Result<f64> {
    if !(p < 2.0) {
        return Err(Error::Domain(format!("the spherical moment diverges for p ≥ 2, got {p}")));
    }
    Ok(2f64.powf(3.0 - p) * PI / (2.0 - p))
}
