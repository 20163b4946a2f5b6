//! The constants `κ` (limit of `W_a` as `a → 0`) and `κ̃` (spherical mean of `|x − e|^{3-d}`).

use super::bessel::{bessel_k, KernelValue};
use crate::error::{Error, Result};
use crate::quadrature::{gamma_half_integer, integrate, unit_sphere_area};
use std::f64::consts::PI;

const CONST_TOL: f64 = 1e-10;

fn check_dim(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::Domain(format!("constant requires d ≥ 3, got d = {d}")));
    }
    Ok(())
}

/// `(2π)^{-d/2} ∫₀^∞ t^{d/2-1} K_{d/2-1}(t) dt` by direct quadrature of the Bessel integrand.
pub fn kappa_bessel_form(d: usize) -> Result<KernelValue> {
    check_dim(d)?;
    let nu = d as f64 / 2.0 - 1.0;
    // t^ν K_ν(t) → 2^{ν-1} Γ(ν) as t → 0; the piece [0, t0] is taken from that limit
    let t0 = 1e-6;
    let head_limit = 2f64.powf(nu - 1.0) * gamma_half_integer(nu)?;
    let head = t0 * head_limit;
    let head_err = t0 * head_limit * t0.powf((2.0 * nu).min(1.0)) * 10.0;
    let failed = std::cell::Cell::new(false);
    let f = |t: f64| match bessel_k(nu, t, CONST_TOL * 1e-2) {
        Ok(k) => t.powf(nu) * k.value,
        Err(_) => {
            failed.set(true);
            0.0
        }
    };
    let upper = 60.0;
    let mut value = head;
    let mut err = head_err;
    for (lo, hi) in [(t0, 1.0), (1.0, upper)] {
        let q = integrate(f, lo, hi, 0.0, CONST_TOL * 0.1, 1000);
        if !q.converged {
            return Err(Error::Accuracy { message: "κ direct integral did not converge".into(), best: value + q.value });
        }
        value += q.value;
        err += q.abs_err;
    }
    if failed.get() {
        return Err(Error::Accuracy { message: "Bessel evaluation failed inside κ".into(), best: value });
    }
    err += 2.0 * upper.powf(nu) * bessel_k(nu, upper, CONST_TOL)?.value;
    let norm = (2.0 * PI).powf(-(d as f64) / 2.0);
    Ok(KernelValue::new(norm * value, norm * err))
}

/// `2^{1-d/2}/|S^{d-1}| ∫₀^∞ cosh((d/2-1)t)/(cosh t)^{d/2} dt`.
pub fn kappa_cosh_form(d: usize) -> Result<KernelValue> {
    check_dim(d)?;
    let half = d as f64 / 2.0;
    let nu = half - 1.0;
    // log-space evaluation keeps cosh^{d/2} from overflowing
    let f = |t: f64| {
        let log_cosh = |x: f64| x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
        (log_cosh(nu * t) - half * log_cosh(t)).exp()
    };
    let upper = 60.0;
    let q = integrate(f, 0.0, upper, 0.0, CONST_TOL * 0.1, 1000);
    if !q.converged {
        return Err(Error::Accuracy { message: "κ cosh integral did not converge".into(), best: q.value });
    }
    // integrand ≤ 2^{d/2} e^{-t}
    let tail = 2f64.powf(half) * (-upper).exp();
    let scale = 2f64.powf(1.0 - half) / unit_sphere_area(d)?;
    Ok(KernelValue::new(scale * q.value, scale * (q.abs_err + tail)))
}

/// `κ(d)`, computed from both integral forms, which must agree.
pub fn kappa(d: usize) -> Result<KernelValue> {
    let direct = kappa_bessel_form(d)?;
    let cosh = kappa_cosh_form(d)?;
    let gap = (direct.value - cosh.value).abs();
    if gap > 1e-8 * direct.value {
        return Err(Error::Accuracy {
            message: format!("κ({d}) representations disagree by {gap:e}"),
            best: direct.value,
        });
    }
    Ok(KernelValue::new(direct.value, direct.abs_err.max(gap)))
}

/// `κ̃(d) = ∫_{S^{d-1}} |x − e|^{3-d} dσ(x)`.
///
/// With `θ` the angle between `x` and `e`, `|x − e| = 2 sin(θ/2)` and the integral
/// reduces to `|S^{d-2}| ∫₀^π (2 sin(θ/2))^{3-d} sin^{d-2}θ dθ`.
pub fn kappa_tilde(d: usize) -> Result<KernelValue> {
    check_dim(d)?;
    let m = d as i32;
    let f = |theta: f64| (2.0 * (theta / 2.0).sin()).powi(3 - m) * theta.sin().powi(m - 2);
    let q = integrate(f, 0.0, PI, 0.0, CONST_TOL * 0.1, 1000);
    if !q.converged {
        return Err(Error::Accuracy { message: "κ̃ integral did not converge".into(), best: q.value });
    }
    let s = unit_sphere_area(d - 1)?;
    Ok(KernelValue::new(s * q.value, s * q.abs_err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// ∫₀^∞ t^ν K_ν(t) dt = 2^{ν-1} √π Γ(ν + 1/2).
    fn kappa_mellin(d: usize) -> f64 {
        let nu = d as f64 / 2.0 - 1.0;
        (2.0 * PI).powf(-(d as f64) / 2.0) * 2f64.powf(nu - 1.0) * PI.sqrt() * gamma_half_integer(nu + 0.5).unwrap()
    }

    #[test]
    fn kappa_three_dimensions() {
        let k = kappa(3).unwrap();
        assert!((k.value - 1.0 / (4.0 * PI)).abs() < 1e-6);
        assert_relative_eq!(k.value, 0.079_577_47, max_relative = 1e-7);
        assert!(k.value > 0.0 && k.value.is_finite());
    }

    #[test]
    fn kappa_forms_agree() {
        for d in 3..=7 {
            let a = kappa_bessel_form(d).unwrap().value;
            let b = kappa_cosh_form(d).unwrap().value;
            assert_relative_eq!(a, b, max_relative = 1e-8);
            assert_relative_eq!(a, kappa_mellin(d), max_relative = 1e-8);
        }
        assert_relative_eq!(kappa(4).unwrap().value, 1.0 / (8.0 * PI), max_relative = 1e-8);
    }

    #[test]
    fn kappa_tilde_values() {
        assert!((kappa_tilde(3).unwrap().value - 4.0 * PI).abs() < 1e-6);
        // elementary evaluation: |S^{d-2}| · 4/(d-1)
        for d in 3..=7 {
            let expect = unit_sphere_area(d - 1).unwrap() * 4.0 / (d as f64 - 1.0);
            assert_relative_eq!(kappa_tilde(d).unwrap().value, expect, max_relative = 1e-9);
        }
    }

    #[test]
    fn small_dimensions_rejected() {
        assert!(matches!(kappa(2), Err(Error::Domain(_))));
        assert!(matches!(kappa_tilde(2), Err(Error::Domain(_))));
    }
}
