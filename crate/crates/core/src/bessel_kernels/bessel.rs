//! Modified Bessel function of the second kind `K_α` for real order `α ≥ 0`.
//!
//! Half-integer orders use the elementary closed forms reached from
//! `K_{1/2}(t) = √(π/2) t^{-1/2} e^{-t}` by the upward recurrence
//! `K_{α+1} = K_{α-1} + (2α/t) K_α`, which is stable for `K`. All other orders are
//! evaluated from the integral representation `K_α(t) = ∫₀^∞ e^{-t cosh r} cosh(αr) dr`
//! by adaptive Gauss–Kronrod quadrature.

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use std::f64::consts::FRAC_PI_2;

/// A kernel value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub abs_err: f64,
}

impl KernelValue {
    pub fn new(value: f64, abs_err: f64) -> Self {
        Self { value, abs_err: abs_err.abs() }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.abs_err * factor.abs())
    }

    pub fn plus(self, other: Self) -> Self {
        Self::new(self.value + other.value, self.abs_err + other.abs_err)
    }
}

/// The integrand of the cosh representation is below `e^{-t-CUTOFF}` beyond the cutoff.
const CUTOFF: f64 = 40.0;
const MAX_SEGMENTS: usize = 2000;

fn check_args(order: f64, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("K_α(t) requires t > 0, got t = {t}")));
    }
    if !(order >= 0.0) || !order.is_finite() {
        return Err(Error::Domain(format!("K_α(t) requires α ≥ 0, got α = {order}")));
    }
    Ok(())
}

/// Returns `Some(k)` when `order == k + 1/2` for a non-negative integer `k`.
fn half_integer_index(order: f64) -> Option<usize> {
    let shifted = order - 0.5;
    let k = shifted.round();
    if k >= 0.0 && (shifted - k).abs() < 1e-14 {
        Some(k as usize)
    } else {
        None
    }
}

fn half_integer_closed_form(k: usize, t: f64) -> f64 {
    let mut prev = (FRAC_PI_2 / t).sqrt() * (-t).exp(); // K_{-1/2} = K_{1/2}
    let mut cur = prev;
    let mut nu = 0.5;
    for _ in 0..k {
        let next = prev + 2.0 * nu / t * cur;
        prev = cur;
        cur = next;
        nu += 1.0;
    }
    cur
}

/// `K_α(t)` with estimated relative error at most `rel_tol`.
pub fn bessel_k(order: f64, t: f64, rel_tol: f64) -> Result<KernelValue> {
    check_args(order, t)?;
    if let Some(k) = half_integer_index(order) {
        let v = half_integer_closed_form(k, t);
        return Ok(KernelValue::new(v, v * f64::EPSILON * (4.0 + 2.0 * k as f64)));
    }
    bessel_k_integral(order, t, rel_tol)
}

/// `K_α(t)` from the cosh integral representation regardless of the order.
pub fn bessel_k_integral(order: f64, t: f64, rel_tol: f64) -> Result<KernelValue> {
    check_args(order, t)?;
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let r_max = (1.0 + CUTOFF / t).acosh();
    let integrand = |r: f64| {
        let c = t * r.cosh();
        0.5 * ((order * r - c).exp() + (-order * r - c).exp())
    };
    // the peak of the integrand sits near asinh(α/t); split there for large α/t
    let peak = (order / t).asinh().min(r_max);
    let mut total = 0.0;
    let mut err = 0.0;
    let mut converged = true;
    let pieces: &[(f64, f64)] = if peak > 0.0 && peak < r_max {
        &[(0.0, peak), (peak, r_max)]
    } else {
        &[(0.0, r_max)]
    };
    for &(lo, hi) in pieces {
        let q = integrate(integrand, lo, hi, 0.0, rel_tol * 0.25, MAX_SEGMENTS);
        total += q.value;
        err += q.abs_err;
        converged &= q.converged;
    }
    // tail beyond r_max: e^{-t cosh r} cosh(αr) ≤ e^{αR - t cosh R} e^{-(t sinh R - α)(r - R)}
    let slope = t * r_max.sinh() - order;
    let tail = if slope > 0.0 {
        (order * r_max - t * r_max.cosh()).exp() / slope
    } else {
        f64::INFINITY
    };
    err += tail;
    if !converged || !(err <= rel_tol * total.abs()) {
        return Err(Error::Accuracy {
            message: format!("K_{order}({t}) did not reach relative tolerance {rel_tol:e}"),
            best: total,
        });
    }
    Ok(KernelValue::new(total, err))
}

/// `K'_α(t) = -½ (K_{α+1}(t) + K_{|α-1|}(t))`.
pub fn bessel_k_prime(order: f64, t: f64, rel_tol: f64) -> Result<KernelValue> {
    check_args(order, t)?;
    let up = bessel_k(order + 1.0, t, rel_tol)?;
    let down = bessel_k((order - 1.0).abs(), t, rel_tol)?;
    Ok(up.plus(down).scale(-0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k_half(t: f64) -> f64 {
        (FRAC_PI_2 / t).sqrt() * (-t).exp()
    }

    #[test]
    fn half_order_matches_closed_form() {
        let v = bessel_k(0.5, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v.value, FRAC_PI_2.sqrt() * (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(v.value, 0.4610685, epsilon = 1e-7);
        let v = bessel_k(0.5, 4.0, 1e-12).unwrap();
        assert_relative_eq!(v.value, FRAC_PI_2.sqrt() * 0.5 * (-4.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(v.value, 0.011_477_62, max_relative = 1e-6);
    }

    #[test]
    fn closed_form_agrees_with_integral_representation() {
        for &t in &[0.05, 0.3, 1.0, 4.0, 20.0] {
            for &order in &[0.5, 1.5, 2.5, 3.5] {
                let closed = bessel_k(order, t, 1e-12).unwrap().value;
                let quad = bessel_k_integral(order, t, 1e-12).unwrap().value;
                assert_relative_eq!(closed, quad, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn three_halves_closed_form() {
        for &t in &[0.2, 1.0, 7.0] {
            let expect = k_half(t) * (1.0 + 1.0 / t);
            assert_relative_eq!(bessel_k(1.5, t, 1e-12).unwrap().value, expect, max_relative = 1e-14);
        }
    }

    #[test]
    fn integer_orders_against_reference_values() {
        // reference values of K_0, K_1 (Abramowitz & Stegun tables)
        assert_relative_eq!(bessel_k(0.0, 1.0, 1e-12).unwrap().value, 0.421_024_438_240_708_3, max_relative = 1e-12);
        assert_relative_eq!(bessel_k(1.0, 1.0, 1e-12).unwrap().value, 0.601_907_230_197_234_6, max_relative = 1e-12);
        assert_relative_eq!(bessel_k(0.0, 2.0, 1e-12).unwrap().value, 0.113_893_872_749_533_4, max_relative = 1e-12);
        assert_relative_eq!(bessel_k(1.0, 0.1, 1e-12).unwrap().value, 9.853_844_780_870_606, max_relative = 1e-12);
    }

    #[test]
    fn derivative_identity() {
        let v = bessel_k_prime(0.5, 1.0, 1e-12).unwrap().value;
        assert_relative_eq!(v, -1.5 * FRAC_PI_2.sqrt() * (-1.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(v, -0.6916027, max_relative = 1e-6);
        let v = bessel_k_prime(0.0, 2.0, 1e-12).unwrap().value;
        assert_relative_eq!(v, -bessel_k(1.0, 2.0, 1e-12).unwrap().value, max_relative = 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &order in &[0.0, 0.5, 1.0, 1.5, 2.0] {
            for &t in &[0.3, 1.0, 5.0] {
                let h = 1e-4 * t;
                let f = |x: f64| bessel_k(order, x, 1e-13).unwrap().value;
                let d1 = (f(t + h) - f(t - h)) / (2.0 * h);
                let d2 = (f(t + h / 2.0) - f(t - h / 2.0)) / h;
                let fd = (4.0 * d2 - d1) / 3.0;
                let an = bessel_k_prime(order, t, 1e-13).unwrap().value;
                assert_relative_eq!(fd, an, max_relative = 1e-7);
                assert!(an < 0.0);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_k(0.5, 0.0, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(0.5, -1.0, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(-0.5, 1.0, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(bessel_k_prime(1.0, 0.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn unreachable_tolerance_reports_best_estimate() {
        match bessel_k_integral(1.0, 1.0, 1e-30) {
            Err(Error::Accuracy { best, .. }) => assert_relative_eq!(best, 0.601_907_230_197_234_6, max_relative = 1e-10),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }
}
