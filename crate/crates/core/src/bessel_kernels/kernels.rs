//! Bessel-potential kernels `G_a`, `H_a`, `W_a`, `F_a` in ℝ^d and their radial tails.

use super::bessel::{bessel_k, bessel_k_prime, KernelValue};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use std::f64::consts::PI;

/// Smallest scaled argument `t = a·r` at which kernels are evaluated.
pub const T_MIN: f64 = 1e-8;

const FOUR_PI: f64 = 4.0 * PI;

/// Dimension, Helmholtz parameter and accuracy target shared by every kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelContext {
    d: usize,
    a: f64,
    rel_tol: f64,
    order: f64,
    norm: f64,
}

impl KernelContext {
    pub fn new(d: usize, a: f64, rel_tol: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension must satisfy d ≥ 2, got {d}")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("Helmholtz parameter must be positive, got {a}")));
        }
        if !(rel_tol > 0.0) {
            return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        let half = d as f64 / 2.0;
        Ok(Self { d, a, rel_tol, order: half - 1.0, norm: (2.0 * PI).powf(-half) })
    }

    /// Same dimension and tolerance, different `a`.
    pub fn with_a(&self, a: f64) -> Result<Self> {
        Self::new(self.d, a, self.rel_tol)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Bessel order `d/2 − 1`.
    pub fn order(&self) -> f64 {
        self.order
    }

    fn scaled(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("kernels require r > 0, got r = {r}")));
        }
        let t = self.a * r;
        if t < T_MIN {
            return Err(Error::Accuracy {
                message: format!("scaled argument a·r = {t:e} is below t_min = {T_MIN:e}"),
                best: f64::NAN,
            });
        }
        Ok(t)
    }

    fn k(&self, order: f64, t: f64) -> Result<KernelValue> {
        bessel_k(order, t, self.rel_tol)
    }

    /// `G_a(r) = a^{d-2} (2π)^{-d/2} (ar)^{1-d/2} K_{d/2-1}(ar)`.
    pub fn green_g(&self, r: f64) -> Result<KernelValue> {
        let t = self.scaled(r)?;
        let k = self.k(self.order, t)?;
        Ok(k.scale(self.a.powi(self.d as i32 - 2) * self.norm * t.powf(-self.order)))
    }

    /// `H_a(r) = a^{d-2} (2π)^{-d/2} (ar)^{1-d/2} K'_{d/2-1}(ar)`; always negative.
    pub fn green_h(&self, r: f64) -> Result<KernelValue> {
        let t = self.scaled(r)?;
        let k = bessel_k_prime(self.order, t, self.rel_tol)?;
        Ok(k.scale(self.a.powi(self.d as i32 - 2) * self.norm * t.powf(-self.order)))
    }

    /// `W_a(r) = (2π)^{-d/2} ∫_{ar}^∞ s^{d/2-1} K_{d/2-1}(s) ds`, with values in `(0, κ)`.
    pub fn weight_w(&self, r: f64) -> Result<KernelValue> {
        let t = self.scaled(r)?;
        if (self.order - 0.5).abs() < 1e-14 {
            // s^{1/2} K_{1/2}(s) = √(π/2) e^{-s}
            let v = self.norm * (PI / 2.0).sqrt() * (-t).exp();
            return Ok(KernelValue::new(v, 4.0 * f64::EPSILON * v));
        }
        self.weight_w_quadrature(r)
    }

    /// `W_a(r)` by quadrature of the Bessel integral, whatever the dimension.
    pub fn weight_w_quadrature(&self, r: f64) -> Result<KernelValue> {
        let t = self.scaled(r)?;
        let nu = self.order;
        let upper = t.max(1.0) + 40.0;
        let tol = self.rel_tol;
        let failed = std::cell::Cell::new(false);
        let inner_tol = (tol * 0.1).max(1e-13);
        let f = |s: f64| match bessel_k(nu, s, inner_tol) {
            Ok(k) => s.powf(nu) * k.value,
            Err(_) => {
                failed.set(true);
                0.0
            }
        };
        let q = integrate(f, t, upper, 0.0, tol * 0.5, 400);
        if failed.get() {
            return Err(Error::Accuracy { message: "Bessel evaluation failed inside W_a".into(), best: q.value });
        }
        // s^ν K_ν(s) decreases and K_ν(s) ≤ K_ν(T) e^{-(s-T)}, so the tail is ≤ 2 T^ν K_ν(T)
        let tail = 2.0 * upper.powf(nu) * bessel_k(nu, upper, inner_tol)?.value;
        let value = self.norm * q.value;
        let err = self.norm * (q.abs_err + tail);
        if !q.converged || err > tol * value {
            return Err(Error::Accuracy { message: format!("W_a({r}) did not converge"), best: value });
        }
        Ok(KernelValue::new(value, err))
    }

    /// `F_a(r) = a^d F(ar)` with `F(t) = (1 − d/2) G(t)/t − H(t)`.
    ///
    /// Evaluated as `(2π)^{-d/2} t^{1-d/2} K_{|d/2-2|}(t)`, the same quantity after the
    /// recurrence `K_{ν+1} = K_{ν-1} + (2ν/t) K_ν`, which avoids cancellation at small `t`.
    pub fn kernel_f(&self, r: f64) -> Result<KernelValue> {
        let t = self.scaled(r)?;
        let k = self.k((self.order - 1.0).abs(), t)?;
        Ok(k.scale(self.a.powi(self.d as i32) * self.norm * t.powf(-self.order)))
    }

    /// `∂/∂a (G_a(r)/r²) = H_a(r)/r + (d/2 − 1) G_a(r)/(a r²)`.
    pub fn green_over_r2_da(&self, r: f64) -> Result<KernelValue> {
        let h = self.green_h(r)?.scale(1.0 / r);
        let g = self.green_g(r)?.scale(self.order / (self.a * r * r));
        Ok(h.plus(g))
    }

    /// `∂/∂a (a² ∂/∂a (G_a(r)/r²))`, expanded as `(d−1) a ∂_a(G_a/r²) + a² G_a` using the
    /// second-order identity `∂_a(a^{3-d} ∂_a(G_a/r²)) = a^{3-d} G_a`.
    pub fn solid_derivative_kernel(&self, r: f64) -> Result<KernelValue> {
        let first = self.green_over_r2_da(r)?.scale((self.d as f64 - 1.0) * self.a);
        let second = self.green_g(r)?.scale(self.a * self.a);
        Ok(first.plus(second))
    }

    fn tail_arg(&self, l: f64) -> Result<f64> {
        if !(l > 0.0) {
            return Err(Error::Domain(format!("radial tails require L > 0, got {l}")));
        }
        self.scaled(l)
    }

    /// `∫_L^∞ G_a(ρ) ρ^{d-1} dρ = (2π)^{-d/2} a^{-2} x^{d/2} K_{d/2}(x)`, `x = aL`.
    pub fn tail_green(&self, l: f64) -> Result<KernelValue> {
        let x = self.tail_arg(l)?;
        let k = self.k(self.order + 1.0, x)?;
        Ok(k.scale(self.norm * x.powf(self.order + 1.0) / (self.a * self.a)))
    }

    /// `∫_L^∞ (F_a(ρ)/ρ) ρ^{d-1} dρ = a (2π)^{-d/2} x^{d/2-1} K_{d/2-1}(x)`, `x = aL`.
    pub fn tail_f_over_r(&self, l: f64) -> Result<KernelValue> {
        let x = self.tail_arg(l)?;
        let k = self.k(self.order, x)?;
        Ok(k.scale(self.a * self.norm * x.powf(self.order)))
    }

    /// `∫_L^∞ ∂_a(G_a(ρ)/ρ²) ρ^{d-1} dρ = −(2π)^{-d/2} x^{d/2-1} K_{d/2-1}(x) / a`.
    pub fn tail_green_over_r2_da(&self, l: f64) -> Result<KernelValue> {
        Ok(self.tail_f_over_r(l)?.scale(-1.0 / (self.a * self.a)))
    }

    /// Radial tail of [`Self::solid_derivative_kernel`], assembled from the two tails above.
    pub fn tail_solid_derivative(&self, l: f64) -> Result<KernelValue> {
        let first = self.tail_green_over_r2_da(l)?.scale((self.d as f64 - 1.0) * self.a);
        let second = self.tail_green(l)?.scale(self.a * self.a);
        Ok(first.plus(second))
    }

    /// Elementary closed forms, available in three dimensions only.
    pub fn closed_form_3d(&self) -> Option<ThreeDimKernels> {
        (self.d == 3).then_some(ThreeDimKernels { a: self.a })
    }
}

/// Closed forms of every kernel for `d = 3`, where `K_{1/2}` is elementary.
///
/// These are the hot-loop versions used by the surface and volume sums; the
/// generic [`KernelContext`] methods agree with them to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeDimKernels {
    pub a: f64,
}

impl ThreeDimKernels {
    #[inline]
    pub fn green_g(&self, r: f64) -> f64 {
        (-self.a * r).exp() / (FOUR_PI * r)
    }

    #[inline]
    pub fn green_h(&self, r: f64) -> f64 {
        -(-self.a * r).exp() / FOUR_PI * (1.0 / r + 0.5 / (self.a * r * r))
    }

    #[inline]
    pub fn weight_w(&self, r: f64) -> f64 {
        (-self.a * r).exp() / FOUR_PI
    }

    #[inline]
    pub fn kernel_f(&self, r: f64) -> f64 {
        self.a * self.a * (-self.a * r).exp() / (FOUR_PI * r)
    }

    #[inline]
    pub fn tail_green(&self, l: f64) -> f64 {
        let x = self.a * l;
        (-x).exp() * (1.0 + x) / (FOUR_PI * self.a * self.a)
    }

    #[inline]
    pub fn tail_f_over_r(&self, l: f64) -> f64 {
        self.a * (-self.a * l).exp() / FOUR_PI
    }

    #[inline]
    pub fn tail_green_over_r2_da(&self, l: f64) -> f64 {
        -(-self.a * l).exp() / (FOUR_PI * self.a)
    }

    #[inline]
    pub fn tail_solid_derivative(&self, l: f64) -> f64 {
        2.0 * self.a * self.tail_green_over_r2_da(l) + self.a * self.a * self.tail_green(l)
    }
}
