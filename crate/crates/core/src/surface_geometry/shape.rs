//! Analytic shape descriptors: membership, bounds, volume and ray crossings.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type Point = [f64; 3];

/// Largest perturbation amplitude accepted for the perturbed sphere.
pub const MAX_PERTURBATION: f64 = 0.3;

/// One of the supported closed C² surfaces, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "params", rename_all = "lowercase")]
pub enum Shape {
    Sphere { radius: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// `r(θ) = 1 + ε cos(mθ) sin^m θ` in spherical coordinates about the z-axis.
    Perturbed { epsilon: f64, mode: u32 },
}

impl Shape {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        match *self {
            Shape::Sphere { radius } if !ok(radius) => {
                Err(Error::Configuration(format!("sphere radius must be positive, got {radius}")))
            }
            Shape::Ellipsoid { a, b, c } if !(ok(a) && ok(b) && ok(c)) => Err(Error::Configuration(format!(
                "ellipsoid semiaxes must be positive, got ({a}, {b}, {c})"
            ))),
            Shape::Perturbed { epsilon, .. } if !(epsilon.abs() <= MAX_PERTURBATION) => Err(Error::Configuration(
                format!("perturbation amplitude must satisfy |ε| ≤ {MAX_PERTURBATION}, got {epsilon}"),
            )),
            Shape::Perturbed { mode, .. } if mode < 2 => {
                Err(Error::Configuration(format!("perturbation mode must be at least 2, got {mode}")))
            }
            _ => Ok(()),
        }
    }

    /// True when the shape is a round ball (including the unperturbed case).
    pub fn is_ball(&self) -> bool {
        match *self {
            Shape::Sphere { .. } => true,
            Shape::Ellipsoid { a, b, c } => a == b && b == c,
            Shape::Perturbed { epsilon, .. } => epsilon == 0.0,
        }
    }

    /// Radius of a ball about the origin containing the closed domain.
    pub fn circumradius(&self) -> f64 {
        match *self {
            Shape::Sphere { radius } => radius,
            Shape::Ellipsoid { a, b, c } => a.max(b).max(c),
            Shape::Perturbed { epsilon, .. } => 1.0 + epsilon.abs(),
        }
    }

    /// Half-widths of an axis-aligned box containing the domain.
    pub fn bounding_box(&self) -> Point {
        match *self {
            Shape::Sphere { radius } => [radius; 3],
            Shape::Ellipsoid { a, b, c } => [a, b, c],
            Shape::Perturbed { .. } => [self.circumradius(); 3],
        }
    }

    /// Enclosed volume; the perturbed sphere uses a 1D Gauss–Legendre rule in `cos θ`.
    pub fn volume(&self) -> f64 {
        match *self {
            Shape::Sphere { radius } => 4.0 / 3.0 * PI * radius.powi(3),
            Shape::Ellipsoid { a, b, c } => 4.0 / 3.0 * PI * a * b * c,
            Shape::Perturbed { epsilon, mode } => {
                let (u, w) = gauss_legendre(256);
                let sum: f64 = u.iter().zip(&w).map(|(&u, &w)| w * perturbed_radius(epsilon, mode, u).powi(3)).sum();
                2.0 * PI / 3.0 * sum
            }
        }
    }

    /// Signed level function, negative inside and positive outside.
    pub fn level(&self, p: &Point) -> f64 {
        match *self {
            Shape::Sphere { radius } => norm(p) - radius,
            Shape::Ellipsoid { a, b, c } => {
                (p[0] / a).powi(2) + (p[1] / b).powi(2) + (p[2] / c).powi(2) - 1.0
            }
            Shape::Perturbed { epsilon, mode } => {
                let r = norm(p);
                if r == 0.0 {
                    return -1.0;
                }
                r - perturbed_radius(epsilon, mode, p[2] / r)
            }
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.level(p) < 0.0
    }

    /// Ray parameters `t > 0` at which `origin + t·dir` crosses the boundary, ascending.
    ///
    /// `origin` must lie inside and `dir` must be a unit vector, so the count is odd.
    pub fn ray_crossings(&self, origin: &Point, dir: &Point) -> Vec<f64> {
        match *self {
            Shape::Sphere { radius } => vec![quadratic_exit(origin, dir, [radius; 3])],
            Shape::Ellipsoid { a, b, c } => vec![quadratic_exit(origin, dir, [a, b, c])],
            Shape::Perturbed { epsilon, mode } => self.marched_crossings(origin, dir, epsilon, mode),
        }
    }

    /// Sphere tracing with a Lipschitz bound of the level function, then bisection.
    ///
    /// On the shell `|p| ≥ ρ₀ = (1 − |ε|)/2` the level `|p| − r(θ)` has gradient at most
    /// `L = 1 + |ε| m / ρ₀`, and the core `|p| < ρ₀` lies inside with level below `−ρ₀`, so a
    /// step of `min(|g|, ρ₀) / L` never jumps over a crossing. Steps are floored at
    /// `MIN_STEP`; only grazing pairs closer than that can be missed.
    fn marched_crossings(&self, origin: &Point, dir: &Point, epsilon: f64, mode: u32) -> Vec<f64> {
        const MIN_STEP: f64 = 1e-3;
        let at = |t: f64| [origin[0] + t * dir[0], origin[1] + t * dir[1], origin[2] + t * dir[2]];
        let t_end = norm(origin) + self.circumradius() + 1e-9;
        let rho0 = 0.5 * (1.0 - epsilon.abs());
        let lip = 1.0 + epsilon.abs() * mode as f64 / rho0;
        let rc = self.circumradius();
        let mut out = Vec::with_capacity(1);
        let mut t0 = 0.0;
        let mut f0 = self.level(origin);
        while t0 < t_end {
            let t1 = (t0 + (f0.abs().min(rho0) / lip).max(MIN_STEP)).min(t_end);
            let p1 = at(t1);
            let f1 = self.level(&p1);
            if (f0 < 0.0) != (f1 < 0.0) {
                out.push(self.refine_crossing(&at, (t0, f0), (t1, f1)));
            }
            // a line leaves the circumscribed ball only once
            if f1 > 0.0 && norm(&p1) > rc {
                break;
            }
            t0 = t1;
            f0 = f1;
        }
        out
    }

    /// Illinois regula falsi on a sign-changing bracket.
    fn refine_crossing(&self, at: &impl Fn(f64) -> Point, lo: (f64, f64), hi: (f64, f64)) -> f64 {
        let ((mut a, mut fa), (mut b, mut fb)) = (lo, hi);
        let mut side = 0;
        for _ in 0..100 {
            let c = (a * fb - b * fa) / (fb - fa);
            if !(c > a && c < b) || b - a < 1e-13 * b.max(1.0) {
                break;
            }
            let fc = self.level(&at(c));
            if fc == 0.0 {
                return c;
            }
            if (fc < 0.0) == (fa < 0.0) {
                a = c;
                fa = fc;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = c;
                fb = fc;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
            if (b - a).abs() < 1e-13 * b.max(1.0) || fc.abs() < 1e-15 {
                return c;
            }
        }
        0.5 * (a + b)
    }
}

/// Exit parameter of a ray leaving the ellipsoid with the given semiaxes.
fn quadratic_exit(o: &Point, d: &Point, axes: Point) -> f64 {
    let (mut qa, mut qb, mut qc) = (0.0, 0.0, -1.0);
    for k in 0..3 {
        let s = 1.0 / (axes[k] * axes[k]);
        qa += d[k] * d[k] * s;
        qb += 2.0 * o[k] * d[k] * s;
        qc += o[k] * o[k] * s;
    }
    // qc < 0 for an inside origin, so the roots have opposite signs
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    // stable form of the positive root
    if qb >= 0.0 {
        2.0 * qc / (-qb - disc)
    } else {
        (-qb + disc) / (2.0 * qa)
    }
}

/// `r(u) = 1 + ε T_m(u) (1 − u²)^{m/2}` with `u = cos θ`.
pub(crate) fn perturbed_radius(epsilon: f64, mode: u32, u: f64) -> f64 {
    let u = u.clamp(-1.0, 1.0);
    let s = (1.0 - u * u).max(0.0).sqrt();
    1.0 + epsilon * chebyshev_t(mode, u) * s.powi(mode as i32)
}

/// `T_m(u) = cos(m arccos u)` by the three-term recurrence.
fn chebyshev_t(m: u32, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = 2.0 * u * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `dr/dθ = ε m sin^{m-1}θ cos((m+1)θ)`.
pub(crate) fn perturbed_radius_dtheta(epsilon: f64, mode: u32, u: f64) -> f64 {
    let u = u.clamp(-1.0, 1.0);
    let s = (1.0 - u * u).max(0.0).sqrt();
    let m = mode as f64;
    epsilon * m * s.powi(mode as i32 - 1) * chebyshev_t(mode + 1, u)
}

pub(crate) fn norm(p: &Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}
