//! Seeded Monte Carlo samples of a domain and its truncated complement.
//!
//! Every inside point also carries the boundary crossings along twelve randomly
//! rotated icosahedral directions, which lets solid double integrals be written as
//! sums of exact radial tails (see the functionals module).

use super::shape::{norm, Point, Shape};
use super::surface::QuadratureSurface;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Minimum number of inside and outside samples.
pub const MIN_SAMPLES: usize = 1000;

/// Directions per inside point in the ray table.
pub const RAY_DIRECTIONS: usize = 12;

const STREAM_INSIDE: u64 = 0;
const STREAM_OUTSIDE: u64 = 1;
const STREAM_ROTATION: u64 = 2;

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

/// Boundary crossings of the rays cast from each inside point.
#[derive(Debug, Clone, PartialEq)]
pub struct RayTable {
    offsets: Vec<usize>,
    crossings: Vec<f64>,
}

impl RayTable {
    /// Ascending crossing distances of ray `k` from inside point `i`.
    pub fn crossings(&self, i: usize, k: usize) -> &[f64] {
        let idx = i * RAY_DIRECTIONS + k;
        &self.crossings[self.offsets[idx]..self.offsets[idx + 1]]
    }
}

/// Uniform samples of `Ω` and of `B_R \ Ω`, reproducible from the seed.
#[derive(Debug, Clone)]
pub struct VolumeSampler {
    shape: Shape,
    trunc_radius: f64,
    seed: u64,
    inside_points: Vec<Point>,
    outside_points: Vec<Point>,
    inside_volume: Estimate,
    shell_volume: Estimate,
    rays: RayTable,
}

impl VolumeSampler {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn trunc_radius(&self) -> f64 {
        self.trunc_radius
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn inside_points(&self) -> &[Point] {
        &self.inside_points
    }

    pub fn outside_points(&self) -> &[Point] {
        &self.outside_points
    }

    /// Hit-or-miss estimate of `|Ω|`.
    pub fn inside_volume(&self) -> Estimate {
        self.inside_volume
    }

    /// Hit-or-miss estimate of `|B_R \ Ω|`.
    pub fn shell_volume(&self) -> Estimate {
        self.shell_volume
    }

    /// `|Ω|` from the analytic shape; used to scale sample means.
    pub fn volume(&self) -> f64 {
        self.shape.volume()
    }

    /// `|B_R| − |Ω|` from the analytic shape.
    pub fn exact_shell_volume(&self) -> f64 {
        4.0 / 3.0 * PI * self.trunc_radius.powi(3) - self.volume()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.shape.contains(p)
    }

    pub fn rays(&self) -> &RayTable {
        &self.rays
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Draws uniform points of `Ω` and of `B_R \ Ω` by rejection.
pub fn sample_volume(
    surface: &QuadratureSurface,
    trunc_radius: f64,
    n_inside: usize,
    n_outside: usize,
    seed: u64,
) -> Result<VolumeSampler> {
    sample_shape(*surface.shape(), trunc_radius, n_inside, n_outside, seed)
}

/// As [`sample_volume`], from the shape descriptor alone.
pub fn sample_shape(
    shape: Shape,
    trunc_radius: f64,
    n_inside: usize,
    n_outside: usize,
    seed: u64,
) -> Result<VolumeSampler> {
    shape.validate()?;
    let rc = shape.circumradius();
    if !(trunc_radius >= 2.0 * rc) || !trunc_radius.is_finite() {
        return Err(Error::Configuration(format!(
            "truncation radius {trunc_radius} must be at least twice the circumradius {rc}"
        )));
    }
    if n_inside < MIN_SAMPLES || n_outside < MIN_SAMPLES {
        return Err(Error::Configuration(format!(
            "at least {MIN_SAMPLES} inside and outside samples are required, got {n_inside} and {n_outside}"
        )));
    }

    let half = shape.bounding_box();
    let box_volume = 8.0 * half[0] * half[1] * half[2];
    let mut r = rng(seed, STREAM_INSIDE);
    let mut inside_points = Vec::with_capacity(n_inside);
    let mut tries = 0usize;
    while inside_points.len() < n_inside {
        let p = [
            r.gen_range(-half[0]..half[0]),
            r.gen_range(-half[1]..half[1]),
            r.gen_range(-half[2]..half[2]),
        ];
        tries += 1;
        if shape.contains(&p) {
            inside_points.push(p);
        }
    }
    let frac = n_inside as f64 / tries as f64;
    let inside_volume = Estimate {
        value: box_volume * frac,
        std_err: box_volume * (frac * (1.0 - frac) / tries as f64).sqrt(),
    };

    let big = trunc_radius;
    let ball_volume = 4.0 / 3.0 * PI * big.powi(3);
    let mut r = rng(seed, STREAM_OUTSIDE);
    let mut outside_points = Vec::with_capacity(n_outside);
    let mut in_ball = 0usize;
    while outside_points.len() < n_outside {
        let p = [r.gen_range(-big..big), r.gen_range(-big..big), r.gen_range(-big..big)];
        if norm(&p) > big {
            continue;
        }
        in_ball += 1;
        if !shape.contains(&p) {
            outside_points.push(p);
        }
    }
    let q = n_outside as f64 / in_ball as f64;
    let shell_volume = Estimate { value: ball_volume * q, std_err: ball_volume * (q * (1.0 - q) / in_ball as f64).sqrt() };

    let mut r = rng(seed, STREAM_ROTATION);
    let rotations: Vec<[Point; 3]> = (0..n_inside).map(|_| random_rotation(&mut r)).collect();
    let dirs = icosahedron();
    let per_point: Vec<Vec<Vec<f64>>> = inside_points
        .par_iter()
        .zip(rotations.par_iter())
        .map(|(p, q)| dirs.iter().map(|d| shape.ray_crossings(p, &apply(q, d))).collect())
        .collect();
    let mut offsets = Vec::with_capacity(n_inside * RAY_DIRECTIONS + 1);
    let mut crossings = Vec::with_capacity(n_inside * RAY_DIRECTIONS);
    offsets.push(0);
    for rays in per_point {
        for c in rays {
            crossings.extend_from_slice(&c);
            offsets.push(crossings.len());
        }
    }

    Ok(VolumeSampler {
        shape,
        trunc_radius,
        seed,
        inside_points,
        outside_points,
        inside_volume,
        shell_volume,
        rays: RayTable { offsets, crossings },
    })
}

/// Smallest radius in `[2 r_c, 32 r_c]` whose tail bound is within `tol · reference`,
/// by bisection to a relative width of `1e−3`; the cap is returned when none qualifies.
///
/// `tail_bound(L)` must bound the neglected contribution of pairs further apart than `L`
/// and decrease in `L`.
pub fn auto_trunc_radius(shape: &Shape, tail_bound: impl Fn(f64) -> f64, reference: f64, tol: f64) -> f64 {
    let rc = shape.circumradius();
    let ok = |big: f64| tail_bound(big - rc) <= tol * reference;
    let (mut lo, mut hi) = (2.0 * rc, 32.0 * rc);
    if ok(lo) {
        return lo;
    }
    if !ok(hi) {
        return hi;
    }
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The twelve vertices of a regular icosahedron on the unit sphere.
fn icosahedron() -> [Point; 12] {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let s = 1.0 / (1.0 + g * g).sqrt();
    let (a, b) = (s, g * s);
    [
        [0.0, a, b],
        [0.0, a, -b],
        [0.0, -a, b],
        [0.0, -a, -b],
        [a, b, 0.0],
        [a, -b, 0.0],
        [-a, b, 0.0],
        [-a, -b, 0.0],
        [b, 0.0, a],
        [-b, 0.0, a],
        [b, 0.0, -a],
        [-b, 0.0, -a],
    ]
}

/// Uniformly distributed rotation matrix from a random unit quaternion.
fn random_rotation(r: &mut ChaCha8Rng) -> [Point; 3] {
    let (u1, u2, u3): (f64, f64, f64) = (r.gen(), r.gen(), r.gen());
    let (s1, s2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (t2, t3) = (2.0 * PI * u2, 2.0 * PI * u3);
    let (w, x, y, z) = (s1 * t2.sin(), s1 * t2.cos(), s2 * t3.sin(), s2 * t3.cos());
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn apply(m: &[Point; 3], v: &Point) -> Point {
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = m[k][0] * v[0] + m[k][1] * v[1] + m[k][2] * v[2];
    }
    let n = norm(&out);
    [out[0] / n, out[1] / n, out[2] / n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_is_balanced() {
        let v = icosahedron();
        for k in 0..3 {
            assert!(v.iter().map(|p| p[k]).sum::<f64>().abs() < 1e-15);
        }
        for p in &v {
            assert!((norm(p) - 1.0).abs() < 1e-15);
        }
        // second moments are isotropic (the 12-point rule is exact to degree 5)
        let xx: f64 = v.iter().map(|p| p[0] * p[0]).sum();
        let xy: f64 = v.iter().map(|p| p[0] * p[1]).sum();
        assert!((xx - 4.0).abs() < 1e-14 && xy.abs() < 1e-14);
    }

    #[test]
    fn rotations_are_orthogonal() {
        let mut r = rng(3, 0);
        for _ in 0..10 {
            let m = random_rotation(&mut r);
            for i in 0..3 {
                for j in 0..3 {
                    let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                    assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
                }
            }
        }
    }
}
