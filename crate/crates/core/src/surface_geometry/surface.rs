//! Latitude–longitude quadrature surfaces with analytic normals and area weights.

use super::shape::{norm, perturbed_radius, perturbed_radius_dtheta, Point, Shape};
use crate::error::{Error, Result};
use crate::quadrature::{compensated_sum, gauss_legendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

/// Smallest accepted grid parameter for public constructors.
pub const MIN_RESOLUTION: usize = 8;

/// Nodes, outward unit normals and surface-measure weights of a closed surface.
///
/// The grid has `N` Gauss–Legendre nodes in `cos θ` and `2N` equispaced longitudes,
/// stored latitude-major (`index = iθ·2N + iφ`).
#[derive(Debug, Clone)]
pub struct QuadratureSurface {
    shape: Shape,
    resolution: usize,
    nodes: Vec<Point>,
    normals: Vec<Point>,
    weights: Vec<f64>,
    rotation_fold: Option<usize>,
    lipschitz: OnceLock<f64>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceFile {
    #[serde(flatten)]
    shape: Shape,
    resolution: usize,
    nodes: Vec<Point>,
    normals: Vec<Point>,
    weights: Vec<f64>,
}

impl PartialEq for QuadratureSurface {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.resolution == other.resolution
            && self.nodes == other.nodes
            && self.normals == other.normals
            && self.weights == other.weights
    }
}

impl QuadratureSurface {
    /// Builds the lat-long quadrature of `shape` at grid parameter `resolution`.
    pub fn build(shape: Shape, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::Configuration(format!(
                "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        Self::build_any(shape, resolution)
    }

    fn build_any(shape: Shape, n: usize) -> Result<Self> {
        shape.validate()?;
        if n < 2 {
            return Err(Error::Configuration(format!("resolution too small: {n}")));
        }
        let (us, wu) = gauss_legendre(n);
        let n_phi = 2 * n;
        let dphi = PI / n as f64;
        let mut nodes = Vec::with_capacity(n * n_phi);
        let mut normals = Vec::with_capacity(n * n_phi);
        let mut weights = Vec::with_capacity(n * n_phi);
        for (&u, &w) in us.iter().zip(&wu) {
            let s = (1.0 - u * u).sqrt();
            for l in 0..n_phi {
                let phi = (l as f64 + 0.5) * dphi;
                let (sp, cp) = phi.sin_cos();
                let (p, nu, jac) = match shape {
                    Shape::Sphere { radius } => {
                        let e = [s * cp, s * sp, u];
                        ([radius * e[0], radius * e[1], radius * e[2]], e, radius * radius)
                    }
                    Shape::Ellipsoid { a, b, c } => {
                        let axes = [a, b, c];
                        let k = ellipsoid_pole_axis(axes);
                        let (i1, i2) = ((k + 1) % 3, (k + 2) % 3);
                        let mut p = [0.0; 3];
                        p[i1] = axes[i1] * s * cp;
                        p[i2] = axes[i2] * s * sp;
                        p[k] = axes[k] * u;
                        let g = [p[0] / (a * a), p[1] / (b * b), p[2] / (c * c)];
                        let gn = norm(&g);
                        (p, [g[0] / gn, g[1] / gn, g[2] / gn], a * b * c * gn)
                    }
                    Shape::Perturbed { epsilon: 0.0, .. } => ([s * cp, s * sp, u], [s * cp, s * sp, u], 1.0),
                    Shape::Perturbed { epsilon, mode } => {
                        let r = perturbed_radius(epsilon, mode, u);
                        let rt = perturbed_radius_dtheta(epsilon, mode, u);
                        let er = [s * cp, s * sp, u];
                        let et = [u * cp, u * sp, -s];
                        let v = [r * er[0] - rt * et[0], r * er[1] - rt * et[1], r * er[2] - rt * et[2]];
                        let vn = norm(&v);
                        ([r * er[0], r * er[1], r * er[2]], [v[0] / vn, v[1] / vn, v[2] / vn], r * vn)
                    }
                };
                nodes.push(p);
                normals.push(nu);
                weights.push(w * dphi * jac);
            }
        }
        let rotation_fold = is_axisymmetric_grid(&shape).then_some(2 * n);
        Ok(Self { shape, resolution: n, nodes, normals, weights, rotation_fold, lipschitz: OnceLock::new() })
    }

    /// Assembles a surface from stored arrays, checking the structural invariants.
    pub fn from_parts(
        shape: Shape,
        resolution: usize,
        nodes: Vec<Point>,
        normals: Vec<Point>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        shape.validate()?;
        let n = nodes.len();
        if n == 0 || normals.len() != n || weights.len() != n {
            return Err(Error::Configuration(format!(
                "inconsistent surface arrays: {} nodes, {} normals, {} weights",
                n,
                normals.len(),
                weights.len()
            )));
        }
        if let Some(i) = normals.iter().position(|v| (norm(v) - 1.0).abs() > 1e-12) {
            return Err(Error::Configuration(format!("normal {i} is not a unit vector")));
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::Configuration(format!("weight {i} is not positive")));
        }
        // arrays that reproduce the analytic grid bit for bit keep its rotational symmetry
        let rotation_fold = match Self::build_any(shape, resolution) {
            Ok(g) if g.nodes == nodes && g.normals == normals && g.weights == weights => g.rotation_fold,
            _ => None,
        };
        Ok(Self { shape, resolution, nodes, normals, weights, rotation_fold, lipschitz: OnceLock::new() })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Some(2N)` when rotating the grid by one longitude step maps it onto itself
    /// (axisymmetric shape with the symmetry axis as the grid pole).
    ///
    /// Pair sums over such a grid only need the rows of one meridian, multiplied by `2N`.
    pub fn rotation_fold(&self) -> Option<usize> {
        self.rotation_fold
    }

    /// The same surface with the rotational symmetry shortcut disabled.
    pub fn without_symmetry(&self) -> Self {
        Self { rotation_fold: None, lipschitz: OnceLock::new(), ..self.clone() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ weights.
    pub fn area(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// Σ weights·normals, which vanishes for an exact closed-surface quadrature.
    pub fn gauss_flux(&self) -> Point {
        let mut out = [0.0; 3];
        for k in 0..3 {
            out[k] = compensated_sum(self.weights.iter().zip(&self.normals).map(|(w, v)| w * v[k]));
        }
        out
    }

    /// Enclosed volume from the analytic shape.
    pub fn volume(&self) -> f64 {
        self.shape.volume()
    }

    /// Max over node pairs of `|ν_i − ν_j| / |x_i − x_j|`; computed on first use.
    pub fn lipschitz_estimate(&self) -> f64 {
        *self.lipschitz.get_or_init(|| {
            use rayon::prelude::*;
            let n = self.len();
            // with a rotation fold every pair is equivalent to one with i on the first meridian
            let rows: Vec<(usize, usize)> = match self.rotation_fold {
                Some(ring) => (0..n / ring).map(|t| (t * ring, 0)).collect(),
                None => (0..n).map(|i| (i, i + 1)).collect(),
            };
            rows.into_par_iter()
                .map(|(i, start)| {
                    let (x, v) = (self.nodes[i], self.normals[i]);
                    let mut best = 0.0f64;
                    for j in start..n {
                        let y = self.nodes[j];
                        let w = self.normals[j];
                        let dx = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2);
                        let dv = (v[0] - w[0]).powi(2) + (v[1] - w[1]).powi(2) + (v[2] - w[2]).powi(2);
                        if dx > 0.0 {
                            best = best.max(dv / dx);
                        }
                    }
                    best
                })
                .reduce(|| 0.0, f64::max)
                .sqrt()
        })
    }

    /// The same shape at half the grid parameter, used for refinement error estimates.
    pub fn coarsened(&self) -> Result<Self> {
        Self::build_any(self.shape, self.resolution / 2)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = SurfaceFile {
            shape: self.shape,
            resolution: self.resolution,
            nodes: self.nodes.clone(),
            normals: self.normals.clone(),
            weights: self.weights.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SurfaceFile = serde_json::from_str(text)?;
        Self::from_parts(f.shape, f.resolution, f.nodes, f.normals, f.weights)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Grid pole for an ellipsoid: the distinguished axis of a spheroid, otherwise z.
fn ellipsoid_pole_axis(axes: [f64; 3]) -> usize {
    let [a, b, c] = axes;
    if b == c && a != b {
        0
    } else if a == c && a != b {
        1
    } else {
        2
    }
}

fn is_axisymmetric_grid(shape: &Shape) -> bool {
    match *shape {
        Shape::Sphere { .. } | Shape::Perturbed { .. } => true,
        Shape::Ellipsoid { a, b, c } => {
            let axes = [a, b, c];
            let k = ellipsoid_pole_axis(axes);
            axes[(k + 1) % 3] == axes[(k + 2) % 3]
        }
    }
}

pub fn make_sphere(radius: f64, resolution: usize) -> Result<QuadratureSurface> {
    QuadratureSurface::build(Shape::Sphere { radius }, resolution)
}

pub fn make_ellipsoid(semiaxes: [f64; 3], resolution: usize) -> Result<QuadratureSurface> {
    let [a, b, c] = semiaxes;
    QuadratureSurface::build(Shape::Ellipsoid { a, b, c }, resolution)
}

pub fn make_perturbed_sphere(epsilon: f64, mode: u32, resolution: usize) -> Result<QuadratureSurface> {
    QuadratureSurface::build(Shape::Perturbed { epsilon, mode }, resolution)
}
