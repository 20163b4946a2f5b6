//! Quadrature surfaces for spheres, ellipsoids and perturbed spheres in ℝ³, and
//! seeded volume samplers for the enclosed domain and its truncated complement.

mod sampler;
mod shape;
mod surface;

pub use sampler::{
    auto_trunc_radius, sample_shape, sample_volume, Estimate, RayTable, VolumeSampler, MIN_SAMPLES, RAY_DIRECTIONS,
};
pub use shape::{Point, Shape, MAX_PERTURBATION};
pub use surface::{make_ellipsoid, make_perturbed_sphere, make_sphere, QuadratureSurface, MIN_RESOLUTION};
