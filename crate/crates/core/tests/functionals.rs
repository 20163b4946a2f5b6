//! Integration tests for the surface functionals, the monotone functional and the checks.
//!
//! Balls give closed forms; ellipsoids and perturbed spheres are tested by the sign and
//! strictness of the slacks, plus a frozen fine-grid regression value.

use approx::assert_relative_eq;
use gagliardo::bessel_kernels::{kappa, kappa_tilde, KernelContext};
use gagliardo::functionals::*;
use gagliardo::surface_geometry::*;
use gagliardo::Error;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

const SEED: u64 = 42;
const BUDGET: usize = 100_000;

fn ctx(a: f64) -> KernelContext {
    KernelContext::new(3, a, 1e-10).unwrap()
}

fn sphere() -> &'static QuadratureSurface {
    static S: OnceLock<QuadratureSurface> = OnceLock::new();
    S.get_or_init(|| make_sphere(1.0, 96).unwrap())
}

fn ellipsoid() -> &'static QuadratureSurface {
    static S: OnceLock<QuadratureSurface> = OnceLock::new();
    S.get_or_init(|| make_ellipsoid([2.0, 1.0, 1.0], 96).unwrap())
}

fn ball_sampler() -> &'static VolumeSampler {
    static S: OnceLock<VolumeSampler> = OnceLock::new();
    S.get_or_init(|| sample_volume(sphere(), 12.0, BUDGET, BUDGET, SEED).unwrap())
}

fn ellipsoid_sampler() -> &'static VolumeSampler {
    static S: OnceLock<VolumeSampler> = OnceLock::new();
    S.get_or_init(|| sample_volume(ellipsoid(), 14.0, BUDGET, BUDGET, SEED).unwrap())
}

fn four_pi_sq() -> f64 {
    16.0 * PI * PI
}

/// `∫_{S²} |x − e|^{−p} dσ` by the polar reduction, computed with a composite midpoint
/// rule in `t = |x − e|` after the substitution `t = v^{1/(2−p)}` that removes the
/// endpoint singularity.
fn sphere_moment_oracle(p: f64) -> f64 {
    // dσ = 2π t dt on t ∈ [0, 2], so the integral is 2π ∫ t^{1−p} dt
    let q = 2.0 - p;
    let n = 20_000;
    let top = 2f64.powf(q);
    let h = top / n as f64;
    // with v = t^q, t^{1−p} dt = dv / q
    (0..n).map(|k| {
        let v = (k as f64 + 0.5) * h;
        let t = v.powf(1.0 / q);
        2.0 * PI * t.powf(1.0 - p) * t.powf(1.0 - q) / q * h
    }).sum()
}

#[test]
fn moment_oracle_matches_closed_form() {
    for p in [0.0, 0.5, 1.0, 1.5, 1.9] {
        assert_relative_eq!(sphere_distance_moment(p).unwrap(), sphere_moment_oracle(p), max_relative = 1e-10);
    }
    assert!(sphere_distance_moment(2.0).is_err());
}

#[test]
fn endpoint_seminorm_of_unit_sphere() {
    let v = gagliardo_seminorm_sq(sphere(), 0.0).unwrap();
    assert_relative_eq!(v.value, four_pi_sq(), max_relative = 1e-2);
    assert!((v.value - four_pi_sq()).abs() <= 3.0 * v.err + 1e-9 * v.value);
    assert!(v.err >= 0.0 && v.n_terms >= 1);
}

#[test]
fn half_order_seminorm_of_unit_sphere() {
    // |ν(x) − ν(y)|²/|x − y|³ = |x − y|^{−1} on the unit sphere
    let v = gagliardo_seminorm_sq(sphere(), 0.5).unwrap();
    let exact = 4.0 * PI * sphere_moment_oracle(1.0);
    assert_relative_eq!(exact, four_pi_sq(), max_relative = 1e-10);
    assert_relative_eq!(v.value, exact, max_relative = 1e-2);
}

#[test]
fn seminorm_scales_with_radius() {
    let unit = gagliardo_seminorm_sq(&make_sphere(1.0, 48).unwrap(), 0.0).unwrap();
    let big = gagliardo_seminorm_sq(&make_sphere(2.0, 48).unwrap(), 0.0).unwrap();
    assert_relative_eq!(big.value, 4.0 * unit.value, max_relative = 1e-12);
    assert_relative_eq!(big.value, 4.0 * four_pi_sq(), max_relative = 2e-2);
}

#[test]
fn seminorm_rejects_orders_outside_range() {
    let s = make_sphere(1.0, 16).unwrap();
    for r in [1.0, 1.5, -0.1, f64::NAN] {
        assert!(matches!(gagliardo_seminorm_sq(&s, r), Err(Error::Domain(_))), "r = {r}");
    }
}

#[test]
fn seminorm_is_continuous_in_order() {
    // no difference on the grid may spike above twice both of its neighbours
    let s = make_ellipsoid([2.0, 1.0, 1.0], 48).unwrap();
    let values: Vec<f64> =
        (0..10).map(|k| gagliardo_seminorm_sq(&s, k as f64 / 10.0).unwrap().value).collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for k in 1..diffs.len() - 1 {
        assert!(
            diffs[k] <= 2.0 * diffs[k - 1].max(diffs[k + 1]),
            "spike at r = {}: {:?}",
            k as f64 / 10.0,
            diffs
        );
    }
}

#[test]
fn l1_inequality_is_an_equality_on_the_sphere() {
    let v = abs_seminorm(sphere()).unwrap();
    assert_relative_eq!(v.value, four_pi_sq(), max_relative = 1e-2);
    let report = check_l1_inequality(sphere()).unwrap();
    assert!(report.equality_case && report.satisfied, "{report:?}");
}

// fine-grid regression values of the ellipsoid (2,1,1) at N = 192
const ELLIPSOID_ABS_N192: f64 = 287.954646595431;
const ELLIPSOID_ENDPOINT_N192: f64 = 310.250245092507;

#[test]
fn l1_inequality_is_strict_on_the_ellipsoid() {
    let v = abs_seminorm(ellipsoid()).unwrap();
    assert!((v.value - ELLIPSOID_ABS_N192).abs() <= 3.0 * v.err, "{v:?}");
    let report = check_l1_inequality(ellipsoid()).unwrap();
    assert!(report.satisfied && report.strict() && !report.equality_case, "{report:?}");
}

#[test]
fn ellipsoid_fine_grid_regression() {
    let fine = make_ellipsoid([2.0, 1.0, 1.0], 192).unwrap();
    assert_relative_eq!(abs_seminorm(&fine).unwrap().value, ELLIPSOID_ABS_N192, max_relative = 1e-10);
    let endpoint = gagliardo_seminorm_sq(&fine, 0.0).unwrap().value;
    assert_relative_eq!(endpoint, ELLIPSOID_ENDPOINT_N192, max_relative = 1e-10);
    let coarse = gagliardo_seminorm_sq(ellipsoid(), 0.0).unwrap();
    assert!((coarse.value - endpoint).abs() <= 3.0 * coarse.err + 1e-3);
}

#[test]
fn endpoint_inequality_on_spheres_and_ellipsoid() {
    let unit = check_endpoint_inequality(sphere()).unwrap();
    assert!(unit.equality_case && unit.satisfied, "{unit:?}");
    assert_relative_eq!(unit.rhs.value, four_pi_sq(), max_relative = 1e-10);

    let big = check_endpoint_inequality(&make_sphere(3.0, 64).unwrap()).unwrap();
    assert!(big.equality_case, "{big:?}");
    assert_relative_eq!(big.lhs.value, 9.0 * four_pi_sq(), max_relative = 1e-2);

    let e = check_endpoint_inequality(ellipsoid()).unwrap();
    assert!(e.satisfied && e.strict() && !e.equality_case, "{e:?}");
}

#[test]
fn endpoint_error_halves_under_refinement() {
    let err = |n| (gagliardo_seminorm_sq(&make_sphere(1.0, n).unwrap(), 0.0).unwrap().value - four_pi_sq()).abs();
    let (e48, e96) = (err(48), err(96));
    assert!(e48 >= 2.0 * e96, "{e48} vs {e96}");
}

#[test]
fn fundamental_form_is_constant_on_the_sphere() {
    let s = make_sphere(1.0, 48).unwrap();
    for sv in [-0.5, 0.0, 0.5] {
        let exact = 0.5 * sphere_moment_oracle(1.0 + sv);
        let nodes = frac_fundamental_form_sq(&s, sv).unwrap();
        assert_eq!(nodes.len(), s.len());
        for v in &nodes {
            assert!(v.value >= 0.0);
            assert!((v.value - exact).abs() <= 3.0 * v.err, "s = {sv}: {} vs {exact} ± {}", v.value, v.err);
        }
        let mean: f64 = nodes.iter().zip(s.weights()).map(|(v, w)| v.value * w).sum::<f64>() / s.area();
        let mean_err: f64 = nodes.iter().zip(s.weights()).map(|(v, w)| v.err * w).sum::<f64>() / s.area();
        assert!((mean - exact).abs() <= 3.0 * mean_err, "s = {sv}: {mean} vs {exact} ± {mean_err}");
    }
}

#[test]
fn fundamental_form_integrates_to_the_seminorm() {
    let surfaces = [make_sphere(1.0, 32).unwrap(), make_ellipsoid([2.0, 1.0, 1.0], 32).unwrap()];
    for s in &surfaces {
        for sv in [-0.5, 0.0, 0.5] {
            let nodes = frac_fundamental_form_sq(s, sv).unwrap();
            let integral: f64 = 2.0 * nodes.iter().zip(s.weights()).map(|(v, w)| v.value * w).sum::<f64>();
            let seminorm = gagliardo_seminorm_sq(s, (sv + 1.0) / 2.0).unwrap().value;
            assert_relative_eq!(integral, seminorm, max_relative = 1e-3);
        }
    }
}

#[test]
fn fundamental_form_tends_to_the_endpoint_seminorm() {
    let nodes = frac_fundamental_form_sq(sphere(), -0.999).unwrap();
    let integral: f64 = 2.0 * nodes.iter().zip(sphere().weights()).map(|(v, w)| v.value * w).sum::<f64>();
    assert_relative_eq!(integral, four_pi_sq(), max_relative = 1e-2);
    for s in [-1.0, 1.0, 2.0] {
        assert!(matches!(frac_fundamental_form_sq(sphere(), s), Err(Error::Domain(_))));
    }
}

#[test]
fn perimeter_forms_agree() {
    for a in [1.0, 2.0] {
        for (s, smp) in [(sphere(), ball_sampler()), (ellipsoid(), ellipsoid_sampler())] {
            let report = check_perimeter_forms(s, smp, &ctx(a)).unwrap();
            assert!(report.equality_case, "a = {a}: {report:?}");
            let vol = s.shape().volume();
            let a2_lambda = a * a * report.lhs.value;
            assert!(a2_lambda > 0.0 && a2_lambda <= vol * (1.0 + 3.0 * report.rhs.err / report.rhs.value));
        }
    }
}

#[test]
fn perimeter_is_bounded_by_volume_at_large_a() {
    let s = make_sphere(1.0, 100).unwrap();
    let v = nonlocal_perimeter_boundary(&s, &ctx(5.0)).unwrap();
    assert!(25.0 * v.value <= 4.0 * PI / 3.0 * (1.0 + 3.0 * v.err / v.value), "{v:?}");
}

#[test]
fn scaled_perimeter_tends_to_volume_as_a_vanishes() {
    // a²Λ = |Ω| − ∫ (a²G_a ∗ χ_Ω) χ_Ω, and a²G_a concentrates as a grows
    let s = make_sphere(1.0, 160).unwrap();
    let vol = 4.0 * PI / 3.0;
    let vals: Vec<f64> = [0.05, 0.2, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&a| a * a * nonlocal_perimeter_boundary(&s, &ctx(a)).unwrap().value)
        .collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]), "{vals:?}");
    assert!(vals[0] < vol && vals[0] > 0.9 * vol, "{vals:?}");
}

#[test]
fn perimeter_monte_carlo_is_positive_and_deterministic() {
    let smp = sample_volume(sphere(), 4.0, 5_000, 5_000, 9).unwrap();
    let again = sample_volume(sphere(), 4.0, 5_000, 5_000, 9).unwrap();
    let a = nonlocal_perimeter_mc(&smp, &ctx(1.0)).unwrap();
    let b = nonlocal_perimeter_mc(&again, &ctx(1.0)).unwrap();
    assert!(a.value > 0.0);
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.err.to_bits(), b.err.to_bits());
    let tail = perimeter_tail_bound(sphere().shape(), &ctx(1.0), 3.0).unwrap();
    assert!(a.err >= tail);
}

#[test]
fn perimeter_truncation_radius_meets_tolerance() {
    let shape = *sphere().shape();
    let c = ctx(0.5);
    let reference = nonlocal_perimeter_boundary(sphere(), &c).unwrap().value;
    let r = perimeter_trunc_radius(&shape, &c, reference, 1e-3).unwrap();
    assert!(r >= 2.0 * shape.circumradius());
    assert!(perimeter_tail_bound(&shape, &c, r - shape.circumradius()).unwrap() <= 1e-3 * reference);
}

#[test]
fn solid_term_vanishes_linearly_at_small_a() {
    // 4 ∫∫ F_a/|x−y| ≤ 4 |Ω| a ∫ F_1(y)/|y| dy, and ∫ F_1/|y| = 1 in three dimensions
    let smp = ball_sampler();
    for a in [0.01, 0.1] {
        let v = solid_f_term(smp, &ctx(a)).unwrap();
        assert!(v.value >= 0.0);
        assert!(v.value <= 4.0 * smp.volume() * a + 3.0 * v.err, "a = {a}: {v:?}");
    }
}

#[test]
fn solid_term_closes_the_ball_constant() {
    let c = ctx(1.0);
    let curve = phi_curve(sphere(), ball_sampler(), &c, &[1.0]).unwrap();
    let p = &curve.points[0];
    let solid = solid_f_term(ball_sampler(), &c).unwrap();
    assert_eq!(solid.value, p.solid_term.value);
    let expected = 4.0 * PI - p.boundary_term.value;
    assert!((solid.value - expected).abs() <= 3.0 * solid.err.hypot(p.boundary_term.err) + 1e-2 * 4.0 * PI);
}

#[test]
fn phi_is_constant_on_the_ball() {
    let curve = phi_curve(sphere(), ball_sampler(), &ctx(1.0), &[0.1, 0.5, 1.0, 2.0]).unwrap();
    for p in &curve.points {
        assert_relative_eq!(p.phi.value, 4.0 * PI, max_relative = 1e-2);
    }
    assert!(curve.relative_spread() < 1e-2);
}

#[test]
fn phi_spread_on_the_ball_over_a_wide_range() {
    let s = make_sphere(1.0, 200).unwrap();
    let smp = sample_volume(&s, 4.0, BUDGET, 1_000, SEED).unwrap();
    let grid = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
    let curve = phi_curve(&s, &smp, &ctx(1.0), &grid).unwrap();
    assert!(curve.relative_spread() < 1e-2, "{}", curve.relative_spread());
}

#[test]
fn phi_tends_to_the_scaled_seminorm_at_small_a() {
    for (s, smp) in [(sphere(), ball_sampler()), (ellipsoid(), ellipsoid_sampler())] {
        let p = phi(s, smp, &ctx(0.02)).unwrap();
        let limit = kappa(3).unwrap().value * gagliardo_seminorm_sq(s, 0.0).unwrap().value;
        assert_relative_eq!(p.value, limit, max_relative = 2e-2);
    }
}

#[test]
fn phi_decreases_toward_the_perimeter_limit() {
    let s = make_ellipsoid([2.0, 1.0, 1.0], 160).unwrap();
    let smp = sample_volume(&s, 4.0, BUDGET, 1_000, SEED).unwrap();
    let grid = [0.02, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0];
    let curve = phi_curve(&s, &smp, &ctx(1.0), &grid).unwrap();
    let limit = kappa(3).unwrap().value * kappa_tilde(3).unwrap().value * s.area();
    let first = &curve.points[0].phi;
    let last = &curve.points[grid.len() - 1].phi;
    assert!(last.value > limit, "{} vs {limit}", last.value);
    assert!(first.value > last.value);
    assert!(curve.non_increasing());
    for p in &curve.points {
        assert!(p.phi.value - limit > -3.0 * p.phi.err);
    }
}

#[test]
fn phi_strictly_decreases_on_the_ellipsoid() {
    let s = make_ellipsoid([2.0, 1.0, 1.0], 100).unwrap();
    let smp = sample_volume(&s, 5.0, BUDGET, 1_000, SEED).unwrap();
    let curve = phi_curve(&s, &smp, &ctx(1.0), &[0.1, 0.2, 0.5, 1.0, 2.0, 5.0]).unwrap();
    assert!(curve.strictly_decreasing(), "{:?}", curve.steps());
    let wide = phi_curve(&s, &smp, &ctx(1.0), &[0.05, 5.0]).unwrap();
    assert!(wide.strictly_decreasing());
}

#[test]
fn phi_derivative_vanishes_on_the_ball() {
    let d = phi_derivative(sphere(), ball_sampler(), &ctx(1.0)).unwrap();
    assert!(d.value.abs() <= 3.0 * d.err, "{d:?}");
    let report = check_solid_boundary_inequality(sphere(), ball_sampler(), &ctx(1.0)).unwrap();
    assert!(report.equality_case && report.satisfied, "{report:?}");
    assert_eq!(report.slack, -d.value);
}

#[test]
fn phi_derivative_is_negative_on_the_ellipsoid() {
    let d = phi_derivative(ellipsoid(), ellipsoid_sampler(), &ctx(1.0)).unwrap();
    assert!(d.value < -3.0 * d.err, "{d:?}");
}

#[test]
fn phi_derivative_matches_finite_differences() {
    for a in [0.5, 1.0, 2.0] {
        let h = 0.02 * a;
        let curve = phi_curve(ellipsoid(), ellipsoid_sampler(), &ctx(a), &[a - h, a, a + h]).unwrap();
        let p = &curve.points;
        let fd = (p[2].phi.value - p[0].phi.value) / (2.0 * h);
        let fd_err = curve.step_errors[0].hypot(curve.step_errors[1]) / (2.0 * h);
        let d = &p[1].derivative;
        assert!((fd - d.value).abs() <= 3.0 * fd_err.hypot(d.err), "a = {a}: {fd} ± {fd_err} vs {d:?}");
    }
}

#[test]
fn solid_boundary_inequality_on_the_ellipsoid() {
    for a in [0.5, 1.0, 2.0] {
        let r = check_solid_boundary_inequality(ellipsoid(), ellipsoid_sampler(), &ctx(a)).unwrap();
        assert!(r.satisfied && r.strict() && !r.equality_case, "a = {a}: {r:?}");
    }
}

#[test]
fn solid_boundary_slack_shrinks_with_the_perturbation() {
    let slacks: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&eps| {
            let s = make_perturbed_sphere(eps, 2, 64).unwrap();
            let smp = sample_volume(&s, 3.0, 40_000, 1_000, SEED).unwrap();
            let r = check_solid_boundary_inequality(&s, &smp, &ctx(0.5)).unwrap();
            assert!(r.satisfied, "eps = {eps}: {r:?}");
            r.slack
        })
        .collect();
    assert!(slacks.windows(2).all(|w| w[1] < w[0]), "{slacks:?}");
}

#[test]
fn fractional_conjecture_on_balls() {
    let unit = check_fractional_inequality(sphere(), 0.5).unwrap();
    assert!(unit.exploratory && unit.equality_case, "{unit:?}");
    assert_relative_eq!(unit.rhs.value, four_pi_sq(), max_relative = 1e-2);
    let big = check_fractional_inequality(&make_sphere(2.0, 96).unwrap(), 0.25).unwrap();
    assert!(big.equality_case, "{big:?}");
    let area = 16.0 * PI;
    let expected = area.powf(0.75) * (4.0 * PI).powf(0.25) * sphere_moment_oracle(0.5);
    assert_relative_eq!(big.rhs.value, expected, max_relative = 1e-3);
}

#[test]
fn fractional_conjecture_records_the_ellipsoid() {
    let r = check_fractional_inequality(ellipsoid(), 0.5).unwrap();
    assert!(r.exploratory);
    assert!(r.lhs.value.is_finite() && r.rhs.value > 0.0);
    for bad in [0.0, 1.0, -0.5] {
        assert!(matches!(check_fractional_inequality(ellipsoid(), bad), Err(Error::Domain(_))));
    }
}

#[test]
fn projected_normal_identity_holds() {
    for a in [1.0, 2.0] {
        for (s, smp) in [(sphere(), ball_sampler()), (ellipsoid(), ellipsoid_sampler())] {
            let r = check_projected_normal_identity(s, smp, &ctx(a)).unwrap();
            assert!(r.equality_case, "a = {a}: {r:?}");
            let res = projected_normal_identity_residual(s, smp, &ctx(a)).unwrap();
            assert_eq!(res.value, r.slack);
            assert!(res.value.abs() <= 3.0 * res.err);
        }
    }
}

#[test]
fn large_a_is_a_regime_error() {
    let s = make_sphere(1.0, 40).unwrap();
    assert_eq!(regime_cap(40), 2.0);
    assert!(nonlocal_perimeter_boundary(&s, &ctx(2.0)).is_ok());
    match nonlocal_perimeter_boundary(&s, &ctx(2.5)) {
        Err(Error::Regime { a, a_max, resolution }) => {
            assert_eq!((a, a_max, resolution), (2.5, 2.0, 40));
        }
        other => panic!("expected a regime error, got {other:?}"),
    }
    let smp = sample_volume(&s, 2.0, 1_000, 1_000, 1).unwrap();
    assert!(matches!(phi_curve(&s, &smp, &ctx(1.0), &[1.0, 3.0]), Err(Error::Regime { .. })));
}

#[test]
fn surface_functionals_require_three_dimensions() {
    let s = make_sphere(1.0, 16).unwrap();
    let c4 = KernelContext::new(4, 1.0, 1e-10).unwrap();
    assert!(nonlocal_perimeter_boundary(&s, &c4).is_err());
}

#[test]
fn phi_rejects_mismatched_inputs() {
    let s = make_sphere(1.0, 16).unwrap();
    let other = sample_shape(Shape::Sphere { radius: 2.0 }, 4.0, 1_000, 1_000, 1).unwrap();
    assert!(matches!(phi(&s, &other, &ctx(0.5)), Err(Error::Configuration(_))));
    let smp = sample_volume(&s, 2.0, 1_000, 1_000, 1).unwrap();
    assert!(matches!(phi_curve(&s, &smp, &ctx(0.5), &[]), Err(Error::Configuration(_))));
}

#[test]
fn rotation_fold_matches_the_full_sum() {
    for s in [make_sphere(1.0, 24).unwrap(), make_ellipsoid([1.0, 1.0, 1.7], 24).unwrap()] {
        assert!(s.rotation_fold().is_some());
        let full = s.without_symmetry();
        assert!(full.rotation_fold().is_none());
        let pairs = |s: &QuadratureSurface| {
            [
                gagliardo_seminorm_sq(s, 0.0).unwrap().value,
                gagliardo_seminorm_sq(s, 0.3).unwrap().value,
                abs_seminorm(s).unwrap().value,
                nonlocal_perimeter_boundary(s, &ctx(0.7)).unwrap().value,
            ]
        };
        for (x, y) in pairs(&s).iter().zip(pairs(&full)) {
            assert_relative_eq!(*x, y, max_relative = 1e-12);
        }
        let nodes = frac_fundamental_form_sq(&s, 0.2).unwrap();
        let nodes_full = frac_fundamental_form_sq(&full, 0.2).unwrap();
        for (x, y) in nodes.iter().zip(&nodes_full) {
            assert_relative_eq!(x.value, y.value, max_relative = 1e-12);
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let s = make_ellipsoid([1.5, 1.0, 0.8], 24).unwrap();
    let smp = sample_volume(&s, 4.0, 2_000, 2_000, 3).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let curve = phi_curve(&s, &smp, &ctx(1.0), &[0.5, 1.0]).unwrap();
            let mut bits: Vec<u64> = curve.points.iter().map(|p| p.phi.value.to_bits()).collect();
            bits.push(gagliardo_seminorm_sq(&s, 0.0).unwrap().value.to_bits());
            bits.push(abs_seminorm(&s).unwrap().value.to_bits());
            bits.push(nonlocal_perimeter_boundary(&s, &ctx(1.0)).unwrap().value.to_bits());
            bits
        })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(4));
}

#[test]
fn kernel_checks_pass() {
    for d in [3, 4, 5] {
        let c = KernelContext::new(d, 1.0, 1e-10).unwrap();
        for check in derivative_identity_checks(&c).unwrap().into_iter().chain(weight_identity_checks(&c).unwrap()) {
            assert!(check.passed(), "d = {d}: {check:?}");
        }
    }
    let constants = constants_checks().unwrap();
    assert_eq!(constants.len(), 2);
    assert!(constants.iter().all(|c| c.passed()));
}

#[test]
fn reports_round_trip_through_json() {
    let r = check_endpoint_inequality(&make_sphere(1.0, 16).unwrap()).unwrap();
    let back: InequalityReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.slack, r.lhs.value - r.rhs.value);
}

#[test]
fn functional_values_combine_errors_in_quadrature() {
    let a = FunctionalValue::new("a", 1.0, 0.3, 10);
    let b = FunctionalValue::new("b", 2.0, 0.4, 5);
    let c = a.plus(&b, "c");
    assert_eq!(c.value, 3.0);
    assert_relative_eq!(c.err, 0.5, max_relative = 1e-15);
    let r = InequalityReport::new(b, a);
    assert_eq!(r.threshold, DECISION_FACTOR * 0.5);
    assert!(!r.strict() && r.equality_case);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ellipsoid_inequalities_hold(a in 0.6f64..1.8, b in 0.6f64..1.8, c in 0.6f64..1.8) {
        let s = make_ellipsoid([a, b, c], 24).unwrap();
        prop_assert!(check_endpoint_inequality(&s).unwrap().satisfied);
        prop_assert!(check_l1_inequality(&s).unwrap().satisfied);
        let l = nonlocal_perimeter_boundary(&s, &ctx(1.0)).unwrap();
        prop_assert!(l.value > 0.0);
        prop_assert!(l.value <= s.shape().volume() * (1.0 + 3.0 * l.err / l.value));
    }

    #[test]
    fn fundamental_form_is_nonnegative(a in 0.6f64..1.8, c in 0.6f64..1.8, sv in -0.9f64..0.9) {
        let s = make_ellipsoid([a, 1.0, c], 16).unwrap();
        for v in frac_fundamental_form_sq(&s, sv).unwrap() {
            prop_assert!(v.value >= 0.0 && v.err >= 0.0);
        }
    }
}
