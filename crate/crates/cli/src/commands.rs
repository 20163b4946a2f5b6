//! The `sweep`, `check` and `export` commands.

use crate::config::{ScenarioConfig, TruncRadius};
use crate::error::CliError;
use crate::report::{CheckRecord, CheckReport, Invariant, ReportHeader, SweepReport, SweepRow};
use gagliardo::bessel_kernels::{kappa, kappa_tilde, KernelContext};
use gagliardo::functionals::{
    check_endpoint_inequality, check_fractional_inequality, check_l1_inequality, check_perimeter_forms,
    check_projected_normal_identity, constants_checks, derivative_identity_checks, nonlocal_perimeter_boundary,
    perimeter_trunc_radius, phi_curve, regime_cap, weight_identity_checks, InequalityReport, KernelCheck,
};
use gagliardo::surface_geometry::{sample_volume, QuadratureSurface, VolumeSampler};
use std::fmt;
use std::str::FromStr;

/// Checks accepted by `verify check --checks`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckName {
    Thm11,
    Ineq2,
    Thm23,
    Id17,
    Id18,
    Lemma21,
    Lemma31,
    Constants,
    Conjecture5,
}

impl CheckName {
    pub const ALL: [CheckName; 9] = [
        CheckName::Thm11,
        CheckName::Ineq2,
        CheckName::Thm23,
        CheckName::Id17,
        CheckName::Id18,
        CheckName::Lemma21,
        CheckName::Lemma31,
        CheckName::Constants,
        CheckName::Conjecture5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Thm11 => "thm11",
            CheckName::Ineq2 => "ineq2",
            CheckName::Thm23 => "thm23",
            CheckName::Id17 => "id17",
            CheckName::Id18 => "id18",
            CheckName::Lemma21 => "lemma21",
            CheckName::Lemma31 => "lemma31",
            CheckName::Constants => "constants",
            CheckName::Conjecture5 => "conjecture5",
        }
    }

    fn needs_surface(self) -> bool {
        !matches!(self, CheckName::Lemma21 | CheckName::Lemma31 | CheckName::Constants)
    }

    fn needs_sampler(self) -> bool {
        matches!(self, CheckName::Thm23 | CheckName::Id17 | CheckName::Id18)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| {
                let known: Vec<&str> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
                CliError::Usage(format!("unknown check `{s}`; expected one of {} or all", known.join(", ")))
            })
    }
}

/// Parses `all` or a comma-separated list of check names, keeping the first occurrence of each.
pub fn parse_checks(s: &str) -> Result<Vec<CheckName>, CliError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|v| !v.is_empty()) {
        if item == "all" {
            for c in CheckName::ALL {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
            continue;
        }
        let c: CheckName = item.parse()?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no checks requested".into()));
    }
    Ok(out)
}

struct Scenario {
    surface: QuadratureSurface,
    trunc_radius: f64,
    sampler: Option<VolumeSampler>,
}

fn context(config: &ScenarioConfig, a: f64) -> Result<KernelContext, CliError> {
    Ok(KernelContext::new(3, a, config.tolerances.kernel_rel_tol)?)
}

/// `auto` picks the radius whose Λ tail bound at `a_ref = max(min a, 1)` (capped by the regime)
/// is below `trunc_tail_rel` of the boundary Λ. Smaller `a` carry a larger tail bound in their error.
fn resolve_trunc_radius(config: &ScenarioConfig, surface: &QuadratureSurface) -> Result<f64, CliError> {
    match config.trunc_radius {
        TruncRadius::Fixed(r) => Ok(r),
        TruncRadius::Auto => {
            let a_min = config.a_grid.iter().cloned().fold(f64::INFINITY, f64::min);
            let a_ref = a_min.max(1.0).min(regime_cap(config.resolution));
            let ctx = context(config, a_ref)?;
            let reference = nonlocal_perimeter_boundary(surface, &ctx)?.value;
            Ok(perimeter_trunc_radius(surface.shape(), &ctx, reference, config.tolerances.trunc_tail_rel)?)
        }
    }
}

fn scenario(config: &ScenarioConfig, with_sampler: bool) -> Result<Scenario, CliError> {
    let surface = QuadratureSurface::build(config.shape, config.resolution)?;
    let trunc_radius = resolve_trunc_radius(config, &surface)?;
    let sampler = if with_sampler {
        let (n_in, n_out) = config.samples();
        Some(sample_volume(&surface, trunc_radius, n_in, n_out, config.seed)?)
    } else {
        None
    };
    Ok(Scenario { surface, trunc_radius, sampler })
}

fn header(config: &ScenarioConfig, command: &str, trunc_radius: f64) -> ReportHeader {
    ReportHeader {
        tool: "verify".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config_hash: config.hash(),
        seed: config.seed,
        shape: config.shape_spec().to_string(),
        resolution: config.resolution,
        mc_budget: config.mc_budget,
        trunc_radius,
        tolerances: config.tolerances,
    }
}

/// Tabulates `Φ`, its derivative and `Λ` over the `a` grid with common random numbers.
///
/// Required invariants: the solid-boundary inequality holds at every `a`, `Φ` is
/// non-increasing, and on balls `Φ` equals `κκ̃σ(∂Ω)` with vanishing derivative.
/// Strict decrease on non-balls is reported but informational, since near-balls can
/// be unresolvable at a given budget.
pub fn cmd_sweep(config: &ScenarioConfig) -> Result<SweepReport, CliError> {
    config.validate()?;
    let sc = scenario(config, true)?;
    let sampler = sc.sampler.as_ref().expect("sweep builds a sampler");
    let ctx = context(config, config.a_grid[0])?;
    let curve = phi_curve(&sc.surface, sampler, &ctx, &config.a_grid)?;
    let factor = config.tolerances.decision_factor;

    let rows: Vec<SweepRow> = curve
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| SweepRow {
            a: p.a,
            phi: p.phi.value,
            phi_err: p.phi.err,
            phi_boundary_term: p.boundary_term.value,
            phi_solid_term: p.solid_term.value,
            phi_derivative: p.derivative.value,
            phi_derivative_err: p.derivative.err,
            lambda: p.lambda.value,
            lambda_err: p.lambda.err,
            slack_thm23: p.solid_boundary.slack,
            slack_thm23_err: p.solid_boundary.err,
            step_err: k.checked_sub(1).map(|j| curve.step_errors[j]),
        })
        .collect();

    let mut invariants = Vec::new();
    let failing: Vec<String> = curve
        .points
        .iter()
        .filter(|p| !p.solid_boundary.satisfied)
        .map(|p| p.a.to_string())
        .collect();
    invariants.push(Invariant {
        name: "thm23_satisfied".into(),
        required: true,
        passed: failing.is_empty(),
        detail: if failing.is_empty() { "at every a".into() } else { format!("violated at a = {}", failing.join(" ")) },
    });
    let increases: Vec<String> = curve
        .steps()
        .iter()
        .zip(config.a_grid.windows(2))
        .filter(|((d, e), _)| *d > factor * e)
        .map(|(_, w)| format!("{}->{}", w[0], w[1]))
        .collect();
    invariants.push(Invariant {
        name: "phi_non_increasing".into(),
        required: true,
        passed: increases.is_empty(),
        detail: if increases.is_empty() { "no step increases beyond the threshold".into() } else { format!("increases at {}", increases.join(" ")) },
    });

    if config.shape.is_ball() {
        let target = kappa(3)?.value * kappa_tilde(3)?.value * sc.surface.area();
        let worst = curve.points.iter().map(|p| (p.phi.value - target).abs() / target).fold(0.0, f64::max);
        invariants.push(Invariant {
            name: "ball_constancy".into(),
            required: true,
            passed: worst <= config.tolerances.ball_constancy_rel,
            detail: format!("max relative deviation from kappa*kappa_tilde*area {}", crate::report::format_number(worst)),
        });
        let nonzero: Vec<String> = curve
            .points
            .iter()
            .filter(|p| p.derivative.value.abs() > factor * p.derivative.err)
            .map(|p| p.a.to_string())
            .collect();
        invariants.push(Invariant {
            name: "derivative_zero".into(),
            required: true,
            passed: nonzero.is_empty(),
            detail: if nonzero.is_empty() { "within the threshold at every a".into() } else { format!("nonzero at a = {}", nonzero.join(" ")) },
        });
    } else {
        let flat: Vec<String> = curve
            .steps()
            .iter()
            .zip(config.a_grid.windows(2))
            .filter(|((d, e), _)| *d >= -factor * e || d.is_nan())
            .map(|(_, w)| format!("{}->{}", w[0], w[1]))
            .collect();
        invariants.push(Invariant {
            name: "phi_strictly_decreasing".into(),
            required: false,
            passed: flat.is_empty(),
            detail: if flat.is_empty() { "every step beyond the threshold".into() } else { format!("unresolved steps {}", flat.join(" ")) },
        });
    }

    Ok(SweepReport { header: header(config, "sweep", sc.trunc_radius), rows, invariants })
}

fn record(check: CheckName, name: &str, parameter: Option<f64>, r: &InequalityReport, passed: bool) -> CheckRecord {
    CheckRecord {
        check: check.to_string(),
        name: name.into(),
        parameter,
        lhs: r.lhs.value,
        rhs: r.rhs.value,
        slack: r.slack,
        err: r.err,
        threshold: r.threshold,
        satisfied: r.satisfied,
        equality_case: r.equality_case,
        informational: r.exploratory,
        passed,
    }
}

fn kernel_records(check: CheckName, checks: Vec<KernelCheck>) -> Vec<CheckRecord> {
    checks.iter().map(|k| record(check, &k.name, None, &k.report, k.passed())).collect()
}

/// Runs the requested checks. Inequalities pass when satisfied, and on balls also when in
/// the equality case; identities pass in the equality case; conjecture records are
/// informational.
pub fn cmd_check(config: &ScenarioConfig, checks: &[CheckName]) -> Result<CheckReport, CliError> {
    config.validate_inputs()?;
    if checks.iter().any(|c| c.needs_sampler()) {
        config.validate_regime()?;
    }
    let needs_surface = checks.iter().any(|c| c.needs_surface());
    let needs_sampler = checks.iter().any(|c| c.needs_sampler());
    let sc = if needs_surface { Some(scenario(config, needs_sampler)?) } else { None };
    let ball = config.shape.is_ball();
    let inequality_passed = |r: &InequalityReport| r.satisfied && (!ball || r.equality_case);
    let kernel_ctx = context(config, 1.0)?;

    let mut records = Vec::new();
    for &check in checks {
        match check {
            CheckName::Lemma21 => records.extend(kernel_records(check, derivative_identity_checks(&kernel_ctx)?)),
            CheckName::Lemma31 => records.extend(kernel_records(check, weight_identity_checks(&kernel_ctx)?)),
            CheckName::Constants => records.extend(kernel_records(check, constants_checks()?)),
            _ => {
                let sc = sc.as_ref().expect("surface checks build a scenario");
                let s = &sc.surface;
                match check {
                    CheckName::Thm11 => {
                        let r = check_endpoint_inequality(s)?;
                        records.push(record(check, "thm11", None, &r, inequality_passed(&r)));
                    }
                    CheckName::Ineq2 => {
                        let r = check_l1_inequality(s)?;
                        records.push(record(check, "ineq2", None, &r, inequality_passed(&r)));
                    }
                    CheckName::Thm23 => {
                        let smp = sc.sampler.as_ref().expect("sampler");
                        let curve = phi_curve(s, smp, &context(config, config.a_grid[0])?, &config.a_grid)?;
                        for p in &curve.points {
                            let r = &p.solid_boundary;
                            records.push(record(check, "thm23", Some(p.a), r, inequality_passed(r)));
                        }
                    }
                    CheckName::Id17 | CheckName::Id18 => {
                        let smp = sc.sampler.as_ref().expect("sampler");
                        for &a in &config.a_grid {
                            let ctx = context(config, a)?;
                            let r = if check == CheckName::Id17 {
                                check_perimeter_forms(s, smp, &ctx)?
                            } else {
                                check_projected_normal_identity(s, smp, &ctx)?
                            };
                            records.push(record(check, check.as_str(), Some(a), &r, r.equality_case));
                        }
                    }
                    CheckName::Conjecture5 => {
                        for &r in config.r_grid.iter().filter(|&&r| r > 0.0) {
                            let rep = check_fractional_inequality(s, r)?;
                            records.push(record(check, "conjecture5", Some(r), &rep, rep.satisfied));
                        }
                    }
                    CheckName::Lemma21 | CheckName::Lemma31 | CheckName::Constants => unreachable!(),
                }
            }
        }
    }
    let trunc = sc.as_ref().map_or(0.0, |s| s.trunc_radius);
    Ok(CheckReport { header: header(config, "check", trunc), records })
}

/// Builds the surface of the configuration; grids and budgets are not validated.
pub fn cmd_export(config: &ScenarioConfig) -> Result<QuadratureSurface, CliError> {
    Ok(QuadratureSurface::build(config.shape, config.resolution)?)
}
