//! Report types and their CSV and JSON renderings.
//!
//! CSV reports start with `#` comment lines carrying the header (version, configuration
//! hash, seed, tolerances, invariants), followed by one header row and one record per
//! `a` value or per check. Numbers carry 12 significant digits. No timestamps are
//! written, so equal configurations give byte-identical files.

use crate::config::Tolerances;
use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const SWEEP_COLUMNS: [&str; 12] = [
    "a",
    "phi",
    "phi_err",
    "phi_boundary_term",
    "phi_solid_term",
    "phi_derivative",
    "phi_derivative_err",
    "lambda",
    "lambda_err",
    "slack_thm23",
    "slack_thm23_err",
    "step_err",
];

pub const CHECK_COLUMNS: [&str; 12] = [
    "check",
    "name",
    "parameter",
    "lhs",
    "rhs",
    "slack",
    "err",
    "threshold",
    "satisfied",
    "equality_case",
    "informational",
    "passed",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub shape: String,
    pub resolution: usize,
    pub mc_budget: usize,
    /// Truncation radius of the sampler actually used, after resolving `auto`.
    pub trunc_radius: f64,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub phi: f64,
    pub phi_err: f64,
    pub phi_boundary_term: f64,
    pub phi_solid_term: f64,
    pub phi_derivative: f64,
    pub phi_derivative_err: f64,
    pub lambda: f64,
    pub lambda_err: f64,
    pub slack_thm23: f64,
    pub slack_thm23_err: f64,
    /// Error of `Φ(a) − Φ(previous a)` from common random numbers; absent on the first row.
    pub step_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    /// Required invariants decide the exit code; the others are informational.
    pub required: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub header: ReportHeader,
    pub rows: Vec<SweepRow>,
    pub invariants: Vec<Invariant>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// The requested check, e.g. `lemma21`.
    pub check: String,
    /// The individual record, e.g. `lemma21.first_derivative`.
    pub name: String,
    /// `a` or `r` for parametrized checks.
    pub parameter: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub err: f64,
    pub threshold: f64,
    pub satisfied: bool,
    pub equality_case: bool,
    /// Open conjectures are recorded but never fail the run.
    pub informational: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub header: ReportHeader,
    pub records: Vec<CheckRecord>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|i| i.passed || !i.required)
    }
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed || r.informational)
    }
}

/// Formats with 12 significant digits, in plain decimal notation when the exponent is
/// moderate and in scientific notation otherwise.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    match exp {
        0..=10 => {
            let split = exp as usize + 1;
            format!("{sign}{}.{}", &digits[..split], &digits[split..])
        }
        11 => format!("{sign}{digits}"),
        -5..=-1 => format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize)),
        _ => sci,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn write_header(out: &mut Vec<u8>, h: &ReportHeader) -> Result<(), CliError> {
    writeln!(out, "# {} {} version={}", h.tool, h.command, h.version)?;
    writeln!(out, "# config_hash={}", h.config_hash)?;
    writeln!(out, "# seed={}", h.seed)?;
    writeln!(out, "# shape={}", h.shape)?;
    writeln!(out, "# resolution={}", h.resolution)?;
    writeln!(out, "# mc_budget={}", h.mc_budget)?;
    writeln!(out, "# trunc_radius={}", format_number(h.trunc_radius))?;
    let t = &h.tolerances;
    writeln!(out, "# kernel_rel_tol={}", format_number(t.kernel_rel_tol))?;
    writeln!(
        out,
        "# tolerances decision_factor={} identity_rel={} constants_abs={} ball_constancy_rel={} trunc_tail_rel={}",
        format_number(t.decision_factor),
        format_number(t.identity_rel),
        format_number(t.constants_abs),
        format_number(t.ball_constancy_rel),
        format_number(t.trunc_tail_rel)
    )?;
    Ok(())
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

impl SweepReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = Vec::new();
        write_header(&mut out, &self.header)?;
        for i in &self.invariants {
            let status = if i.passed { "pass" } else { "FAIL" };
            let kind = if i.required { "required" } else { "informational" };
            writeln!(out, "# invariant {}={status} ({kind}) {}", i.name, i.detail)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SWEEP_COLUMNS).map_err(csv_error)?;
        for r in &self.rows {
            let mut rec: Vec<String> = [
                r.a,
                r.phi,
                r.phi_err,
                r.phi_boundary_term,
                r.phi_solid_term,
                r.phi_derivative,
                r.phi_derivative_err,
                r.lambda,
                r.lambda_err,
                r.slack_thm23,
                r.slack_thm23_err,
            ]
            .into_iter()
            .map(format_number)
            .collect();
            rec.push(opt(r.step_err));
            w.write_record(&rec).map_err(csv_error)?;
        }
        finish(w)
    }
}

impl CheckReport {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = Vec::new();
        write_header(&mut out, &self.header)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CHECK_COLUMNS).map_err(csv_error)?;
        for r in &self.records {
            let nums = [r.lhs, r.rhs, r.slack, r.err, r.threshold].map(format_number);
            let mut rec = vec![r.check.clone(), r.name.clone(), opt(r.parameter)];
            rec.extend(nums);
            rec.extend([r.satisfied, r.equality_case, r.informational, r.passed].map(|b| b.to_string()));
            w.write_record(&rec).map_err(csv_error)?;
        }
        finish(w)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_number(-12.566370614359172), "-12.5663706144");
        assert_eq!(format_number(157.91367041742973), "157.913670417");
        assert_eq!(format_number(0.0012345678901234), "0.00123456789012");
        assert_eq!(format_number(1e-9), "1.00000000000e-9");
        assert_eq!(format_number(123456789012.0), "123456789012");
        assert_eq!(format_number(1.5e20), "1.50000000000e20");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1.00000000000");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn formatted_numbers_parse_back() {
        for v in [1.0 / 3.0, -2.5e-7, 9.999999999999e5, 4.0 * std::f64::consts::PI] {
            let back: f64 = format_number(v).parse().unwrap();
            assert!((back - v).abs() <= 1e-11 * v.abs());
        }
    }
}
