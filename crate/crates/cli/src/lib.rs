//! Command-line front end: named verification scenarios over spheres, ellipsoids and
//! perturbed spheres, with CSV or JSON reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_check, cmd_export, cmd_sweep, parse_checks, CheckName};
pub use config::{parse_grid, Format, Output, ScenarioConfig, ShapeSpec, Tolerances, TruncRadius};
pub use error::{exit, CliError};
pub use report::{format_number, CheckRecord, CheckReport, Invariant, ReportHeader, SweepReport, SweepRow};
