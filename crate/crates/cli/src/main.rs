use clap::{Args, Parser, Subcommand};
use gagliardo_cli::report::{to_json, CHECK_COLUMNS, SWEEP_COLUMNS};
use gagliardo_cli::{
    cmd_check, cmd_export, cmd_sweep, exit, parse_checks, parse_grid, CliError, Format, Output, ScenarioConfig,
    ShapeSpec, TruncRadius,
};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::LazyLock;

/// Environment variable that sets the worker thread count.
const THREADS_VAR: &str = "VERIFY_THREADS";

static SWEEP_HELP: LazyLock<String> = LazyLock::new(|| {
    format!(
        "CSV columns, in order: {}\n\nstep_err is the error of phi(a) - phi(previous a) \
         from common random numbers and is empty on the first row.",
        SWEEP_COLUMNS.join(",")
    )
});

static CHECK_HELP: LazyLock<String> = LazyLock::new(|| {
    format!(
        "Checks: thm11, ineq2, thm23, id17, id18, lemma21, lemma31, constants, conjecture5, or all.\n\
         thm23, id17 and id18 give one record per a; conjecture5 one per positive r and never \
         fails the run.\n\nCSV columns, in order: {}",
        CHECK_COLUMNS.join(",")
    )
});

#[derive(Parser)]
#[command(
    name = "verify",
    version,
    about = "Verify Gagliardo-seminorm inequalities and the monotone Bessel-potential functional",
    after_help = "Exit codes: 0 all checks pass, 2 a check failed, 3 usage/configuration/regime error, 4 I/O error.\n\
                  Set VERIFY_THREADS to fix the number of worker threads; results do not depend on it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate phi, its derivative and the nonlocal perimeter over the a grid
    #[command(after_help = SWEEP_HELP.as_str())]
    Sweep(ScenarioArgs),
    /// Run named inequality and identity checks
    #[command(after_help = CHECK_HELP.as_str())]
    Check {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated check names, or `all`
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// Write the quadrature surface as JSON
    Export(ScenarioArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// sphere:R=1 | ellipsoid:a=2,b=1,c=1 | perturbed:eps=0.2,mode=2
    #[arg(long, default_value = "sphere:R=1")]
    shape: String,
    /// Number of latitude nodes N; the grid has 2N^2 nodes
    #[arg(long, default_value_t = 96)]
    resolution: usize,
    /// Ascending Helmholtz parameters, comma-separated
    #[arg(long, default_value = "0.02,0.05,0.1,0.2,0.5,1,2,4", allow_hyphen_values = true)]
    a_grid: String,
    /// Ascending fractional orders in [0, 1), comma-separated
    #[arg(long, default_value = "0.25,0.5,0.75", allow_hyphen_values = true)]
    r_grid: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo points, split evenly between inside and outside samples
    #[arg(long, default_value_t = 200_000)]
    mc_budget: usize,
    /// Truncation radius of the outside samples, or `auto` (Λ tail bound at a = max(min a, 1) below 1e-3 of Λ)
    #[arg(long, default_value = "auto")]
    trunc_radius: String,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json (export always writes JSON)
    #[arg(long, default_value = "csv")]
    format: String,
}

impl ScenarioArgs {
    fn config(&self) -> Result<ScenarioConfig, CliError> {
        let shape: ShapeSpec = self.shape.parse()?;
        let trunc_radius: TruncRadius = self.trunc_radius.parse()?;
        let format: Format = self.format.parse()?;
        Ok(ScenarioConfig {
            shape: shape.0,
            resolution: self.resolution,
            a_grid: parse_grid(&self.a_grid)?,
            r_grid: parse_grid(&self.r_grid)?,
            seed: self.seed,
            mc_budget: self.mc_budget,
            trunc_radius,
            output: Output { path: self.out.clone(), format },
            ..ScenarioConfig::default()
        })
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure {n} threads: {e}")))
}

fn emit(output: &Output, text: &str) -> Result<(), CliError> {
    match &output.path {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Sweep(args) => {
            let config = args.config()?;
            let report = cmd_sweep(&config)?;
            let text = match config.output.format {
                Format::Csv => report.to_csv()?,
                Format::Json => to_json(&report)?,
            };
            emit(&config.output, &text)?;
            for i in report.invariants.iter().filter(|i| !i.passed) {
                eprintln!("invariant {} failed: {}", i.name, i.detail);
            }
            Ok(if report.passed() { exit::OK } else { exit::CHECK_FAILED })
        }
        Command::Check { scenario, checks } => {
            let checks = parse_checks(&checks)?;
            let config = scenario.config()?;
            let report = cmd_check(&config, &checks)?;
            let text = match config.output.format {
                Format::Csv => report.to_csv()?,
                Format::Json => to_json(&report)?,
            };
            emit(&config.output, &text)?;
            for r in report.records.iter().filter(|r| !r.passed && !r.informational) {
                eprintln!("check {} failed: slack {} with threshold {}", r.name, r.slack, r.threshold);
            }
            Ok(if report.passed() { exit::OK } else { exit::CHECK_FAILED })
        }
        Command::Export(args) => {
            let config = args.config()?;
            let surface = cmd_export(&config)?;
            emit(&config.output, &surface.to_json()?)?;
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("verify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
