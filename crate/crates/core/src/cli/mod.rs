//! Batch command surface: scenario in, reports and plot tables out.
//!
//! Exit codes: 0 success, 2 invalid scenario or arguments, 3 numerical or
//! I/O failure, 4 internal invariant violation.

pub mod report;
pub mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::observability::{analyze, placement_sweep, StrategicReport, SweepGrid, SweepTable};
use crate::reconstruction::{
    counterexample_run, reconstruct_with, reconstruction_error, trace_profile,
    CounterexampleReport, ReconstructionResult, TraceErrors, TraceProfile,
};
use crate::sensors::{coefficient_matrix, simulate_outputs, OutputSamples};
use crate::spectral::{Cutoff, Domain};
use report::{csv_table, OutputSet, Report, Timings};
use scenario::{initial_coefficients, parse_scenario, Setup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "regional-sensors",
    version,
    about = "Regional boundary observability and strategic sensor analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank and kernel verdicts, observability constant and placement rules.
    Analyze {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Simulate outputs from the initial state and reconstruct it.
    Reconstruct {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Directory for CSV plot tables.
        #[arg(long)]
        plots: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Move one sensor over a grid of locations.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Grid as `<nx>x<ny>`; overrides the scenario's sweep grid.
        #[arg(long)]
        grid: Option<SweepGrid>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plots: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// The boundary-sensor example on the unit square (JSON to stdout by default).
    Counterexample {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        plots: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Eigenvalue groups and multiplicities of the truncated basis.
    Modes {
        #[arg(long)]
        scenario: PathBuf,
        /// Write JSON here instead of printing a table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => EXIT_INVALID,
            Error::NumericalFailure(_) => EXIT_NUMERICAL,
            Error::Invariant(_) => EXIT_INVARIANT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: format!("I/O error: {e}"),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self {
            code: EXIT_INVARIANT,
            message: format!("report serialization failed: {e}"),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn load(path: &Path) -> std::result::Result<Setup, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_INVALID,
        message: format!("cannot read scenario {}: {e}", path.display()),
    })?;
    Ok(parse_scenario(&text)?)
}

fn finish<T: Serialize>(mut report: Report<T>, started: Instant, timings: bool) -> Report<T> {
    if timings {
        report.timings = Some(Timings {
            wall_seconds: started.elapsed().as_secs_f64(),
        });
    }
    report
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn execute(command: Command, stdout: &mut dyn Write) -> std::result::Result<(), CliError> {
    let started = Instant::now();
    let mut outputs = OutputSet::default();
    match command {
        Command::Analyze {
            scenario,
            out,
            timings,
        } => {
            let setup = load(&scenario)?;
            let result = run_analyze(&setup)?;
            let report = finish(
                Report::new("analyze", Some(setup.scenario), result),
                started,
                timings,
            );
            outputs.add(out, report.to_json()?);
        }
        Command::Reconstruct {
            scenario,
            out,
            plots,
            timings,
        } => {
            let setup = load(&scenario)?;
            let result = run_reconstruct(&setup)?;
            if let Some(dir) = plots {
                outputs.add(
                    dir.join("outputs.csv"),
                    outputs_csv(&result.samples, &result.sensor_ids),
                );
                outputs.add(
                    dir.join("trace.csv"),
                    trace_csv(&result.profile_true, &result.profile_estimate),
                );
            }
            let report = finish(
                Report::new("reconstruct", Some(setup.scenario), result),
                started,
                timings,
            );
            outputs.add(out, report.to_json()?);
        }
        Command::Sweep {
            scenario,
            grid,
            out,
            plots,
            timings,
        } => {
            let setup = load(&scenario)?;
            let grid = grid
                .or_else(|| setup.scenario.sweep.as_ref().and_then(|s| s.grid))
                .ok_or_else(|| {
                    Error::InvalidArgument("no sweep grid: pass --grid or set sweep.grid".into())
                })?;
            let table = run_sweep(&setup, grid)?;
            if let Some(dir) = plots {
                outputs.add(dir.join("sweep.csv"), sweep_csv(&table));
            }
            let report = finish(
                Report::new("sweep", Some(setup.scenario), table),
                started,
                timings,
            );
            outputs.add(out, report.to_json()?);
        }
        Command::Counterexample {
            out,
            plots,
            timings,
        } => {
            let result = counterexample_run()?;
            if let Some(dir) = plots {
                let truth = TraceProfile {
                    arc: result.profile_arc.clone(),
                    values: result.profile_true.clone(),
                };
                let est = TraceProfile {
                    arc: result.profile_arc.clone(),
                    values: result.profile_estimate.clone(),
                };
                outputs.add(dir.join("trace.csv"), trace_csv(&truth, &est));
            }
            let report: Report<CounterexampleReport> = finish(
                Report::new("counterexample", None, result),
                started,
                timings,
            );
            match out {
                Some(path) => outputs.add(path, report.to_json()?),
                None => {
                    outputs.commit()?;
                    stdout.write_all(&report.to_json()?)?;
                    return Ok(());
                }
            }
        }
        Command::Modes { scenario, out } => {
            let setup = load(&scenario)?;
            let table = modes_table(&setup);
            match out {
                Some(path) => outputs.add(
                    path,
                    Report::new("modes", Some(setup.scenario), table).to_json()?,
                ),
                None => {
                    stdout.write_all(modes_text(&table).as_bytes())?;
                    return Ok(());
                }
            }
        }
    }
    outputs.commit()?;
    Ok(())
}

pub fn run_analyze(setup: &Setup) -> Result<StrategicReport> {
    analyze(&setup.sensors, &setup.basis, &setup.region, &setup.settings)
}

/// Result of the `reconstruct` command.
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructOutcome {
    pub sensor_ids: Vec<String>,
    pub true_coefficients: Vec<f64>,
    pub samples: OutputSamples,
    pub reconstruction: ReconstructionResult,
    pub errors: TraceErrors,
    #[serde(skip)]
    pub profile_true: TraceProfile,
    #[serde(skip)]
    pub profile_estimate: TraceProfile,
}

pub fn run_reconstruct(setup: &Setup) -> Result<ReconstructOutcome> {
    if setup.sensors.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one sensor is required".into(),
        ));
    }
    let state = setup.scenario.initial_state.as_ref().ok_or_else(|| {
        Error::InvalidArgument("initial_state is required for reconstruction".into())
    })?;
    let x0 = initial_coefficients(state, &setup.basis)?;
    let rule = &setup.settings.rule;
    let c = coefficient_matrix(&setup.sensors, &setup.basis, rule)?;
    let samples = simulate_outputs(&c, &setup.basis, &x0, &setup.times, setup.noise)?;
    let reconstruction = reconstruct_with(
        &samples,
        &c,
        &setup.basis,
        setup.scenario.ridge,
        &setup.settings.tolerances,
    )?;
    let errors = reconstruction_error(&x0, &reconstruction, &setup.basis, &setup.region, rule)?;
    let nodes: Vec<_> = setup
        .region
        .nodes(rule)
        .into_iter()
        .map(|n| n.location)
        .collect();
    Ok(ReconstructOutcome {
        sensor_ids: setup.sensors.iter().map(|s| s.id.clone()).collect(),
        profile_true: trace_profile(&x0, &setup.basis, &nodes)?,
        profile_estimate: trace_profile(&reconstruction.coefficients, &setup.basis, &nodes)?,
        true_coefficients: x0,
        samples,
        reconstruction,
        errors,
    })
}

pub fn run_sweep(setup: &Setup, grid: SweepGrid) -> Result<SweepTable> {
    if setup.sensors.is_empty() {
        return Err(Error::InvalidArgument(
            "a sweep needs a template sensor".into(),
        ));
    }
    let template_id = setup
        .scenario
        .sweep
        .as_ref()
        .and_then(|s| s.template.clone());
    let position = match template_id {
        Some(id) => setup
            .sensors
            .iter()
            .position(|s| s.id == id)
            .unwrap_or(setup.sensors.len() - 1),
        None => setup.sensors.len() - 1,
    };
    let mut fixed = setup.sensors.clone();
    let template = fixed.remove(position);
    placement_sweep(
        &template,
        &fixed,
        grid,
        &setup.basis,
        &setup.region,
        &setup.settings,
    )
}

/// One row per eigenvalue group.
#[derive(Debug, Clone, Serialize)]
pub struct ModesRow {
    pub group: usize,
    pub eigenvalue: f64,
    /// `λ/π²`, handy on rectangles.
    pub eigenvalue_over_pi2: f64,
    pub multiplicity: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModesTable {
    pub domain: Domain,
    pub cutoff: Cutoff,
    pub modes: usize,
    pub groups: Vec<ModesRow>,
}

pub fn modes_table(setup: &Setup) -> ModesTable {
    let basis = &setup.basis;
    ModesTable {
        domain: *basis.domain(),
        cutoff: basis.cutoff,
        modes: basis.len(),
        groups: basis
            .groups
            .iter()
            .enumerate()
            .map(|(n, g)| ModesRow {
                group: n,
                eigenvalue: g.eigenvalue,
                eigenvalue_over_pi2: g.eigenvalue / std::f64::consts::PI.powi(2),
                multiplicity: g.multiplicity,
                members: basis
                    .group_members(n)
                    .iter()
                    .map(|m| m.index.to_string())
                    .collect(),
            })
            .collect(),
    }
}

pub fn modes_text(table: &ModesTable) -> String {
    let mut out = format!(
        "{:>5}  {:>22}  {:>14}  {:>4}  members\n",
        "group", "eigenvalue", "lambda/pi^2", "mult"
    );
    for row in &table.groups {
        out.push_str(&format!(
            "{:>5}  {:>22.12e}  {:>14.6}  {:>4}  {}\n",
            row.group,
            row.eigenvalue,
            row.eigenvalue_over_pi2,
            row.multiplicity,
            row.members.join(" ")
        ));
    }
    out
}

pub fn outputs_csv(samples: &OutputSamples, ids: &[String]) -> Vec<u8> {
    let mut header = vec!["time"];
    header.extend(ids.iter().map(String::as_str));
    let rows = samples.times.iter().enumerate().map(|(k, &t)| {
        let mut row = vec![num(t)];
        row.extend(samples.values.iter().map(|v| num(v[k])));
        row
    });
    csv_table(&header, rows)
}

pub fn trace_csv(truth: &TraceProfile, estimate: &TraceProfile) -> Vec<u8> {
    let rows = (0..truth.arc.len()).map(|k| {
        vec![
            num(truth.arc[k]),
            num(truth.values[k]),
            num(estimate.values[k]),
        ]
    });
    csv_table(&["arc", "true", "estimated"], rows)
}

pub fn sweep_csv(table: &SweepTable) -> Vec<u8> {
    let rows = table
        .rows
        .iter()
        .map(|r| vec![num(r.x), num(r.y), r.sigma_min.map(num).unwrap_or_default()]);
    csv_table(&["x", "y", "sigma_min"], rows)
}
