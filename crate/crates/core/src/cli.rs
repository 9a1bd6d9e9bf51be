//! The `ctxcalc` command line.
//!
//! Data goes to stdout or to files under the output directory; diagnostics
//! go to stderr. Exit codes are listed in [`exit`].

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::io::{self, format_sig12, Scenario};
use crate::model::{self, ContextMode, ModelError, RciReport, SystemConfig};
use crate::sim::{RngSpec, Sampler, SimError, SimEstimate, Validator};
use crate::sweep::{self, SweepError};

pub mod exit {
    pub const OK: u8 = 0;
    pub const CONFIG: u8 = 2;
    pub const DOMAIN: u8 = 3;
    pub const IO: u8 = 4;
    pub const VALIDATION: u8 = 5;
}

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CTXCALC_OUT_DIR";

pub const FIGURE1_SCENARIO: &str = include_str!("../scenarios/figure1.toml");
pub const FIGURE2_SCENARIO: &str = include_str!("../scenarios/figure2.toml");

#[derive(Debug, Parser)]
#[command(
    name = "ctxcalc",
    version,
    about = "Shared vs separate context consistency and latency calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
struct SimArgs {
    /// Trials per estimated component (overrides the scenario).
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed (overrides the scenario).
    #[arg(long)]
    seed: Option<u64>,
    /// Independent streams the trials are split over (overrides the scenario).
    #[arg(long)]
    partitions: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate RCI and response-time metrics for a scenario.
    Eval {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Run the scenario's sweep block and write a CSV table.
    Sweep {
        scenario: PathBuf,
        #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
        out: PathBuf,
        /// Also write an SVG line chart.
        #[arg(long)]
        chart: bool,
    },
    /// Check every closed-form component against Monte Carlo estimates.
    Validate {
        scenario: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimates of both RCI values.
    Simulate {
        scenario: PathBuf,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Regenerate the RCI-vs-window and RCI-vs-noise datasets and charts.
    Figures {
        #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl ToString) -> Self {
        Self {
            code: exit::CONFIG,
            message: message.to_string(),
        }
    }

    fn io(message: impl ToString) -> Self {
        Self {
            code: exit::IO,
            message: message.to_string(),
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let code = if e.is_domain_error() {
            exit::DOMAIN
        } else {
            exit::CONFIG
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        let code = if e.is_domain_error() {
            exit::DOMAIN
        } else {
            exit::CONFIG
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Model(m) => m.into(),
            other => Failure::config(other),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                exit::OK
            } else {
                let _ = write!(stderr, "{e}");
                exit::CONFIG
            };
        }
    };
    let result = match cli.command {
        Command::Eval { scenario, format, out } => cmd_eval(&scenario, format, out.as_deref(), stdout),
        Command::Sweep { scenario, out, chart } => cmd_sweep(&scenario, &out, chart, stderr),
        Command::Validate { scenario, sim, out } => cmd_validate(&scenario, &sim, out.as_deref(), stdout, stderr),
        Command::Simulate { scenario, sim, out } => cmd_simulate(&scenario, &sim, out.as_deref(), stdout),
        Command::Figures { out } => cmd_figures(&out, stderr),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<Scenario, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    Scenario::parse(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_owned())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn emit(out: Option<&Path>, name: &str, contents: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(dir) => write_file(dir, name, contents).map(drop),
        None => stdout.write_all(contents.as_bytes()).map_err(Failure::io),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    io::to_json_string(value).map_err(Failure::io)
}

/// Closed-form metrics of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub rci_shared: RciReport,
    pub rci_separate: RciReport,
    pub rci_ratio: f64,
    pub t_shared: f64,
    pub t_separate: f64,
    pub time_ratio: f64,
}

impl EvalReport {
    /// The separate-context search time uses the largest per-agent window.
    pub fn compute(config: &SystemConfig) -> Result<Self, ModelError> {
        let mem = config.memory();
        let lat = config.latency();
        Ok(Self {
            rci_shared: model::rci_shared(config),
            rci_separate: model::rci_separate(config),
            rci_ratio: model::rci_ratio(config)?,
            t_shared: model::t_shared(lat, mem.shared_window())?,
            t_separate: model::t_separate(lat, mem.max_separate_window())?,
            time_ratio: model::response_time_ratio(lat, mem.shared_window(), mem.max_separate_window())?,
        })
    }

    fn to_csv(&self) -> String {
        let flag = |b: bool| if b { "true" } else { "false" };
        let mut s = String::from("metric,value,in_probability_domain\n");
        let rows = [
            (
                "rci_shared",
                self.rci_shared.value,
                flag(self.rci_shared.in_probability_domain),
            ),
            (
                "rci_separate",
                self.rci_separate.value,
                flag(self.rci_separate.in_probability_domain),
            ),
            ("rci_ratio", self.rci_ratio, ""),
            ("t_shared", self.t_shared, ""),
            ("t_separate", self.t_separate, ""),
            ("time_ratio", self.time_ratio, ""),
        ];
        for (name, value, ok) in rows {
            s.push_str(&format!("{name},{},{ok}\n", format_sig12(value)));
        }
        s
    }
}

fn cmd_eval(path: &Path, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let scenario = load(path)?;
    let report = EvalReport::compute(&scenario.config)?;
    let (body, ext) = match format {
        Format::Json => (json(&report)?, "json"),
        Format::Csv => (report.to_csv(), "csv"),
    };
    emit(out, &format!("{}_eval.{ext}", stem(path)), &body, stdout)?;
    Ok(exit::OK)
}

/// Runs a scenario's sweep and returns the CSV text and chart.
fn sweep_outputs(scenario: &Scenario) -> Result<(String, io::LineChart), Failure> {
    let spec = scenario
        .sweep_spec()
        .ok_or_else(|| Failure::config("scenario has no [sweep] block"))??;
    let table = sweep::run_sweep(&spec)?;
    let columns: Vec<&str> = table.outputs.iter().map(|o| o.name()).collect();
    let title = format!("{} vs {}", columns.join(", "), table.parameter);
    Ok((io::sweep_csv_string(&table), io::sweep_chart(&table, &title)))
}

fn cmd_sweep(path: &Path, out: &Path, chart: bool, stderr: &mut dyn Write) -> Result<u8, Failure> {
    let scenario = load(path)?;
    let (csv, svg) = sweep_outputs(&scenario)?;
    let name = stem(path);
    let written = write_file(out, &format!("{name}.csv"), &csv)?;
    let _ = writeln!(stderr, "wrote {}", written.display());
    if chart || scenario.sweep.as_ref().is_some_and(|s| s.chart) {
        let written = write_file(out, &format!("{name}.svg"), &svg.to_svg())?;
        let _ = writeln!(stderr, "wrote {}", written.display());
    }
    Ok(exit::OK)
}

fn sampler_settings(scenario: &Scenario, args: &SimArgs) -> (u64, RngSpec, u32) {
    let sim = scenario.simulation;
    (
        args.trials.unwrap_or(sim.trials),
        RngSpec::new(args.seed.unwrap_or(sim.seed)),
        args.partitions.unwrap_or(sim.partitions),
    )
}

fn cmd_validate(
    path: &Path,
    args: &SimArgs,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let scenario = load(path)?;
    let (trials, rng, partitions) = sampler_settings(&scenario, args);
    let report = Validator::new(trials)?
        .sigma_threshold(scenario.simulation.sigma_threshold)?
        .partitions(partitions)?
        .run(&scenario.config, rng)?;
    emit(out, &format!("{}_validation.json", stem(path)), &json(&report)?, stdout)?;
    if report.all_passed {
        Ok(exit::OK)
    } else {
        for f in report.failures() {
            let _ = writeln!(
                stderr,
                "component {} failed: analytic {} estimate {} (z = {:.2})",
                f.component, f.analytic, f.estimate.mean, f.z_score
            );
        }
        Ok(exit::VALIDATION)
    }
}

#[derive(Serialize)]
struct SimulatedRci {
    analytic: f64,
    estimate: SimEstimate,
    components: Vec<SimEstimate>,
}

#[derive(Serialize)]
struct SimulationReport {
    trials: u64,
    partitions: u32,
    seed: RngSpec,
    rci_shared: SimulatedRci,
    rci_separate: SimulatedRci,
}

fn cmd_simulate(path: &Path, args: &SimArgs, out: Option<&Path>, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let scenario = load(path)?;
    let (trials, rng, partitions) = sampler_settings(&scenario, args);
    let sampler = Sampler::new(trials)?.with_partitions(partitions)?;
    let config = &scenario.config;
    let run = |mode: ContextMode, analytic: f64| -> Result<SimulatedRci, SimError> {
        let est = sampler.rci(config, mode, rng)?;
        Ok(SimulatedRci {
            analytic,
            estimate: est.estimate,
            components: est.components,
        })
    };
    let report = SimulationReport {
        trials,
        partitions,
        seed: rng,
        rci_shared: run(ContextMode::Shared, model::rci_shared(config).value)?,
        rci_separate: run(ContextMode::Separate, model::rci_separate(config).value)?,
    };
    emit(out, &format!("{}_simulation.json", stem(path)), &json(&report)?, stdout)?;
    Ok(exit::OK)
}

fn cmd_figures(out: &Path, stderr: &mut dyn Write) -> Result<u8, Failure> {
    for (name, text) in [("figure1", FIGURE1_SCENARIO), ("figure2", FIGURE2_SCENARIO)] {
        let scenario = Scenario::parse(text).map_err(|e| Failure::config(format!("bundled {name}: {e}")))?;
        let (csv, chart) = sweep_outputs(&scenario)?;
        for (file, body) in [(format!("{name}.csv"), csv), (format!("{name}.svg"), chart.to_svg())] {
            let written = write_file(out, &file, &body)?;
            let _ = writeln!(stderr, "wrote {}", written.display());
        }
    }
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, out, err) = run_capture(&["ctxcalc", "frobnicate"]);
        assert_eq!(code, exit::CONFIG);
        assert!(out.is_empty());
        assert!(!err.is_empty());
        let (code, out, _) = run_capture(&["ctxcalc", "--help"]);
        assert_eq!(code, exit::OK);
        assert!(out.contains("figures"));
    }

    #[test]
    fn missing_scenario_is_config_error() {
        let (code, _, err) = run_capture(&["ctxcalc", "eval", "/nonexistent/scenario.toml"]);
        assert_eq!(code, exit::CONFIG);
        assert!(err.contains("/nonexistent/scenario.toml"));
    }

    #[test]
    fn bundled_figures_parse() {
        for text in [FIGURE1_SCENARIO, FIGURE2_SCENARIO] {
            let s = Scenario::parse(text).unwrap();
            assert!(s.sweep.unwrap().chart);
        }
    }
}
