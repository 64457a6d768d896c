use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use odc::dynamics::WeightMode;
use odc::experiment::{
    delta_sweep, emit_report, run_experiment, sweep_summary, ExperimentReport, ExperimentSpec,
    GraphSource, ReportFormat,
};
use odc::Result;

/// Community detection through opinion dynamics with a decaying confidence
/// bound: Monte-Carlo experiments over a graph, aggregated per partition.
#[derive(Parser)]
#[command(name = "odc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One experiment at a single spectral threshold.
    Run(RunArgs),
    /// One experiment per threshold, sharing the master seed.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Edge-list file to analyze (one "a b" pair per line, # comments).
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,

    /// Named benchmark: karate (bundled); books or blogs (validated
    /// against their published sizes, need --graph for the data).
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,

    /// Confidence radius R.
    #[arg(long = "R", default_value_t = 1.0, value_name = "F")]
    r: f64,

    /// Averaging gain alpha in (0, 1/2); the bound decays at 1 - alpha*delta.
    #[arg(long, default_value_t = 0.1, value_name = "F")]
    alpha: f64,

    /// Number of random initial-opinion vectors.
    #[arg(long, default_value_t = 100, value_name = "N")]
    runs: usize,

    /// Master RNG seed; per-run seeds are derived from it.
    #[arg(long, default_value_t = 0, value_name = "N")]
    seed: u64,

    /// degree-average or metropolis.
    #[arg(long, default_value = "degree-average", value_name = "MODE", value_parser = parse_weight_mode)]
    weight_mode: WeightMode,

    /// Random-walk horizons; adds a stability curve to every partition row.
    #[arg(long, value_name = "F,F,...", value_delimiter = ',')]
    stability_times: Option<Vec<f64>>,

    /// json (full report), csv (one row per partition), dot (modal partition).
    #[arg(long, default_value = "json", value_name = "FMT", value_parser = parse_format)]
    format: ReportFormat,

    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Spectral threshold delta in (0, 1].
    #[arg(long, value_name = "F")]
    delta: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Comma-separated spectral thresholds.
    #[arg(long, value_name = "F,F,...", value_delimiter = ',', required = true)]
    deltas: Vec<f64>,
}

fn parse_weight_mode(s: &str) -> std::result::Result<WeightMode, String> {
    s.parse().map_err(|e: odc::Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse().map_err(|e: odc::Error| e.to_string())
}

impl CommonArgs {
    fn source(&self) -> Result<GraphSource> {
        match (&self.fixture, &self.graph) {
            (Some(name), Some(path)) => Ok(GraphSource::Named {
                name: name.clone(),
                path: path.clone(),
            }),
            (Some(name), None) => Ok(GraphSource::Builtin(name.clone())),
            (None, Some(path)) => Ok(GraphSource::File(path.clone())),
            (None, None) => Err(odc::Error::InvalidArgument(
                "pass --fixture NAME or --graph PATH".into(),
            )),
        }
    }

    fn spec(&self, delta: f64) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::new(self.source()?, delta)?
            .with_r(self.r)
            .with_alpha(self.alpha)
            .with_runs(self.runs)?
            .with_seed(self.seed)
            .with_weight_mode(self.weight_mode);
        if let Some(times) = &self.stability_times {
            spec = spec.with_stability_times(times.clone());
        }
        Ok(spec)
    }

    fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().write_all(bytes)?,
        }
        Ok(())
    }
}

fn emit_sweep(reports: &[ExperimentReport], format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => {
            #[derive(serde::Serialize)]
            struct SweepDoc<'a> {
                schema_version: u32,
                reports: &'a [ExperimentReport],
            }
            let mut bytes = serde_json::to_vec_pretty(&SweepDoc {
                schema_version: 1,
                reports,
            })?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        ReportFormat::Csv => {
            let mut out = Vec::new();
            for (i, report) in reports.iter().enumerate() {
                let block = emit_report(report, format)?;
                if i == 0 {
                    out.extend_from_slice(&block);
                } else {
                    // one shared header line
                    let body = block.splitn(2, |&b| b == b'\n').nth(1).unwrap_or(&[]);
                    out.extend_from_slice(body);
                }
            }
            Ok(out)
        }
        ReportFormat::Dot => {
            let mut out = Vec::new();
            for report in reports {
                out.extend_from_slice(&emit_report(report, format)?);
            }
            Ok(out)
        }
    }
}

fn real_main(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.common.spec(args.delta)?;
            let report = run_experiment(&spec)?;
            eprint!("{}", sweep_summary(std::slice::from_ref(&report)));
            args.common.write(&emit_report(&report, args.common.format)?)
        }
        Command::Sweep(args) => {
            let spec = args.common.spec(args.deltas[0])?;
            let reports = delta_sweep(&spec, &args.deltas)?;
            eprint!("{}", sweep_summary(&reports));
            args.common.write(&emit_sweep(&reports, args.common.format)?)
        }
    }
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
