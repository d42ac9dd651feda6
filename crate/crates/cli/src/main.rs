//! `nhflip`: run coupling-flip experiments and write CSV, SVG and verdicts.

mod error;
mod export;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nhflip::config_file::parse_experiment;
use nhflip::experiment::{run_experiment, ExperimentOptions, ExperimentSpec, SweepParameter};
use rayon::prelude::*;

use crate::error::{CliError, CliResult, EXIT_OK};

#[derive(Parser)]
#[command(name = "nhflip", version, about = "Time reversal of decay into a lattice continuum by a coupling flip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset (fig2, fig3a, fig3b, fig4) or a configuration file.
    Run(RunArgs),
    /// Run one experiment per value of a parameter.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Source {
    /// Preset name.
    #[arg(conflicts_with = "config")]
    preset: Option<String>,
    /// TOML experiment file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Output directory [default: out/<name>].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the final time.
    #[arg(long)]
    tmax: Option<f64>,
    /// Add real and imaginary parts of the amplitudes to the trajectory CSVs.
    #[arg(long)]
    amplitudes: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    /// T, detuning_scale or coupling_scale.
    #[arg(long)]
    param: String,
    /// Comma-separated values; may be empty.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Parallel runs [default: available cores].
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory [default: out/sweep-<name>-<param>].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn load(source: &Source) -> CliResult<ExperimentSpec> {
    match (&source.preset, &source.config) {
        (Some(name), None) => {
            ExperimentSpec::preset(name).ok_or_else(|| CliError::UnknownPreset(name.clone()))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(parse_experiment(&text)?)
        }
        _ => Err(CliError::Usage(
            "give either a preset name or --config FILE".into(),
        )),
    }
}

fn run(args: &RunArgs) -> CliResult<()> {
    let mut spec = load(&args.source)?;
    if let Some(dt) = args.dt {
        spec.dt = dt;
    }
    if let Some(t) = args.tmax {
        spec.t_max = t;
    }
    let opts = ExperimentOptions::default();
    let result = run_experiment(&spec, &opts)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| Path::new("out").join(&spec.name));
    export::write_run(&dir, &result, &opts, args.amplitudes)?;
    print!("{}", export::verdict_text(&result));
    println!("output: {}", dir.display());
    Ok(())
}

fn parse_values(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|e| {
                CliError::Core(nhflip::Error::Parse {
                    field: "values".into(),
                    message: format!("`{s}`: {e}"),
                })
            })
        })
        .collect()
}

struct Row {
    value: f64,
    metric: &'static str,
    outcome: CliResult<f64>,
}

fn sweep(args: &SweepArgs) -> CliResult<()> {
    let base = load(&args.source)?;
    let param: SweepParameter = args.param.parse()?;
    let values = parse_values(&args.values)?;
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| Path::new("out").join(format!("sweep-{}-{}", base.name, args.param)));
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let opts = ExperimentOptions::default();

    let run_row = |(i, value): (usize, f64)| -> Row {
        let metric = if base.schedule.is_periodic() {
            "frozen_deviation"
        } else {
            "F_at_2T"
        };
        let outcome = (|| {
            let spec = base.with_parameter(param, value)?;
            let result = run_experiment(&spec, &opts)?;
            export::write_run(&dir.join(format!("row_{i:03}")), &result, &opts, false)?;
            Ok(match result.verdict.echo_full {
                Some(e) if metric == "F_at_2T" => e.f_at_2t,
                _ => result.verdict.frozen_deviation,
            })
        })();
        Row {
            value,
            metric,
            outcome,
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = args.workers {
        builder = builder.num_threads(k.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<Row> = pool.install(|| values.into_par_iter().enumerate().map(run_row).collect());

    let path = dir.join("sweep.csv");
    let io = |e: csv::Error| CliError::io(&path, e.into());
    let mut w = csv::Writer::from_path(&path).map_err(io)?;
    w.write_record(["row", "value", "metric", "result", "error"]).map_err(io)?;
    println!("{:>4} {:>14} {:>18} {:>24}", "row", args.param, "metric", "result");
    let mut first_error = None;
    for (i, row) in rows.into_iter().enumerate() {
        let (result, err) = match row.outcome {
            Ok(v) => (format!("{v:.16e}"), String::new()),
            Err(e) => {
                let msg = e.to_string();
                first_error.get_or_insert(e);
                (String::new(), msg)
            }
        };
        println!("{i:>4} {:>14} {:>18} {:>24}", row.value, row.metric, if err.is_empty() { &result } else { &err });
        w.write_record([
            format!("{i}"),
            format!("{:.16e}", row.value),
            row.metric.to_string(),
            result,
            err,
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    first_error.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
    };
    match outcome {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
