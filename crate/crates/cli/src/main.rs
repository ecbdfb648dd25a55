use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fitmetrics_cli::{default_metrics, render, run, CliError, InputFormat, MetricRequest, OutputFormat, RunConfig};

/// Goodness-of-fit metrics for multi-class classifiers.
#[derive(Parser, Debug)]
#[command(name = "fitmetrics", version, about)]
struct Args {
    /// Input file.
    #[arg(short, long)]
    input: PathBuf,

    /// Input format.
    #[arg(short, long, value_enum, default_value = "matrix_csv")]
    format: InputFormat,

    /// Metric to compute, `name[:outer=<avg>][:p=<float>]`. Repeatable.
    /// Defaults to generalized_mcc, generalized_f1 and cramers_phi.
    #[arg(short, long = "metric")]
    metrics: Vec<String>,

    /// Additive (Laplace) pseudo-count added to every cell first.
    #[arg(long, allow_negative_numbers = true)]
    smooth: Option<f64>,

    /// Report format.
    #[arg(short, long, value_enum, default_value = "text")]
    output: OutputFormat,
}

fn execute(args: Args) -> Result<String, CliError> {
    let metrics = if args.metrics.is_empty() {
        default_metrics()
    } else {
        args.metrics.iter().map(|m| m.parse::<MetricRequest>()).collect::<Result<_, _>>()?
    };
    let config = RunConfig {
        input_path: args.input,
        input_format: args.format,
        metrics,
        output_format: args.output,
    }
    .with_smoothing(args.smooth)?;
    let report = run(&config)?;
    Ok(render(&report, config.output_format))
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
