//! Command-line front end; all logic lives in `asymcap::cli`.

use std::path::PathBuf;
use std::process::ExitCode;

use asymcap::cli::{self, Command, Format, JobSpec, OutputSpec, Params};
use clap::Parser;

/// Symmetry-restricted capacities: decompose, classify and simulate.
///
/// One source produces one report; several sources (or `--catalog all`)
/// produce a sweep with one row per source.
#[derive(Debug, Parser)]
#[command(name = "asymcap", version)]
struct Args {
    /// Representation file (repeatable).
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Builtin catalog id such as `q8/u_tensor_I`, or `all` (repeatable).
    #[arg(long)]
    catalog: Vec<String>,
    #[arg(long, value_enum)]
    command: Command,
    /// Density-matrix file for `capacity` / `simulate`.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Blocklength for `simulate`.
    #[arg(long)]
    n: Option<usize>,
    /// Rate in bits per copy for `simulate`.
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = cli::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = asymcap::decompose::DEFAULT_DECOMP_TOL)]
    tol: f64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let params = Params {
        state: args.state.clone(),
        n: args.n,
        rate: args.rate,
        trials: args.trials,
        seed: Some(args.seed),
        tol: Some(args.tol),
        ..Params::default()
    };
    let sources: Vec<String> = args
        .input
        .iter()
        .map(|p| p.display().to_string())
        .chain(cli::expand_catalog_ids(&args.catalog).into_iter().map(|id| format!("catalog:{id}")))
        .collect();
    let jobs: Vec<JobSpec> = sources
        .into_iter()
        .map(|source| JobSpec {
            source,
            command: args.command,
            params: params.clone(),
            output: OutputSpec { path: None, format: args.format },
        })
        .collect();

    let single = jobs.len() == 1 && !args.catalog.iter().any(|c| c == "all");
    let (code, text) = if single {
        let out = cli::run(&jobs[0]);
        (out.exit_code, out.rendered)
    } else {
        let out = cli::sweep(args.command, &jobs);
        let text = match args.format {
            Format::Csv => out.csv,
            Format::Json => serde_json::to_string_pretty(&out.reports).expect("reports serialize") + "\n",
        };
        (out.exit_code, text)
    };

    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("asymcap: {}: {e}", path.display());
                return ExitCode::from(cli::EXIT_IO as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
