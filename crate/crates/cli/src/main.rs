use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use charcycle_core::nearby::Mode;
use charcycle_core::report::{catalog_suite, run, Report, RunConfig};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "charcycle",
    version,
    about = "Characteristic cycles of nearby and vanishing cycles"
)]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute and cross-check the cycle of one polynomial.
    Analyze {
        #[arg(long)]
        poly: String,
        /// Comma-separated variable names.
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        #[arg(long)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random hyperplane sections for the sectional Milnor number.
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Comma-separated decreasing parameters, e.g. `0.1,1/100,1e-3`.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<String>>,
        /// Comma-separated integer coefficients of the test covector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        form: Option<Vec<i64>>,
        #[arg(long)]
        radius_scale: Option<f64>,
        #[arg(long)]
        residual_tol: Option<f64>,
        #[arg(long)]
        clustering_tol: Option<f64>,
        #[arg(long)]
        hessian_tol: Option<f64>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the built-in catalog.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn emit(report: &Report, json: Option<&PathBuf>) -> anyhow::Result<()> {
    if let Some(path) = json {
        std::fs::write(path, report.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{}", report.render_text());
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for disagreements
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let (report, json) = match cli.command {
        Command::Analyze {
            poly,
            vars,
            mode,
            seed,
            trials,
            schedule,
            form,
            radius_scale,
            residual_tol,
            clustering_tol,
            hessian_tol,
            json,
        } => {
            let mut config = RunConfig::new(poly, vars, mode);
            config.seed = seed;
            config.trials = trials;
            config.schedule = schedule;
            config.test_form = form;
            if let Some(r) = radius_scale {
                config.radius_scale = r;
            }
            if let Some(t) = residual_tol {
                config.tolerances.residual = t;
            }
            if let Some(t) = clustering_tol {
                config.tolerances.clustering = t;
            }
            if let Some(t) = hessian_tol {
                config.tolerances.hessian = t;
            }
            (run(&config), json)
        }
        Command::Suite { seed, json } => (catalog_suite(seed), json),
    };
    if let Err(e) = emit(&report, json.as_ref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.exit_code() as u8)
}
