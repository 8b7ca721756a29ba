use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thirdopt_cli::{bench, cmd_check, cmd_run, parse_point, CheckSpec, RunSpec, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};

#[derive(Parser)]
#[command(name = "thirdopt", version, about = "Third-order local minimization of polynomial objectives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize from a starting point and write a JSONL trace.
    Run {
        /// Corpus name or path to a polynomial JSON file.
        #[arg(long)]
        problem: String,
        /// Starting point `v1,...,vn`.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Hessian Lipschitz constant (default: bound over the problem's ball).
        #[arg(long = "R")]
        r: Option<f64>,
        /// Third-derivative Lipschitz constant (default: bound over the problem's ball).
        #[arg(long = "L")]
        l: Option<f64>,
        /// Sampler approximation knob.
        #[arg(long = "B")]
        b: Option<f64>,
        /// Radius of the ball used for the default `R` and `L`.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol_mu: f64,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Evaluate the third-order necessary conditions at a point.
    Check {
        #[arg(long)]
        problem: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Tolerance for the Hessian eigenvalue and null-space tests.
        #[arg(long)]
        tol_eig: Option<f64>,
        /// Tolerance on the projected third derivative.
        #[arg(long)]
        tol_third: Option<f64>,
    },
    /// Run a bench suite and write a CSV summary.
    Bench {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn execute(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Run { problem, x0, r, l, b, radius, max_iters, seed, tol_mu, trace } => {
            let spec = RunSpec { r, l, b, radius, max_iters, seed, tol_mu, ..RunSpec::new(&problem, parse_point(&x0)?, trace) };
            let (trace, code) = cmd_run(&spec)?;
            eprintln!(
                "{:?} after {} records, f = {}, x = {:?}",
                trace.status,
                trace.records.len(),
                trace.final_value(),
                trace.final_x.as_slice()
            );
            Ok(code)
        }
        Command::Check { problem, point, tol_eig, tol_third } => {
            let spec = CheckSpec { problem, point: parse_point(&point)?, tol_eig, tol_third };
            let (report, code) = cmd_check(&spec)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(code)
        }
        Command::Bench { suite, out, seed } => {
            let rows = bench::run_suite(&suite, seed)?;
            let file = std::fs::File::create(&out)?;
            bench::write_csv(&rows, file)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            eprintln!("{suite}: {} rows, {failed} failed", rows.len());
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let code = match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code as u8)
}
