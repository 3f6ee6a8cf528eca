use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use phasefn_cli::bench::{self, Family, Timing};
use phasefn_cli::{decay, qspec, verify, Config};

#[derive(Parser)]
#[command(name = "phasefn", version, about = "Phase-function benchmarks and verification suites")]
struct Cli {
    /// JSON file with any of {tol, max_order, filter_margin, seed}.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Accuracy and timing of phase evaluation against the recurrence.
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_N_LIST)]
        n_list: Vec<u64>,
        #[arg(long, default_value_t = bench::DEFAULT_POINTS)]
        points: usize,
        /// Defaults to the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leading Chebyshev coefficients of q and of the log-phase r.
    ExportDecay {
        #[arg(long, default_value_t = 1000.0)]
        lambda: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Checks of the band-limited fixed point and the operator T.
    FourierVerify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perturbation-bound checks.
    BackwardsVerify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase function for a coefficient read from JSON.
    Phase {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        qfile: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
    },
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Bench {
            family,
            n_list,
            points,
            seed,
            out,
        } => {
            let seed = seed.unwrap_or(config.seed);
            let reports = bench::run_table(family, &n_list, points, seed, Timing::default())?;
            bench::write_reports(sink(&out)?, &reports)?;
            Ok(reports.iter().all(|r| r.max_abs_error <= bench::ACCURACY_TARGET))
        }
        Command::ExportDecay { lambda, out } => {
            let summary = decay::export_decay(lambda, &config.newton_options(), &out)?;
            eprintln!(
                "slope q {:.4}, slope r {:.4}, newton iterations {}",
                summary.slope_q, summary.slope_r, summary.newton_iters
            );
            Ok(summary.passes())
        }
        Command::FourierVerify { out } => {
            let rows = verify::fourier_checks(config.seed)?;
            verify::write_rows(sink(&out)?, &rows)?;
            Ok(rows.iter().all(|r| r.pass))
        }
        Command::BackwardsVerify { out } => {
            let rows = verify::backward_checks()?;
            verify::write_rows(sink(&out)?, &rows)?;
            Ok(rows.iter().all(|r| r.ok))
        }
        Command::Phase {
            lambda,
            qfile,
            out,
            samples,
        } => {
            let spec = qspec::QSpec::load(&qfile)?;
            let run = qspec::build(&spec, lambda, &config.newton_options())?;
            eprintln!(
                "newton iterations {}, normalized residual {:e}",
                run.log_phase.newton_iters,
                run.log_phase.normalized_residual(lambda)
            );
            verify::write_rows(sink(&out)?, &qspec::rows(&run, samples))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
