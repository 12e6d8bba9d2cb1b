//! `sparsepath` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 on solver or
//! certificate failures.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sparsepath::boost::BoostConfig;
use sparsepath::csvio::{fmt_f64, read_matrix_file, read_vector_file, write_path, write_records};
use sparsepath::dantzig::{lambda_grid, DantzigConfig};
use sparsepath::evaluation::{cv_curve, dd_from_cv, method_path, ZERO_TOL};
use sparsepath::experiments::{
    figure1_scan, linspace, run_setup, theorem1_suite, write_figure1, write_report,
    ExperimentConfig, DEFAULT_SEED,
};
use sparsepath::{DenseMatrix, Method, RegressionProblem, SetupLabel, SimSetup};

/// Largest Lasso/Dantzig path gap accepted by `check-theorem1`.
const THEOREM1_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "sparsepath", version, about = "Lasso, Dantzig selector and L2Boosting regularization paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute one method's regularization path.
    Path {
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Design matrix CSV, n rows by p columns.
        #[arg(long)]
        design: PathBuf,
        /// Response CSV, one column.
        #[arg(long)]
        response: PathBuf,
        /// Number of Dantzig grid points.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Boosting step as a fraction of max |X'y|.
        #[arg(long, default_value_t = 1e-3)]
        boost_step: f64,
        /// Input CSVs have no header row.
        #[arg(long)]
        no_header: bool,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the replicate study for one simulation setup.
    Simulate {
        #[arg(long, value_enum)]
        setup: SetupArg,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1e-3)]
        boost_step: f64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan the three-predictor design over a range of correlations.
    Figure1 {
        #[arg(long, default_value_t = 0.35)]
        rmin: f64,
        #[arg(long, default_value_t = 0.70)]
        rmax: f64,
        #[arg(long, default_value_t = 36)]
        rsteps: usize,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Lasso and Dantzig paths on diagonally dominant designs.
    CheckTheorem1 {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        p: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Data-driven Dantzig selector with fivefold cross-validation.
    DdSelect {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        response: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long)]
        no_header: bool,
        /// Coefficient CSV; printed to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Lasso,
    Dantzig,
    Boost,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Lasso => Method::Lasso,
            MethodArg::Dantzig => Method::Dantzig,
            MethodArg::Boost => Method::Boost,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetupArg {
    A,
    B,
    C,
}

impl From<SetupArg> for SetupLabel {
    fn from(s: SetupArg) -> Self {
        match s {
            SetupArg::A => SetupLabel::A,
            SetupArg::B => SetupLabel::B,
            SetupArg::C => SetupLabel::C,
        }
    }
}

/// A check that ran to completion but did not hold.
#[derive(Debug)]
struct CheckFailed(String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        return 2;
    }
    match err.downcast_ref::<sparsepath::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Loads a problem, rescaling columns to unit norm when they are not already.
/// Returns the factors that map coefficients back to the input scale.
fn load_problem(design: &Path, response: &Path, no_header: bool) -> Result<(RegressionProblem, Vec<f64>)> {
    let x: DenseMatrix = read_matrix_file(design, !no_header)
        .with_context(|| format!("cannot read design {}", design.display()))?;
    let y = read_vector_file(response, !no_header)
        .with_context(|| format!("cannot read response {}", response.display()))?;
    if let Ok(prob) = RegressionProblem::new(x.clone(), y.clone()) {
        let p = prob.p();
        return Ok((prob, vec![1.0; p]));
    }
    Ok(RegressionProblem::from_raw(x, y)?)
}

fn dantzig_cfg(grid: usize) -> DantzigConfig {
    DantzigConfig {
        grid_size: grid,
        ..Default::default()
    }
}

fn boost_cfg(step: f64) -> BoostConfig {
    BoostConfig {
        step_eps: step,
        ..Default::default()
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Path { method, design, response, grid, boost_step, no_header, out } => {
            let (prob, scales) = load_problem(&design, &response, no_header)?;
            let lambdas = lambda_grid(prob.lambda_max(), &dantzig_cfg(grid))?;
            let mut path = method_path(&prob, method.into(), &lambdas, &boost_cfg(boost_step))?;
            for s in &mut path.samples {
                for (b, sc) in s.beta.iter_mut().zip(&scales) {
                    *b /= sc;
                }
            }
            write_path(output(out.as_deref())?, &path)?;
        }
        Command::Simulate { setup, reps, seed, grid, boost_step, out } => {
            let setup = SimSetup::from_label(setup.into());
            let cfg = ExperimentConfig {
                reps,
                master_seed: seed,
                dantzig: dantzig_cfg(grid),
                boost: boost_cfg(boost_step),
                ..Default::default()
            };
            let report = run_setup(&setup, &cfg)?;
            write_report(&report, &out)
                .with_context(|| format!("cannot write report to {}", out.display()))?;
            let t = &report.certificates;
            if let Some(f) = &t.first_failure {
                return Err(CheckFailed(format!(
                    "certificate failure in replicate {} ({}) at lambda {}; {} lasso, {} dantzig, {} domination failures",
                    f.replicate, f.method, f.lambda, t.lasso_failed, t.dantzig_failed, t.domination_violations
                ))
                .into());
            }
        }
        Command::Figure1 { rmin, rmax, rsteps, grid, out } => {
            if rsteps == 0 {
                anyhow::bail!("--rsteps must be at least 1");
            }
            let rows = figure1_scan(&linspace(rmin, rmax, rsteps), &dantzig_cfg(grid))?;
            write_figure1(output(out.as_deref())?, &rows)?;
        }
        Command::CheckTheorem1 { n, p, trials, seed } => {
            let s = theorem1_suite(n, p, trials, seed)?;
            println!("attempts,dominance_hits,max_path_discrepancy");
            println!("{},{},{}", s.attempts, s.dominance_hits, fmt_f64(s.max_path_discrepancy));
            if s.max_path_discrepancy > THEOREM1_TOL {
                return Err(CheckFailed(format!(
                    "path discrepancy {:e} exceeds {THEOREM1_TOL:e}",
                    s.max_path_discrepancy
                ))
                .into());
            }
        }
        Command::DdSelect { design, response, seed, grid, no_header, out } => {
            let (prob, scales) = load_problem(&design, &response, no_header)?;
            let lambdas = lambda_grid(prob.lambda_max(), &dantzig_cfg(grid))?;
            let cv = cv_curve(&prob, Method::Dantzig, &lambdas, 5, seed, &BoostConfig::default())?;
            let dd = dd_from_cv(&prob, &cv)?;
            let beta: Vec<f64> = dd.beta.iter().zip(&scales).map(|(b, s)| b / s).collect();
            let selected = dd.beta.iter().filter(|b| b.abs() > ZERO_TOL).count();
            let summary = format!(
                "lambda_dd={} sigma_hat_cv={} lambda_cv={} selected={selected}",
                fmt_f64(dd.lambda_dd),
                fmt_f64(dd.sigma_hat_cv),
                fmt_f64(cv.lambda_cv)
            );
            // keep standard output pure CSV when the coefficients go there
            if out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            let rows: Vec<Vec<String>> = beta
                .iter()
                .enumerate()
                .map(|(j, b)| vec![(j + 1).to_string(), fmt_f64(*b)])
                .collect();
            write_records(output(out.as_deref())?, &["index", "beta"], &rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
