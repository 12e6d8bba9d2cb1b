//! The replicate study on setups (a)/(b)/(c), the three-predictor geometry
//! scan and the path-equality suite on diagonally dominant designs.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::boost::{boost_eval_clamped, boost_path, BoostConfig};
use crate::csvio::{fmt_f64, write_path, write_records};
use crate::dantzig::{
    dantzig_selector_lambda, fits_to_path, lambda_grid, DantzigConfig, DantzigSolver,
};
use crate::datagen::{figure1_problem, sample_problem, GaussianStream, RegressionProblem, SimSetup};
use crate::error::{Error, Result};
use crate::evaluation::{
    best_true_positives, betas_on_grid, cv_curve, dd_from_cv, mse_beta, mse_fit,
    random_selection_tp, selection_counts, stable_mean, support_tol,
};
use crate::lasso::{kkt_certify, lars_lasso_path};
use crate::numerics::{diag_dominant, inverse_spd, norm1, DenseMatrix, DenseVector};
use crate::path::{eval_path, Method, RegularizationPath};

/// Slack allowed in `‖β_dantzig(λ)‖₁ ≤ ‖β_lasso(λ)‖₁`.
pub const DOMINATION_TOL: f64 = 1e-8;
/// Default master seed for every seeded study.
pub const DEFAULT_SEED: u64 = 2007;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub reps: usize,
    pub master_seed: u64,
    pub folds: usize,
    /// Largest false-positive count on the selection curve.
    pub max_fp: usize,
    pub dantzig: DantzigConfig,
    pub boost: BoostConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            reps: 50,
            master_seed: DEFAULT_SEED,
            folds: 5,
            max_fp: 50,
            dantzig: DantzigConfig::default(),
            boost: BoostConfig::default(),
        }
    }
}

/// Where a certificate or the domination check first failed.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateFailure {
    pub replicate: usize,
    pub method: Method,
    pub lambda: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CertificateTally {
    pub lasso_knots: usize,
    pub lasso_failed: usize,
    pub dantzig_points: usize,
    pub dantzig_failed: usize,
    pub domination_checks: usize,
    pub domination_violations: usize,
    /// Largest `‖β_dantzig‖₁ − ‖β_lasso‖₁` seen.
    pub max_domination_excess: f64,
    pub first_failure: Option<CertificateFailure>,
}

impl CertificateTally {
    pub fn all_passed(&self) -> bool {
        self.lasso_failed == 0 && self.dantzig_failed == 0 && self.domination_violations == 0
    }

    fn merge(&mut self, other: &CertificateTally) {
        self.lasso_knots += other.lasso_knots;
        self.lasso_failed += other.lasso_failed;
        self.dantzig_points += other.dantzig_points;
        self.dantzig_failed += other.dantzig_failed;
        self.domination_checks += other.domination_checks;
        self.domination_violations += other.domination_violations;
        self.max_domination_excess = self.max_domination_excess.max(other.max_domination_excess);
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure.clone();
        }
    }
}

/// Replicate means for one method at the CV and DD choices of λ.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub lambda_cv: f64,
    pub lambda_dd: f64,
    pub mse_beta_cv: f64,
    pub mse_beta_dd: f64,
    pub mse_fit_cv: f64,
    pub mse_fit_dd: f64,
    pub selected_cv: f64,
    pub selected_dd: f64,
    pub true_pos_cv: f64,
    pub true_pos_dd: f64,
    /// Smallest mean `mse_beta` over the grid and the λ attaining it.
    pub min_mse_beta: f64,
    pub argmin_lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub setup: SimSetup,
    pub config: ExperimentConfig,
    pub lambdas: Vec<f64>,
    /// Mean `mse_beta` per method (in [`Method::ALL`] order) per grid λ.
    pub mse_beta: Vec<Vec<f64>>,
    pub mse_fit: Vec<Vec<f64>>,
    pub summaries: Vec<MethodSummary>,
    /// Rows of `(fp, mean tp per method, random-selection tp)`.
    pub selection: Vec<(f64, Vec<f64>, f64)>,
    /// Selector threshold at the setup's true σ.
    pub lambda_reference: f64,
    pub certificates: CertificateTally,
    /// Paths of replicate 0 in [`Method::ALL`] order.
    pub sample_paths: Vec<RegularizationPath>,
}

impl ExperimentReport {
    pub fn summary(&self, method: Method) -> &MethodSummary {
        &self.summaries[method_index(method)]
    }
}

fn method_index(m: Method) -> usize {
    Method::ALL.iter().position(|x| *x == m).expect("listed method")
}

/// Per-method metrics of one replicate.
#[derive(Debug, Clone)]
struct MethodOutcome {
    mse_beta: Vec<f64>,
    mse_fit: Vec<f64>,
    lambda_cv: f64,
    mse_beta_cv: f64,
    mse_beta_dd: f64,
    mse_fit_cv: f64,
    mse_fit_dd: f64,
    selected_cv: usize,
    selected_dd: usize,
    true_pos_cv: usize,
    true_pos_dd: usize,
    best_tp: Vec<usize>,
}

struct ReplicateOutcome {
    methods: Vec<MethodOutcome>,
    lambda_dd: f64,
    tally: CertificateTally,
    paths: Vec<RegularizationPath>,
}

fn run_replicate(
    index: usize,
    prob: &RegressionProblem,
    grid: &[f64],
    cfg: &ExperimentConfig,
) -> Result<ReplicateOutcome> {
    let truth = prob
        .beta_star
        .clone()
        .ok_or_else(|| Error::InvalidConfig("simulated problem without truth".into()))?;
    let seed = cfg.master_seed.wrapping_add(index as u64);
    let mut tally = CertificateTally::default();
    let fail = |tally: &mut CertificateTally, method, lambda| {
        if tally.first_failure.is_none() {
            tally.first_failure = Some(CertificateFailure { replicate: index, method, lambda });
        }
    };

    let lasso = lars_lasso_path(prob)?;
    for s in &lasso.samples {
        tally.lasso_knots += 1;
        if !kkt_certify(prob, &s.beta, s.lambda) {
            tally.lasso_failed += 1;
            fail(&mut tally, Method::Lasso, s.lambda);
        }
    }
    let fits = DantzigSolver::new(prob)?.sweep(grid, true)?;
    for f in &fits {
        tally.dantzig_points += 1;
        if !f.certified {
            tally.dantzig_failed += 1;
            fail(&mut tally, Method::Dantzig, f.lambda);
        }
    }
    let dantzig = fits_to_path(&fits);
    let boost = boost_path(prob, &cfg.boost)?;
    let paths = vec![lasso, dantzig, boost];
    let grids: Vec<Vec<DenseVector>> = paths
        .iter()
        .map(|p| betas_on_grid(p, grid))
        .collect::<Result<_>>()?;

    for (k, &lam) in grid.iter().enumerate() {
        let excess = norm1(&grids[1][k]) - norm1(&grids[0][k]);
        tally.domination_checks += 1;
        tally.max_domination_excess = tally.max_domination_excess.max(excess);
        if excess > DOMINATION_TOL {
            tally.domination_violations += 1;
            fail(&mut tally, Method::Dantzig, lam);
        }
    }

    let cvs = Method::ALL
        .iter()
        .map(|&m| cv_curve(prob, m, grid, cfg.folds, seed, &cfg.boost))
        .collect::<Result<Vec<_>>>()?;
    let dd = dd_from_cv(prob, &cvs[1])?;
    let lambda_dd = dd.lambda_dd;
    let at_dd = [
        match eval_path(&paths[0], lambda_dd) {
            Err(Error::OutOfRange { .. }) => paths[0].terminal_beta().to_vec(),
            other => other?,
        },
        dd.beta,
        boost_eval_clamped(&paths[2], lambda_dd)?,
    ];

    let mut methods = Vec::with_capacity(3);
    for ((path, betas), (cv, beta_dd)) in paths.iter().zip(&grids).zip(cvs.iter().zip(at_dd)) {
        let tol = support_tol(path);
        let k_cv = grid
            .iter()
            .position(|l| *l == cv.lambda_cv)
            .expect("lambda_cv is a grid point");
        let beta_cv = &betas[k_cv];
        let (c_cv, c_dd) = (
            selection_counts(beta_cv, &truth, tol),
            selection_counts(&beta_dd, &truth, tol),
        );
        methods.push(MethodOutcome {
            mse_beta: betas.iter().map(|b| mse_beta(b, &truth)).collect(),
            mse_fit: betas
                .iter()
                .map(|b| mse_fit(&prob.x, b, &truth))
                .collect::<Result<_>>()?,
            lambda_cv: cv.lambda_cv,
            mse_beta_cv: mse_beta(beta_cv, &truth),
            mse_beta_dd: mse_beta(&beta_dd, &truth),
            mse_fit_cv: mse_fit(&prob.x, beta_cv, &truth)?,
            mse_fit_dd: mse_fit(&prob.x, &beta_dd, &truth)?,
            selected_cv: c_cv.selected(),
            selected_dd: c_dd.selected(),
            true_pos_cv: c_cv.true_positives,
            true_pos_dd: c_dd.true_positives,
            best_tp: best_true_positives(path, &truth, cfg.max_fp),
        });
    }
    Ok(ReplicateOutcome {
        methods,
        lambda_dd,
        tally,
        paths,
    })
}

/// Shared decreasing λ grid reaching from the largest λ_max among `probs`.
pub fn shared_grid(probs: &[RegressionProblem], cfg: &DantzigConfig) -> Result<Vec<f64>> {
    let top = probs.iter().map(|p| p.lambda_max()).fold(0.0, f64::max);
    lambda_grid(top, cfg)
}

/// Runs the replicate study for one setup. Replicate `i` uses seed
/// `master_seed + i`; replicates run in parallel and are aggregated in index
/// order, so the report depends only on the inputs.
pub fn run_setup(setup: &SimSetup, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.reps == 0 {
        return Err(Error::InvalidConfig("reps must be at least 1".into()));
    }
    cfg.dantzig.validate()?;
    cfg.boost.validate()?;
    let probs = (0..cfg.reps)
        .map(|i| sample_problem(setup, cfg.master_seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let grid = shared_grid(&probs, &cfg.dantzig)?;
    let outcomes = probs
        .par_iter()
        .enumerate()
        .map(|(i, prob)| {
            run_replicate(i, prob, &grid, cfg).map_err(|e| Error::Replicate {
                index: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(setup, cfg, grid, outcomes))
}

fn aggregate(
    setup: &SimSetup,
    cfg: &ExperimentConfig,
    lambdas: Vec<f64>,
    mut outcomes: Vec<ReplicateOutcome>,
) -> ExperimentReport {
    let reps = outcomes.len();
    let mut tally = CertificateTally::default();
    for o in &outcomes {
        tally.merge(&o.tally);
    }
    let mean_of = |f: &dyn Fn(&ReplicateOutcome) -> f64| -> f64 {
        stable_mean(&outcomes.iter().map(f).collect::<Vec<_>>())
    };
    let lambda_dd = mean_of(&|o| o.lambda_dd);

    let mut mse_beta_rows = Vec::new();
    let mut mse_fit_rows = Vec::new();
    let mut summaries = Vec::new();
    for (mi, &method) in Method::ALL.iter().enumerate() {
        let per_lambda = |pick: &dyn Fn(&MethodOutcome) -> &Vec<f64>| -> Vec<f64> {
            (0..lambdas.len())
                .map(|k| mean_of(&|o| pick(&o.methods[mi])[k]))
                .collect()
        };
        let mb = per_lambda(&|m| &m.mse_beta);
        let mf = per_lambda(&|m| &m.mse_fit);
        let mut arg = 0;
        for k in 1..mb.len() {
            if mb[k] < mb[arg] {
                arg = k;
            }
        }
        summaries.push(MethodSummary {
            method,
            lambda_cv: mean_of(&|o| o.methods[mi].lambda_cv),
            lambda_dd,
            mse_beta_cv: mean_of(&|o| o.methods[mi].mse_beta_cv),
            mse_beta_dd: mean_of(&|o| o.methods[mi].mse_beta_dd),
            mse_fit_cv: mean_of(&|o| o.methods[mi].mse_fit_cv),
            mse_fit_dd: mean_of(&|o| o.methods[mi].mse_fit_dd),
            selected_cv: mean_of(&|o| o.methods[mi].selected_cv as f64),
            selected_dd: mean_of(&|o| o.methods[mi].selected_dd as f64),
            true_pos_cv: mean_of(&|o| o.methods[mi].true_pos_cv as f64),
            true_pos_dd: mean_of(&|o| o.methods[mi].true_pos_dd as f64),
            min_mse_beta: mb[arg],
            argmin_lambda: lambdas[arg],
        });
        mse_beta_rows.push(mb);
        mse_fit_rows.push(mf);
    }

    let truth = crate::datagen::sim_beta_star();
    let s = truth.iter().filter(|v| **v != 0.0).count();
    let selection = (0..=cfg.max_fp)
        .map(|fp| {
            let tps = (0..Method::ALL.len())
                .map(|mi| {
                    let total: usize = outcomes.iter().map(|o| o.methods[mi].best_tp[fp]).sum();
                    total as f64 / reps as f64
                })
                .collect();
            (fp as f64, tps, random_selection_tp(s, setup.p, fp as f64))
        })
        .collect();

    ExperimentReport {
        setup: *setup,
        config: *cfg,
        mse_beta: mse_beta_rows,
        mse_fit: mse_fit_rows,
        summaries,
        selection,
        lambda_reference: dantzig_selector_lambda(setup.sigma, setup.p),
        certificates: tally,
        sample_paths: std::mem::take(&mut outcomes[0].paths),
        lambdas,
    }
}

fn write_file(dir: &Path, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut buf = Vec::new();
    write_records(&mut buf, header, rows)?;
    fs::write(dir.join(name), buf)?;
    Ok(())
}

/// Writes the report as a directory of CSV files.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut header = vec!["lambda".to_string()];
    header.extend(Method::ALL.iter().map(|m| m.name().to_string()));
    for (name, table) in [("mse_beta.csv", &report.mse_beta), ("mse_fit.csv", &report.mse_fit)] {
        let rows: Vec<Vec<String>> = report
            .lambdas
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let mut row = vec![fmt_f64(*l)];
                row.extend(table.iter().map(|col| fmt_f64(col[k])));
                row
            })
            .collect();
        write_file(dir, name, &header, &rows)?;
    }

    let mut header = vec!["fp".to_string()];
    header.extend(Method::ALL.iter().map(|m| format!("mean_tp_{}", m.name())));
    header.push("tp_random".into());
    let rows: Vec<Vec<String>> = report
        .selection
        .iter()
        .map(|(fp, tps, rnd)| {
            let mut row = vec![fmt_f64(*fp)];
            row.extend(tps.iter().map(|v| fmt_f64(*v)));
            row.push(fmt_f64(*rnd));
            row
        })
        .collect();
    write_file(dir, "selection_curve.csv", &header, &rows)?;

    let header: Vec<String> = [
        "method",
        "lambda_cv",
        "lambda_dd",
        "mse_beta_cv",
        "mse_beta_dd",
        "mse_fit_cv",
        "mse_fit_dd",
        "selected_cv",
        "selected_dd",
        "true_pos_cv",
        "true_pos_dd",
        "min_mse_beta",
        "argmin_lambda",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let rows: Vec<Vec<String>> = report
        .summaries
        .iter()
        .map(|s| {
            let mut row = vec![s.method.name().to_string()];
            row.extend(
                [
                    s.lambda_cv,
                    s.lambda_dd,
                    s.mse_beta_cv,
                    s.mse_beta_dd,
                    s.mse_fit_cv,
                    s.mse_fit_dd,
                    s.selected_cv,
                    s.selected_dd,
                    s.true_pos_cv,
                    s.true_pos_dd,
                    s.min_mse_beta,
                    s.argmin_lambda,
                ]
                .iter()
                .map(|v| fmt_f64(*v)),
            );
            row
        })
        .collect();
    write_file(dir, "summary.csv", &header, &rows)?;

    let c = &report.config;
    let t = &report.certificates;
    let meta: Vec<(&str, String)> = vec![
        ("setup", report.setup.name().to_string()),
        ("rho", fmt_f64(report.setup.rho)),
        ("sigma", fmt_f64(report.setup.sigma)),
        ("n", report.setup.n.to_string()),
        ("p", report.setup.p.to_string()),
        ("reps", c.reps.to_string()),
        ("master_seed", c.master_seed.to_string()),
        ("folds", c.folds.to_string()),
        ("grid_size", report.lambdas.len().to_string()),
        ("grid_spacing", c.dantzig.grid_spacing.name().to_string()),
        ("lambda_min_factor", fmt_f64(c.dantzig.lambda_min_factor)),
        ("lambda_first", fmt_f64(report.lambdas[0])),
        ("boost_step_eps", fmt_f64(c.boost.step_eps)),
        ("boost_stop_tol", fmt_f64(c.boost.stop_tol)),
        ("boost_relative", c.boost.relative.to_string()),
        ("boost_max_iters", c.boost.max_iters.to_string()),
        ("boost_record_every", c.boost.record_every.to_string()),
        ("lambda_reference", fmt_f64(report.lambda_reference)),
        ("lasso_knots_checked", t.lasso_knots.to_string()),
        ("lasso_knots_failed", t.lasso_failed.to_string()),
        ("dantzig_points_checked", t.dantzig_points.to_string()),
        ("dantzig_points_failed", t.dantzig_failed.to_string()),
        ("domination_checks", t.domination_checks.to_string()),
        ("domination_violations", t.domination_violations.to_string()),
        ("max_domination_excess", fmt_f64(t.max_domination_excess)),
    ];
    let rows: Vec<Vec<String>> = meta.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect();
    write_file(dir, "meta.csv", &["key".to_string(), "value".to_string()], &rows)?;

    for path in &report.sample_paths {
        let mut buf = Vec::new();
        write_path(&mut buf, path)?;
        fs::write(dir.join(format!("path_rep0_{}.csv", path.method.name())), buf)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Row {
    pub r: f64,
    pub lambda: f64,
    pub beta3_lasso: f64,
    pub beta3_dantzig: f64,
    pub dantzig_degenerate: bool,
}

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Third coefficient of both paths on the three-predictor design, for each
/// `r` over a λ grid shared across `r` values.
pub fn figure1_scan(r_values: &[f64], cfg: &DantzigConfig) -> Result<Vec<Figure1Row>> {
    let probs = r_values
        .iter()
        .map(|&r| figure1_problem(r))
        .collect::<Result<Vec<_>>>()?;
    let grid = shared_grid(&probs, cfg)?;
    let mut rows = Vec::with_capacity(r_values.len() * grid.len());
    for (&r, prob) in r_values.iter().zip(&probs) {
        let lasso = betas_on_grid(&lars_lasso_path(prob)?, &grid)?;
        let fits = DantzigSolver::new(prob)?.sweep(&grid, true)?;
        if let Some(f) = fits.iter().find(|f| !f.certified) {
            return Err(Error::CertificateFailed {
                method: "dantzig",
                lambda: f.lambda,
            });
        }
        for ((lam, bl), f) in grid.iter().zip(&lasso).zip(&fits) {
            rows.push(Figure1Row {
                r,
                lambda: *lam,
                beta3_lasso: bl[2],
                beta3_dantzig: f.beta[2],
                dantzig_degenerate: f.degenerate,
            });
        }
    }
    Ok(rows)
}

pub fn write_figure1<W: std::io::Write>(out: W, rows: &[Figure1Row]) -> Result<()> {
    let header = ["r", "lambda", "beta3_lasso", "beta3_dantzig", "dantzig_degenerate"];
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.r),
                fmt_f64(r.lambda),
                fmt_f64(r.beta3_lasso),
                fmt_f64(r.beta3_dantzig),
                (r.dantzig_degenerate as u8).to_string(),
            ]
        })
        .collect();
    write_records(out, &header, &rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Summary {
    /// Designs drawn, including rejected ones.
    pub attempts: usize,
    /// Designs whose inverse Gram matrix was diagonally dominant.
    pub dominance_hits: usize,
    /// Largest `‖β_lasso(λ) − β_dantzig(λ)‖∞` over all kept designs.
    pub max_path_discrepancy: f64,
}

/// Gaussian design with unit columns and a Gaussian response.
fn random_problem(rng: &mut GaussianStream, n: usize, p: usize) -> Result<RegressionProblem> {
    let x = DenseMatrix::from_fn(n, p, |_, _| rng.normal());
    let y = (0..n).map(|_| rng.normal()).collect();
    Ok(RegressionProblem::from_raw(x, y)?.0)
}

/// Largest gap between the two paths over `k` evenly spaced λ in `(0, λ_max]`.
pub fn path_discrepancy(prob: &RegressionProblem, k: usize) -> Result<f64> {
    let lmax = prob.lambda_max();
    let grid: Vec<f64> = (0..k).map(|i| lmax * (k - i) as f64 / k as f64).collect();
    let lasso = lars_lasso_path(prob)?;
    let fits = DantzigSolver::new(prob)?.sweep(&grid, true)?;
    let mut worst = 0.0f64;
    for f in &fits {
        let bl = eval_path(&lasso, f.lambda)?;
        for (a, b) in bl.iter().zip(&f.beta) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// Compares both paths on random designs whose inverse Gram matrix is
/// diagonally dominant, drawing at most `1000·trials` designs.
pub fn theorem1_suite(n: usize, p: usize, trials: usize, master_seed: u64) -> Result<Theorem1Summary> {
    if p == 0 || n < p {
        return Err(Error::InvalidConfig(format!("need 1 <= p <= n, got n = {n}, p = {p}")));
    }
    let mut rng = GaussianStream::new(master_seed);
    let mut summary = Theorem1Summary {
        attempts: 0,
        dominance_hits: 0,
        max_path_discrepancy: 0.0,
    };
    let budget = 1000 * trials;
    while summary.dominance_hits < trials && summary.attempts < budget {
        summary.attempts += 1;
        let prob = random_problem(&mut rng, n, p)?;
        let Ok(inv) = inverse_spd(&prob.x.gram()) else { continue };
        if !diag_dominant(&inv) {
            continue;
        }
        summary.dominance_hits += 1;
        summary.max_path_discrepancy = summary.max_path_discrepancy.max(path_discrepancy(&prob, 50)?);
    }
    if trials > 0 && summary.dominance_hits == 0 {
        return Err(Error::DominanceNotFound {
            attempts: summary.attempts,
        });
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::SetupLabel;

    fn small_cfg(reps: usize) -> ExperimentConfig {
        ExperimentConfig {
            reps,
            dantzig: DantzigConfig { grid_size: 25, ..Default::default() },
            boost: BoostConfig { step_eps: 1e-2, ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn run_setup_is_deterministic_and_certified() {
        let setup = SimSetup::from_label(SetupLabel::A);
        let a = run_setup(&setup, &small_cfg(2)).unwrap();
        let b = run_setup(&setup, &small_cfg(2)).unwrap();
        assert_eq!(a, b);
        assert!(a.certificates.all_passed());
        assert_eq!(a.lambdas.len(), 25);
        assert_eq!(a.mse_beta.len(), 3);
        assert_eq!(a.selection.len(), 51);
        // every method is zero at the top of the grid
        assert!(a.mse_beta[0][0] > 0.0);
        assert!(a.mse_beta.iter().all(|col| col[0] == a.mse_beta[0][0]));
    }

    #[test]
    fn replicate_order_does_not_change_means() {
        let setup = SimSetup::from_label(SetupLabel::C);
        let cfg = small_cfg(3);
        let probs: Vec<_> = (0..3).map(|i| sample_problem(&setup, cfg.master_seed + i).unwrap()).collect();
        let grid = shared_grid(&probs, &cfg.dantzig).unwrap();
        let run = |order: &[usize]| {
            let outs: Vec<_> = order.iter().map(|&i| run_replicate(i, &probs[i], &grid, &cfg).unwrap()).collect();
            aggregate(&setup, &cfg, grid.clone(), outs)
        };
        let (x, y) = (run(&[0, 1, 2]), run(&[2, 0, 1]));
        assert_eq!(x.mse_beta, y.mse_beta);
        assert_eq!(x.summaries, y.summaries);
        assert_eq!(x.selection, y.selection);
    }

    #[test]
    fn zero_reps_is_rejected() {
        let setup = SimSetup::from_label(SetupLabel::A);
        assert!(run_setup(&setup, &small_cfg(0)).is_err());
    }

    #[test]
    fn figure1_scan_below_and_above_the_threshold() {
        let cfg = DantzigConfig { grid_size: 60, ..Default::default() };
        let rows = figure1_scan(&[0.35, 0.7], &cfg).unwrap();
        assert_eq!(rows.len(), 120);
        let (low, high): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.r < 0.5);
        assert!(low.iter().all(|r| r.beta3_lasso.abs() <= 1e-8 && r.beta3_dantzig.abs() <= 1e-8));
        assert!(high.iter().any(|r| r.beta3_lasso.abs() > 1e-3));
        assert!(high.iter().any(|r| r.beta3_dantzig.abs() > 1e-3));
    }

    #[test]
    fn theorem1_small_cases() {
        let s = theorem1_suite(20, 2, 5, 1).unwrap();
        assert_eq!((s.attempts, s.dominance_hits), (5, 5));
        assert!(s.max_path_discrepancy <= 1e-6);
        let s = theorem1_suite(10, 3, 0, 1).unwrap();
        assert_eq!((s.attempts, s.max_path_discrepancy), (0, 0.0));
        assert!(theorem1_suite(3, 4, 1, 1).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.35, 0.7, 36);
        assert_eq!((v.len(), v[0], v[35]), (36, 0.35, 0.7));
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }
}
