//! Cross-validation, the data-driven Dantzig selector and comparison metrics.

use crate::boost::{boost_eval_clamped, boost_path, BoostConfig};
use crate::dantzig::{dantzig_at_lambda, dantzig_selector_lambda, fits_to_path, DantzigSolver};
use crate::datagen::{GaussianStream, RegressionProblem};
use crate::error::{Error, Result};
use crate::lasso::lars_lasso_path;
use crate::numerics::{DenseMatrix, DenseVector};
use crate::path::{eval_path, Method, RegularizationPath};

/// Support threshold for Lasso and Dantzig coefficients.
pub const ZERO_TOL: f64 = 1e-8;

/// Mean of `values` summed in sorted order, so the result does not depend on
/// the order the values arrive in.
pub fn stable_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.iter().sum::<f64>() / v.len() as f64
}

/// Support threshold appropriate for a path: half the step for boosting,
/// [`ZERO_TOL`] otherwise.
pub fn support_tol(path: &RegularizationPath) -> f64 {
    match (path.method, path.step_eps) {
        (Method::Boost, Some(eps)) => 0.5 * eps,
        _ => ZERO_TOL,
    }
}

/// Coefficients of `path` at each λ of `lambdas`.
///
/// Lasso paths are interpolated, boosting paths use the nearest record from
/// above, and grid-only Dantzig paths must contain every requested λ. Queries
/// below a path's terminal point return the terminal coefficients.
pub fn betas_on_grid(path: &RegularizationPath, lambdas: &[f64]) -> Result<Vec<DenseVector>> {
    lambdas
        .iter()
        .map(|&lam| match path.method {
            Method::Lasso => match eval_path(path, lam) {
                Err(Error::OutOfRange { .. }) => Ok(path.terminal_beta().to_vec()),
                other => other,
            },
            Method::Boost => boost_eval_clamped(path, lam),
            Method::Dantzig => path
                .samples
                .iter()
                .find(|s| s.lambda == lam)
                .map(|s| s.beta.clone())
                .ok_or_else(|| Error::InvalidConfig(format!("dantzig path has no point at {lam}"))),
        })
        .collect()
}

/// The method's path on `prob`; Dantzig is solved on `lambdas` with warm starts.
pub fn method_path(
    prob: &RegressionProblem,
    method: Method,
    lambdas: &[f64],
    bcfg: &BoostConfig,
) -> Result<RegularizationPath> {
    match method {
        Method::Lasso => lars_lasso_path(prob),
        Method::Dantzig => Ok(fits_to_path(&DantzigSolver::new(prob)?.sweep(lambdas, true)?)),
        Method::Boost => boost_path(prob, bcfg),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub lambdas: Vec<f64>,
    pub cv_mse: Vec<f64>,
    pub lambda_cv: f64,
    pub sigma_hat_sq_cv: f64,
}

/// Seeded partition of `0..n` into `folds` blocks whose sizes differ by at
/// most one.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    GaussianStream::new(seed).shuffle(&mut perm);
    (0..folds)
        .map(|f| {
            let mut block = perm[f * n / folds..(f + 1) * n / folds].to_vec();
            block.sort_unstable();
            block
        })
        .collect()
}

/// K-fold cross-validated mean squared prediction error along `lambdas`.
pub fn cv_curve(
    prob: &RegressionProblem,
    method: Method,
    lambdas: &[f64],
    folds: usize,
    seed: u64,
    bcfg: &BoostConfig,
) -> Result<CvResult> {
    let n = prob.n();
    if folds < 2 || n < folds {
        return Err(Error::InvalidConfig(format!(
            "{folds} folds need at least 2 folds and at most n = {n}"
        )));
    }
    if lambdas.is_empty() {
        return Err(Error::InvalidConfig("empty lambda grid".into()));
    }
    let mut per_fold = Vec::with_capacity(folds);
    for held in fold_assignment(n, folds, seed) {
        let train: Vec<usize> = (0..n).filter(|i| held.binary_search(i).is_err()).collect();
        let (sub, scales) = RegressionProblem::from_raw(
            prob.x.select_rows(&train),
            train.iter().map(|&i| prob.y[i]).collect(),
        )?;
        let path = method_path(&sub, method, lambdas, bcfg)?;
        let errs: Vec<f64> = betas_on_grid(&path, lambdas)?
            .into_iter()
            .map(|b| {
                let beta: Vec<f64> = b.iter().zip(&scales).map(|(v, s)| v / s).collect();
                let sse: f64 = held
                    .iter()
                    .map(|&i| {
                        let fit: f64 = (0..prob.p()).map(|j| prob.x[(i, j)] * beta[j]).sum();
                        (prob.y[i] - fit).powi(2)
                    })
                    .sum();
                sse / held.len() as f64
            })
            .collect();
        per_fold.push(errs);
    }
    let cv_mse: Vec<f64> = (0..lambdas.len())
        .map(|k| per_fold.iter().map(|e| e[k]).sum::<f64>() / folds as f64)
        .collect();
    let mut best = 0;
    for k in 1..lambdas.len() {
        if cv_mse[k] < cv_mse[best] || (cv_mse[k] == cv_mse[best] && lambdas[k] < lambdas[best]) {
            best = k;
        }
    }
    Ok(CvResult {
        lambdas: lambdas.to_vec(),
        lambda_cv: lambdas[best],
        sigma_hat_sq_cv: cv_mse[best],
        cv_mse,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DdSelection {
    pub lambda_dd: f64,
    pub sigma_hat_cv: f64,
    pub beta: DenseVector,
}

/// Plugs the cross-validated noise level of a Dantzig CV curve into the
/// selector threshold and solves at that λ, capped at λ_max.
pub fn dd_from_cv(prob: &RegressionProblem, cv: &CvResult) -> Result<DdSelection> {
    let sigma_hat_cv = cv.sigma_hat_sq_cv.max(0.0).sqrt();
    let lambda_dd = dantzig_selector_lambda(sigma_hat_cv, prob.p());
    let fit = dantzig_at_lambda(prob, lambda_dd.min(prob.lambda_max()), None)?;
    Ok(DdSelection {
        lambda_dd,
        sigma_hat_cv,
        beta: fit.beta,
    })
}

/// Data-driven Dantzig selector on the given λ grid with fivefold CV.
pub fn dd_selector(prob: &RegressionProblem, lambdas: &[f64], seed: u64) -> Result<DdSelection> {
    let cv = cv_curve(prob, Method::Dantzig, lambdas, 5, seed, &BoostConfig::default())?;
    dd_from_cv(prob, &cv)
}

pub fn mse_beta(beta_hat: &[f64], beta_star: &[f64]) -> f64 {
    beta_hat
        .iter()
        .zip(beta_star)
        .map(|(a, b)| (a - b).powi(2))
        .sum()
}

pub fn mse_fit(x: &DenseMatrix, beta_hat: &[f64], beta_star: &[f64]) -> Result<f64> {
    let diff: Vec<f64> = beta_hat.iter().zip(beta_star).map(|(a, b)| a - b).collect();
    let fit = x.matvec(&diff)?;
    Ok(fit.iter().map(|v| v * v).sum::<f64>() / x.rows() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionCount {
    pub true_positives: usize,
    pub false_positives: usize,
}

impl SelectionCount {
    pub fn selected(&self) -> usize {
        self.true_positives + self.false_positives
    }
}

pub fn selection_counts(beta_hat: &[f64], beta_star: &[f64], zero_tol: f64) -> SelectionCount {
    let mut c = SelectionCount {
        true_positives: 0,
        false_positives: 0,
    };
    for (b, t) in beta_hat.iter().zip(beta_star) {
        if b.abs() > zero_tol {
            if *t != 0.0 {
                c.true_positives += 1;
            } else {
                c.false_positives += 1;
            }
        }
    }
    c
}

/// Largest true-positive count along one path with at most `fp` false
/// positives, for `fp = 0..=max_fp`.
pub fn best_true_positives(path: &RegularizationPath, truth: &[f64], max_fp: usize) -> Vec<usize> {
    let tol = support_tol(path);
    let mut best = vec![0usize; max_fp + 1];
    for s in &path.samples {
        let c = selection_counts(&s.beta, truth, tol);
        for slot in best.iter_mut().skip(c.false_positives) {
            *slot = (*slot).max(c.true_positives);
        }
    }
    best
}

/// Mean over replicates of the largest true-positive count reached with at
/// most `fp` false positives, for `fp = 0..=max_fp`.
pub fn selection_curve(
    paths: &[RegularizationPath],
    truths: &[DenseVector],
    max_fp: usize,
) -> Result<Vec<(f64, f64)>> {
    if paths.is_empty() || paths.len() != truths.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} paths for {} truths",
            paths.len(),
            truths.len()
        )));
    }
    let mut totals = vec![0usize; max_fp + 1];
    for (path, truth) in paths.iter().zip(truths) {
        for (t, b) in totals.iter_mut().zip(best_true_positives(path, truth, max_fp)) {
            *t += b;
        }
    }
    Ok(totals
        .into_iter()
        .enumerate()
        .map(|(fp, t)| (fp as f64, t as f64 / paths.len() as f64))
        .collect())
}

/// Expected true positives when `fp` nulls are hit by picking at random
/// among `p` predictors of which `s` are relevant.
pub fn random_selection_tp(s: usize, p: usize, fp: f64) -> f64 {
    if p <= s {
        return 0.0;
    }
    s as f64 * fp / (p - s) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dantzig::{lambda_grid, DantzigConfig};
    use crate::datagen::{sim_beta_star, sample_problem, SetupLabel, SimSetup};
    use crate::path::{Interpolation, PathSample};

    fn stacked_identity(k: usize, beta: &[f64], noise: &[f64]) -> RegressionProblem {
        // k stacked copies of I_p, columns scaled to unit norm
        let p = beta.len();
        let scale = 1.0 / (k as f64).sqrt();
        let x = DenseMatrix::from_fn(k * p, p, |i, j| if i % p == j { scale } else { 0.0 });
        let mut y = x.matvec(beta).unwrap();
        for (v, e) in y.iter_mut().zip(noise.iter().cycle()) {
            *v += e;
        }
        RegressionProblem::new(x, y).unwrap()
    }

    #[test]
    fn mse_examples() {
        let b = sim_beta_star();
        assert_eq!(mse_beta(&b, &b), 0.0);
        assert!((mse_beta(&vec![0.0; 60], &b) - b.iter().map(|v| v * v).sum::<f64>()).abs() < 1e-12);
        let mut e = b.clone();
        e[0] += 1.0;
        assert_eq!(mse_beta(&e, &b), 1.0);
        let x = DenseMatrix::identity(3);
        let bs = [1.0, 2.0, 0.0];
        assert!((mse_fit(&x, &[0.0; 3], &bs).unwrap() - mse_beta(&[0.0; 3], &bs) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mse_fit_of_zero_is_one_under_the_signal_scaling() {
        let prob = sample_problem(&SimSetup::from_label(SetupLabel::B), 4).unwrap();
        let bs = prob.beta_star.clone().unwrap();
        assert!((mse_fit(&prob.x, &vec![0.0; 60], &bs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn selection_count_examples() {
        let b = sim_beta_star();
        let c = selection_counts(&b, &b, ZERO_TOL);
        assert_eq!((c.true_positives, c.false_positives), (10, 0));
        let c = selection_counts(&vec![0.0; 60], &b, ZERO_TOL);
        assert_eq!(c.selected(), 0);
        let c = selection_counts(&vec![1.0; 60], &b, ZERO_TOL);
        assert_eq!((c.true_positives, c.false_positives), (10, 50));
    }

    fn grid_path(betas: Vec<Vec<f64>>) -> RegularizationPath {
        let k = betas.len();
        RegularizationPath {
            method: Method::Dantzig,
            interpolation: Interpolation::GridOnly,
            samples: betas
                .into_iter()
                .enumerate()
                .map(|(i, beta)| PathSample { lambda: (k - i) as f64, beta, degenerate: None })
                .collect(),
            step_eps: None,
        }
    }

    #[test]
    fn selection_curve_examples() {
        let truth = vec![1.0, 1.0, 0.0, 0.0];
        let exact = grid_path(vec![vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0], vec![1.0, 1.0, 0.0, 0.0], vec![1.0; 4]]);
        let curve = selection_curve(&[exact], std::slice::from_ref(&truth), 3).unwrap();
        assert_eq!(curve, vec![(0.0, 2.0), (1.0, 2.0), (2.0, 2.0), (3.0, 2.0)]);
        let late = grid_path(vec![vec![0.0; 4], vec![0.0, 0.0, 1.0, 0.0], vec![1.0, 0.0, 1.0, 1.0]]);
        let zero = grid_path(vec![vec![0.0; 4]]);
        let curve = selection_curve(&[late, zero.clone()], &[truth.clone(), truth.clone()], 2).unwrap();
        assert_eq!(curve, vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.5)]);
        assert!(selection_curve(&[zero], std::slice::from_ref(&truth), 2).unwrap().iter().all(|c| c.1 == 0.0));
        assert!(selection_curve(&[], &[], 2).is_err());
        assert_eq!(random_selection_tp(10, 60, 5.0), 1.0);
    }

    #[test]
    fn folds_partition_rows_evenly() {
        let f = fold_assignment(42, 5, 9);
        let mut all: Vec<usize> = f.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..42).collect::<Vec<_>>());
        assert!(f.iter().all(|b| b.len() == 8 || b.len() == 9));
        assert_eq!(f, fold_assignment(42, 5, 9));
    }

    #[test]
    fn noiseless_cv_prefers_small_lambda() {
        let beta = [1.5, 0.0, -0.8, 0.0, 0.4];
        let prob = stacked_identity(6, &beta, &[0.0]);
        let grid = lambda_grid(prob.lambda_max(), &DantzigConfig { grid_size: 50, ..Default::default() }).unwrap();
        for method in [Method::Lasso, Method::Dantzig] {
            let cv = cv_curve(&prob, method, &grid, 5, 1, &BoostConfig::default()).unwrap();
            assert!(cv.lambda_cv <= grid[0] * 0.1);
            assert!(cv.sigma_hat_sq_cv <= 1e-6);
            assert!(cv.cv_mse.iter().all(|v| v.is_finite() && *v >= 0.0));
        }
    }

    #[test]
    fn zero_response_cv_picks_lambda_max() {
        let prob = stacked_identity(6, &[0.0; 4], &[0.0]);
        let grid = lambda_grid(prob.lambda_max(), &DantzigConfig::default()).unwrap();
        for method in Method::ALL {
            let cv = cv_curve(&prob, method, &grid, 5, 3, &BoostConfig::default()).unwrap();
            assert_eq!(cv.cv_mse, vec![0.0]);
            assert_eq!(cv.lambda_cv, prob.lambda_max());
        }
    }

    #[test]
    fn cv_is_deterministic_and_validates_folds() {
        let prob = sample_problem(&SimSetup::from_label(SetupLabel::A), 2).unwrap();
        let grid = lambda_grid(prob.lambda_max(), &DantzigConfig { grid_size: 20, ..Default::default() }).unwrap();
        let a = cv_curve(&prob, Method::Lasso, &grid, 5, 11, &BoostConfig::default()).unwrap();
        let b = cv_curve(&prob, Method::Lasso, &grid, 5, 11, &BoostConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(cv_curve(&prob, Method::Lasso, &grid, 41, 11, &BoostConfig::default()).is_err());
    }

    #[test]
    fn dd_selector_cases() {
        let beta = [1.5, 0.0, -0.8, 0.0, 0.4];
        let prob = stacked_identity(6, &beta, &[0.0]);
        let grid = lambda_grid(prob.lambda_max(), &DantzigConfig { grid_size: 50, ..Default::default() }).unwrap();
        let dd = dd_selector(&prob, &grid, 5).unwrap();
        assert!(dd.lambda_dd < 1e-2);
        let cv = CvResult { lambdas: grid.clone(), cv_mse: vec![100.0; 50], lambda_cv: grid[0], sigma_hat_sq_cv: 100.0 };
        let dd = dd_from_cv(&prob, &cv).unwrap();
        assert!(dd.lambda_dd > prob.lambda_max());
        assert!(dd.beta.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn stable_mean_ignores_order() {
        let v = [0.1, 1e16, -1e16, 0.3, 0.7];
        let mut w = v;
        w.reverse();
        assert_eq!(stable_mean(&v).to_bits(), stable_mean(&w).to_bits());
        assert_eq!(stable_mean(&[]), 0.0);
    }
}
