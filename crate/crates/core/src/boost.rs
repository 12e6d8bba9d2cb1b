//! L2Boosting as forward stagewise regression with a constant step.
//!
//! Each iteration moves the coordinate with the largest absolute residual
//! correlation by `±step_eps`. The path coordinate is the pseudo-λ
//! `‖Xᵀ(Y − Xβ)‖∞` at the recorded iterate, which is not monotone in general.

use crate::datagen::RegressionProblem;
use crate::error::{Error, Result};
use crate::numerics::DenseVector;
use crate::path::{Interpolation, Method, PathSample, RegularizationPath};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostConfig {
    pub step_eps: f64,
    pub stop_tol: f64,
    pub max_iters: usize,
    /// Record every this many iterations in addition to support changes.
    pub record_every: usize,
    /// Interpret `step_eps` and `stop_tol` as multiples of `‖XᵀY‖∞`.
    pub relative: bool,
}

impl Default for BoostConfig {
    fn default() -> Self {
        Self {
            step_eps: 1e-3,
            stop_tol: 1e-6,
            max_iters: 200_000,
            record_every: 100,
            relative: true,
        }
    }
}

impl BoostConfig {
    /// Relative step and stop tolerance with every iteration recorded.
    pub fn fine(step_factor: f64) -> Self {
        Self {
            step_eps: step_factor,
            record_every: 1,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_eps > 0.0 && self.step_eps.is_finite()) {
            return Err(Error::InvalidConfig("step_eps must be positive".into()));
        }
        if !(self.stop_tol >= 0.0 && self.stop_tol.is_finite()) {
            return Err(Error::InvalidConfig("stop_tol must be nonnegative".into()));
        }
        if self.max_iters == 0 || self.record_every == 0 {
            return Err(Error::InvalidConfig(
                "max_iters and record_every must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Absolute `(step_eps, stop_tol)` for a problem with the given λ_max.
    pub fn resolve(&self, lambda_max: f64) -> (f64, f64) {
        if self.relative {
            (self.step_eps * lambda_max, self.stop_tol * lambda_max)
        } else {
            (self.step_eps, self.stop_tol)
        }
    }
}

fn argmax_abs(g: &[f64]) -> (usize, f64) {
    let mut best = (0, g[0].abs());
    for (j, v) in g.iter().enumerate().skip(1) {
        if v.abs() > best.1 {
            best = (j, v.abs());
        }
    }
    best
}

/// Stagewise path from β = 0. Stops when `‖g‖∞ ≤ stop_tol`, when a further
/// step could no longer lower the residual sum of squares (`‖g‖∞ ≤ ε/2`), or
/// after `max_iters` steps.
pub fn boost_path(prob: &RegressionProblem, cfg: &BoostConfig) -> Result<RegularizationPath> {
    cfg.validate()?;
    let p = prob.p();
    let gram = prob.x.gram();
    let mut g = prob.xty();
    let lambda_max = argmax_abs(&g).1;
    let (step, stop) = cfg.resolve(lambda_max);
    let mut beta = vec![0.0; p];
    let mut samples = vec![PathSample {
        lambda: lambda_max,
        beta: beta.clone(),
        degenerate: None,
    }];
    let support_tol = 0.5 * step;
    let mut last_recorded = 0;
    let mut iters = 0;

    if step > 0.0 {
        while iters < cfg.max_iters {
            let (j, gmax) = argmax_abs(&g);
            if gmax <= stop || gmax <= support_tol {
                break;
            }
            let delta = step * g[j].signum();
            let was_in = beta[j].abs() > support_tol;
            beta[j] += delta;
            let changed = was_in != (beta[j].abs() > support_tol);
            for (gk, gkj) in g.iter_mut().zip(gram.col(j)) {
                *gk -= delta * gkj;
            }
            iters += 1;
            if changed || iters % cfg.record_every == 0 {
                samples.push(PathSample {
                    lambda: argmax_abs(&g).1,
                    beta: beta.clone(),
                    degenerate: None,
                });
                last_recorded = iters;
            }
        }
    }
    if last_recorded != iters {
        samples.push(PathSample {
            lambda: argmax_abs(&g).1,
            beta,
            degenerate: None,
        });
    }
    Ok(RegularizationPath {
        method: Method::Boost,
        interpolation: Interpolation::GridOnly,
        samples,
        step_eps: Some(step),
    })
}

/// Recorded β whose pseudo-λ is the nearest at or above `pseudo_lambda`,
/// earliest record on ties.
pub fn boost_eval(path: &RegularizationPath, pseudo_lambda: f64) -> Result<DenseVector> {
    let first = path
        .samples
        .first()
        .ok_or_else(|| Error::InvalidConfig("empty path".into()))?;
    if path.method != Method::Boost {
        return Err(Error::InvalidConfig("boost_eval needs a boost path".into()));
    }
    let terminal = path.terminal_lambda();
    if pseudo_lambda < terminal || pseudo_lambda.is_nan() {
        return Err(Error::OutOfRange {
            lambda: pseudo_lambda,
            terminal,
        });
    }
    if pseudo_lambda >= first.lambda {
        return Ok(first.beta.clone());
    }
    let mut best: Option<&PathSample> = None;
    for s in &path.samples {
        if s.lambda >= pseudo_lambda && best.is_none_or(|b| s.lambda < b.lambda) {
            best = Some(s);
        }
    }
    Ok(best.map_or_else(|| first.beta.clone(), |s| s.beta.clone()))
}

/// [`boost_eval`] with queries below the terminal pseudo-λ mapped to the
/// terminal iterate.
pub fn boost_eval_clamped(path: &RegularizationPath, pseudo_lambda: f64) -> Result<DenseVector> {
    match boost_eval(path, pseudo_lambda) {
        Err(Error::OutOfRange { .. }) => Ok(path.terminal_beta().to_vec()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::figure1_problem;
    use crate::numerics::{norm1, norm2, soft_threshold, DenseMatrix};

    fn rss(prob: &RegressionProblem, beta: &[f64]) -> f64 {
        let fit = prob.x.matvec(beta).unwrap();
        let r: Vec<f64> = prob.y.iter().zip(&fit).map(|(a, b)| a - b).collect();
        norm2(&r).powi(2)
    }

    #[test]
    fn first_step_moves_the_top_correlation() {
        let prob = figure1_problem(0.6).unwrap();
        let cfg = BoostConfig::fine(1e-3);
        let path = boost_path(&prob, &cfg).unwrap();
        let eps = path.step_eps.unwrap();
        let xty = prob.xty();
        let top = argmax_abs(&xty).0;
        let b = &path.samples[1].beta;
        assert_eq!(b.iter().filter(|v| **v != 0.0).count(), 1);
        assert_eq!(b[top], eps * xty[top].signum());
    }

    #[test]
    fn single_predictor_climbs_to_ols() {
        let x = DenseMatrix::from_rows(&[vec![0.6], vec![0.8]]).unwrap();
        let prob = RegressionProblem::new(x, vec![1.0, 2.0]).unwrap();
        let ols = 0.6 + 1.6;
        let cfg = BoostConfig {
            step_eps: 0.01,
            relative: false,
            ..BoostConfig::fine(0.0)
        };
        let path = boost_path(&prob, &cfg).unwrap();
        assert!((path.terminal_beta()[0] - ols).abs() <= 0.01);
        assert!(path.samples.windows(2).all(|w| w[1].beta[0] > w[0].beta[0]));
    }

    #[test]
    fn orthonormal_design_tracks_soft_thresholding() {
        let prob = RegressionProblem::new(DenseMatrix::identity(3), vec![0.9, -2.0, 1.4]).unwrap();
        let path = boost_path(&prob, &BoostConfig::fine(1e-3)).unwrap();
        let eps = path.step_eps.unwrap();
        for k in 0..40 {
            let lam = 2.0 * k as f64 / 40.0;
            let Ok(b) = boost_eval(&path, lam) else { continue };
            for (bj, yj) in b.iter().zip(&prob.y) {
                assert!((bj - soft_threshold(*yj, lam)).abs() <= 2.0 * eps);
            }
        }
    }

    #[test]
    fn rss_falls_and_l1_moves_at_most_one_step() {
        let prob = figure1_problem(0.55).unwrap();
        let path = boost_path(&prob, &BoostConfig::fine(1e-2)).unwrap();
        let eps = path.step_eps.unwrap();
        for w in path.samples.windows(2) {
            if w[0].lambda > eps / 2.0 {
                assert!(rss(&prob, &w[1].beta) < rss(&prob, &w[0].beta));
            }
            assert!((norm1(&w[1].beta) - norm1(&w[0].beta)).abs() <= eps * (1.0 + 1e-12));
        }
        assert!(path.terminal_lambda() <= eps);
    }

    #[test]
    fn eval_follows_the_nearest_record_from_above() {
        let prob = figure1_problem(0.3).unwrap();
        let path = boost_path(&prob, &BoostConfig::default()).unwrap();
        assert!(boost_eval(&path, prob.lambda_max()).unwrap().iter().all(|v| *v == 0.0));
        let s = &path.samples[path.samples.len() / 2];
        assert_eq!(boost_eval(&path, s.lambda).unwrap(), s.beta);
        let nxt = path.samples.iter().map(|t| t.lambda).filter(|l| *l < s.lambda).fold(0.0, f64::max);
        assert_eq!(boost_eval(&path, 0.5 * (s.lambda + nxt)).unwrap(), s.beta);
        let below = 0.5 * path.terminal_lambda();
        assert!(matches!(boost_eval(&path, below), Err(Error::OutOfRange { .. })));
        assert_eq!(boost_eval_clamped(&path, below).unwrap(), path.terminal_beta());
    }

    #[test]
    fn sparse_recording_keeps_support_changes() {
        let prob = figure1_problem(0.6).unwrap();
        let path = boost_path(&prob, &BoostConfig::default()).unwrap();
        let eps = path.step_eps.unwrap();
        for w in path.samples.windows(2) {
            let supp = |b: &[f64]| b.iter().filter(|v| v.abs() > eps / 2.0).count();
            let d = supp(&w[1].beta) as i64 - supp(&w[0].beta) as i64;
            assert!(d.abs() <= 1);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let prob = figure1_problem(0.3).unwrap();
        for cfg in [
            BoostConfig { step_eps: 0.0, ..Default::default() },
            BoostConfig { stop_tol: -1.0, ..Default::default() },
            BoostConfig { max_iters: 0, ..Default::default() },
            BoostConfig { record_every: 0, ..Default::default() },
        ] {
            assert!(boost_path(&prob, &cfg).is_err());
        }
    }

    #[test]
    fn zero_response_gives_zero_path() {
        let prob = RegressionProblem::new(DenseMatrix::identity(2), vec![0.0, 0.0]).unwrap();
        let path = boost_path(&prob, &BoostConfig::default()).unwrap();
        assert_eq!(path.samples.len(), 1);
        assert_eq!(boost_eval(&path, 0.0).unwrap(), vec![0.0, 0.0]);
    }
}
