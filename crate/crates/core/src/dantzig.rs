//! Dantzig estimator: `min ‖β‖₁` subject to `‖Xᵀ(Y − Xβ)‖∞ ≤ λ`.
//!
//! The LP splits `β = β⁺ − β⁻` (both nonnegative, objective `Σ β⁺ + β⁻`)
//! and writes the constraint as `2p` rows on `G = XᵀX` and `c = XᵀY`:
//!
//! ```text
//! G·(β⁺ − β⁻) ≥ c − λ     (rows 0..p)
//! G·(β⁺ − β⁻) ≤ c + λ     (rows p..2p)
//! ```
//!
//! Only the right-hand side depends on λ, so a sweep reuses one constraint
//! matrix and warm-starts each solve from the previous optimal basis.

use crate::datagen::RegressionProblem;
use crate::error::{Error, Result};
use crate::lp::{certify, solve_lp_warm, Basis, LinearProgram, LpStatus, RowSense};
use crate::numerics::{DenseMatrix, DenseVector};
use crate::path::{Interpolation, Method, PathSample, RegularizationPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpacing {
    Linear,
    Geometric,
}

impl GridSpacing {
    pub fn name(self) -> &'static str {
        match self {
            GridSpacing::Linear => "linear",
            GridSpacing::Geometric => "geometric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DantzigConfig {
    pub grid_size: usize,
    pub grid_spacing: GridSpacing,
    /// Smallest grid value as a fraction of λ_max; 0 reaches λ = 0.
    pub lambda_min_factor: f64,
}

impl Default for DantzigConfig {
    fn default() -> Self {
        Self {
            grid_size: 200,
            grid_spacing: GridSpacing::Linear,
            lambda_min_factor: 0.0,
        }
    }
}

impl DantzigConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_size < 2 {
            return Err(Error::InvalidConfig("grid_size must be at least 2".into()));
        }
        if !(0.0..1.0).contains(&self.lambda_min_factor) {
            return Err(Error::InvalidConfig(
                "lambda_min_factor must lie in [0, 1)".into(),
            ));
        }
        if self.grid_spacing == GridSpacing::Geometric && self.lambda_min_factor == 0.0 {
            return Err(Error::InvalidConfig(
                "geometric spacing needs a positive lambda_min_factor".into(),
            ));
        }
        Ok(())
    }
}

/// Decreasing grid from `lambda_max` to `lambda_min_factor · lambda_max`.
/// Collapses to the single point `[0]` when `lambda_max` is zero.
pub fn lambda_grid(lambda_max: f64, cfg: &DantzigConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if lambda_max <= 0.0 {
        return Ok(vec![0.0]);
    }
    let k = cfg.grid_size;
    let lo = cfg.lambda_min_factor * lambda_max;
    let grid = (0..k)
        .map(|i| {
            let t = i as f64 / (k - 1) as f64;
            match cfg.grid_spacing {
                GridSpacing::Linear => lambda_max - t * (lambda_max - lo),
                GridSpacing::Geometric => lambda_max * (lo / lambda_max).powf(t),
            }
        })
        .collect::<Vec<_>>();
    let mut grid = grid;
    grid[0] = lambda_max;
    grid[k - 1] = lo;
    Ok(grid)
}

/// `σ·√(2 ln p)`.
pub fn dantzig_selector_lambda(sigma: f64, p: usize) -> f64 {
    sigma * (2.0 * (p.max(1) as f64).ln()).sqrt()
}

#[derive(Debug, Clone)]
pub struct DantzigFit {
    pub lambda: f64,
    pub beta: DenseVector,
    pub degenerate: bool,
    /// Outcome of the independent LP certificate.
    pub certified: bool,
    pub basis: Basis,
    pub objective: f64,
    pub pivots: usize,
}

/// Reusable Dantzig LP for one problem.
pub struct DantzigSolver {
    lp: LinearProgram,
    xty: DenseVector,
    p: usize,
}

impl DantzigSolver {
    pub fn new(prob: &RegressionProblem) -> Result<Self> {
        let p = prob.p();
        let gram = prob.x.gram();
        let xty = prob.xty();
        let a = DenseMatrix::from_fn(2 * p, 2 * p, |i, j| {
            let v = gram[(i % p, j % p)];
            if j < p {
                v
            } else {
                -v
            }
        });
        let mut senses = vec![RowSense::Ge; p];
        senses.extend(std::iter::repeat_n(RowSense::Le, p));
        let lp = LinearProgram::new(
            vec![1.0; 2 * p],
            a,
            vec![0.0; 2 * p],
            senses,
            vec![0.0; 2 * p],
            vec![f64::INFINITY; 2 * p],
        )?;
        Ok(Self { lp, xty, p })
    }

    pub fn lambda_max(&self) -> f64 {
        self.xty.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The LP encoding at `lambda`.
    pub fn program(&self, lambda: f64) -> LinearProgram {
        let mut lp = self.lp.clone();
        write_rhs(&mut lp.rhs, &self.xty, lambda);
        lp
    }

    pub fn solve(&mut self, lambda: f64, warm: Option<&Basis>) -> Result<DantzigFit> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidConfig(format!("lambda {lambda} must be nonnegative")));
        }
        write_rhs(&mut self.lp.rhs, &self.xty, lambda);
        let sol = solve_lp_warm(&self.lp, warm)?;
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(Error::Infeasible),
            LpStatus::Unbounded => return Err(Error::Unbounded),
        }
        let certified = certify(&self.lp, &sol);
        let p = self.p;
        let beta = (0..p).map(|j| sol.primal[j] - sol.primal[p + j]).collect();
        Ok(DantzigFit {
            lambda,
            beta,
            degenerate: sol.degenerate_optimum,
            certified,
            basis: sol.basis,
            objective: sol.objective_value,
            pivots: sol.pivots,
        })
    }

    /// Solves at each λ in order, warm-starting from the previous basis when
    /// `warm` is set.
    pub fn sweep(&mut self, lambdas: &[f64], warm: bool) -> Result<Vec<DantzigFit>> {
        let mut fits: Vec<DantzigFit> = Vec::with_capacity(lambdas.len());
        for &lambda in lambdas {
            let start = if warm { fits.last().map(|f| f.basis.clone()) } else { None };
            fits.push(self.solve(lambda, start.as_ref())?);
        }
        Ok(fits)
    }
}

pub fn dantzig_at_lambda(
    prob: &RegressionProblem,
    lambda: f64,
    warm_basis: Option<&Basis>,
) -> Result<DantzigFit> {
    DantzigSolver::new(prob)?.solve(lambda, warm_basis)
}

fn write_rhs(rhs: &mut [f64], xty: &[f64], lambda: f64) {
    let p = xty.len();
    for k in 0..p {
        rhs[k] = xty[k] - lambda;
        rhs[p + k] = xty[k] + lambda;
    }
}

/// Grid-only Dantzig path over the configured λ grid.
pub fn dantzig_grid_path(prob: &RegressionProblem, cfg: &DantzigConfig) -> Result<RegularizationPath> {
    let grid = lambda_grid(prob.lambda_max(), cfg)?;
    let fits = DantzigSolver::new(prob)?.sweep(&grid, true)?;
    Ok(fits_to_path(&fits))
}

pub fn fits_to_path(fits: &[DantzigFit]) -> RegularizationPath {
    RegularizationPath {
        method: Method::Dantzig,
        interpolation: Interpolation::GridOnly,
        samples: fits
            .iter()
            .map(|f| PathSample {
                lambda: f.lambda,
                beta: f.beta.clone(),
                degenerate: Some(f.degenerate),
            })
            .collect(),
        step_eps: None,
    }
}
