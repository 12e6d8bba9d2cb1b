//! Exact Lasso regularization path by LARS-style homotopy.
//!
//! Between knots the active coefficients move linearly in λ along
//! `d_A = (X_Aᵀ X_A)⁻¹ s_A`. A knot occurs when an inactive correlation
//! reaches the boundary `±λ` (join) or an active coefficient crosses zero
//! (drop). Knot locations come from those conditions in closed form, and the
//! coefficients at each knot are re-solved from `X_AᵀX_A β_A = X_AᵀY − λ s_A`
//! rather than accumulated.

use crate::datagen::RegressionProblem;
use crate::error::{Error, Result};
use crate::numerics::{residual_correlations, DenseMatrix, DenseVector};
use crate::path::{Interpolation, Method, PathSample, RegularizationPath};

/// Pivot floor for the active-set Gram factor.
pub const GRAM_PIVOT_TOL: f64 = 1e-10;
/// Tolerance used by [`kkt_certify`].
pub const KKT_TOL: f64 = 1e-8;
/// Relative residual accepted from the active-set solves.
const REFINE_TOL: f64 = 1e-13;

/// Cholesky factor of the active-set Gram matrix, maintained under
/// insertions (appended last) and deletions (any position).
#[derive(Debug, Clone, Default)]
struct ActiveCholesky {
    /// Row-wise lower-triangular factor; row `i` has `i + 1` entries.
    rows: Vec<Vec<f64>>,
}

impl ActiveCholesky {
    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Appends a variable whose Gram column against the current active set is
    /// `cross` and whose squared norm is `diag`. Returns the squared pivot on
    /// failure.
    fn push(&mut self, cross: &[f64], diag: f64) -> std::result::Result<(), f64> {
        let k = self.len();
        let mut w = vec![0.0; k + 1];
        for i in 0..k {
            let mut s = cross[i];
            for j in 0..i {
                s -= self.rows[i][j] * w[j];
            }
            w[i] = s / self.rows[i][i];
        }
        let d = diag - w[..k].iter().map(|v| v * v).sum::<f64>();
        if d <= GRAM_PIVOT_TOL || !d.is_finite() {
            return Err(d);
        }
        w[k] = d.sqrt();
        self.rows.push(w);
        Ok(())
    }

    /// Removes position `pos` and restores triangularity with Givens rotations.
    fn remove(&mut self, pos: usize) {
        self.rows.remove(pos);
        let k = self.len();
        // rows pos.. now carry one superdiagonal entry at column i + 1
        for i in pos..k {
            let a = self.rows[i][i];
            let b = self.rows[i][i + 1];
            let r = a.hypot(b);
            let (c, s) = (a / r, b / r);
            for row in self.rows[i..].iter_mut() {
                let (x, y) = (row[i], row[i + 1]);
                row[i] = c * x + s * y;
                row[i + 1] = -s * x + c * y;
            }
            self.rows[i].truncate(i + 1);
            if self.rows[i][i] < 0.0 {
                for row in self.rows[i..].iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.len();
        let mut y = b.to_vec();
        for i in 0..k {
            let mut s = y[i];
            for j in 0..i {
                s -= self.rows[i][j] * y[j];
            }
            y[i] = s / self.rows[i][i];
        }
        for i in (0..k).rev() {
            let mut s = y[i];
            for j in i + 1..k {
                s -= self.rows[j][i] * y[j];
            }
            y[i] = s / self.rows[i][i];
        }
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Event {
    Join { var: usize, sign: f64 },
    Drop { pos: usize },
    End,
}

struct Homotopy<'a> {
    gram: &'a DenseMatrix,
    xty: &'a [f64],
    active: Vec<usize>,
    signs: Vec<f64>,
    chol: ActiveCholesky,
}

impl Homotopy<'_> {
    fn join(&mut self, var: usize, sign: f64) -> Result<()> {
        let cross: Vec<f64> = self.active.iter().map(|&a| self.gram[(a, var)]).collect();
        self.chol
            .push(&cross, self.gram[(var, var)])
            .map_err(|pivot| Error::RankDeficientActiveSet { variable: var, pivot })?;
        self.active.push(var);
        self.signs.push(sign);
        Ok(())
    }

    fn drop_at(&mut self, pos: usize) {
        self.chol.remove(pos);
        self.active.remove(pos);
        self.signs.remove(pos);
    }

    fn rebuild(&mut self) -> Result<()> {
        let mut chol = ActiveCholesky::default();
        for (k, &var) in self.active.iter().enumerate() {
            let cross: Vec<f64> = self.active[..k].iter().map(|&a| self.gram[(a, var)]).collect();
            chol.push(&cross, self.gram[(var, var)])
                .map_err(|pivot| Error::RankDeficientActiveSet { variable: var, pivot })?;
        }
        self.chol = chol;
        Ok(())
    }

    fn residual(&self, x: &[f64], rhs: &[f64]) -> Vec<f64> {
        let mut r = rhs.to_vec();
        for (i, &ai) in self.active.iter().enumerate() {
            for (j, &aj) in self.active.iter().enumerate() {
                r[i] -= self.gram[(ai, aj)] * x[j];
            }
        }
        r
    }

    /// Solves `G_AA x = rhs` with iterative refinement, refactoring from
    /// scratch when the updated factor has drifted too far to converge.
    fn solve(&mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let scale = 1.0 + rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for attempt in 0..2 {
            if attempt == 1 {
                self.rebuild()?;
            }
            let mut x = self.chol.solve(rhs);
            for _ in 0..3 {
                let r = self.residual(&x, rhs);
                if r.iter().all(|v| v.abs() <= REFINE_TOL * scale) {
                    return Ok(x);
                }
                for (xi, di) in x.iter_mut().zip(self.chol.solve(&r)) {
                    *xi += di;
                }
            }
            let r = self.residual(&x, rhs);
            if attempt == 1 || r.iter().all(|v| v.abs() <= REFINE_TOL * scale) {
                return Ok(x);
            }
        }
        unreachable!()
    }

    /// Coefficients solving the equicorrelation system at `lambda`.
    fn beta_at(&mut self, lambda: f64, p: usize) -> Result<DenseVector> {
        let rhs: Vec<f64> = self
            .active
            .iter()
            .zip(&self.signs)
            .map(|(&a, s)| self.xty[a] - lambda * s)
            .collect();
        let sol = self.solve(&rhs)?;
        let mut beta = vec![0.0; p];
        for (&a, v) in self.active.iter().zip(sol) {
            beta[a] = v;
        }
        Ok(beta)
    }
}

/// All knots of the Lasso path from `λ_max = ‖XᵀY‖∞` down to λ = 0.
pub fn lars_lasso_path(prob: &RegressionProblem) -> Result<RegularizationPath> {
    let (n, p) = (prob.n(), prob.p());
    let gram = prob.x.gram();
    let xty = prob.xty();
    let rank_limit = n.min(p);
    let lambda_max = xty.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut samples = vec![PathSample {
        lambda: lambda_max,
        beta: vec![0.0; p],
        degenerate: None,
    }];
    let done = |samples| RegularizationPath {
        method: Method::Lasso,
        interpolation: Interpolation::PiecewiseLinear,
        samples,
        step_eps: None,
    };
    if lambda_max == 0.0 {
        return Ok(done(samples));
    }

    let mut h = Homotopy {
        gram: &gram,
        xty: &xty,
        active: Vec::new(),
        signs: Vec::new(),
        chol: ActiveCholesky::default(),
    };
    let first = (0..p)
        .find(|&j| xty[j].abs() == lambda_max)
        .expect("max is attained");
    h.join(first, xty[first].signum())?;

    let mut lambda = lambda_max;
    let mut beta = vec![0.0; p];
    // a dropped variable may not immediately rejoin on the side it left
    let mut last_dropped: Option<(usize, f64)> = None;
    let limit = 50 * (n + p) + 100;

    for _ in 0..limit {
        let signs = h.signs.clone();
        let dir = h.solve(&signs)?;
        // a_j = (G_{·A} d_A)_j, g_j = c_j − (G β)_j
        let mut a = vec![0.0; p];
        let mut g = xty.clone();
        for (pos, &k) in h.active.iter().enumerate() {
            for j in 0..p {
                a[j] += gram[(j, k)] * dir[pos];
                g[j] -= gram[(j, k)] * beta[k];
            }
        }

        let tie = 1e-12 * (1.0 + lambda_max);
        let mut best: Option<(f64, Event)> = None;
        let consider = |t: f64, ev: Event, best: &mut Option<(f64, Event)>| {
            if best.is_none_or(|(bt, _)| t < bt - tie) {
                *best = Some((t, ev));
            }
        };
        for (pos, &k) in h.active.iter().enumerate() {
            let (b, d) = (beta[k], dir[pos]);
            if b != 0.0 && d != 0.0 && b.signum() != d.signum() {
                consider((-b / d).max(0.0), Event::Drop { pos }, &mut best);
            }
        }
        if h.active.len() < rank_limit {
            for j in 0..p {
                if h.active.contains(&j) {
                    continue;
                }
                let barred = last_dropped.filter(|&(v, _)| v == j).map(|(_, s)| s);
                let mut tj = f64::INFINITY;
                let mut sj = 0.0;
                if a[j] < 1.0 - 1e-12 && barred != Some(1.0) {
                    let t = ((lambda - g[j]) / (1.0 - a[j])).max(0.0);
                    if t < tj {
                        tj = t;
                        sj = 1.0;
                    }
                }
                if a[j] > -1.0 + 1e-12 && barred != Some(-1.0) {
                    let t = ((lambda + g[j]) / (1.0 + a[j])).max(0.0);
                    if t < tj {
                        tj = t;
                        sj = -1.0;
                    }
                }
                if tj.is_finite() {
                    consider(tj, Event::Join { var: j, sign: sj }, &mut best);
                }
            }
        }
        let (t, event) = match best {
            Some((t, ev)) if t < lambda => (t, ev),
            _ => (lambda, Event::End),
        };

        let next = if event == Event::End { 0.0 } else { (lambda - t).max(0.0) };
        // solve on the set where the boundary variable is exactly zero
        last_dropped = None;
        match event {
            Event::Drop { pos } => {
                last_dropped = Some((h.active[pos], h.signs[pos]));
                h.drop_at(pos);
                beta = h.beta_at(next, p)?;
            }
            Event::Join { var, sign } => {
                beta = h.beta_at(next, p)?;
                h.join(var, sign)?;
            }
            Event::End => beta = h.beta_at(next, p)?,
        }
        if next < lambda {
            samples.push(PathSample {
                lambda: next,
                beta: beta.clone(),
                degenerate: None,
            });
        }
        lambda = next;
        if event == Event::End {
            return Ok(done(samples));
        }
    }
    Err(Error::PathEventLimit(limit))
}

/// Lasso optimality at `lambda`: `|g_k| ≤ λ` everywhere and
/// `g_k = λ·sign(β_k)` on the support.
pub fn kkt_certify(prob: &RegressionProblem, beta: &[f64], lambda: f64) -> bool {
    let Ok(g) = residual_correlations(&prob.x, &prob.y, beta) else {
        return false;
    };
    g.iter().zip(beta).all(|(gk, bk)| {
        gk.abs() <= lambda + KKT_TOL
            && (bk.abs() <= 1e-10 || (gk - lambda * bk.signum()).abs() <= KKT_TOL)
    })
}
