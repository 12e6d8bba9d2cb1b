//! Seeded designs and responses.
//!
//! The pseudorandom source is ChaCha20 (`rand_chacha::ChaCha20Rng`, seeded
//! with `seed_from_u64`). Uniforms take the top 53 bits of each 64-bit output;
//! standard normals come from the Box–Muller transform, two per pair of
//! uniforms. Both choices are fixed so that every table is reproducible
//! across runs and platforms.

use std::f64::consts::PI;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::numerics::{cholesky, norm2, DenseMatrix, DenseVector};

/// Sample size of the replicate study.
pub const SIM_N: usize = 40;
/// Number of predictors in the replicate study.
pub const SIM_P: usize = 60;

/// Deterministic stream of uniforms and standard normals.
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u lies in (0, 1], keeping the logarithm finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Uniform index in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem {
    pub x: DenseMatrix,
    pub y: DenseVector,
    pub beta_star: Option<DenseVector>,
    pub sigma: Option<f64>,
}

impl RegressionProblem {
    /// Wraps a design whose columns already have unit ℓ2-norm.
    pub fn new(x: DenseMatrix, y: DenseVector) -> Result<Self> {
        if x.rows() == 0 || x.cols() == 0 {
            return Err(Error::DimensionMismatch("empty design".into()));
        }
        if y.len() != x.rows() {
            return Err(Error::DimensionMismatch(format!(
                "design has {} rows, response has {}",
                x.rows(),
                y.len()
            )));
        }
        if !x.is_finite() || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite data".into()));
        }
        if let Some(j) = (0..x.cols()).find(|&j| (norm2(x.col(j)) - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "column {j} does not have unit norm"
            )));
        }
        Ok(Self {
            x,
            y,
            beta_star: None,
            sigma: None,
        })
    }

    /// Normalizes the columns of a raw design, returning the problem and the
    /// original column norms.
    pub fn from_raw(mut x: DenseMatrix, y: DenseVector) -> Result<(Self, Vec<f64>)> {
        let scales = normalize_columns(&mut x)?;
        Ok((Self::new(x, y)?, scales))
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn p(&self) -> usize {
        self.x.cols()
    }

    /// `Xᵀ Y`.
    pub fn xty(&self) -> DenseVector {
        self.x.tmatvec(&self.y).expect("shape checked at construction")
    }

    /// `‖XᵀY‖∞`, the smallest λ with an all-zero solution.
    pub fn lambda_max(&self) -> f64 {
        self.xty().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Scales each column to unit ℓ2-norm in place; returns the original norms.
pub fn normalize_columns(x: &mut DenseMatrix) -> Result<Vec<f64>> {
    let mut scales = Vec::with_capacity(x.cols());
    for j in 0..x.cols() {
        let s = norm2(x.col(j));
        if s == 0.0 || !s.is_finite() {
            return Err(Error::InvalidConfig(format!("column {j} has zero norm")));
        }
        x.col_mut(j).iter_mut().for_each(|v| *v /= s);
        scales.push(s);
    }
    Ok(scales)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetupLabel {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSetup {
    pub label: SetupLabel,
    pub rho: f64,
    pub sigma: f64,
    pub n: usize,
    pub p: usize,
}

impl SimSetup {
    pub fn from_label(label: SetupLabel) -> Self {
        let (rho, sigma) = match label {
            SetupLabel::A => (0.0, 0.2),
            SetupLabel::B => (0.9, 0.2),
            SetupLabel::C => (0.9, 0.6),
        };
        Self {
            label,
            rho,
            sigma,
            n: SIM_N,
            p: SIM_P,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.label {
            SetupLabel::A => "a",
            SetupLabel::B => "b",
            SetupLabel::C => "c",
        }
    }
}

impl std::str::FromStr for SetupLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(SetupLabel::A),
            "b" | "B" => Ok(SetupLabel::B),
            "c" | "C" => Ok(SetupLabel::C),
            other => Err(Error::InvalidConfig(format!("unknown setup '{other}'"))),
        }
    }
}

/// Toeplitz covariance `Σ_ij = ρ^{|i−j|}`.
pub fn toeplitz_sigma(p: usize, rho: f64) -> DenseMatrix {
    DenseMatrix::from_fn(p, p, |i, j| rho.powi(i.abs_diff(j) as i32))
}

/// The sparse coefficient vector of the replicate study, before rescaling.
pub fn sim_beta_star() -> DenseVector {
    const ENTRIES: [(usize, f64); 10] = [
        (60, -0.65),
        (2, -0.38),
        (21, -0.37),
        (49, -0.27),
        (20, -0.12),
        (27, -0.08),
        (4, 0.05),
        (43, 0.24),
        (51, 0.37),
        (32, 0.41),
    ];
    let mut beta = vec![0.0; SIM_P];
    for (component, value) in ENTRIES {
        beta[component - 1] = value;
    }
    beta
}

/// Draws one replicate: Gaussian rows with Toeplitz covariance, unit
/// columns, `β*` rescaled so that `‖Xβ*‖₂² = n` on this realization, and
/// `Y = Xβ* + σε`.
pub fn sample_problem(setup: &SimSetup, seed: u64) -> Result<RegressionProblem> {
    let (n, p) = (setup.n, setup.p);
    if setup.rho.abs() >= 1.0 || setup.sigma < 0.0 || n == 0 {
        return Err(Error::InvalidConfig(format!(
            "setup with rho = {}, sigma = {}, n = {n}",
            setup.rho, setup.sigma
        )));
    }
    if p != SIM_P {
        return Err(Error::InvalidConfig(format!(
            "the coefficient vector has {SIM_P} entries, setup asks for p = {p}"
        )));
    }
    let l = cholesky(&toeplitz_sigma(p, setup.rho))?;
    let mut rng = GaussianStream::new(seed);
    let mut x = DenseMatrix::zeros(n, p);
    let mut z = vec![0.0; p];
    for i in 0..n {
        z.iter_mut().for_each(|v| *v = rng.normal());
        // row_i = L z
        for j in 0..p {
            let mut s = 0.0;
            for k in 0..=j {
                s += l[(j, k)] * z[k];
            }
            x[(i, j)] = s;
        }
    }
    let noise: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
    normalize_columns(&mut x)?;

    let base = sim_beta_star();
    let signal = x.matvec(&base)?;
    let scale = (n as f64).sqrt() / norm2(&signal);
    let beta_star: DenseVector = base.iter().map(|b| b * scale).collect();
    let signal = x.matvec(&beta_star)?;
    let y = signal
        .iter()
        .zip(&noise)
        .map(|(s, e)| s + setup.sigma * e)
        .collect();
    Ok(RegressionProblem {
        x,
        y,
        beta_star: Some(beta_star),
        sigma: Some(setup.sigma),
    })
}

/// Three-predictor population design: `XᵀX = V` with unit diagonal,
/// `V₁₂ = 0`, `V₁₃ = V₂₃ = r`, and noiseless `Y = X·(1, 1, 0)`.
pub fn figure1_problem(r: f64) -> Result<RegressionProblem> {
    let v = DenseMatrix::from_rows(&[
        vec![1.0, 0.0, r],
        vec![0.0, 1.0, r],
        vec![r, r, 1.0],
    ])?;
    let l = cholesky(&v)?;
    let x = l.transpose();
    let beta_star = vec![1.0, 1.0, 0.0];
    let y = x.matvec(&beta_star)?;
    Ok(RegressionProblem {
        x,
        y,
        beta_star: Some(beta_star),
        sigma: Some(0.0),
    })
}
