//! Regularization paths shared by all three estimators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Lasso,
    Dantzig,
    Boost,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Lasso, Method::Dantzig, Method::Boost];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lasso => "lasso",
            Method::Dantzig => "dantzig",
            Method::Boost => "boost",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lasso" => Ok(Method::Lasso),
            "dantzig" => Ok(Method::Dantzig),
            "boost" => Ok(Method::Boost),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Exact knots of a piecewise-linear path; values in between are linear in λ.
    PiecewiseLinear,
    /// Values exist only at the recorded points.
    GridOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub lambda: f64,
    pub beta: DenseVector,
    /// Whether the Dantzig LP at this λ had alternative optima.
    pub degenerate: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationPath {
    pub method: Method,
    pub interpolation: Interpolation,
    pub samples: Vec<PathSample>,
    /// Boosting step size actually used, when `method` is boost.
    pub step_eps: Option<f64>,
}

impl RegularizationPath {
    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.lambda)
    }

    pub fn first_lambda(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.lambda)
    }

    pub fn terminal_lambda(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.lambda)
    }

    pub fn terminal_beta(&self) -> &[f64] {
        self.samples.last().map_or(&[], |s| s.beta.as_slice())
    }

    pub fn p(&self) -> usize {
        self.samples.first().map_or(0, |s| s.beta.len())
    }
}

/// Evaluates a piecewise-linear path at `lambda`.
pub fn eval_path(path: &RegularizationPath, lambda: f64) -> Result<DenseVector> {
    if path.interpolation != Interpolation::PiecewiseLinear {
        return Err(Error::InvalidConfig(
            "eval_path needs a piecewise-linear path".into(),
        ));
    }
    let samples = &path.samples;
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidConfig("empty path".into()))?;
    if lambda >= first.lambda {
        return Ok(first.beta.clone());
    }
    let terminal = path.terminal_lambda();
    if lambda < terminal || lambda.is_nan() {
        return Err(Error::OutOfRange { lambda, terminal });
    }
    // first knot at or below lambda
    let k = samples.partition_point(|s| s.lambda > lambda);
    let hi = &samples[k - 1];
    let lo = &samples[k];
    if lo.lambda == lambda {
        return Ok(lo.beta.clone());
    }
    let w = (hi.lambda - lambda) / (hi.lambda - lo.lambda);
    Ok(hi
        .beta
        .iter()
        .zip(&lo.beta)
        .map(|(a, b)| a + w * (b - a))
        .collect())
}
