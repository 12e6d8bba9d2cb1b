//! Lasso, Dantzig selector and L2Boosting as full regularization-path
//! solvers, with optimality certificates and the simulation harness used to
//! compare them.

pub mod boost;
pub mod csvio;
pub mod dantzig;
pub mod datagen;
pub mod error;
pub mod evaluation;
pub mod experiments;
pub mod lasso;
pub mod lp;
pub mod numerics;
pub mod path;

pub use datagen::{RegressionProblem, SetupLabel, SimSetup};
pub use error::{Error, Result};
pub use numerics::{DenseMatrix, DenseVector};
pub use path::{eval_path, Interpolation, Method, PathSample, RegularizationPath};
