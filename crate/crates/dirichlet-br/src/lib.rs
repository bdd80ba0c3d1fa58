//! Dirichlet parameter estimation by maximum likelihood and by mean and
//! median bias-reducing adjusted score equations, plus a reproducible
//! Monte Carlo harness for comparing the three estimators.

pub mod adjust;
pub mod error;
pub mod model;
pub mod polygamma;
pub mod sampling;
pub mod simulation;
pub mod solver;
pub mod table;
pub mod ternary;

pub use adjust::{by_name, Method, ScoreAdjustment, REGISTRY};
pub use error::{Error, Result};
pub use model::{Dataset, ParamVector, SufficientStats};
pub use solver::{fit, initialize, solve, FitResult, SolverConfig};
