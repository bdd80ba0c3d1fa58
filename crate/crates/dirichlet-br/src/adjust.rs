//! Score-adjustment strategies. Each estimator solves U(α) + A(α) = 0 for
//! a different choice of A: zero (maximum likelihood), the mean
//! bias-reducing A*, or the median bias-reducing Ã. Strategies live behind
//! a common trait and are selected by name at runtime.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{mean_br_adjustment, median_br_adjustment, ParamVector};

pub trait ScoreAdjustment: Sync {
    /// Registry key, as accepted on the command line.
    fn name(&self) -> &'static str;

    /// Human-facing label used in report tables.
    fn label(&self) -> &'static str;

    /// Additive score adjustment A(α) for sample size n.
    fn adjustment(&self, alpha: &ParamVector, n: usize) -> Result<DVector<f64>>;
}

pub struct MaximumLikelihood;

impl ScoreAdjustment for MaximumLikelihood {
    fn name(&self) -> &'static str {
        "ml"
    }

    fn label(&self) -> &'static str {
        "ML"
    }

    fn adjustment(&self, alpha: &ParamVector, _n: usize) -> Result<DVector<f64>> {
        Ok(DVector::zeros(alpha.dim()))
    }
}

pub struct MeanBiasReduction;

impl ScoreAdjustment for MeanBiasReduction {
    fn name(&self) -> &'static str {
        "mean-br"
    }

    fn label(&self) -> &'static str {
        "mean BR"
    }

    fn adjustment(&self, alpha: &ParamVector, n: usize) -> Result<DVector<f64>> {
        mean_br_adjustment(alpha, n)
    }
}

pub struct MedianBiasReduction;

impl ScoreAdjustment for MedianBiasReduction {
    fn name(&self) -> &'static str {
        "median-br"
    }

    fn label(&self) -> &'static str {
        "median BR"
    }

    fn adjustment(&self, alpha: &ParamVector, n: usize) -> Result<DVector<f64>> {
        median_br_adjustment(alpha, n)
    }
}

/// All registered strategies, in report order.
pub static REGISTRY: &[&dyn ScoreAdjustment] =
    &[&MaximumLikelihood, &MeanBiasReduction, &MedianBiasReduction];

pub fn by_name(name: &str) -> Option<&'static dyn ScoreAdjustment> {
    REGISTRY.iter().copied().find(|s| s.name() == name)
}

/// Closed enumeration of the registered estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "ml")]
    Ml,
    #[serde(rename = "mean-br")]
    MeanBr,
    #[serde(rename = "median-br")]
    MedianBr,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ml, Method::MeanBr, Method::MedianBr];

    pub fn strategy(self) -> &'static dyn ScoreAdjustment {
        match self {
            Method::Ml => &MaximumLikelihood,
            Method::MeanBr => &MeanBiasReduction,
            Method::MedianBr => &MedianBiasReduction,
        }
    }

    pub fn name(self) -> &'static str {
        self.strategy().name()
    }

    pub fn label(self) -> &'static str {
        self.strategy().label()
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown method '{s}' (expected one of: ml, mean-br, median-br)"
                ))
            })
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
