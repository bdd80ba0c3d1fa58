//! Fisher scoring for the three estimating equations, with moment-based
//! initialization, step halving on the adjusted score norm, and divergence
//! guards.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::adjust::Method;
use crate::error::{Error, Result};
use crate::model::{
    expected_info, score, suff_stats, wald_interval, Dataset, ParamVector, SufficientStats,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Convergence threshold on the ∞-norm of the adjusted score.
    pub score_tolerance: f64,
    pub max_step_halvings: usize,
    /// Divergence guard on s = Σ_j α_j.
    pub s_cap: f64,
    pub ci_level: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            score_tolerance: 1e-8,
            max_step_halvings: 30,
            s_cap: 1e8,
            ci_level: 0.95,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.max_step_halvings == 0 {
            return Err(Error::Domain("iteration limits must be positive".into()));
        }
        if !(self.score_tolerance >= 1e-14) {
            return Err(Error::Domain(format!(
                "score tolerance must be at least 1e-14, got {}",
                self.score_tolerance
            )));
        }
        if !(self.s_cap > 0.0) {
            return Err(Error::Domain("s_cap must be positive".into()));
        }
        if !(0.0 < self.ci_level && self.ci_level < 1.0) {
            return Err(Error::Domain("ci_level must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub method: Method,
    pub estimate: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub ci_lower: Vec<f64>,
    pub ci_upper: Vec<f64>,
    pub ci_level: f64,
    pub iterations: usize,
    pub final_score_norm: f64,
    pub converged: bool,
    pub init_used: Vec<f64>,
}

/// Moment-based starting point: α_j⁰ = ȳ_j·ŝ with
/// ŝ = ȳ₁(1−ȳ₁)/v₁ − 1, v₁ the sample variance of the first column.
/// Falls back to the all-ones vector when the moment estimate is unusable.
pub fn initialize(_stats: &SufficientStats, data: &Dataset) -> ParamVector {
    let m = data.n_cols();
    let ones = ParamVector::new(vec![1.0; m]).expect("m >= 2");
    let n = data.n_rows();
    if n < 2 {
        return ones;
    }
    let means = data.column_means();
    let mean1 = means[0];
    let var1: f64 = data
        .rows()
        .iter()
        .map(|r| (r[0] - mean1).powi(2))
        .sum::<f64>()
        / (n - 1) as f64;
    if var1 <= 0.0 {
        return ones;
    }
    let s_hat = mean1 * (1.0 - mean1) / var1 - 1.0;
    if s_hat <= 0.0 {
        return ones;
    }
    match ParamVector::new(means.iter().map(|&y| y * s_hat).collect()) {
        Ok(p) => p,
        Err(_) => ones,
    }
}

fn adjusted_score(
    method: Method,
    alpha: &ParamVector,
    stats: &SufficientStats,
) -> Result<DVector<f64>> {
    let u = score(alpha, stats)?;
    let a = method.strategy().adjustment(alpha, stats.n)?;
    Ok(u + a)
}

/// Fisher scoring on the estimating equation g(α) = U(α) + A(α) = 0.
///
/// Step: α ← α + t·i(α)⁻¹g(α), halving t while the candidate leaves the
/// positive orthant or fails to reduce ‖g‖_∞.
pub fn solve(
    stats: &SufficientStats,
    method: Method,
    config: &SolverConfig,
    init: &ParamVector,
) -> Result<FitResult> {
    config.validate()?;
    if init.dim() != stats.z.len() {
        return Err(Error::DimensionMismatch {
            expected: stats.z.len(),
            got: init.dim(),
        });
    }

    let mut alpha = init.clone();
    let mut g = adjusted_score(method, &alpha, stats)?;
    let mut g_norm = g.amax();

    let finish = |estimate: ParamVector, iterations: usize, g_norm: f64| -> Result<FitResult> {
        let wald = wald_interval(&estimate, stats.n, config.ci_level)?;
        Ok(FitResult {
            method,
            estimate: estimate.components().to_vec(),
            std_errors: wald.se,
            ci_lower: wald.lower,
            ci_upper: wald.upper,
            ci_level: config.ci_level,
            iterations,
            final_score_norm: g_norm,
            converged: true,
            init_used: init.components().to_vec(),
        })
    };

    let mut iteration = 0;
    loop {
        let info = expected_info(&alpha, stats.n)?;
        let direction = info.inverse() * &g;

        if g_norm <= config.score_tolerance {
            // A root at infinity (e.g. ML on n = 1) also drives the score
            // norm under tolerance while the iterate is still moving by
            // whole multiples of itself. Only accept a root the iteration
            // has actually settled on; otherwise keep stepping so the
            // divergence guard can fire.
            let rel_step = alpha
                .components()
                .iter()
                .zip(direction.iter())
                .map(|(&a, &d)| (d / a).abs())
                .fold(0.0, f64::max);
            if rel_step <= 1e-3 {
                return finish(alpha, iteration, g_norm);
            }
        }
        if iteration == config.max_iterations {
            return Err(Error::MaxIterations {
                iterations: config.max_iterations,
                last_iterate: alpha.components().to_vec(),
                score_norm: g_norm,
            });
        }
        iteration += 1;

        let mut step = 1.0;
        let mut accepted = None;
        for _halving in 0..=config.max_step_halvings {
            let candidate: Vec<f64> = alpha
                .components()
                .iter()
                .zip(direction.iter())
                .map(|(&a, &d)| a + step * d)
                .collect();
            if candidate.iter().all(|&a| a.is_finite() && a > 0.0) {
                let cand = ParamVector::new(candidate).expect("checked positive");
                if let Ok(g_new) = adjusted_score(method, &cand, stats) {
                    let norm_new = g_new.amax();
                    if norm_new.is_finite() && norm_new <= g_norm {
                        accepted = Some((cand, g_new, norm_new));
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        let Some((cand, g_new, norm_new)) = accepted else {
            return Err(Error::NoProgress {
                iteration,
                halvings: config.max_step_halvings,
            });
        };
        alpha = cand;
        g = g_new;
        g_norm = norm_new;

        if alpha.sum() > config.s_cap {
            return Err(Error::Diverged {
                s: alpha.sum(),
                cap: config.s_cap,
            });
        }
    }
}

/// End-to-end: sufficient statistics, initialization, scoring, Wald CIs.
pub fn fit(data: &Dataset, method: Method, config: &SolverConfig) -> Result<FitResult> {
    let stats = suff_stats(data);
    let init = initialize(&stats, data);
    solve(&stats, method, config, &init)
}
