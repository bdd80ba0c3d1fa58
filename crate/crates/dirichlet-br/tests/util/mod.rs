//! Shared helpers for the integration tests.

use dirichlet_br::model::SufficientStats;
use dirichlet_br::sampling::RngStream;

pub struct RandomConfig {
    pub alpha: Vec<f64>,
    pub n: usize,
    pub stats: SufficientStats,
}

/// Random (α, n, z) configuration: m ∈ {2,3,5}, components log-uniform in
/// (0.05, 50), n in 1..=50, z the log of a random interior simplex point.
pub fn random_config(stream: &mut RngStream) -> RandomConfig {
    let m = [2usize, 3, 5][(stream.uniform() * 3.0) as usize % 3];
    let alpha: Vec<f64> = (0..m)
        .map(|_| {
            let t = stream.uniform();
            0.05 * (50.0f64 / 0.05).powf(t)
        })
        .collect();
    let n = 1 + (stream.uniform() * 50.0) as usize;
    let raw: Vec<f64> = (0..m).map(|_| -(1.0 - stream.uniform()).ln() + 1e-3).collect();
    let sum: f64 = raw.iter().sum();
    let z: Vec<f64> = raw.iter().map(|&r| (r / sum).ln()).collect();
    RandomConfig {
        alpha,
        n,
        stats: SufficientStats { n, z },
    }
}
