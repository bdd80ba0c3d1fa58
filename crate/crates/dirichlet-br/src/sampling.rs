//! Reproducible gamma and Dirichlet variate generation.
//!
//! Streams are keyed by (master seed, path of indices), so any replication
//! draws an identical sequence regardless of scheduling or thread count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::ParamVector;

const DIRICHLET_RETRIES: usize = 100;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// A value-owned random stream; never shared between tasks.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream keyed by a master seed and a path of indices
    /// (e.g. setting hash, sample size, replication index).
    pub fn derived(master_seed: u64, path: &[u64]) -> Self {
        let mut state = master_seed;
        let mut key = splitmix64(&mut state);
        for &part in path {
            state ^= part;
            key ^= splitmix64(&mut state);
        }
        Self::new(key)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform on (0, 1].
    fn uniform_pos(&mut self) -> f64 {
        1.0 - self.rng.random::<f64>()
    }
}

/// One gamma(shape, 1) variate via the Marsaglia–Tsang squeeze method,
/// with the power-boost transformation for shape < 1.
pub fn gamma_draw(stream: &mut RngStream, shape: f64) -> Result<f64> {
    if !(shape > 0.0) || !shape.is_finite() {
        return Err(Error::Domain(format!(
            "gamma shape must be positive and finite, got {shape}"
        )));
    }
    if shape < 1.0 {
        let g = gamma_core(stream, shape + 1.0);
        let u = stream.uniform_pos();
        return Ok(g * u.powf(1.0 / shape));
    }
    Ok(gamma_core(stream, shape))
}

fn gamma_core(stream: &mut RngStream, shape: f64) -> f64 {
    debug_assert!(shape >= 1.0);
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = stream.standard_normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = stream.uniform_pos();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// One Dir(α) draw as normalized independent gamma(α_j) variates.
/// Resamples internally (bounded) if normalization degenerates.
pub fn dirichlet_draw(stream: &mut RngStream, alpha: &ParamVector) -> Result<Vec<f64>> {
    for _ in 0..DIRICHLET_RETRIES {
        let mut g = Vec::with_capacity(alpha.dim());
        for &a in alpha.components() {
            g.push(gamma_draw(stream, a)?);
        }
        let sum: f64 = g.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            continue;
        }
        let y: Vec<f64> = g.iter().map(|&v| v / sum).collect();
        if y.iter().all(|&v| v > 0.0 && v < 1.0) {
            return Ok(y);
        }
    }
    Err(Error::Sampling(format!(
        "failed to draw an interior simplex point after {DIRICHLET_RETRIES} attempts (alpha = {:?})",
        alpha.components()
    )))
}
