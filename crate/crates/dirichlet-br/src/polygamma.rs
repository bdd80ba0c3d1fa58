//! Scalar special functions: log-gamma and the first three polygamma
//! functions, for strictly positive arguments.
//!
//! All four use the same scheme: upward recurrence to shift the argument
//! above `ASYMPTOTIC_CUTOFF`, then a Bernoulli-number asymptotic series.

use crate::error::{Error, Result};

const ASYMPTOTIC_CUTOFF: f64 = 8.0;

/// B_2, B_4, ..., B_14.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

const HALF_LN_TWO_PI: f64 = 0.9189385332046727;

fn check_positive(x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::Domain("polygamma argument is NaN".into()));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!(
            "polygamma argument must be positive, got {x}"
        )));
    }
    Ok(())
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut shift = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_CUTOFF {
        shift += z.ln();
        z += 1.0;
    }
    // Stirling: (z - 1/2) ln z - z + ln(2π)/2 + Σ B_2k / (2k(2k-1) z^{2k-1})
    let mut series = 0.0;
    let inv2 = 1.0 / (z * z);
    let mut pow = 1.0 / z;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += b / (two_k * (two_k - 1.0)) * pow;
        pow *= inv2;
    }
    Ok((z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series - shift)
}

/// Digamma ψ(x) = d/dx ln Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut acc = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_CUTOFF {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // ψ(z) ~ ln z - 1/(2z) - Σ B_2k / (2k z^{2k})
    let inv2 = 1.0 / (z * z);
    let mut series = 0.0;
    let mut pow = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += b / two_k * pow;
        pow *= inv2;
    }
    Ok(acc + z.ln() - 0.5 / z - series)
}

/// Trigamma ψ′(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut acc = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_CUTOFF {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // ψ′(z) ~ 1/z + 1/(2z²) + Σ B_2k / z^{2k+1}
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv * inv2;
    for b in BERNOULLI {
        series += b * pow;
        pow *= inv2;
    }
    Ok(acc + inv + 0.5 * inv2 + series)
}

/// Tetragamma ψ″(x) for x > 0.
pub fn tetragamma(x: f64) -> Result<f64> {
    check_positive(x)?;
    let mut acc = 0.0;
    let mut z = x;
    while z < ASYMPTOTIC_CUTOFF {
        acc -= 2.0 / (z * z * z);
        z += 1.0;
    }
    // ψ″(z) ~ -1/z² - 1/z³ - Σ (2k+1) B_2k / z^{2k+2}
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv2 * inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += (two_k + 1.0) * b * pow;
        pow *= inv2;
    }
    Ok(acc - inv2 - inv * inv2 - series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        let scale = b.abs().max(1.0);
        assert!(
            (a - b).abs() <= tol * scale,
            "got {a}, want {b} (tol {tol})"
        );
    }

    #[test]
    fn log_gamma_spot_values() {
        close(log_gamma(1.0).unwrap(), 0.0, 1e-13);
        close(log_gamma(2.0).unwrap(), 0.0, 1e-13);
        // ln √π
        close(log_gamma(0.5).unwrap(), 0.5723649429247001, 1e-13);
    }

    #[test]
    fn digamma_spot_values() {
        // ψ(1) = -γ
        close(digamma(1.0).unwrap(), -0.5772156649015329, 1e-12);
        close(digamma(2.0).unwrap(), 0.4227843350984671, 1e-12);
        close(digamma(10.5).unwrap(), 2.3030010342976864, 1e-12);
    }

    #[test]
    fn trigamma_spot_values() {
        let pi2_6 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        close(trigamma(1.0).unwrap(), pi2_6, 1e-12);
        close(trigamma(2.0).unwrap(), pi2_6 - 1.0, 1e-12);
        close(trigamma(25.0).unwrap(), 0.04081066325722558, 1e-12);
    }

    #[test]
    fn tetragamma_spot_values() {
        // ψ″(1) = -2ζ(3)
        close(tetragamma(1.0).unwrap(), -2.4041138063191885, 1e-11);
        close(tetragamma(2.0).unwrap(), -2.4041138063191885 + 2.0, 1e-11);
        close(tetragamma(12.0).unwrap(), -0.007547205368998912, 1e-11);
    }

    #[test]
    fn rejects_invalid_arguments() {
        for f in [log_gamma, digamma, trigamma, tetragamma] {
            assert!(matches!(f(0.0), Err(Error::Domain(_))));
            assert!(matches!(f(-1.5), Err(Error::Domain(_))));
            assert!(matches!(f(f64::NAN), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn recurrence_relations() {
        let mut x = 1e-4;
        while x < 1e6 {
            let tol = 1e-11;
            close(digamma(x + 1.0).unwrap() - digamma(x).unwrap(), 1.0 / x, tol);
            close(
                trigamma(x + 1.0).unwrap() - trigamma(x).unwrap(),
                -1.0 / (x * x),
                tol,
            );
            close(
                tetragamma(x + 1.0).unwrap() - tetragamma(x).unwrap(),
                2.0 / (x * x * x),
                tol,
            );
            x *= 3.7;
        }
    }

    #[test]
    fn derivative_consistency() {
        let mut x: f64 = 0.1;
        while x < 100.0 {
            let h = 1e-5 * x.max(1.0);
            let fd = |f: fn(f64) -> Result<f64>| {
                (f(x + h).unwrap() - f(x - h).unwrap()) / (2.0 * h)
            };
            assert!((fd(log_gamma) - digamma(x).unwrap()).abs() < 1e-6);
            assert!((fd(digamma) - trigamma(x).unwrap()).abs() < 1e-6 * trigamma(x).unwrap().max(1.0));
            assert!((fd(trigamma) - tetragamma(x).unwrap()).abs() < 1e-5 * tetragamma(x).unwrap().abs().max(1.0));
            x *= 1.9;
        }
    }

    #[test]
    fn monotonicity_on_grid() {
        let grid: Vec<f64> = (1..200).map(|i| 0.05 * i as f64).collect();
        for w in grid.windows(2) {
            assert!(digamma(w[1]).unwrap() > digamma(w[0]).unwrap());
            assert!(trigamma(w[1]).unwrap() < trigamma(w[0]).unwrap());
            assert!(trigamma(w[1]).unwrap() > 0.0);
            assert!(tetragamma(w[1]).unwrap() > tetragamma(w[0]).unwrap());
            assert!(tetragamma(w[1]).unwrap() < 0.0);
        }
    }
}
