//! Finite-difference oracles for the likelihood quantities: the score,
//! information, third-cumulant, and mean-adjustment identities are checked
//! against numerical derivatives that never touch the closed forms.

use nalgebra::DMatrix;
use proptest::prelude::*;

use dirichlet_br::model::{
    expected_info, loglik_kernel, mean_br_adjustment, score, suff_stats, third_cumulant_matrix,
    Dataset, ParamVector, SufficientStats,
};
use dirichlet_br::polygamma::{digamma, tetragamma, trigamma};
use dirichlet_br::sampling::RngStream;

mod util;
use util::{random_config, RandomConfig};

fn kernel_at(alpha: &[f64], stats: &SufficientStats) -> f64 {
    loglik_kernel(&ParamVector::new(alpha.to_vec()).unwrap(), stats).unwrap()
}

fn info_at(alpha: &[f64], n: usize) -> DMatrix<f64> {
    expected_info(&ParamVector::new(alpha.to_vec()).unwrap(), n)
        .unwrap()
        .matrix()
        .clone()
}

#[test]
fn score_matches_gradient_of_kernel() {
    let mut stream = RngStream::new(1001);
    for _ in 0..200 {
        let RandomConfig { alpha, n, stats } = random_config(&mut stream);
        let u = score(&ParamVector::new(alpha.clone()).unwrap(), &stats).unwrap();
        for r in 0..alpha.len() {
            let h = 1e-4 * alpha[r];
            let mut up = alpha.clone();
            let mut dn = alpha.clone();
            up[r] += h;
            dn[r] -= h;
            let fd = (kernel_at(&up, &stats) - kernel_at(&dn, &stats)) / (2.0 * h);
            assert!(
                (u[r] - fd).abs() <= 1e-5,
                "score mismatch at alpha={alpha:?} n={n} r={r}: {} vs {fd}",
                u[r]
            );
        }
    }
}

#[test]
fn expected_info_matches_negative_hessian() {
    let mut stream = RngStream::new(1002);
    for _ in 0..200 {
        let RandomConfig { alpha, n, stats } = random_config(&mut stream);
        let m = alpha.len();
        let info = info_at(&alpha, n);
        let scale = info.amax();
        for a in 0..m {
            for b in 0..m {
                let ha = 1e-4 * alpha[a];
                let hb = 1e-4 * alpha[b];
                let mut pp = alpha.clone();
                let mut pm = alpha.clone();
                let mut mp = alpha.clone();
                let mut mm = alpha.clone();
                pp[a] += ha;
                pp[b] += hb;
                pm[a] += ha;
                pm[b] -= hb;
                mp[a] -= ha;
                mp[b] += hb;
                mm[a] -= ha;
                mm[b] -= hb;
                let hess = (kernel_at(&pp, &stats) - kernel_at(&pm, &stats)
                    - kernel_at(&mp, &stats)
                    + kernel_at(&mm, &stats))
                    / (4.0 * ha * hb);
                assert!(
                    (info[(a, b)] + hess).abs() <= 1e-4 * scale,
                    "info mismatch at alpha={alpha:?} n={n} ({a},{b}): {} vs {}",
                    info[(a, b)],
                    -hess
                );
            }
        }
    }
}

#[test]
fn third_cumulant_matches_info_derivative() {
    let mut stream = RngStream::new(1003);
    for _ in 0..200 {
        let RandomConfig { alpha, n, .. } = random_config(&mut stream);
        let m = alpha.len();
        for r in 0..m {
            let p = third_cumulant_matrix(&ParamVector::new(alpha.clone()).unwrap(), n, r)
                .unwrap();
            let h = 1e-4 * alpha[r];
            let mut up = alpha.clone();
            let mut dn = alpha.clone();
            up[r] += h;
            dn[r] -= h;
            let fd = (info_at(&up, n) - info_at(&dn, n)) / (2.0 * h);
            let scale = p.amax().max(1e-30);
            assert!(
                (&p - &fd).amax() <= 1e-4 * scale,
                "P_{r} mismatch at alpha={alpha:?} n={n}"
            );
        }
    }
}

#[test]
fn mean_adjustment_matches_half_logdet_gradient() {
    // canonical family identity: A* = ½ ∇ log det i(α)
    let log_det = |alpha: &[f64], n: usize| info_at(alpha, n).determinant().ln();
    let mut stream = RngStream::new(1004);
    for _ in 0..200 {
        let RandomConfig { alpha, n, .. } = random_config(&mut stream);
        let a_star =
            mean_br_adjustment(&ParamVector::new(alpha.clone()).unwrap(), n).unwrap();
        for r in 0..alpha.len() {
            let h = 1e-4 * alpha[r];
            let mut up = alpha.clone();
            let mut dn = alpha.clone();
            up[r] += h;
            dn[r] -= h;
            let fd = 0.5 * (log_det(&up, n) - log_det(&dn, n)) / (2.0 * h);
            assert!(
                (a_star[r] - fd).abs() <= 1e-5,
                "A* mismatch at alpha={alpha:?} n={n} r={r}: {} vs {fd}",
                a_star[r]
            );
        }
    }
}

proptest! {
    #[test]
    fn polygamma_recurrences_hold(x in 1e-4f64..1e6) {
        let tol = 1e-11 * (1.0f64 / x).max(1.0);
        prop_assert!((digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x).abs() <= tol);
        let tol = 1e-11 * (1.0 / (x * x)).max(1.0);
        prop_assert!((trigamma(x + 1.0).unwrap() - trigamma(x).unwrap() + 1.0 / (x * x)).abs() <= tol);
        let tol = 1e-11 * (2.0 / (x * x * x)).max(1.0);
        prop_assert!((tetragamma(x + 1.0).unwrap() - tetragamma(x).unwrap() - 2.0 / (x * x * x)).abs() <= tol);
    }

    #[test]
    fn sherman_morrison_inverse_residual_is_tiny(
        alpha in prop::collection::vec(1e-3f64..1e4, 2..6),
        n in 1usize..100,
    ) {
        let pv = ParamVector::new(alpha).unwrap();
        let m = pv.dim();
        let info = expected_info(&pv, n).unwrap();
        let residual = (info.matrix() * info.inverse() - DMatrix::<f64>::identity(m, m)).amax();
        prop_assert!(residual <= 1e-9, "residual {residual}");
    }

    #[test]
    fn kernel_depends_only_on_sufficient_stats(
        mut rows in prop::collection::vec(
            (0.05f64..1.0, 0.05f64..1.0, 0.05f64..1.0),
            2..8,
        ),
        seed in 0u64..1000,
    ) {
        // shuffling rows changes nothing downstream of suff_stats
        let rows: Vec<Vec<f64>> = rows
            .drain(..)
            .map(|(a, b, c)| {
                let s = a + b + c;
                vec![a / s, b / s, c / s]
            })
            .collect();
        let mut shuffled = rows.clone();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        let sa = suff_stats(&Dataset::new(rows).unwrap());
        let sb = suff_stats(&Dataset::new(shuffled).unwrap());
        let alpha = ParamVector::new(vec![0.7, 1.3, 2.9]).unwrap();
        let la = loglik_kernel(&alpha, &sa).unwrap();
        let lb = loglik_kernel(&alpha, &sb).unwrap();
        prop_assert!((la - lb).abs() <= 1e-9 * la.abs().max(1.0));
        let ua = score(&alpha, &sa).unwrap();
        let ub = score(&alpha, &sb).unwrap();
        prop_assert!((ua - ub).amax() <= 1e-9);
    }
}
