use hpharm_core::energy::{
    cauchy_green, conformal_scaling_residual, density_report, majorisation_gap, r_conformal_check,
    rank,
};
use hpharm_core::{oracle, sampling, tol};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn g(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #[test]
    fn cauchy_green_is_g_self_adjoint_and_psd(seed: u64, m in 1usize..=6, extra in 0usize..=3) {
        let p = sampling::random_point_data(&mut g(seed), m, m + extra);
        let eig = p.principal_stretches_sq();
        let top = eig[0].max(f64::MIN_POSITIVE);
        prop_assert!(eig.iter().all(|&x| x >= -1e-12 * top));
        let alpha = cauchy_green(&p);
        let ga: Vec<f64> = (0..m * m)
            .map(|k| (0..m).map(|l| p.domain_metric()[(k / m, l)] * alpha[(l, k % m)]).sum())
            .collect();
        for i in 0..m {
            for j in 0..m {
                prop_assert!((ga[i * m + j] - ga[j * m + i]).abs() <= 1e-12 * top.max(1.0));
            }
        }
    }

    #[test]
    fn invariants_match_gram_determinants(seed: u64, m in 1usize..=6, extra in 0usize..=3) {
        let p = sampling::random_point_data(&mut g(seed), m, m + extra);
        let eps = density_report(&p).unwrap().eps;
        let gram = oracle::gram_invariants(&p);
        for r in 1..=m {
            let s = eps[r].abs().max(eps[1].powi(r as i32));
            prop_assert!((eps[r] - gram[r]).abs() <= tol::ALGEBRAIC_REL * s, "r={}", r);
        }
    }

    #[test]
    fn invariants_vanish_above_rank(seed: u64, m in 1usize..=6, extra in 0usize..=3, k_frac in 0.0..1.0f64) {
        let n = m + extra;
        let k = ((m + 1) as f64 * k_frac) as usize;
        let p = sampling::rank_deficient_point_data(&mut g(seed), m, n, k);
        prop_assert_eq!(rank(&p, tol::RANK_REL), k);
        let eps = density_report(&p).unwrap().eps;
        let e1 = eps[1].max(1e-3);
        for r in 1..=m {
            let scaled = eps[r].abs() / e1.powi(r as i32);
            if r > k {
                prop_assert!(scaled <= tol::ALGEBRAIC_REL, "r={} eps={}", r, eps[r]);
            } else {
                prop_assert!(eps[r] > 0.0);
            }
        }
    }

    #[test]
    fn codomain_scaling_is_homogeneous(seed: u64, m in 1usize..=6, c in 0.5..=2.0f64) {
        let p = sampling::random_point_data(&mut g(seed), m, m);
        let a = density_report(&p).unwrap().eps;
        let b = density_report(&p.with_scaled_codomain(c).unwrap()).unwrap().eps;
        for r in 1..=m {
            let want = a[r] * c.powi(2 * r as i32);
            prop_assert!((b[r] - want).abs() <= 1e-12 * want.abs().max(a[1].powi(r as i32)));
        }
    }

    #[test]
    fn middle_density_is_conformally_invariant(seed: u64, r in 1usize..=3, rho in 0.25..=4.0f64) {
        let p = sampling::random_point_data(&mut g(seed), 2 * r, 2 * r + 1);
        prop_assert!(conformal_scaling_residual(&p, rho, r).unwrap() <= tol::ALGEBRAIC_REL);
    }

    #[test]
    fn majorisation_gap_is_nonnegative(seed: u64, r in 1usize..=3, conformal: bool) {
        let m = 2 * r;
        let p = if conformal {
            sampling::conformal_point_data(&mut g(seed), m)
        } else {
            sampling::random_point_data(&mut g(seed), m, m)
        };
        let gap = majorisation_gap(&p).unwrap();
        let eps = density_report(&p).unwrap().eps[r];
        prop_assert!(gap >= -tol::MAJORISATION_UNDERSHOOT * eps);
        prop_assert_eq!(gap <= tol::MAJORISATION_EQUALITY * eps, r_conformal_check(&p, r, tol::RANK_REL).unwrap());
        if conformal {
            prop_assert!(gap <= tol::MAJORISATION_EQUALITY * eps);
        }
    }
}
