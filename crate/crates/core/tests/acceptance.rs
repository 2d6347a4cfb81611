//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use hpharm_core::energy;
use hpharm_core::invariants;
use hpharm_core::lie3::{
    self, check_predicates, check_predicates_with_coupling, classify_algebra, classify_sets,
    AlgebraClass, FrameVector, MilnorData, SetClassification, StructureConstants, SubsetDescriptor,
};
use hpharm_core::oracle;
use hpharm_core::par::{map_trials, Execution};
use hpharm_core::sampling;
use hpharm_core::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + id)
}

fn trial_rng(id: u64, t: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64((0x5eed_0000 + id) ^ t.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn md_of(l: [f64; 3]) -> MilnorData {
    classify_algebra(&StructureConstants::new(l).unwrap())
}

fn random_algebra(rng: &mut ChaCha8Rng, class: AlgebraClass) -> (StructureConstants, MilnorData) {
    let degenerate = rng.random_bool(0.5);
    let l = sampling::random_lambda(rng, class, degenerate);
    let sc = StructureConstants::new(sampling::scramble(rng, l)).unwrap();
    let md = classify_algebra(&sc);
    (sc, md)
}

fn max_mu2(md: &MilnorData) -> f64 {
    md.mu
        .iter()
        .fold(0.0_f64, |m, x| m.max(x * x))
        .max(f64::MIN_POSITIVE)
}

const REPRESENTATIVES: [[f64; 3]; 15] = [
    [0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [1.0, 0.0, -1.0],
    [2.0, 0.0, -1.0],
    [1.0, 1.0, 0.0],
    [2.0, 1.0, 0.0],
    [1.0, 1.0, -1.0],
    [2.0, 1.0, -1.0],
    [3.0, 1.0, -1.0],
    [1.0, 1.0, 1.0],
    [2.0, 1.0, 1.0],
    [3.0, 1.0, 1.0],
    [2.0, 2.0, 1.0],
    [4.0, 1.0, 1.0],
    [3.0, 2.0, 1.0],
];

/// Uniform half the time, otherwise a point of one of the classified sets,
/// so that the sets themselves are exercised and not only their complement.
fn sample_sigma(rng: &mut ChaCha8Rng, sets: &SetClassification) -> FrameVector {
    if rng.random_bool(0.5) {
        return sampling::random_unit(rng);
    }
    let pick = [&sets.h1, &sets.h2, &sets.z1, &sets.z2][rng.random_range(0..4)];
    pick.sample(rng)
        .unwrap_or_else(|| sampling::random_unit(rng))
}

fn c1_minors_vs_newton() -> Outcome {
    let mut g = rng(1);
    let mut worst = 0.0_f64;
    for m in 2..=6 {
        for _ in 0..1000 {
            let a = sampling::random_matrix(&mut g, m);
            let x = invariants::elementary_invariants_minors(&a).unwrap();
            let y = invariants::elementary_invariants_newton(&a).unwrap();
            for r in 1..=m {
                let scale = x[r]
                    .abs()
                    .max(y[r].abs())
                    .max(a.frobenius_norm().powi(r as i32));
                worst = worst.max((x[r] - y[r]).abs() / scale);
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("5000 matrices, dims 2..6, max rel {worst:.2e} (bound 1e-10)"),
    )
}

fn c2_cayley_hamilton() -> Outcome {
    // same matrices as criterion 1
    let mut g = rng(1);
    let mut worst = 0.0_f64;
    for m in 2..=6 {
        for _ in 0..1000 {
            let a = sampling::random_matrix(&mut g, m);
            worst = worst.max(invariants::cayley_hamilton_residual(&a).unwrap());
        }
    }
    outcome(
        worst <= 1e-9,
        format!("5000 matrices, max scaled {worst:.2e} (bound 1e-9)"),
    )
}

fn c3_trace_identity() -> Outcome {
    let mut g = rng(3);
    let mut worst = 0.0_f64;
    for m in 2..=6 {
        for _ in 0..1000 {
            let a = sampling::random_matrix(&mut g, m);
            for r in 1..=m {
                worst = worst.max(invariants::trace_identity_residual(&a, r).unwrap());
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("5000 matrices, all r, max rel {worst:.2e} (bound 1e-10)"),
    )
}

fn c4_derivative_fd() -> Outcome {
    let mut g = rng(4);
    let mut worst = 0.0_f64;
    for t in 0..1000 {
        let m = 2 + t % 5;
        let a = sampling::random_matrix(&mut g, m);
        let b = sampling::random_matrix(&mut g, m);
        for r in 1..=m {
            let exact = invariants::invariant_derivative(&a, &b, r).unwrap();
            let fd = oracle::central_difference(|h| {
                invariants::elementary_invariants_minors(&(&a + &b.scaled(h))).unwrap()[r]
            });
            worst = worst.max((exact - fd).abs());
        }
    }
    outcome(
        worst <= 1e-6,
        format!("1000 trials, max abs {worst:.2e} (bound 1e-6)"),
    )
}

fn c5_conformal_invariance() -> Outcome {
    let mut g = rng(5);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let n = g.random_range(4..=6);
        let p = sampling::random_point_data(&mut g, 4, n);
        let rho = g.random_range(0.25..=4.0);
        worst = worst.max(energy::conformal_scaling_residual(&p, rho, 2).unwrap());
    }
    outcome(
        worst <= 1e-10,
        format!("100 (point, rho) pairs, max rel {worst:.2e} (bound 1e-10)"),
    )
}

fn c6_majorisation() -> Outcome {
    let mut g = rng(6);
    let mut undershoot = 0.0_f64;
    let mut mismatches = 0;
    let mut conformal_max = 0.0_f64;
    let mut generic_min = f64::INFINITY;
    for t in 0..400 {
        let m = [2, 4, 6][t % 3];
        let r = m / 2;
        let p = if t < 200 {
            sampling::conformal_point_data(&mut g, m)
        } else {
            let n = m + g.random_range(0..=2);
            sampling::random_point_data(&mut g, m, n)
        };
        let gap = energy::majorisation_gap(&p).unwrap();
        let eps = energy::density_report(&p).unwrap().eps[r];
        undershoot = undershoot.max(-gap / eps);
        let verdict = energy::r_conformal_check(&p, r, tol::RANK_REL).unwrap();
        if (gap <= tol::MAJORISATION_EQUALITY) != verdict {
            mismatches += 1;
        }
        if t < 200 {
            conformal_max = conformal_max.max(gap);
        } else {
            generic_min = generic_min.min(gap);
        }
    }
    outcome(
        undershoot <= tol::MAJORISATION_UNDERSHOOT && mismatches == 0,
        format!(
            "200 conformal + 200 generic, max undershoot {undershoot:.2e}, max conformal gap {conformal_max:.2e}, \
             min generic gap {generic_min:.2e}, {mismatches} verdict mismatches"
        ),
    )
}

fn c7_wedge_norm() -> Outcome {
    let mut g = rng(7);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let class = sampling::random_class(&mut g);
        let (_, md) = random_algebra(&mut g, class);
        let sigma = sampling::random_unit(&mut g) * g.random_range(0.2..=3.0);
        let ric = sigma.hadamard(md.ricci);
        let direct = 0.25 * sigma.norm_sq() * ric.norm_sq();
        let gram = oracle::wedge_norm_sq_gram(&md, &sigma);
        let closed = lie3::wedge_norm_sq(&md, &sigma);
        let scale = (max_mu2(&md) * sigma.norm_sq()).powi(2);
        worst = worst
            .max((closed - gram).abs() / scale)
            .max((direct - gram).abs() / scale);
    }
    outcome(
        worst <= 1e-11,
        format!("1000 (lambda, sigma), max rel {worst:.2e} (bound 1e-11)"),
    )
}

fn c8_divergence() -> Outcome {
    let mut g = rng(8);
    let mut worst = 0.0_f64;
    for t in 0..1200 {
        let (sc, md) = random_algebra(&mut g, AlgebraClass::ALL[t % 6]);
        let s3 = max_mu2(&md).powf(1.5);
        let sigma = sampling::random_unit(&mut g);
        let n1 = lie3::vertical_newton_1(&md, &sigma).unwrap();
        let closed = lie3::divergence_newton_1(&md, &sigma);
        worst = worst.max((closed - lie3::divergence_invariant_tensor(&md, &n1)).norm() / s3);
        worst = worst.max((closed - oracle::divergence_by_connection(&md, &n1)).norm() / s3);
        let h = classify_sets(&sc).h1.sample(&mut g).unwrap();
        let n2 = lie3::vertical_newton_2(&md, &h).unwrap();
        let closed2 = lie3::divergence_newton_2(&md, &h);
        let s5 = s3 * max_mu2(&md);
        worst = worst.max((closed2 - lie3::divergence_invariant_tensor(&md, &n2)).norm() / s5);
        worst = worst.max((closed2 - oracle::divergence_by_connection(&md, &n2)).norm() / s5);
    }
    outcome(
        worst <= 1e-12,
        format!("1200 algebras, both Newton tensors, max rel {worst:.2e} (bound 1e-12)"),
    )
}

fn c9_tension_oracle() -> Outcome {
    let mut g = rng(9);
    let mut worst = 0.0_f64;
    for class in AlgebraClass::ALL {
        for _ in 0..1000 {
            let (_, md) = random_algebra(&mut g, class);
            let sigma = sampling::random_unit(&mut g);
            let s = max_mu2(&md);
            let t1 = lie3::tension_t1(&md, &sigma) - oracle::assembled_tension(&md, &sigma, 1);
            let t2 =
                lie3::tension_t2(&md, &sigma).unwrap() - oracle::assembled_tension(&md, &sigma, 2);
            worst = worst.max(t1.norm() / s).max(t2.norm() / (s * s));
        }
    }
    outcome(
        worst <= 1e-10,
        format!("6 classes x 1000 unit fields, max rel {worst:.2e} (bound 1e-10)"),
    )
}

fn c10_sphere_multiplier() -> Outcome {
    let mut g = rng(10);
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut algebras: Vec<StructureConstants> = REPRESENTATIVES
        .iter()
        .map(|&l| StructureConstants::new(l).unwrap())
        .collect();
    for t in 0..300 {
        algebras.push(random_algebra(&mut g, AlgebraClass::ALL[t % 6]).0);
    }
    for sc in &algebras {
        let md = classify_algebra(sc);
        let sets = classify_sets(sc);
        for r in 1..=2 {
            for _ in 0..50 {
                let sigma = sets.harmonic(r).sample(&mut g).unwrap();
                let t = lie3::tension(&md, &sigma, r).unwrap();
                let e = lie3::vertical_energy(&md, &sigma, r).unwrap();
                worst = worst.max((t.dot(&sigma) + r as f64 * e).abs());
                count += 1;
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("{count} fields sampled from H_1, H_2, max abs {worst:.2e} (bound 1e-10)"),
    )
}

fn c11_first_variation() -> Outcome {
    let mut g = rng(11);
    let mut worst = 0.0_f64;
    for t in 0..1000 {
        let (_, md) = random_algebra(&mut g, AlgebraClass::ALL[t % 6]);
        let sigma = sampling::random_unit(&mut g);
        let zeta = sampling::random_tangent(&mut g, &sigma);
        for r in 1..=2 {
            worst = worst.max(lie3::first_variation_fd(&md, &sigma, &zeta, r).unwrap());
        }
    }
    outcome(
        worst <= 1e-6,
        format!("1000 (algebra, sigma, zeta), r = 1, 2, max abs {worst:.2e} (bound 1e-6)"),
    )
}

#[derive(Deserialize)]
struct GoldenRow {
    lambda: [f64; 3],
    algebra_class: AlgebraClass,
    #[serde(rename = "H1")]
    h1: SubsetDescriptor,
    #[serde(rename = "H2")]
    h2: SubsetDescriptor,
    #[serde(rename = "H3")]
    h3: SubsetDescriptor,
    #[serde(rename = "Z1")]
    z1: SubsetDescriptor,
    #[serde(rename = "Z2")]
    z2: SubsetDescriptor,
    #[serde(rename = "Z3")]
    z3: SubsetDescriptor,
}

fn c12_golden() -> Outcome {
    let text = include_str!("golden/classification.json");
    let rows: Vec<GoldenRow> = serde_json::from_str(text).expect("golden file parses");
    let mut bad = Vec::new();
    for row in &rows {
        let sc = StructureConstants::new(row.lambda).unwrap();
        let got = classify_sets(&sc);
        let class = classify_algebra(&sc).algebra_class;
        let want = [&row.h1, &row.h2, &row.h3, &row.z1, &row.z2, &row.z3];
        let have = [&got.h1, &got.h2, &got.h3, &got.z1, &got.z2, &got.z3];
        let sets_match = want.iter().zip(have).all(|(w, h)| *w == h);
        if !sets_match || class != row.algebra_class {
            bad.push(format!("{:?}", row.lambda));
        }
    }
    outcome(
        bad.is_empty() && rows.len() == REPRESENTATIVES.len(),
        format!(
            "{} representatives, mismatches: [{}]",
            rows.len(),
            bad.join(", ")
        ),
    )
}

fn c13_harmonic_union() -> Outcome {
    let counterexamples: Vec<u64> =
        map_trials(Execution::default(), REPRESENTATIVES.len() as u64, |i| {
            let sc = StructureConstants::new(REPRESENTATIVES[i as usize]).unwrap();
            let md = classify_algebra(&sc);
            let sets = classify_sets(&sc);
            let mut g = trial_rng(13, i);
            let mut bad = 0;
            for _ in 0..10_000 {
                let sigma = sample_sigma(&mut g, &sets);
                let p: Vec<_> = (1..=3)
                    .map(|r| check_predicates(&md, &sigma, r).unwrap())
                    .collect();
                for r in 2..=3 {
                    let by_predicates = p[r - 1].r_harmonic_unit
                        == (p[r - 2].r_harmonic_unit || p[r - 1].r_parallel);
                    let by_sets = sets.harmonic(r).contains(&sigma, tol::MEMBERSHIP_ABS)
                        == (sets.harmonic(r - 1).contains(&sigma, tol::MEMBERSHIP_ABS)
                            || sets.parallel(r).contains(&sigma, tol::MEMBERSHIP_ABS));
                    let agree = p[r - 1].r_harmonic_unit
                        == sets.harmonic(r).contains(&sigma, tol::MEMBERSHIP_ABS);
                    if !(by_predicates && by_sets && agree) {
                        bad += 1;
                    }
                }
            }
            bad
        });
    let total: u64 = counterexamples.iter().sum();
    outcome(
        total == 0,
        format!("15 representatives x 10^4 fields, r = 2, 3, {total} counterexamples"),
    )
}

fn c14_horizontal_subalgebra() -> Outcome {
    // lambda_1 = lambda_2 - lambda_3 with a vanishing constant: e(1,1)
    // (1, 0, -1), subalgebra span(e_3, e_1)
    let md = md_of([1.0, 0.0, -1.0]);
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut max3 = 0.0_f64;
    let mut g = rng(14);
    for _ in 0..1000 {
        let t: f64 = g.random_range(0.0..std::f64::consts::TAU);
        if (t.sin() * t.cos()).abs() < 1e-3 {
            continue;
        }
        let sigma = FrameVector::new(t.cos(), 0.0, t.sin());
        let h = |r| lie3::horizontal_tension(&md, &sigma, r).unwrap().norm();
        min1 = min1.min(h(1));
        min2 = min2.min(h(2));
        max3 = max3.max(h(3));
    }
    outcome(
        min1 > 0.0 && min2 > 0.0 && max3 <= 1e-10,
        format!("(1,0,-1), circle C13: min |h_1| {min1:.2e}, min |h_2| {min2:.2e}, max |h_3| {max3:.2e} (bound 1e-10)"),
    )
}

fn c15_skyrmion() -> Outcome {
    let counterexamples: Vec<u64> = map_trials(Execution::default(), 500, |t| {
        let mut g = trial_rng(15, t);
        let (sc, md) = random_algebra(&mut g, AlgebraClass::ALL[(t % 6) as usize]);
        let sets = classify_sets(&sc);
        let c = 10f64.powf(g.random_range(-2.0..=2.0));
        let mut bad = 0;
        for _ in 0..1000 {
            let sigma = sample_sigma(&mut g, &sets);
            let p = check_predicates_with_coupling(&md, &sigma, 2, c).unwrap();
            if p.twisted_2_skyrmion != sets.h1.contains(&sigma, tol::MEMBERSHIP_ABS) {
                bad += 1;
            }
        }
        bad
    });
    let total: u64 = counterexamples.iter().sum();
    outcome(
        total == 0,
        format!("500 (algebra, c) x 10^3 fields, {total} counterexamples"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("invariant oracle equivalence", c1_minors_vs_newton),
        ("Cayley-Hamilton", c2_cayley_hamilton),
        ("trace identity", c3_trace_identity),
        (
            "invariant derivative vs finite differences",
            c4_derivative_fd,
        ),
        ("conformal invariance at m = 2r", c5_conformal_invariance),
        ("majorisation", c6_majorisation),
        ("wedge norm identity", c7_wedge_norm),
        ("divergence closed forms", c8_divergence),
        (
            "tension closed forms vs assembled oracle",
            c9_tension_oracle,
        ),
        ("sphere-bundle multiplier", c10_sphere_multiplier),
        ("first variation vs finite differences", c11_first_variation),
        ("classification golden file", c12_golden),
        ("H_r = H_(r-1) u Z_r", c13_harmonic_union),
        (
            "horizontal tension in a 2-dim subalgebra",
            c14_horizontal_subalgebra,
        ),
        ("twisted 2-skyrmions are H_1", c15_skyrmion),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {:<44} {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
