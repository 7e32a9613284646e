use std::f64::consts::PI;

use polybalance::cli::generate_instance;
use polybalance::discrepancy::{solve, solve_brute, SampleMatrix, SolverConfig, SolverKind};
use polybalance::grid::{sample_matrix, Grid};
use polybalance::pipeline::{verify, Balancer};
use polybalance::rudin_shapiro::flatness_report;
use polybalance::sup_norm::{certified_sup, dense_sup_estimate, lemma_factor};
use polybalance::{random_unit_poly, ChebPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn random_matrix(n: usize, m: usize, seed: u64) -> SampleMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SampleMatrix::from_rows(
        (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect())
            .collect(),
    )
    .unwrap()
}

fn solver_kinds(n: usize) -> Vec<SolverKind> {
    SolverKind::ALL
        .iter()
        .copied()
        .filter(|&k| k != SolverKind::Brute || n <= 16)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bernstein_inequality_numerically(degree in 1usize..=128, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = ChebPoly::new((0..=degree).map(|_| StandardNormal.sample(&mut rng)).collect())
            .unwrap();
        let points = 100_000;
        let p = raw.scaled(1.0 / dense_sup_estimate(&raw, points));
        let h = 1e-6;
        let max_derivative = (0..=points)
            .map(|k| {
                let t = k as f64 * PI / points as f64;
                ((p.eval_trig(t + h) - p.eval_trig(t - h)) / (2.0 * h)).abs()
            })
            .fold(0.0, f64::max);
        prop_assert!(max_derivative <= degree as f64 * (1.0 + 1e-3), "{max_derivative}");
    }

    #[test]
    fn certificate_tightness(degree in 1usize..=64, seed in any::<u64>(), scale in 0.01f64..100.0) {
        let p = random_unit_poly(degree, seed).scaled(scale);
        let c = certified_sup(&p, degree, &Grid::extrema(degree, 9).unwrap()).unwrap();
        prop_assert!(c.grid_max <= c.certified_bound);
        prop_assert_eq!(c.certified_bound, c.grid_max * c.factor);
        let ratio = c.certified_bound / c.dense_estimate;
        prop_assert!((1.0..=c.factor * (1.0 + 1e-6)).contains(&ratio), "{ratio}");
    }

    #[test]
    fn report_integrity(n in 1usize..=14, m in 1usize..=60, seed in any::<u64>()) {
        let matrix = random_matrix(n, m, seed);
        for kind in solver_kinds(n) {
            let r = solve(&matrix, &SolverConfig::new(kind, seed)).unwrap();
            // column sums accumulated in row order, as in any straightforward loop
            let mut sums = vec![0.0f64; m];
            for (i, s) in r.signs.iter().enumerate() {
                for (j, acc) in sums.iter_mut().enumerate() {
                    *acc += s * matrix.get(i, j);
                }
            }
            let expected = sums.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            prop_assert_eq!(r.discrepancy.to_bits(), expected.to_bits(), "{}", kind);
        }
    }

    #[test]
    fn brute_force_value_is_sign_symmetric(n in 1usize..=10, m in 1usize..=40, seed in any::<u64>()) {
        let matrix = random_matrix(n, m, seed);
        let negated = matrix.scaled(-1.0);
        prop_assert_eq!(
            solve_brute(&matrix).unwrap().discrepancy,
            solve_brute(&negated).unwrap().discrepancy
        );
    }

    #[test]
    fn pipeline_soundness_and_factor(n in 1usize..=24, seed in any::<u64>(), solver in 1usize..5) {
        let kind = SolverKind::ALL[solver];
        let inst = generate_instance(n, n, false, seed);
        let r = Balancer::new(SolverConfig::new(kind, seed)).sup(&inst.polys, 9).unwrap();
        prop_assert!(r.certificate.dense_estimate <= r.certificate.certified_bound);
        prop_assert_eq!(r.certificate.certified_bound, r.certificate.grid_max * lemma_factor(9));
        // same quantity via column sums of the samples and via evaluating q
        let gap = (r.certificate.grid_max - r.grid_discrepancy).abs();
        prop_assert!(gap <= 1e-12 * r.grid_discrepancy.max(1e-300), "{gap}");
        prop_assert!(verify(&r, &inst.polys).unwrap());
    }

    #[test]
    fn degree_d_pipeline_soundness(n in 1usize..=12, extra in 0usize..=20, seed in any::<u64>()) {
        let d = n + extra;
        let inst = generate_instance(n, d, false, seed);
        let r = Balancer::new(SolverConfig::new(SolverKind::Greedy, seed))
            .degree_d(&inst.polys, d)
            .unwrap();
        prop_assert!(r.certificate.dense_estimate <= r.certificate.certified_bound);
        prop_assert_eq!(r.m, 9 * d);
    }

    #[test]
    fn real_part_domination(k in 0u32..=10) {
        let n = 1usize << k;
        let r = flatness_report(n, 18 * n).unwrap();
        prop_assert!(r.cheb_grid_max <= r.circle_max + 1e-9);
        prop_assert!(r.cosine_max <= r.circle_max + 1e-9);
    }
}

#[test]
fn l2_rows_match_quadrature_identity() {
    for n in 1..=20usize {
        let inst = generate_instance(n, n, true, n as u64);
        let matrix = sample_matrix(&inst.polys, &Grid::roots_design(n, 9).unwrap()).unwrap();
        let target = (9.0 * n as f64 / PI).sqrt();
        for &r in matrix.row_l2_norms() {
            assert!((r - target).abs() <= 1e-9 * target, "n = {n}: {r} vs {target}");
        }
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let mut out = Vec::new();
            for kind in SolverKind::ALL {
                let inst = generate_instance(10, 10, false, 77);
                out.push(Balancer::new(SolverConfig::new(kind, 5)).sup(&inst.polys, 9).unwrap());
                let inst = generate_instance(10, 10, true, 78);
                out.push(Balancer::new(SolverConfig::new(kind, 5)).l2(&inst.polys).unwrap());
            }
            out
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}
