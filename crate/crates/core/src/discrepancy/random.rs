use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{discrepancy_of, SampleMatrix, SolverKind, SolverReport};
use crate::error::Result;
use crate::signs::SignVector;

/// The uniformly random sign vectors `solve_random` tries, in draw order.
pub fn random_sign_draws(n: usize, seed: u64, restarts: usize) -> Vec<SignVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..restarts)
        .map(|_| {
            let signs = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            SignVector::new(signs).expect("entries are ±1")
        })
        .collect()
}

/// Best of `restarts` uniformly random sign vectors; earliest draw wins ties.
pub fn solve_random(matrix: &SampleMatrix, seed: u64, restarts: usize) -> Result<SolverReport> {
    let restarts = restarts.max(1);
    let mut best: Option<(f64, SignVector)> = None;
    for signs in random_sign_draws(matrix.rows(), seed, restarts) {
        let d = discrepancy_of(matrix, &signs)?;
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, signs));
        }
    }
    let (_, signs) = best.expect("restarts >= 1");
    SolverReport::finish(matrix, SolverKind::Random, seed, signs, restarts as u64, false)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::discrepancy::solve_brute;

    #[test]
    fn single_row_is_row_norm() {
        let m = SampleMatrix::from_rows(vec![vec![0.2, -0.9, 0.4]]).unwrap();
        for seed in 0..10 {
            assert_eq!(solve_random(&m, seed, 3).unwrap().discrepancy, 0.9);
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let m = SampleMatrix::from_rows(vec![vec![0.2, -0.9], vec![0.7, 0.1], vec![-0.3, 0.3]])
            .unwrap();
        assert_eq!(solve_random(&m, 4, 10).unwrap(), solve_random(&m, 4, 10).unwrap());
    }

    #[test]
    fn exhaustive_draws_reach_brute_optimum() {
        let rows = vec![vec![0.9, -0.2, 0.4], vec![0.1, 0.8, -0.5], vec![-0.6, 0.3, 0.7]];
        let m = SampleMatrix::from_rows(rows).unwrap();
        let n = m.rows();
        let restarts = 1 << n;
        // find a seed whose draws cover all 2^n vectors
        let seed = (0..100_000u64)
            .find(|&s| {
                random_sign_draws(n, s, restarts)
                    .into_iter()
                    .collect::<HashSet<_>>()
                    .len()
                    == restarts
            })
            .expect("some seed draws every vector once");
        assert_eq!(
            solve_random(&m, seed, restarts).unwrap().discrepancy,
            solve_brute(&m).unwrap().discrepancy
        );
    }
}
