use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SampleMatrix, SolverKind, SolverReport};
use crate::error::Result;
use crate::signs::SignVector;

/// Coordinates within this distance of ±1 count as frozen.
const FREEZE_SLACK: f64 = 1e-9;

/// Gram-Schmidt walk over the rows.
///
/// Each step takes the highest-index live row as pivot and moves along
/// `u`, where `u_pivot = 1`, frozen coordinates stay 0, and the other live
/// coordinates minimize `‖v_pivot + Σ u_i v_i‖₂`. The step length is one of
/// the two maximal moves keeping the fractional signs in `[-1, 1]^n`, chosen
/// so the update has mean zero. At least one coordinate freezes per step.
/// The rounded result is polished by flip descent.
pub fn solve_komlos_walk(matrix: &SampleMatrix, seed: u64) -> Result<SolverReport> {
    let (n, m) = (matrix.rows(), matrix.cols());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0f64; n];
    let mut live = vec![true; n];
    let mut steps = 0u64;

    while let Some(pivot) = (0..n).rev().find(|&i| live[i]) {
        let others: Vec<usize> = (0..n).filter(|&i| live[i] && i != pivot).collect();
        let mut u = vec![0.0; n];
        u[pivot] = 1.0;
        if !others.is_empty() {
            let basis = DMatrix::from_fn(m, others.len(), |r, c| matrix.get(others[c], r));
            let target = DVector::from_fn(m, |r, _| -matrix.get(pivot, r));
            let svd = basis.svd(true, true);
            let eps = 1e-12 * svd.singular_values.max().max(1e-300);
            let coeffs = svd.solve(&target, eps).expect("U and V were computed");
            for (k, &i) in others.iter().enumerate() {
                u[i] = coeffs[k];
            }
        }

        // largest steps keeping x ± δu inside the cube
        let (mut up, mut down) = (f64::INFINITY, f64::INFINITY);
        for i in (0..n).filter(|&i| live[i] && u[i].abs() > 1e-14) {
            let (to_hi, to_lo) = ((1.0 - x[i]) / u[i].abs(), (1.0 + x[i]) / u[i].abs());
            if u[i] > 0.0 {
                up = up.min(to_hi);
                down = down.min(to_lo);
            } else {
                up = up.min(to_lo);
                down = down.min(to_hi);
            }
        }
        let delta = if rng.random::<f64>() * (up + down) < down {
            up
        } else {
            -down
        };
        for i in 0..n {
            if !live[i] {
                continue;
            }
            x[i] = (x[i] + delta * u[i]).clamp(-1.0, 1.0);
            if x[i].abs() >= 1.0 - FREEZE_SLACK {
                x[i] = x[i].signum();
                live[i] = false;
            }
        }
        steps += 1;
    }

    let mut signs: Vec<f64> = x.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    super::descent::descend(matrix, &mut signs);
    let signs = signs.iter().map(|&v| v as i8).collect();
    SolverReport::finish(matrix, SolverKind::Komlos, seed, SignVector::new(signs)?, steps, false)
}
