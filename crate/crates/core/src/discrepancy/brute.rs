use super::{discrepancy_of, SampleMatrix, SolverKind, SolverReport};
use crate::error::{Error, Result};
use crate::signs::SignVector;

/// Largest number of rows exhaustive search accepts.
pub const BRUTE_FORCE_CAP: usize = 24;

/// Steps between exact recomputations of the running column sums.
const RESYNC_EVERY: u64 = 4096;

/// Exact minimum over all sign vectors.
///
/// Walks a Gray code with the first sign pinned to `+1` (the objective is
/// invariant under global negation, and the pinned half always contains the
/// lexicographically smallest optimum). Candidates within a rounding band of
/// the running best are rescored exactly, and ties go to the
/// lexicographically smallest vector with `+1 < -1`.
pub fn solve_brute(matrix: &SampleMatrix) -> Result<SolverReport> {
    let n = matrix.rows();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let free = n - 1;
    let total = 1u64 << free;
    let tol = 1e-9 * (1.0 + matrix.row_inf_norms().iter().sum::<f64>());

    let mut signs = SignVector::all_plus(n);
    let mut bits = 0u64;
    let mut sums = matrix.column_sums(&signs)?;
    let mut best = f64::INFINITY;
    let mut candidates: Vec<(f64, u64)> = Vec::new();

    for step in 0..total {
        if step > 0 {
            let pos = n - 1 - step.trailing_zeros() as usize;
            let old = signs.get(pos);
            signs.flip(pos);
            bits ^= 1 << (n - 1 - pos);
            if step % RESYNC_EVERY == 0 {
                sums = matrix.column_sums(&signs)?;
            } else {
                for (acc, v) in sums.iter_mut().zip(matrix.row(pos)) {
                    *acc -= 2.0 * old * v;
                }
            }
        }
        let d = crate::sup_norm::max_abs(&sums);
        if d <= best + tol {
            best = best.min(d);
            candidates.push((d, bits));
            if candidates.len() >= 1 << 16 {
                candidates.retain(|&(c, _)| c <= best + tol);
            }
        }
    }

    let mut winner: Option<(f64, u64)> = None;
    for &(d, b) in &candidates {
        if d > best + tol {
            continue;
        }
        let exact = discrepancy_of(matrix, &SignVector::from_bits(b, n))?;
        winner = match winner {
            Some((wd, wb)) if wd < exact || (wd == exact && wb < b) => Some((wd, wb)),
            _ => Some((exact, b)),
        };
    }
    let (_, b) = winner.expect("at least one candidate");
    SolverReport::finish(
        matrix,
        SolverKind::Brute,
        0,
        SignVector::from_bits(b, n),
        total,
        false,
    )
}
