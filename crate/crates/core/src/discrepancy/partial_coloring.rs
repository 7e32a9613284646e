//! Recursive partial coloring by a constrained random walk.
//!
//! Fractional signs start at 0 and take small Gaussian steps inside the cube
//! `[-1, 1]^n`. A phase keeps every column's change in signed sum below a
//! cap; once a column reaches its cap the walk continues orthogonally to it.
//! Coordinates that reach the cube boundary freeze, and the walk continues
//! orthogonally to them as well. A phase ends when half of the coordinates
//! that were free at its start have frozen; the next phase recurses on the
//! remaining ones with caps recomputed for the smaller active set.
//!
//! The rounded coloring is then polished by flip descent, which never
//! increases the discrepancy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{SampleMatrix, SolverKind, SolverReport};
use crate::error::Result;
use crate::signs::SignVector;

/// Walk constants. `None` fields resolve per instance (see the accessors).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PCParams {
    pub step_size: Option<f64>,
    pub max_steps: Option<u64>,
    /// `K` in the per-phase cap `K·√(ln(2m/n_active))·‖column on active set‖₂`.
    pub phase_cap_multiplier: f64,
    pub freeze_threshold: Option<f64>,
}

impl Default for PCParams {
    fn default() -> Self {
        PCParams {
            step_size: None,
            max_steps: None,
            phase_cap_multiplier: 0.5,
            freeze_threshold: None,
        }
    }
}

impl PCParams {
    /// Default `64·n·ln(2m)`, at least 64.
    pub fn resolved_max_steps(&self, n: usize, m: usize) -> u64 {
        self.max_steps.unwrap_or_else(|| {
            ((64.0 * n as f64 * (2.0 * m as f64).ln()).ceil() as u64).max(64)
        })
    }

    /// Default `4/√(max_steps)`: per-coordinate spread reaches 4 within the budget.
    pub fn resolved_step_size(&self, n: usize, m: usize) -> f64 {
        self.step_size
            .unwrap_or_else(|| 4.0 / (self.resolved_max_steps(n, m) as f64).sqrt())
    }

    /// Default `1 - 1/(8n)`.
    pub fn resolved_freeze_threshold(&self, n: usize) -> f64 {
        self.freeze_threshold
            .unwrap_or_else(|| 1.0 - 1.0 / (8.0 * n as f64))
    }
}

/// Orthonormal basis of the directions the walk must avoid, restricted to
/// the currently free coordinates.
struct Blocked {
    basis: Vec<Vec<f64>>,
}

impl Blocked {
    fn new() -> Self {
        Blocked { basis: Vec::new() }
    }

    /// Add `v` (masked to free coordinates) if it is not already spanned.
    fn push(&mut self, mut v: Vec<f64>, free: &[bool]) {
        for (x, &f) in v.iter_mut().zip(free) {
            if !f {
                *x = 0.0;
            }
        }
        let norm0 = norm(&v);
        if norm0 == 0.0 {
            return;
        }
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &self.basis {
                let d = dot(&v, b);
                axpy(&mut v, -d, b);
            }
        }
        let r = norm(&v);
        if r > 1e-10 * norm0 {
            v.iter_mut().for_each(|x| *x /= r);
            self.basis.push(v);
        }
    }

    fn project_out(&self, v: &mut [f64]) {
        for _ in 0..2 {
            for b in &self.basis {
                let d = dot(v, b);
                axpy(v, -d, b);
            }
        }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

struct Walk<'a> {
    matrix: &'a SampleMatrix,
    x: Vec<f64>,
    free: Vec<bool>,
    sums: Vec<f64>,
}

impl Walk<'_> {
    fn column(&self, j: usize) -> Vec<f64> {
        (0..self.matrix.rows()).map(|i| self.matrix.get(i, j)).collect()
    }

    fn column_norm_on_free(&self, j: usize) -> f64 {
        (0..self.matrix.rows())
            .filter(|&i| self.free[i])
            .map(|i| self.matrix.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    fn resync(&mut self) {
        self.sums.iter_mut().for_each(|s| *s = 0.0);
        for i in 0..self.matrix.rows() {
            axpy(&mut self.sums, self.x[i], self.matrix.row(i));
        }
    }

    fn set(&mut self, i: usize, value: f64) {
        let delta = value - self.x[i];
        if delta != 0.0 {
            axpy(&mut self.sums, delta, self.matrix.row(i));
            self.x[i] = value;
        }
    }
}

/// Recursive partial coloring; deterministic given `seed`.
///
/// If the step budget runs out, remaining fractional signs are rounded to
/// the nearer sign (0 rounds to `+1`) and the report is flagged.
pub fn solve_partial_coloring(
    matrix: &SampleMatrix,
    params: &PCParams,
    seed: u64,
) -> Result<SolverReport> {
    let (n, m) = (matrix.rows(), matrix.cols());
    let max_steps = params.resolved_max_steps(n, m);
    let gamma = params.resolved_step_size(n, m);
    let threshold = params.resolved_freeze_threshold(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut walk = Walk {
        matrix,
        x: vec![0.0; n],
        free: vec![true; n],
        sums: vec![0.0; m],
    };
    let mut steps = 0u64;
    let mut flagged = false;

    'phases: while walk.free_count() > 0 {
        let active = walk.free_count();
        let goal = active.div_ceil(2);
        let lambda = params.phase_cap_multiplier
            * (2.0 * m as f64 / active as f64).ln().max(1.0).sqrt();
        let caps: Vec<f64> = (0..m)
            .map(|j| lambda * walk.column_norm_on_free(j))
            .collect();
        let start = walk.sums.clone();
        let mut tight = vec![false; m];
        let mut tight_list: Vec<usize> = Vec::new();
        let mut frozen_here = 0usize;
        let mut blocked = Blocked::new();

        while frozen_here < goal {
            if steps >= max_steps {
                flagged = true;
                break 'phases;
            }
            if blocked.dim() >= walk.free_count() {
                break;
            }
            let mut dir: Vec<f64> = (0..n)
                .map(|i| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    if walk.free[i] {
                        g
                    } else {
                        0.0
                    }
                })
                .collect();
            blocked.project_out(&mut dir);
            if norm(&dir) < 1e-12 {
                break;
            }
            dir.iter_mut().for_each(|d| *d *= gamma);

            // truncate so no coordinate leaves the cube and no column passes its cap
            let mut t = 1.0f64;
            for i in (0..n).filter(|&i| walk.free[i] && dir[i] != 0.0) {
                let limit = if dir[i] > 0.0 { 1.0 - walk.x[i] } else { -1.0 - walk.x[i] };
                t = t.min(limit / dir[i]);
            }
            let mut delta_sums = vec![0.0; m];
            for (i, &d) in dir.iter().enumerate() {
                if d != 0.0 {
                    axpy(&mut delta_sums, d, matrix.row(i));
                }
            }
            for j in (0..m).filter(|&j| !tight[j] && delta_sums[j] != 0.0) {
                let moved = walk.sums[j] - start[j];
                let limit = if delta_sums[j] > 0.0 { caps[j] - moved } else { -caps[j] - moved };
                t = t.min((limit / delta_sums[j]).max(0.0));
            }
            for (i, &d) in dir.iter().enumerate() {
                if d != 0.0 {
                    walk.x[i] = (walk.x[i] + t * d).clamp(-1.0, 1.0);
                }
            }
            axpy(&mut walk.sums, t, &delta_sums);
            steps += 1;
            if steps % 256 == 0 {
                walk.resync();
            }

            let mut free_changed = false;
            for i in 0..n {
                if walk.free[i] && walk.x[i].abs() >= threshold {
                    walk.free[i] = false;
                    frozen_here += 1;
                    free_changed = true;
                }
            }
            let mut new_tight = Vec::new();
            for j in 0..m {
                if !tight[j] && (walk.sums[j] - start[j]).abs() >= caps[j] * (1.0 - 1e-12) {
                    tight[j] = true;
                    tight_list.push(j);
                    new_tight.push(j);
                }
            }
            if free_changed {
                blocked = Blocked::new();
                for &j in &tight_list {
                    blocked.push(walk.column(j), &walk.free);
                }
            } else {
                for j in new_tight {
                    blocked.push(walk.column(j), &walk.free);
                }
            }
        }

        // round this phase's frozen coordinates onto the cube vertices
        for i in 0..n {
            if !walk.free[i] && walk.x[i].abs() != 1.0 {
                walk.set(i, walk.x[i].signum());
            }
        }
        walk.resync();
    }

    let mut signs: Vec<f64> = walk
        .x
        .iter()
        .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
        .collect();
    super::descent::descend(matrix, &mut signs);
    let signs: Vec<i8> = signs.iter().map(|&v| v as i8).collect();
    SolverReport::finish(
        matrix,
        SolverKind::PartialColoring,
        seed,
        SignVector::new(signs)?,
        steps,
        flagged,
    )
}
