//! Sign solvers for vector balancing.
//!
//! Every solver takes a [`SampleMatrix`] (one row per vector, one column per
//! coordinate) and returns signs that keep the largest signed column sum
//! small. Reported discrepancies are always recomputed with
//! [`discrepancy_of`] from the final signs, never carried over from solver
//! internals.

mod brute;
mod descent;
mod greedy;
mod komlos;
mod partial_coloring;
mod random;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use brute::{solve_brute, BRUTE_FORCE_CAP};
pub use greedy::{default_beta, potential_bound, solve_greedy_potential};
pub use komlos::solve_komlos_walk;
pub use partial_coloring::{solve_partial_coloring, PCParams};
pub use random::{random_sign_draws, solve_random};

use crate::error::{Error, Result};
use crate::signs::SignVector;

/// Dense row-major matrix of sampled values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SampleMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    row_inf: Vec<f64>,
    row_l2: Vec<f64>,
}

impl SampleMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("matrix rows"));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::Empty("matrix columns"));
        }
        let mut entries = Vec::with_capacity(n * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::LengthMismatch {
                    expected: m,
                    got: row.len(),
                });
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("matrix entry ({i}, {j})")));
            }
            entries.extend(row);
        }
        let row_inf = entries
            .chunks(m)
            .map(|r| r.iter().fold(0.0f64, |a, v| a.max(v.abs())))
            .collect();
        let row_l2 = entries
            .chunks(m)
            .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
            .collect();
        Ok(SampleMatrix {
            rows: n,
            cols: m,
            entries,
            row_inf,
            row_l2,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row_inf_norms(&self) -> &[f64] {
        &self.row_inf
    }

    pub fn row_l2_norms(&self) -> &[f64] {
        &self.row_l2
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn scaled(&self, factor: f64) -> SampleMatrix {
        SampleMatrix::from_rows(
            self.entries
                .chunks(self.cols)
                .map(|r| r.iter().map(|v| v * factor).collect())
                .collect(),
        )
        .expect("scaling preserves shape")
    }

    /// Signed column sums `Σ_i s_i v_ij`, accumulated in row order.
    pub fn column_sums(&self, signs: &SignVector) -> Result<Vec<f64>> {
        if signs.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                got: signs.len(),
            });
        }
        let mut sums = vec![0.0; self.cols];
        for (i, s) in signs.iter().enumerate() {
            for (acc, v) in sums.iter_mut().zip(self.row(i)) {
                *acc += s * v;
            }
        }
        Ok(sums)
    }
}

impl TryFrom<Vec<Vec<f64>>> for SampleMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        SampleMatrix::from_rows(rows)
    }
}

impl From<SampleMatrix> for Vec<Vec<f64>> {
    fn from(m: SampleMatrix) -> Self {
        m.to_rows()
    }
}

/// `max_j |Σ_i signs_i · v_ij|`.
pub fn discrepancy_of(matrix: &SampleMatrix, signs: &SignVector) -> Result<f64> {
    Ok(crate::sup_norm::max_abs(&matrix.column_sums(signs)?))
}

/// Output of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub solver: String,
    pub seed: u64,
    pub signs: SignVector,
    pub discrepancy: f64,
    pub iterations: u64,
    /// Set when the solver hit its step budget and rounded a partial state.
    pub flagged: bool,
}

impl SolverReport {
    pub(crate) fn finish(
        matrix: &SampleMatrix,
        kind: SolverKind,
        seed: u64,
        signs: SignVector,
        iterations: u64,
        flagged: bool,
    ) -> Result<SolverReport> {
        let discrepancy = discrepancy_of(matrix, &signs)?;
        Ok(SolverReport {
            solver: kind.to_string(),
            seed,
            signs,
            discrepancy,
            iterations,
            flagged,
        })
    }
}

/// Registered solver identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "brute")]
    Brute,
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "greedy")]
    Greedy,
    #[serde(rename = "pcolor")]
    PartialColoring,
    #[serde(rename = "komlos")]
    Komlos,
}

impl SolverKind {
    pub const ALL: [SolverKind; 5] = [
        SolverKind::Brute,
        SolverKind::Random,
        SolverKind::Greedy,
        SolverKind::PartialColoring,
        SolverKind::Komlos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Brute => "brute",
            SolverKind::Random => "random",
            SolverKind::Greedy => "greedy",
            SolverKind::PartialColoring => "pcolor",
            SolverKind::Komlos => "komlos",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSolver(s.to_string()))
    }
}

/// Solver choice plus every knob a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub seed: u64,
    pub restarts: usize,
    /// Greedy temperature; `None` means [`default_beta`].
    pub beta: Option<f64>,
    pub pc: PCParams,
}

impl SolverConfig {
    pub fn new(kind: SolverKind, seed: u64) -> Self {
        SolverConfig {
            kind,
            seed,
            restarts: 50,
            beta: None,
            pc: PCParams::default(),
        }
    }
}

/// Run the configured solver.
pub fn solve(matrix: &SampleMatrix, config: &SolverConfig) -> Result<SolverReport> {
    match config.kind {
        SolverKind::Brute => solve_brute(matrix),
        SolverKind::Random => solve_random(matrix, config.seed, config.restarts),
        SolverKind::Greedy => {
            let beta = config.beta.unwrap_or_else(|| default_beta(matrix));
            solve_greedy_potential(matrix, beta)
        }
        SolverKind::PartialColoring => solve_partial_coloring(matrix, &config.pc, config.seed),
        SolverKind::Komlos => solve_komlos_walk(matrix, config.seed),
    }
}
