use super::{SampleMatrix, SolverKind, SolverReport};
use crate::error::{Error, Result};
use crate::signs::SignVector;

/// `√(2·ln(2m)/n)`, the temperature minimizing the unit-row potential bound.
pub fn default_beta(matrix: &SampleMatrix) -> f64 {
    (2.0 * (2.0 * matrix.cols() as f64).ln() / matrix.rows() as f64).sqrt()
}

/// `ln(2m)/β + β·Σ a_i²/2` with `a_i` the row sup norms. For rows bounded by
/// 1 this is at most `ln(2m)/β + β·n/2`.
pub fn potential_bound(matrix: &SampleMatrix, beta: f64) -> f64 {
    let mass: f64 = matrix.row_inf_norms().iter().map(|a| a * a).sum();
    (2.0 * matrix.cols() as f64).ln() / beta + beta * mass / 2.0
}

/// `ln Σ_j cosh(β·(sums_j + s·row_j))` up to the constant `-ln 2`.
fn log_potential(sums: &[f64], row: &[f64], s: f64, beta: f64) -> f64 {
    let peak = sums
        .iter()
        .zip(row)
        .fold(0.0f64, |m, (a, v)| m.max((beta * (a + s * v)).abs()));
    let total: f64 = sums
        .iter()
        .zip(row)
        .map(|(a, v)| {
            let x = beta * (a + s * v);
            (x - peak).exp() + (-x - peak).exp()
        })
        .sum();
    peak + total.ln()
}

/// Derandomized signs: rows are fixed in order, each taking the sign that
/// minimizes `Σ_j cosh(β·partial_sum_j)`; exact ties go to `+1`.
///
/// The discrepancy is checked against [`potential_bound`] before returning.
pub fn solve_greedy_potential(matrix: &SampleMatrix, beta: f64) -> Result<SolverReport> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Hypothesis {
            what: "greedy temperature beta must be positive".into(),
            value: beta,
            bound: 0.0,
        });
    }
    let mut sums = vec![0.0; matrix.cols()];
    let mut signs = Vec::with_capacity(matrix.rows());
    for i in 0..matrix.rows() {
        let row = matrix.row(i);
        let plus = log_potential(&sums, row, 1.0, beta);
        let minus = log_potential(&sums, row, -1.0, beta);
        let s: i8 = if plus <= minus { 1 } else { -1 };
        for (acc, v) in sums.iter_mut().zip(row) {
            *acc += f64::from(s) * v;
        }
        signs.push(s);
    }
    let report = SolverReport::finish(
        matrix,
        SolverKind::Greedy,
        0,
        SignVector::new(signs)?,
        matrix.rows() as u64,
        false,
    )?;
    let bound = potential_bound(matrix, beta);
    if report.discrepancy > bound {
        return Err(Error::Postcondition(format!(
            "greedy discrepancy {} exceeds potential bound {bound}",
            report.discrepancy
        )));
    }
    Ok(report)
}
