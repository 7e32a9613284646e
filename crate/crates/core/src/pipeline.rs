//! Sample, solve, certify.
//!
//! All three entry points share one shape: build a grid sized for the degree
//! bound, sample every polynomial on it, hand the rows to a sign solver, then
//! certify the signed sum on the same grid. They differ in the grid, the
//! input hypothesis, and how the bound is reported:
//!
//! | mode       | grid                  | hypothesis            | reported bound                 |
//! |------------|-----------------------|-----------------------|--------------------------------|
//! | `sup`      | extrema, `M·n` points | samples bounded by 1  | `factor · 6 · √(M·n)`          |
//! | `l2`       | roots of `T_{9n}`     | `∫ p² dθ <= 1`        | `3 · Ĉ · √n`                   |
//! | `degree_d` | extrema, `9·d` points | samples bounded by 1  | `K̂ · √(n · ln(2·9d/n))`        |

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cheb::ChebPoly;
use crate::discrepancy::{discrepancy_of, solve, SampleMatrix, SolverConfig, SolverReport};
use crate::error::{Error, Result};
use crate::grid::{self, Grid};
use crate::signs::SignVector;
use crate::sup_norm::{self, SupCertificate, DEFAULT_DENSE_POINTS};

/// Existential constant for `n` vectors in `R^m` with sup-bounded entries.
pub const SPENCER_CONSTANT: f64 = 6.0;

/// Slack allowed on "bounded by 1" hypotheses for rounding in sampling.
pub const HYPOTHESIS_SLACK: f64 = 1e-12;

/// Relative tolerance used by [`verify`].
pub const VERIFY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceMode {
    Sup,
    L2,
    DegreeD,
}

/// Outcome of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceResult {
    pub mode: BalanceMode,
    /// Number of polynomials.
    pub n: usize,
    /// Degree bound the grid was sized for.
    pub d: usize,
    /// Number of grid columns.
    pub m: usize,
    #[serde(rename = "M")]
    pub multiplier: usize,
    pub signs: SignVector,
    /// `‖Σ x_i v_i‖∞` on the unscaled sample matrix.
    pub grid_discrepancy: f64,
    pub certificate: SupCertificate,
    pub lemma_factor: f64,
    /// Set on the `sup` path only.
    pub spencer_constant: Option<f64>,
    /// Achieved constant in the mode's bound form.
    pub measured_constant: f64,
    pub theoretical_bound: f64,
    /// Factor applied to rows before the solver ran.
    pub row_scale: f64,
    /// Largest row norm seen when checking the hypothesis (sup norm on the
    /// `sup`/`degree_d` paths, ℓ2 on the `l2` path).
    pub input_row_max: f64,
    pub dense_points: usize,
    pub solver_report: SolverReport,
}

/// Instance file: `{"polys": [...], "degree_bound": int}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub polys: Vec<ChebPoly>,
    pub degree_bound: usize,
}

fn check_nonempty(polys: &[ChebPoly]) -> Result<()> {
    if polys.is_empty() {
        Err(Error::Empty("polynomial list"))
    } else {
        Ok(())
    }
}

fn check_degrees(polys: &[ChebPoly], bound: usize, strict: bool) -> Result<()> {
    for (i, p) in polys.iter().enumerate() {
        let bad = if strict { p.degree() >= bound } else { p.degree() > bound };
        if bad {
            return Err(Error::Hypothesis {
                what: format!(
                    "degree of polynomial {i} must be {} {bound}",
                    if strict { "<" } else { "<=" }
                ),
                value: p.degree() as f64,
                bound: bound as f64,
            });
        }
    }
    Ok(())
}

fn check_unit_rows(matrix: &SampleMatrix) -> Result<f64> {
    let worst = matrix.row_inf_norms().iter().copied().fold(0.0, f64::max);
    if let Some(i) = matrix
        .row_inf_norms()
        .iter()
        .position(|&a| a > 1.0 + HYPOTHESIS_SLACK)
    {
        return Err(Error::Hypothesis {
            what: format!("grid samples of polynomial {i} must satisfy |p(x)| <= 1"),
            value: matrix.row_inf_norms()[i],
            bound: 1.0,
        });
    }
    Ok(worst)
}

/// Bound fields derived from the achieved values.
struct Bounds {
    spencer_constant: Option<f64>,
    measured_constant: f64,
    theoretical_bound: f64,
}

fn bounds(mode: BalanceMode, n: usize, m: usize, grid_disc: f64, cert: &SupCertificate) -> Bounds {
    let nf = n as f64;
    match mode {
        BalanceMode::Sup => Bounds {
            spencer_constant: Some(SPENCER_CONSTANT),
            measured_constant: grid_disc / (m as f64).sqrt(),
            theoretical_bound: cert.factor * SPENCER_CONSTANT * (m as f64).sqrt(),
        },
        BalanceMode::L2 => {
            let c_hat = grid_disc / (9.0 * nf / PI).sqrt();
            Bounds {
                spencer_constant: None,
                measured_constant: c_hat,
                theoretical_bound: 3.0 * c_hat * nf.sqrt(),
            }
        }
        BalanceMode::DegreeD => {
            let scale = (nf * (2.0 * m as f64 / nf).ln()).sqrt();
            let k_hat = cert.certified_bound / scale;
            Bounds {
                spencer_constant: None,
                measured_constant: k_hat,
                theoretical_bound: k_hat * scale,
            }
        }
    }
}

struct Run {
    mode: BalanceMode,
    grid: Grid,
    row_scale: f64,
    input_row_max: f64,
    matrix: SampleMatrix,
}

fn finish(run: Run, polys: &[ChebPoly], opts: &Balancer) -> Result<BalanceResult> {
    let solver = &opts.solver;
    let solver_input = if run.row_scale == 1.0 {
        run.matrix.clone()
    } else {
        run.matrix.scaled(run.row_scale)
    };
    let report = solve(&solver_input, solver)?;
    let grid_discrepancy = discrepancy_of(&run.matrix, &report.signs)?;
    let q = ChebPoly::signed_sum(polys, &report.signs)?;
    let degree_bound = run.grid.design_degree();
    let certificate =
        sup_norm::certified_sup_with(&q, degree_bound, &run.grid, opts.dense_points)?;
    if certificate.dense_estimate > certificate.certified_bound {
        return Err(Error::Postcondition(format!(
            "dense estimate {} exceeds certified bound {}",
            certificate.dense_estimate, certificate.certified_bound
        )));
    }
    let m = run.grid.len();
    let b = bounds(run.mode, polys.len(), m, grid_discrepancy, &certificate);
    Ok(BalanceResult {
        mode: run.mode,
        n: polys.len(),
        d: degree_bound,
        m,
        multiplier: run.grid.multiplier(),
        signs: report.signs.clone(),
        grid_discrepancy,
        lemma_factor: certificate.factor,
        certificate,
        spencer_constant: b.spencer_constant,
        measured_constant: b.measured_constant,
        theoretical_bound: b.theoretical_bound,
        row_scale: run.row_scale,
        input_row_max: run.input_row_max,
        dense_points: opts.dense_points,
        solver_report: report,
    })
}

/// Solver settings plus the dense-sampling resolution for certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct Balancer {
    pub solver: SolverConfig,
    pub dense_points: usize,
}

impl Balancer {
    pub fn new(solver: SolverConfig) -> Self {
        Balancer {
            solver,
            dense_points: DEFAULT_DENSE_POINTS,
        }
    }

    pub fn sup(&self, polys: &[ChebPoly], multiplier: usize) -> Result<BalanceResult> {
        sup_impl(polys, self, multiplier)
    }

    pub fn l2(&self, polys: &[ChebPoly]) -> Result<BalanceResult> {
        l2_impl(polys, self)
    }

    pub fn degree_d(&self, polys: &[ChebPoly], d: usize) -> Result<BalanceResult> {
        degree_d_impl(polys, d, self)
    }
}

/// Balance `n` polynomials of degree at most `n` on the `M·n` extrema grid.
///
/// Inputs must sample to at most 1 in absolute value on the grid (the
/// hypothesis the solver step relies on; implied by `‖p_i‖∞ <= 1`).
pub fn balance_sup(
    polys: &[ChebPoly],
    solver: &SolverConfig,
    multiplier: usize,
) -> Result<BalanceResult> {
    Balancer::new(solver.clone()).sup(polys, multiplier)
}

/// Balance `n` polynomials of degree `< n` with `∫₀^π p_i(cos θ)² dθ <= 1` on
/// the roots of `T_{9n}`. Rows are rescaled to unit ℓ2 for the solver.
pub fn balance_l2(polys: &[ChebPoly], solver: &SolverConfig) -> Result<BalanceResult> {
    Balancer::new(solver.clone()).l2(polys)
}

/// Balance `n` polynomials of degree at most `d >= n` on the `9d` extrema grid.
pub fn balance_degree_d(
    polys: &[ChebPoly],
    d: usize,
    solver: &SolverConfig,
) -> Result<BalanceResult> {
    Balancer::new(solver.clone()).degree_d(polys, d)
}

fn sup_impl(polys: &[ChebPoly], solver: &Balancer, multiplier: usize) -> Result<BalanceResult> {
    check_nonempty(polys)?;
    let n = polys.len();
    check_degrees(polys, n, false)?;
    let grid = Grid::extrema(n, multiplier)?;
    let matrix = grid::sample_matrix(polys, &grid)?;
    let input_row_max = check_unit_rows(&matrix)?;
    finish(
        Run {
            mode: BalanceMode::Sup,
            grid,
            row_scale: 1.0,
            input_row_max,
            matrix,
        },
        polys,
        solver,
    )
}

fn l2_impl(polys: &[ChebPoly], solver: &Balancer) -> Result<BalanceResult> {
    check_nonempty(polys)?;
    let n = polys.len();
    check_degrees(polys, n, true)?;
    for (i, p) in polys.iter().enumerate() {
        let mass = grid::l2_theta_norm_sq(p);
        if mass > 1.0 + HYPOTHESIS_SLACK {
            return Err(Error::Hypothesis {
                what: format!("polynomial {i} must satisfy ∫₀^π p(cos θ)² dθ <= 1"),
                value: mass,
                bound: 1.0,
            });
        }
    }
    let grid = Grid::roots_design(n, 9)?;
    let matrix = grid::sample_matrix(polys, &grid)?;
    let row_bound = (9.0 * n as f64 / PI).sqrt();
    let input_row_max = matrix.row_l2_norms().iter().copied().fold(0.0, f64::max);
    if input_row_max > row_bound * (1.0 + 1e-9) {
        return Err(Error::Postcondition(format!(
            "row ℓ2 norm {input_row_max} exceeds the quadrature bound {row_bound}"
        )));
    }
    finish(
        Run {
            mode: BalanceMode::L2,
            grid,
            row_scale: 1.0 / row_bound,
            input_row_max,
            matrix,
        },
        polys,
        solver,
    )
}

fn degree_d_impl(polys: &[ChebPoly], d: usize, solver: &Balancer) -> Result<BalanceResult> {
    check_nonempty(polys)?;
    let n = polys.len();
    if d < n {
        return Err(Error::Hypothesis {
            what: "degree bound d must be at least the number of polynomials".into(),
            value: d as f64,
            bound: n as f64,
        });
    }
    check_degrees(polys, d, false)?;
    let grid = Grid::extrema(d, 9)?;
    let matrix = grid::sample_matrix(polys, &grid)?;
    let input_row_max = check_unit_rows(&matrix)?;
    finish(
        Run {
            mode: BalanceMode::DegreeD,
            grid,
            row_scale: 1.0,
            input_row_max,
            matrix,
        },
        polys,
        solver,
    )
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= VERIFY_RTOL * a.abs().max(b.abs())
}

/// Recompute everything in `result` from `polys` and the stored signs.
///
/// Returns `Ok(false)` on any value mismatch or an unsound certificate;
/// `Err` only when the result cannot refer to these polynomials at all.
pub fn verify(result: &BalanceResult, polys: &[ChebPoly]) -> Result<bool> {
    if polys.len() != result.n {
        return Err(Error::LengthMismatch {
            expected: result.n,
            got: polys.len(),
        });
    }
    if result.signs.len() != result.n {
        return Err(Error::LengthMismatch {
            expected: result.n,
            got: result.signs.len(),
        });
    }
    let grid = &result.certificate.grid;
    if grid.design_degree() != result.d || grid.len() != result.m {
        return Err(Error::InvalidGrid("result grid does not match its d and m".into()));
    }
    let matrix = match grid::sample_matrix(polys, grid) {
        Ok(m) => m,
        Err(Error::DegreeExceedsGrid { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let grid_disc = discrepancy_of(&matrix, &result.signs)?;
    let solver_disc = discrepancy_of(&matrix.scaled(result.row_scale), &result.solver_report.signs)?;
    let q = ChebPoly::signed_sum(polys, &result.signs)?;
    let cert = sup_norm::certified_sup_with(&q, result.d, grid, result.dense_points)?;
    let b = bounds(result.mode, result.n, result.m, grid_disc, &cert);

    let stored = &result.certificate;
    let checks = [
        result.solver_report.signs == result.signs,
        close(result.solver_report.discrepancy, solver_disc),
        close(result.grid_discrepancy, grid_disc),
        close(stored.grid_max, cert.grid_max),
        stored.factor == cert.factor,
        result.lemma_factor == cert.factor,
        close(stored.certified_bound, cert.certified_bound),
        stored.certified_bound == stored.grid_max * stored.factor,
        close(stored.dense_estimate, cert.dense_estimate),
        stored.dense_estimate <= stored.certified_bound,
        result.spencer_constant == b.spencer_constant,
        close(result.measured_constant, b.measured_constant),
        close(result.theoretical_bound, b.theoretical_bound),
    ];
    Ok(checks.iter().all(|&ok| ok))
}
