//! Balancing bounded polynomials with ±1 signs.
//!
//! Given polynomials `p_1..p_n` bounded on `[-1, 1]`, the pipeline samples
//! them on a uniform angle grid, chooses signs with a vector-balancing
//! solver, and converts the grid bound on `q = Σ x_i p_i` into a certified
//! bound on `‖q‖∞` over the whole interval.
//!
//! Modules:
//! - [`cheb`]: Chebyshev-basis polynomials, evaluation and basis changes.
//! - [`grid`]: angle grids, sample matrices and Gauss-Chebyshev quadrature.
//! - [`sup_norm`]: grid certificates and dense sup estimates.
//! - [`discrepancy`]: sign solvers.
//! - [`pipeline`]: sample, solve, certify; plus independent verification.
//! - [`rudin_shapiro`]: Rudin-Shapiro signs, flatness and lower-bound checks.
//! - [`cli`]: the command-line front end.

pub mod cheb;
pub mod cli;
pub mod discrepancy;
pub mod error;
pub mod grid;
pub mod pipeline;
pub mod rudin_shapiro;
pub mod signs;
pub mod sup_norm;

pub use cheb::{random_l2_unit_poly, random_unit_poly, ChebPoly, MonomialPoly};
pub use discrepancy::{
    discrepancy_of, solve, SampleMatrix, SolverConfig, SolverKind, SolverReport,
};
pub use error::{Error, Result};
pub use grid::Grid;
pub use pipeline::{balance_degree_d, balance_l2, balance_sup, verify, BalanceResult};
pub use signs::SignVector;
pub use sup_norm::{certified_sup, SupCertificate};
