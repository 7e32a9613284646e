//! Chebyshev-norm estimates and grid certificates.
//!
//! If a degree-`n` polynomial is bounded by `g` on a uniform angle grid of
//! spacing `π/(M·n)` (offset at most one spacing), Bernstein's inequality
//! bounds the polynomial everywhere on `[-1, 1]` by `g / (1 - π/M)`. For the
//! default `M = 9` the factor is rounded up to `5/3`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cheb::ChebPoly;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Dense-sampling resolution used for the diagnostic estimate.
pub const DEFAULT_DENSE_POINTS: usize = 100_000;

/// A global bound on `‖p‖∞` derived from grid samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupCertificate {
    pub grid_max: f64,
    pub factor: f64,
    pub certified_bound: f64,
    /// Dense-sampling lower estimate of the sup. Diagnostic only.
    pub dense_estimate: f64,
    pub grid: Grid,
}

/// `5/3` for `M = 9`, otherwise `1 / (1 - π/M)`.
pub fn lemma_factor(multiplier: usize) -> f64 {
    if multiplier == 9 {
        5.0 / 3.0
    } else {
        1.0 / (1.0 - PI / multiplier as f64)
    }
}

/// `max_k |p(cos θ_k)|` over the grid.
pub fn grid_max(p: &ChebPoly, grid: &Grid) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::Empty("grid"));
    }
    Ok(max_abs(&grid.evaluate(p)))
}

pub(crate) fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Certify `‖p‖∞ <= grid_max · factor` for `degree(p) <= n`.
pub fn certified_sup(p: &ChebPoly, n: usize, grid: &Grid) -> Result<SupCertificate> {
    certified_sup_with(p, n, grid, DEFAULT_DENSE_POINTS)
}

pub fn certified_sup_with(
    p: &ChebPoly,
    n: usize,
    grid: &Grid,
    dense_points: usize,
) -> Result<SupCertificate> {
    if p.degree() > n {
        return Err(Error::DegreeExceedsGrid {
            degree: p.degree(),
            design: n,
        });
    }
    check_certifiable(grid, n)?;
    let grid_max = grid_max(p, grid)?;
    let factor = lemma_factor(grid.multiplier());
    Ok(SupCertificate {
        grid_max,
        factor,
        certified_bound: grid_max * factor,
        dense_estimate: dense_sup_estimate(p, dense_points),
        grid: grid.clone(),
    })
}

/// Structural checks that make the certificate sound for degree bound `n`.
fn check_certifiable(grid: &Grid, n: usize) -> Result<()> {
    let m = grid.multiplier();
    if m < 4 {
        return Err(Error::MultiplierTooSmall(m));
    }
    if n == 0 || n > grid.design_degree() {
        return Err(Error::InvalidGrid(format!(
            "degree bound {n} is not covered by a grid designed for degree {}",
            grid.design_degree()
        )));
    }
    let design = grid.design_degree();
    if grid.len() != m * design {
        return Err(Error::InvalidGrid(format!(
            "grid has {} points, expected M·n = {}",
            grid.len(),
            m * design
        )));
    }
    let spacing = PI / (m * design) as f64;
    if (grid.spacing() - spacing).abs() > 1e-15 * spacing.max(1.0) {
        return Err(Error::InvalidGrid("spacing is not π/(M·n)".into()));
    }
    if grid.offset() < 0.0 || grid.offset() > spacing {
        return Err(Error::InvalidGrid("offset outside [0, spacing]".into()));
    }
    Ok(())
}

/// Max of `|p(cos θ)|` over `θ_k = kπ/num_points`, `k = 0..=num_points`.
///
/// Resolutions that divide one another give nested sample sets, so the
/// estimate is monotone under such refinement.
pub fn dense_sup_estimate(p: &ChebPoly, num_points: usize) -> f64 {
    let intervals = num_points.max(1);
    let step = PI / intervals as f64;
    (0..intervals + 1)
        .into_par_iter()
        .with_min_len(4096)
        .map(|k| p.clenshaw((k as f64 * step).cos()).abs())
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cheb::random_unit_poly;

    #[test]
    fn grid_max_examples() {
        let g = Grid::extrema(1, 9).unwrap();
        assert_eq!(grid_max(&ChebPoly::basis(1), &g).unwrap(), 1.0);
        assert!(grid_max(&ChebPoly::basis(1), &Grid::roots(1).unwrap()).unwrap() < 1e-16);
        assert!((grid_max(&ChebPoly::basis(9), &g).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn factors() {
        assert_eq!(lemma_factor(9), 5.0 / 3.0);
        assert!(lemma_factor(9) >= 1.0 / (1.0 - PI / 9.0));
        assert!((lemma_factor(4) - 1.0 / (1.0 - PI / 4.0)).abs() < 1e-15);
        assert!(lemma_factor(100) < lemma_factor(10));
    }

    #[test]
    fn certificate_examples() {
        let g = Grid::extrema(5, 9).unwrap();
        let c = certified_sup(&ChebPoly::basis(5), 5, &g).unwrap();
        assert!(c.grid_max <= 1.0 + 1e-15);
        assert!(c.certified_bound <= 5.0 / 3.0 + 1e-15);
        assert!((c.dense_estimate - 1.0).abs() < 1e-12);
        assert_eq!(c.certified_bound, c.grid_max * c.factor);

        let z = certified_sup(&ChebPoly::zero(), 5, &g).unwrap();
        assert_eq!(z.certified_bound, 0.0);
    }

    #[test]
    fn certificate_rejects_bad_preconditions() {
        let g = Grid::extrema(5, 9).unwrap();
        assert!(certified_sup(&ChebPoly::basis(6), 5, &g).is_err());
        assert!(certified_sup(&ChebPoly::basis(6), 6, &g).is_err());
        // quadrature-only roots grid has M = 1
        let r = Grid::roots(45).unwrap();
        assert!(certified_sup(&ChebPoly::basis(5), 5, &r).is_err());
        let r = Grid::roots_design(5, 9).unwrap();
        assert!(certified_sup(&ChebPoly::basis(5), 5, &r).is_ok());
    }

    #[test]
    fn certificate_sound_on_random_polys() {
        let g = Grid::extrema(40, 9).unwrap();
        for seed in 0..100 {
            let p = random_unit_poly(40, seed).scaled(1.0 + seed as f64);
            let c = certified_sup(&p, 40, &g).unwrap();
            assert!(c.dense_estimate <= c.certified_bound, "seed {seed}");
            assert!(c.certified_bound / c.dense_estimate <= c.factor * (1.0 + 1e-6));
        }
    }

    #[test]
    fn dense_estimate_examples() {
        let v = dense_sup_estimate(&ChebPoly::basis(3), 10_000);
        assert!((1.0 - 1e-6..=1.0).contains(&v));
        for pts in [2, 17, 1000] {
            assert_eq!(dense_sup_estimate(&ChebPoly::constant(2.0), pts), 2.0);
        }
        for seed in 0..10 {
            let p = random_unit_poly(20, seed);
            assert!(dense_sup_estimate(&p, 100_000) >= dense_sup_estimate(&p, 1_000));
        }
    }

    #[test]
    fn certificate_json_shape() {
        let c = certified_sup(&ChebPoly::basis(1), 1, &Grid::extrema(1, 9).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        for key in ["grid_max", "factor", "certified_bound", "dense_estimate", "grid"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["grid"]["kind"], "extrema");
        let back: SupCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}
