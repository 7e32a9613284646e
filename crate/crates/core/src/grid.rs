//! Sampling grids in angle space and Gauss-Chebyshev quadrature.
//!
//! Every grid here is uniform in θ: `θ_k = offset + k·π/(M·n)` for
//! `k = 0..M·n`. The extrema grid has offset 0; the roots grid has offset
//! half a spacing, which puts its points exactly at the roots of `T_{M·n}`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cheb::ChebPoly;
use crate::discrepancy::SampleMatrix;
use crate::error::{Error, Result};

/// Work threshold (degree × grid size) above which grid evaluation goes
/// through an FFT instead of per-point cosine sums.
const FFT_WORK_THRESHOLD: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Extrema,
    Roots,
}

/// Uniform angle grid over `[0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridDescriptor", into = "GridDescriptor")]
pub struct Grid {
    kind: GridKind,
    n: usize,
    multiplier: usize,
    offset: f64,
    spacing: f64,
    thetas: Vec<f64>,
    points: Vec<f64>,
}

/// Serialized form: `{"kind", "n", "M", "offset"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub kind: GridKind,
    pub n: usize,
    #[serde(rename = "M")]
    pub multiplier: usize,
    pub offset: f64,
}

impl Grid {
    fn build(kind: GridKind, n: usize, multiplier: usize) -> Grid {
        let size = n * multiplier;
        let spacing = PI / size as f64;
        let thetas: Vec<f64> = match kind {
            GridKind::Extrema => (0..size).map(|k| k as f64 * PI / size as f64).collect(),
            GridKind::Roots => (0..size)
                .map(|k| (2 * k + 1) as f64 * PI / (2 * size) as f64)
                .collect(),
        };
        let offset = match kind {
            GridKind::Extrema => 0.0,
            GridKind::Roots => PI / (2 * size) as f64,
        };
        let points = thetas.iter().map(|t| t.cos()).collect();
        Grid {
            kind,
            n,
            multiplier,
            offset,
            spacing,
            thetas,
            points,
        }
    }

    /// `M·n` angles `kπ/(M·n)` starting at 0. Requires `n >= 1`, `M >= 4`.
    pub fn extrema(n: usize, multiplier: usize) -> Result<Grid> {
        if n == 0 {
            return Err(Error::InvalidGrid("degree bound n must be at least 1".into()));
        }
        if multiplier < 4 {
            return Err(Error::MultiplierTooSmall(multiplier));
        }
        Ok(Self::build(GridKind::Extrema, n, multiplier))
    }

    /// The `N` roots of `T_N`, angles `(2k+1)π/(2N)`.
    ///
    /// The design degree is `N` with multiplier 1, so this grid is meant for
    /// quadrature; use [`Grid::roots_design`] when it must carry a certificate.
    pub fn roots(size: usize) -> Result<Grid> {
        if size == 0 {
            return Err(Error::InvalidGrid("roots grid needs at least one node".into()));
        }
        Ok(Self::build(GridKind::Roots, size, 1))
    }

    /// Roots of `T_{M·n}`, designed for polynomials of degree at most `n`.
    pub fn roots_design(n: usize, multiplier: usize) -> Result<Grid> {
        if n == 0 {
            return Err(Error::InvalidGrid("degree bound n must be at least 1".into()));
        }
        if multiplier < 4 {
            return Err(Error::MultiplierTooSmall(multiplier));
        }
        Ok(Self::build(GridKind::Roots, n, multiplier))
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Degree bound the grid was sized for.
    pub fn design_degree(&self) -> usize {
        self.n
    }

    pub fn multiplier(&self) -> usize {
        self.multiplier
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            kind: self.kind,
            n: self.n,
            multiplier: self.multiplier,
            offset: self.offset,
        }
    }

    /// Values `p(cos θ_k)` for every grid angle.
    pub fn evaluate(&self, p: &ChebPoly) -> Vec<f64> {
        if (p.degree() + 1) * self.len() > FFT_WORK_THRESHOLD && p.degree() < 2 * self.len() {
            self.evaluate_fft(p)
        } else {
            self.thetas.iter().map(|&t| p.eval_trig(t)).collect()
        }
    }

    /// `Σ_j c_j cos(j·offset + πjk/L)` is the real part of a length-`2L`
    /// inverse DFT of `c_j e^{ij·offset}`. Needs `degree < 2L`.
    pub(crate) fn evaluate_fft(&self, p: &ChebPoly) -> Vec<f64> {
        let size = self.len();
        let len = 2 * size;
        let mut buf = vec![Complex::new(0.0, 0.0); len];
        for (j, &c) in p.coeffs().iter().enumerate() {
            let (s, co) = match self.kind {
                GridKind::Extrema => (0.0, 1.0),
                // j·π/(2L) reduced mod 2π through the integer index
                GridKind::Roots => (((j % (4 * size)) as f64) * PI / len as f64).sin_cos(),
            };
            buf[j % len] += Complex::new(c * co, c * s);
        }
        let fft = FftPlanner::new().plan_fft_inverse(len);
        fft.process(&mut buf);
        buf.truncate(size);
        buf.into_iter().map(|z| z.re).collect()
    }
}

impl TryFrom<GridDescriptor> for Grid {
    type Error = Error;

    fn try_from(d: GridDescriptor) -> Result<Grid> {
        let grid = match (d.kind, d.multiplier) {
            (GridKind::Extrema, m) => Grid::extrema(d.n, m)?,
            (GridKind::Roots, 1) => Grid::roots(d.n)?,
            (GridKind::Roots, m) => Grid::roots_design(d.n, m)?,
        };
        if (grid.offset - d.offset).abs() > 1e-12 {
            return Err(Error::InvalidGrid(format!(
                "offset {} does not match {} grid offset {}",
                d.offset,
                match d.kind {
                    GridKind::Extrema => "extrema",
                    GridKind::Roots => "roots",
                },
                grid.offset
            )));
        }
        Ok(grid)
    }
}

impl From<Grid> for GridDescriptor {
    fn from(g: Grid) -> GridDescriptor {
        g.descriptor()
    }
}

/// Rows `p_i(cos θ_j)` for every polynomial and grid angle.
pub fn sample_matrix(polys: &[ChebPoly], grid: &Grid) -> Result<SampleMatrix> {
    if let Some(p) = polys.iter().find(|p| p.degree() > grid.design_degree()) {
        return Err(Error::DegreeExceedsGrid {
            degree: p.degree(),
            design: grid.design_degree(),
        });
    }
    let rows = polys.iter().map(|p| grid.evaluate(p)).collect();
    SampleMatrix::from_rows(rows)
}

/// `(π/N) Σ_k p(x_k)` over the roots of `T_N`.
///
/// Equals `∫₀^π p(cos θ) dθ` whenever `degree(p) < 2N`. The sum is returned
/// regardless of degree; callers that need exactness check it.
pub fn gauss_cheb_quadrature(p: &ChebPoly, nodes: usize) -> Result<f64> {
    let grid = Grid::roots(nodes)?;
    let sum: f64 = grid.points().iter().map(|&x| p.clenshaw(x)).sum();
    Ok(PI / nodes as f64 * sum)
}

/// `∫₀^π p(cos θ)² dθ`, exact via quadrature with `degree(p) + 1` nodes.
pub fn l2_theta_norm_sq(p: &ChebPoly) -> f64 {
    gauss_cheb_quadrature(&p.square(), p.degree() + 1).expect("at least one node")
}
