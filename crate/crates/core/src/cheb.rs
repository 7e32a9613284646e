//! Polynomials in the Chebyshev basis.
//!
//! A [`ChebPoly`] stores coefficients `c_0..c_d` of `T_0..T_d`. Since
//! `T_j(cos θ) = cos(jθ)`, the same coefficients describe the cosine series
//! `Σ c_j cos(jθ)`, which is the form the grids and certificates work in.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::grid::{self, Grid};
use crate::signs::SignVector;
use crate::sup_norm;

/// Largest monomial degree accepted by [`ChebPoly::from_monomial`].
pub const MONOMIAL_DEGREE_CAP: usize = 4096;

/// Multiplier used when normalizing random instances.
pub const DEFAULT_MULTIPLIER: usize = 9;

/// Polynomial in the Chebyshev basis. Never empty; the zero polynomial is `[0.0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct ChebPoly {
    coeffs: Vec<f64>,
}

/// Polynomial in the power basis `1, x, x², …`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly {
    pub coeffs: Vec<f64>,
}

/// On-disk polynomial: `{"basis": "chebyshev" | "monomial", "coeffs": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "lowercase", deny_unknown_fields)]
pub enum PolyJson {
    Chebyshev { coeffs: Vec<f64> },
    Monomial { coeffs: Vec<f64> },
}

impl TryFrom<PolyJson> for ChebPoly {
    type Error = Error;

    fn try_from(p: PolyJson) -> Result<Self> {
        match p {
            PolyJson::Chebyshev { coeffs } => ChebPoly::new(coeffs),
            PolyJson::Monomial { coeffs } => ChebPoly::from_monomial(&MonomialPoly::new(coeffs)),
        }
    }
}

impl From<ChebPoly> for PolyJson {
    fn from(p: ChebPoly) -> Self {
        PolyJson::Chebyshev { coeffs: p.coeffs }
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|c| !c.is_finite()) {
        Some(i) => Err(Error::NonFinite(format!("{what} entry {i}"))),
        None => Ok(()),
    }
}

impl ChebPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        check_finite(&coeffs, "coefficient")?;
        if coeffs.is_empty() {
            return Ok(Self::zero());
        }
        Ok(ChebPoly { coeffs })
    }

    pub fn zero() -> Self {
        ChebPoly { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        ChebPoly { coeffs: vec![c] }
    }

    /// `T_k`.
    pub fn basis(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        ChebPoly { coeffs }
    }

    /// Index of the last stored coefficient (not trimmed of zeros).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `Σ |c_j|`, an upper bound on the norm and the scale used in tolerances.
    pub fn l1_coeffs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Evaluate at `x` by Clenshaw's backward recurrence.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("evaluation point {x}")));
        }
        Ok(self.clenshaw(x))
    }

    pub(crate) fn clenshaw(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        let two_x = 2.0 * x;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ck in c[1..].iter().rev() {
            let b0 = ck + two_x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        c[0] + x * b1 - b2
    }

    /// `Σ c_j cos(jθ)`, generated by rotating `(cos jθ, sin jθ)`.
    ///
    /// The rotation is reseeded from `cos`/`sin` every 32 terms so the
    /// accumulated phase error stays at a few ulps.
    pub fn eval_trig(&self, theta: f64) -> f64 {
        const RESEED: usize = 32;
        let (step_sin, step_cos) = theta.sin_cos();
        let (mut s, mut c) = (0.0f64, 1.0f64);
        let mut acc = 0.0;
        for (j, &cj) in self.coeffs.iter().enumerate() {
            if j % RESEED == 0 && j > 0 {
                (s, c) = (j as f64 * theta).sin_cos();
            }
            acc += cj * c;
            (c, s) = (c * step_cos - s * step_sin, s * step_cos + c * step_sin);
        }
        acc
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ChebPoly {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Product via `T_a T_b = (T_{a+b} + T_{|a-b|}) / 2`.
    pub fn mul(&self, other: &ChebPoly) -> ChebPoly {
        let mut out = vec![0.0; self.degree() + other.degree() + 1];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                let half = 0.5 * ca * cb;
                out[a + b] += half;
                out[a.abs_diff(b)] += half;
            }
        }
        ChebPoly { coeffs: out }
    }

    pub fn square(&self) -> ChebPoly {
        self.mul(self)
    }

    /// Convert from the power basis, rejecting degrees above [`MONOMIAL_DEGREE_CAP`].
    pub fn from_monomial(m: &MonomialPoly) -> Result<Self> {
        Self::from_monomial_capped(m, MONOMIAL_DEGREE_CAP)
    }

    /// Horner's scheme carried out in the Chebyshev basis, using
    /// `x·T_0 = T_1` and `x·T_j = (T_{j+1} + T_{j-1}) / 2`.
    pub fn from_monomial_capped(m: &MonomialPoly, cap: usize) -> Result<Self> {
        check_finite(&m.coeffs, "monomial coefficient")?;
        let degree = m.coeffs.len().saturating_sub(1);
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        if m.coeffs.is_empty() {
            return Ok(Self::zero());
        }
        // double-double keeps the result close to correctly rounded, which
        // matters for the ill-conditioned trip back to the power basis
        let zero = TwoFloat::from(0.0);
        let mut acc = vec![zero; degree + 1];
        let mut len = 1;
        acc[0] = TwoFloat::from(m.coeffs[degree]);
        for &a in m.coeffs[..degree].iter().rev() {
            let mut next = vec![zero; degree + 1];
            next[1] += acc[0];
            for j in 1..len {
                next[j + 1] += acc[j] * 0.5;
                next[j - 1] += acc[j] * 0.5;
            }
            next[0] += a;
            len += 1;
            acc = next;
        }
        let acc: Vec<f64> = acc.iter().map(|&v| f64::from(v)).collect();
        Ok(ChebPoly { coeffs: acc })
    }

    /// Convert to the power basis with a Clenshaw recurrence over polynomials.
    ///
    /// Power-basis coefficients of high-degree `T_k` are huge and cancel, so
    /// the recurrence runs in double-double arithmetic.
    pub fn to_monomial(&self) -> MonomialPoly {
        let d = self.degree();
        let zero = TwoFloat::from(0.0);
        let mut b1 = vec![zero; d + 2];
        let mut b2 = vec![zero; d + 2];
        for k in (1..=d).rev() {
            // b0 = c_k + 2x·b1 - b2
            let mut b0 = vec![zero; d + 2];
            b0[0] = TwoFloat::from(self.coeffs[k]);
            for i in 0..=d {
                b0[i + 1] += b1[i] * 2.0;
                b0[i] -= b2[i];
            }
            b2 = b1;
            b1 = b0;
        }
        // c_0 + x·b1 - b2
        let mut out = vec![zero; d + 2];
        out[0] = TwoFloat::from(self.coeffs[0]);
        for i in 0..=d {
            out[i + 1] += b1[i];
            out[i] -= b2[i];
        }
        MonomialPoly {
            coeffs: out[..=d].iter().map(|&v| f64::from(v)).collect(),
        }
    }

    /// Coefficient-wise `Σ signs_i · polys_i`; degree is the largest input degree.
    pub fn signed_sum(polys: &[ChebPoly], signs: &SignVector) -> Result<ChebPoly> {
        if polys.is_empty() {
            return Err(Error::Empty("polynomial list"));
        }
        if polys.len() != signs.len() {
            return Err(Error::LengthMismatch {
                expected: polys.len(),
                got: signs.len(),
            });
        }
        let degree = polys.iter().map(ChebPoly::degree).max().unwrap_or(0);
        let mut coeffs = vec![0.0; degree + 1];
        for (p, s) in polys.iter().zip(signs.iter()) {
            for (acc, &c) in coeffs.iter_mut().zip(&p.coeffs) {
                *acc += s * c;
            }
        }
        Ok(ChebPoly { coeffs })
    }
}

impl MonomialPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        MonomialPoly { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

fn gaussian_coeffs(degree: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..=degree).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Shrink `p` by one-ulp steps until `measure(p) <= 1` holds exactly.
fn settle_at_most_one(mut p: ChebPoly, measure: impl Fn(&ChebPoly) -> f64) -> ChebPoly {
    let mut value = measure(&p);
    while value > 1.0 {
        p = p.scaled(1.0 - 4.0 * f64::EPSILON);
        value = measure(&p);
    }
    p
}

fn unit_certificate_bound(p: &ChebPoly) -> f64 {
    let n = p.degree().max(1);
    let grid = Grid::extrema(n, DEFAULT_MULTIPLIER).expect("M = 9 is valid");
    sup_norm::grid_max(p, &grid).expect("extrema grid is non-empty")
        * sup_norm::lemma_factor(DEFAULT_MULTIPLIER)
}

/// Random polynomial whose certified sup (own degree, `M = 9`) is at most 1.
///
/// Coefficients are standard normal draws, divided by the certified bound.
pub fn random_unit_poly(degree: usize, seed: u64) -> ChebPoly {
    let mut coeffs = gaussian_coeffs(degree, seed);
    if coeffs.iter().all(|&c| c == 0.0) {
        coeffs[0] = 1.0;
    }
    let raw = ChebPoly { coeffs };
    let bound = unit_certificate_bound(&raw);
    settle_at_most_one(raw.scaled(1.0 / bound), unit_certificate_bound)
}

/// Random polynomial with `∫₀^π p(cos θ)² dθ <= 1`, normalized to equality
/// up to rounding.
pub fn random_l2_unit_poly(degree: usize, seed: u64) -> ChebPoly {
    let mut coeffs = gaussian_coeffs(degree, seed);
    if coeffs.iter().all(|&c| c == 0.0) {
        coeffs[0] = 1.0;
    }
    let raw = ChebPoly { coeffs };
    let norm = grid::l2_theta_norm_sq(&raw).sqrt();
    settle_at_most_one(raw.scaled(1.0 / norm), grid::l2_theta_norm_sq)
}
