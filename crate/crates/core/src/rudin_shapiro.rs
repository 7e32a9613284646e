//! Rudin-Shapiro signs and the Chebyshev lower bound.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::cheb::ChebPoly;
use crate::error::{Error, Result};
use crate::grid::{self, Grid};
use crate::signs::SignVector;
use crate::sup_norm::{self, dense_sup_estimate};

/// Largest `n` for exhaustive lower-bound enumeration.
pub const LOWER_BOUND_CAP: usize = 10;

/// Dense resolution per sign vector in [`lower_bound_check`].
pub const LOWER_BOUND_POINTS: usize = 10_000;

/// `(-1)^(number of overlapping "11" pairs in the binary expansion of i)`.
pub fn rs_sign(i: u64) -> i8 {
    if (i & (i >> 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Signs `x_1..x_n` (indexing starts at 1).
pub fn rs_signs(n: usize) -> SignVector {
    SignVector::new((1..=n as u64).map(rs_sign).collect()).expect("entries are ±1")
}

/// `Σ_{i=1}^n x_i T_i`.
pub fn chebyshev_sum(signs: &SignVector) -> ChebPoly {
    let mut coeffs = vec![0.0];
    coeffs.extend(signs.iter());
    ChebPoly::new(coeffs).expect("finite")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub n: usize,
    pub num_thetas: usize,
    pub signs: SignVector,
    /// `max_θ |Σ x_i e^{iiθ}|` over `θ_k = 2πk/num_thetas`.
    pub circle_max: f64,
    /// `max_θ |Σ x_i cos(iθ)|` over the same angles.
    pub cosine_max: f64,
    /// Certified bound on `‖Σ x_i T_i‖∞` (grid of `9n` extrema).
    pub cheb_sup: f64,
    pub cheb_grid_max: f64,
    /// `circle_max / √n`.
    pub ratio: f64,
}

/// `Σ_{i=1}^n x_i e^{iiθ_k}` at `θ_k = 2πk/len` via one inverse FFT.
fn circle_values(signs: &SignVector, len: usize) -> Vec<Complex<f64>> {
    let mut buf = vec![Complex::new(0.0, 0.0); len];
    for (i, s) in signs.iter().enumerate() {
        buf[(i + 1) % len] += Complex::new(s, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    buf
}

/// Flatness of the Rudin-Shapiro polynomial of length `n` on the unit circle.
///
/// Requires `num_thetas >= 4n`. With `num_thetas` a multiple of `18n` the
/// circle samples contain the certificate grid.
pub fn flatness_report(n: usize, num_thetas: usize) -> Result<FlatnessReport> {
    if n == 0 {
        return Err(Error::Empty("Rudin-Shapiro length"));
    }
    if num_thetas < 4 * n {
        return Err(Error::Hypothesis {
            what: "circle resolution must be at least 4n".into(),
            value: num_thetas as f64,
            bound: (4 * n) as f64,
        });
    }
    let signs = rs_signs(n);
    let values = circle_values(&signs, num_thetas);
    let circle_max = values.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let cosine_max = values.iter().fold(0.0f64, |m, z| m.max(z.re.abs()));

    let q = chebyshev_sum(&signs);
    let grid = Grid::extrema(n, 9)?;
    // dense samples at θ = 2πk/num_thetas in [0, π], i.e. the circle angles
    let cert = sup_norm::certified_sup_with(&q, n, &grid, num_thetas / 2)?;
    Ok(FlatnessReport {
        n,
        num_thetas,
        signs,
        circle_max,
        cosine_max,
        cheb_sup: cert.certified_bound,
        cheb_grid_max: cert.grid_max,
        ratio: circle_max / (n as f64).sqrt(),
    })
}

/// Output of [`lower_bound_check`]: `{"n", "min_sup", "bound"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub min_sup: f64,
    pub bound: f64,
}

/// Minimum over all `2^n` sign vectors of the dense sup of `Σ x_i T_i`,
/// checked against `√(n/2)`.
pub fn lower_bound_check(n: usize) -> Result<LowerBoundReport> {
    if n == 0 {
        return Err(Error::Empty("lower-bound length"));
    }
    if n > LOWER_BOUND_CAP {
        return Err(Error::TooLarge {
            n,
            cap: LOWER_BOUND_CAP,
        });
    }
    let min_sup = (0..1u64 << n)
        .into_par_iter()
        .map(|bits| {
            let q = chebyshev_sum(&SignVector::from_bits(bits, n));
            dense_sup_estimate(&q, LOWER_BOUND_POINTS)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let bound = (n as f64 / 2.0).sqrt();
    if min_sup < bound * (1.0 - 1e-6) {
        return Err(Error::Postcondition(format!(
            "min sup {min_sup} over sign vectors is below sqrt(n/2) = {bound}"
        )));
    }
    Ok(LowerBoundReport { n, min_sup, bound })
}

/// `(1/π)·∫₀^π (Σ x_i T_i)(cos θ)² dθ`, which equals `n/2` for every sign choice.
pub fn l2_identity(n: usize, signs: &SignVector) -> Result<f64> {
    if signs.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: signs.len(),
        });
    }
    Ok(grid::l2_theta_norm_sq(&chebyshev_sum(signs)) / PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Count overlapping "11" pairs by scanning the binary string.
    fn pair_count(i: u64) -> usize {
        let s = format!("{i:b}");
        s.as_bytes().windows(2).filter(|w| w == b"11").count()
    }

    #[test]
    fn rs_sign_examples() {
        assert_eq!(rs_signs(4).as_slice(), &[1, 1, -1, 1]);
        assert_eq!(rs_sign(7), 1);
        for i in 1..5000u64 {
            let expected = if pair_count(i) % 2 == 0 { 1 } else { -1 };
            assert_eq!(rs_sign(i), expected, "i = {i}");
        }
    }

    #[test]
    fn rs_prefix_property() {
        let long = rs_signs(200);
        assert_eq!(&long.as_slice()[..100], rs_signs(100).as_slice());
    }

    #[test]
    fn flatness_small_cases() {
        let r = flatness_report(1, 4).unwrap();
        assert!((r.circle_max - 1.0).abs() < 1e-12);
        assert!((r.ratio - 1.0).abs() < 1e-12);

        // rs_signs(2) = (+1, +1): aligned at θ = 0
        let r = flatness_report(2, 64).unwrap();
        assert!((r.circle_max - 2.0).abs() < 1e-12);

        assert!(flatness_report(8, 31).is_err());
    }

    #[test]
    fn circle_fft_matches_direct_sums() {
        let signs = rs_signs(37);
        let len = 4 * 37;
        let values = circle_values(&signs, len);
        for (k, z) in values.iter().enumerate() {
            let theta = 2.0 * PI * k as f64 / len as f64;
            let (mut c, mut s) = (0.0, 0.0);
            for (i, x) in signs.iter().enumerate() {
                let a = (i + 1) as f64 * theta;
                c += x * a.cos();
                s += x * a.sin();
            }
            assert!((z.re - c).abs() < 1e-10 && (z.im - s).abs() < 1e-10);
        }
    }

    #[test]
    fn real_part_is_dominated() {
        for n in [5, 16, 100, 256] {
            let r = flatness_report(n, 18 * n).unwrap();
            assert!(r.cosine_max <= r.circle_max);
            assert!(r.cheb_grid_max <= r.circle_max + 1e-9);
        }
    }

    #[test]
    fn rs_256_is_flat() {
        let r = flatness_report(256, 8 * 256).unwrap();
        assert!(r.ratio <= 6.0, "ratio {}", r.ratio);
    }

    #[test]
    fn lower_bound_small_cases() {
        assert!((lower_bound_check(1).unwrap().min_sup - 1.0).abs() < 1e-12);
        assert!((lower_bound_check(2).unwrap().min_sup - 2.0).abs() < 1e-12);
        assert!(lower_bound_check(3).unwrap().min_sup >= 1.5f64.sqrt());
        assert!(lower_bound_check(11).is_err());
    }

    #[test]
    fn l2_identity_examples() {
        let v = l2_identity(1, &SignVector::all_plus(1)).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let s = SignVector::new(vec![-1, 1, -1]).unwrap();
        assert!((l2_identity(3, &s).unwrap() - 1.5).abs() < 1e-12);
        let plus = l2_identity(5, &SignVector::all_plus(5)).unwrap();
        let minus = l2_identity(5, &SignVector::all_plus(5).negated()).unwrap();
        assert_eq!(plus, minus);
        assert!(l2_identity(4, &s).is_err());
    }
}
