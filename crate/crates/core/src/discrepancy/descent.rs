//! Local improvement of a finished coloring.

use super::SampleMatrix;

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Steepest descent over flips of one or two signs, until no such flip
/// lowers the discrepancy.
pub(crate) fn descend(matrix: &SampleMatrix, signs: &mut [f64]) {
    let n = matrix.rows();
    let mut sums = vec![0.0; matrix.cols()];
    for (i, &s) in signs.iter().enumerate() {
        axpy(&mut sums, s, matrix.row(i));
    }
    let max_after = |sums: &[f64], flips: &[(usize, f64)]| {
        let mut worst = 0.0f64;
        for (j, &s) in sums.iter().enumerate() {
            let v = flips
                .iter()
                .fold(s, |acc, &(i, si)| acc - 2.0 * si * matrix.get(i, j));
            worst = worst.max(v.abs());
        }
        worst
    };
    loop {
        let current = max_abs(&sums);
        let mut best = (current * (1.0 - 1e-12), None);
        for i in 0..n {
            let d = max_after(&sums, &[(i, signs[i])]);
            if d < best.0 {
                best = (d, Some((i, None)));
            }
            for k in i + 1..n {
                let d = max_after(&sums, &[(i, signs[i]), (k, signs[k])]);
                if d < best.0 {
                    best = (d, Some((i, Some(k))));
                }
            }
        }
        let Some((i, k)) = best.1 else { return };
        for idx in std::iter::once(i).chain(k) {
            axpy(&mut sums, -2.0 * signs[idx], matrix.row(idx));
            signs[idx] = -signs[idx];
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
