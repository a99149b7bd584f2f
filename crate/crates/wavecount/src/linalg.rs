//! Small shared helpers for dense complex vectors and matrices.

use num_complex::Complex64;

pub(crate) fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|z| z.is_finite())
}

pub(crate) fn norm_sqr_sum(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

/// Max elementwise deviation of `A^H A` from the identity, for a row-major
/// `rows x cols` matrix. Measures how far the columns are from orthonormal.
pub(crate) fn max_gram_identity_deviation(rows: usize, cols: usize, data: &[Complex64]) -> f64 {
    debug_assert_eq!(data.len(), rows * cols);
    let mut max_dev = 0.0_f64;
    for a in 0..cols {
        for b in a..cols {
            let mut dot = Complex64::new(0.0, 0.0);
            for r in 0..rows {
                dot += data[r * cols + a].conj() * data[r * cols + b];
            }
            let target = if a == b { 1.0 } else { 0.0 };
            let dev = (dot - target).norm();
            // The Gram matrix is Hermitian, so the upper triangle covers it.
            // A NaN deviation must win so callers reject the matrix.
            if dev.is_nan() || dev > max_dev {
                max_dev = dev;
            }
        }
    }
    max_dev
}
