//! Construction and validation of the single-particle modal register and its
//! classical-field counterpart.
//!
//! A register is a normalized vector of complex amplitudes over `N` abstract
//! modes, indexed `0..N-1`. Labels that physically span several degrees of
//! freedom are flattened row-major onto this single index; nothing downstream
//! depends on the factorization. [`ModeBasis`] attaches concrete orthonormal
//! mode functions on a spatial grid when correlation functions are needed.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg;

/// Allowed deviation of a state's squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Allowed deviation of a mode-function Gram matrix from the identity.
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegisterError {
    #[error("amplitude vector has zero norm")]
    ZeroNorm,
    #[error("amplitude vector contains a non-finite entry or overflows the norm")]
    NonFinite,
    #[error("register needs at least 2 modes, got {0}")]
    TooSmall(usize),
    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },
    #[error("grid size {grid_size} smaller than mode count {n_modes}")]
    GridTooSmall { grid_size: usize, n_modes: usize },
    #[error("mode functions not orthonormal: max Gram deviation {max_deviation:.3e}")]
    NotOrthonormal { max_deviation: f64 },
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A single particle in superposition over `N` modes: the quantum register.
///
/// The amplitudes always carry unit Euclidean norm within [`NORM_TOLERANCE`];
/// constructors normalize or verify. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState {
    amplitudes: Vec<Complex64>,
}

impl SingleParticleState {
    /// Builds a state from raw amplitudes, dividing by their Euclidean norm.
    pub fn new(mut amplitudes: Vec<Complex64>) -> Result<Self, RegisterError> {
        if amplitudes.len() < 2 {
            return Err(RegisterError::TooSmall(amplitudes.len()));
        }
        if !linalg::all_finite(&amplitudes) {
            return Err(RegisterError::NonFinite);
        }
        let norm = linalg::norm_sqr_sum(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(RegisterError::ZeroNorm);
        }
        if !norm.is_finite() {
            // Entries near 1e200 are individually finite but overflow the norm.
            return Err(RegisterError::NonFinite);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// The state with amplitude 1 at `mode_index` and 0 elsewhere.
    pub fn basis_state(n_modes: usize, mode_index: usize) -> Result<Self, RegisterError> {
        if n_modes < 2 {
            return Err(RegisterError::TooSmall(n_modes));
        }
        if mode_index >= n_modes {
            return Err(RegisterError::IndexOutOfRange {
                index: mode_index,
                n_modes,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_modes];
        amplitudes[mode_index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Wraps amplitudes that are already normalized (e.g. the output of a
    /// verified unitary). Callers own the norm check.
    pub(crate) fn from_raw_normalized(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!((linalg::norm_sqr_sum(&amplitudes) - 1.0).abs() <= NORM_TOLERANCE);
        Self { amplitudes }
    }

    pub fn n_modes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr_sum(&self.amplitudes)
    }

    /// The correspondence map: reinterprets the probability amplitudes as
    /// classical analytic-signal mode coefficients, bit for bit.
    pub fn to_classical_field(&self) -> ClassicalField {
        ClassicalField {
            amplitudes: self.amplitudes.clone(),
        }
    }
}

/// Draws a state with amplitudes from the complex standard normal, then
/// normalizes. Deterministic per generator state.
pub fn random_state<R: Rng + ?Sized>(
    n_modes: usize,
    rng: &mut R,
) -> Result<SingleParticleState, RegisterError> {
    if n_modes < 2 {
        return Err(RegisterError::TooSmall(n_modes));
    }
    let amplitudes = (0..n_modes)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    SingleParticleState::new(amplitudes)
}

/// Classical analytic-signal coefficients over the same mode set.
///
/// Unlike the quantum register, a field carries no normalization constraint;
/// the zero field is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalField {
    amplitudes: Vec<Complex64>,
}

impl ClassicalField {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, RegisterError> {
        if amplitudes.len() < 2 {
            return Err(RegisterError::TooSmall(amplitudes.len()));
        }
        if !linalg::all_finite(&amplitudes) {
            return Err(RegisterError::NonFinite);
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn n_modes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Orthonormal mode functions sampled on a spatial grid.
///
/// `functions` is row-major `grid_size x n_modes`; column `m` holds the mode
/// function `u_m` evaluated at each grid point. Columns are orthonormal under
/// the plain grid inner product `sum_x conj(u(x)) v(x)` within
/// [`ORTHONORMALITY_TOLERANCE`].
#[derive(Debug, Clone)]
pub struct ModeBasis {
    grid: Vec<f64>,
    functions: Vec<Complex64>,
    n_modes: usize,
}

impl ModeBasis {
    /// Validates and wraps user-supplied mode functions.
    pub fn new(
        grid: Vec<f64>,
        functions: Vec<Complex64>,
        n_modes: usize,
    ) -> Result<Self, RegisterError> {
        let grid_size = grid.len();
        if grid_size < n_modes {
            return Err(RegisterError::GridTooSmall { grid_size, n_modes });
        }
        if n_modes < 2 {
            return Err(RegisterError::TooSmall(n_modes));
        }
        if functions.len() != grid_size * n_modes {
            return Err(RegisterError::DimensionMismatch {
                expected: grid_size * n_modes,
                got: functions.len(),
            });
        }
        if !linalg::all_finite(&functions) {
            return Err(RegisterError::NonFinite);
        }
        let max_deviation = linalg::max_gram_identity_deviation(grid_size, n_modes, &functions);
        if max_deviation.is_nan() || max_deviation > ORTHONORMALITY_TOLERANCE {
            return Err(RegisterError::NotOrthonormal { max_deviation });
        }
        Ok(Self {
            grid,
            functions,
            n_modes,
        })
    }

    /// Discrete Fourier modes on a uniform grid of `grid_size` points:
    /// `u_m(x_j) = exp(2 pi i j m / G) / sqrt(G)`. Orthonormal by
    /// construction for any `grid_size >= n_modes`.
    pub fn fourier(grid_size: usize, n_modes: usize) -> Result<Self, RegisterError> {
        if grid_size < n_modes {
            return Err(RegisterError::GridTooSmall { grid_size, n_modes });
        }
        if n_modes < 2 {
            return Err(RegisterError::TooSmall(n_modes));
        }
        let g = grid_size as f64;
        let scale = 1.0 / g.sqrt();
        let grid = (0..grid_size).map(|j| j as f64 / g).collect();
        let mut functions = vec![Complex64::new(0.0, 0.0); grid_size * n_modes];
        for j in 0..grid_size {
            for m in 0..n_modes {
                // Reduce j*m mod G in integers before forming the angle, so
                // large products do not lose phase precision.
                let t = ((j as u64 * m as u64) % grid_size as u64) as f64;
                let angle = std::f64::consts::TAU * t / g;
                functions[j * n_modes + m] = Complex64::from_polar(scale, angle);
            }
        }
        Ok(Self {
            grid,
            functions,
            n_modes,
        })
    }

    /// Square basis whose columns are the standard basis vectors: grid point
    /// `j` carries mode `j` and nothing else. Useful when grid-side values
    /// should mirror mode-side coefficients exactly.
    pub fn standard(n_modes: usize) -> Result<Self, RegisterError> {
        if n_modes < 2 {
            return Err(RegisterError::TooSmall(n_modes));
        }
        let grid = (0..n_modes).map(|j| j as f64).collect();
        let mut functions = vec![Complex64::new(0.0, 0.0); n_modes * n_modes];
        for j in 0..n_modes {
            functions[j * n_modes + j] = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            grid,
            functions,
            n_modes,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Value of mode function `mode` at grid point `grid_index`.
    pub fn value(&self, grid_index: usize, mode: usize) -> Complex64 {
        self.functions[grid_index * self.n_modes + mode]
    }

    /// Synthesizes the grid-sampled function `sum_m c_m u_m(x)` from mode
    /// coefficients.
    pub fn synthesize(&self, coefficients: &[Complex64]) -> Result<Vec<Complex64>, RegisterError> {
        if coefficients.len() != self.n_modes {
            return Err(RegisterError::DimensionMismatch {
                expected: self.n_modes,
                got: coefficients.len(),
            });
        }
        let mut values = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (j, value) in values.iter_mut().enumerate() {
            let row = &self.functions[j * self.n_modes..(j + 1) * self.n_modes];
            *value = row
                .iter()
                .zip(coefficients)
                .map(|(u, c)| c * u)
                .sum::<Complex64>();
        }
        Ok(values)
    }

    /// Max deviation of the column Gram matrix from the identity.
    pub fn orthonormality_deviation(&self) -> f64 {
        linalg::max_gram_identity_deviation(self.grid.len(), self.n_modes, &self.functions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn new_state_keeps_already_normalized_basis_vector() {
        let s = SingleParticleState::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert_eq!(
            s.amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
    }

    #[test]
    fn new_state_normalizes_equal_weights() {
        let s = SingleParticleState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitudes()[0].re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, r, epsilon = 1e-15);
    }

    #[test]
    fn new_state_divides_by_euclidean_norm() {
        // (3, 4i) has norm 5.
        let s = SingleParticleState::new(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[0].im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].im, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn new_state_rejects_bad_input() {
        assert_eq!(
            SingleParticleState::new(vec![c(0.0, 0.0), c(0.0, 0.0)]),
            Err(RegisterError::ZeroNorm)
        );
        assert_eq!(
            SingleParticleState::new(vec![c(f64::NAN, 0.0), c(1.0, 0.0)]),
            Err(RegisterError::NonFinite)
        );
        assert_eq!(
            SingleParticleState::new(vec![c(1.0, f64::INFINITY), c(1.0, 0.0)]),
            Err(RegisterError::NonFinite)
        );
        assert_eq!(
            SingleParticleState::new(vec![c(1.0, 0.0)]),
            Err(RegisterError::TooSmall(1))
        );
    }

    #[test]
    fn basis_state_places_single_unit_amplitude() {
        let s = SingleParticleState::basis_state(4, 2).unwrap();
        assert_eq!(
            s.amplitudes(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]
        );
        let s = SingleParticleState::basis_state(2, 0).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = SingleParticleState::basis_state(8, 7).unwrap();
        assert_eq!(s.amplitudes()[7], c(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn basis_state_rejects_out_of_range_index() {
        assert_eq!(
            SingleParticleState::basis_state(4, 4),
            Err(RegisterError::IndexOutOfRange {
                index: 4,
                n_modes: 4
            })
        );
    }

    #[test]
    fn to_classical_field_copies_coefficients_bitwise() {
        let s = SingleParticleState::basis_state(4, 1).unwrap();
        let f = s.to_classical_field();
        assert_eq!(
            f.amplitudes(),
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = SingleParticleState::new(vec![c(r, 0.0), c(0.0, r)]).unwrap();
        let f = s.to_classical_field();
        assert_eq!(f.amplitudes(), s.amplitudes());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..16 {
            let s = random_state(8, &mut rng).unwrap();
            // Bitwise equality, not approximate: the map is the identity.
            assert_eq!(s.to_classical_field().amplitudes(), s.amplitudes());
        }
    }

    #[test]
    fn fourier_basis_is_square_dft_when_grid_matches() {
        let basis = ModeBasis::fourier(8, 8).unwrap();
        assert!(basis.orthonormality_deviation() <= 1e-14);
        // First column is uniform 1/sqrt(8).
        for j in 0..8 {
            assert_abs_diff_eq!(basis.value(j, 0).re, 1.0 / 8.0_f64.sqrt(), epsilon = 1e-15);
            assert_abs_diff_eq!(basis.value(j, 0).im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn fourier_basis_rectangular_gram_is_identity() {
        let basis = ModeBasis::fourier(16, 8).unwrap();
        assert_eq!(basis.grid_size(), 16);
        assert_eq!(basis.n_modes(), 8);
        // Independent Gram computation against the stored functions.
        for a in 0..8 {
            for b in 0..8 {
                let mut dot = c(0.0, 0.0);
                for j in 0..16 {
                    dot += basis.value(j, a).conj() * basis.value(j, b);
                }
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot - target).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn fourier_basis_rejects_small_grid() {
        assert_eq!(
            ModeBasis::fourier(4, 8).unwrap_err(),
            RegisterError::GridTooSmall {
                grid_size: 4,
                n_modes: 8
            }
        );
    }

    #[test]
    fn mode_basis_new_rejects_non_orthonormal_columns() {
        let grid = vec![0.0, 1.0];
        let functions = vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        match ModeBasis::new(grid, functions, 2) {
            Err(RegisterError::NotOrthonormal { .. }) => {}
            other => panic!("expected NotOrthonormal, got {other:?}"),
        }
    }

    #[test]
    fn standard_basis_synthesis_mirrors_coefficients() {
        let basis = ModeBasis::standard(4).unwrap();
        let coeffs = vec![c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)];
        assert_eq!(basis.synthesize(&coeffs).unwrap(), coeffs);
    }

    #[test]
    fn synthesize_rejects_wrong_length() {
        let basis = ModeBasis::fourier(4, 4).unwrap();
        assert_eq!(
            basis.synthesize(&[c(1.0, 0.0)]).unwrap_err(),
            RegisterError::DimensionMismatch {
                expected: 4,
                got: 1
            }
        );
    }

    proptest! {
        #[test]
        fn every_constructed_state_is_normalized(seed in any::<u64>(), n in 2usize..65) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_state(n, &mut rng).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        }

        #[test]
        fn fourier_gram_is_identity_for_all_shapes(n in 2usize..65, extra in 0usize..32) {
            let basis = ModeBasis::fourier(n + extra, n).unwrap();
            prop_assert!(basis.orthonormality_deviation() <= ORTHONORMALITY_TOLERANCE);
        }
    }

    // Large-register normalization, including the biggest size used anywhere.
    #[test]
    fn normalization_holds_at_large_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [256, 1024] {
            let s = random_state(n, &mut rng).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE);
        }
    }
}
