//! The classical side of the correspondence: an analytic-signal field pushed
//! through the same mode network, and the correlation functions that make
//! the comparison quantitative.
//!
//! For one particle, every particle-counting observable reduces to the
//! two-point correlation `C(x, x') = conj(psi(x)) psi(x')` built from the
//! synthesized wavefunction `psi(x) = sum_m psi_m u_m(x)`. A classical field
//! `E(x) = sum_m E_m u_m(x)` produces the same object with `E` in place of
//! `psi`. [`equivalence_check`] evolves both sides through one unitary and
//! reports the largest elementwise correlation difference.
//!
//! Correlations are evaluated at one fixed readout time; evolving to another
//! time only relabels the propagated basis. The proportionality constant
//! between projector expectations and correlations is fixed to 1 — any other
//! choice cancels in the comparison.

use num_complex::Complex64;
use thiserror::Error;

use crate::processor::{apply_unitary, ProcessorError, UnitaryOp};
use crate::register::{ClassicalField, ModeBasis, RegisterError, SingleParticleState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwinError {
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Processor(#[from] ProcessorError),
    #[error(transparent)]
    Register(#[from] RegisterError),
}

/// Two-point correlation sampled on the basis grid at the readout time:
/// a Hermitian, rank-1 `G x G` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    values: Vec<Complex64>, // row-major grid_size x grid_size
    grid: Vec<f64>,
}

impl CorrelationMatrix {
    fn from_grid_function(grid: &[f64], values_on_grid: &[Complex64]) -> Self {
        let g = values_on_grid.len();
        let mut values = vec![Complex64::new(0.0, 0.0); g * g];
        for i in 0..g {
            for j in 0..g {
                values[i * g + j] = values_on_grid[i].conj() * values_on_grid[j];
            }
        }
        Self {
            values,
            grid: grid.to_vec(),
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    /// Row-major entries.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.len() + j]
    }

    /// Sum of the diagonal; for a normalized state in an orthonormal basis
    /// this is 1.
    pub fn trace(&self) -> Complex64 {
        (0..self.grid.len()).map(|i| self.value(i, i)).sum()
    }

    /// Max of `|C(i,j) - conj(C(j,i))|` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let g = self.grid.len();
        let mut max_dev = 0.0_f64;
        for i in 0..g {
            for j in 0..g {
                let dev = (self.value(i, j) - self.value(j, i).conj()).norm();
                max_dev = max_dev.max(dev);
            }
        }
        max_dev
    }

    /// Largest elementwise absolute difference against another correlation
    /// matrix on the same grid.
    pub fn max_abs_difference(&self, other: &CorrelationMatrix) -> Result<f64, TwinError> {
        if self.values.len() != other.values.len() {
            return Err(TwinError::DimensionMismatch {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// CSV export: one line per matrix row, entries flattened as `re,im`
    /// pairs, LF line endings.
    pub fn to_csv(&self) -> String {
        let g = self.grid.len();
        let mut out = String::new();
        for i in 0..g {
            let mut fields = Vec::with_capacity(2 * g);
            for j in 0..g {
                let z = self.value(i, j);
                fields.push(z.re.to_string());
                fields.push(z.im.to_string());
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Propagates the classical field through the processor: `E' = U E`, the
/// same linear map that evolves the quantum coefficients.
pub fn propagate_field(field: &ClassicalField, u: &UnitaryOp) -> Result<ClassicalField, TwinError> {
    let out = u.apply_to_vec(field.amplitudes())?;
    Ok(ClassicalField::from_raw(out))
}

/// Quantum two-point correlation: synthesizes `psi(x) = sum_m psi_m u_m(x)`
/// on the grid and forms `conj(psi(x)) psi(x')`.
pub fn quantum_correlation(
    state: &SingleParticleState,
    basis: &ModeBasis,
) -> Result<CorrelationMatrix, TwinError> {
    if basis.n_modes() != state.n_modes() {
        return Err(TwinError::DimensionMismatch {
            expected: basis.n_modes(),
            got: state.n_modes(),
        });
    }
    let psi = basis.synthesize(state.amplitudes())?;
    Ok(CorrelationMatrix::from_grid_function(basis.grid(), &psi))
}

/// Classical field correlation: synthesizes `E(x) = sum_m E_m u_m(x)` and
/// forms `conj(E(x)) E(x')`.
pub fn classical_correlation(
    field: &ClassicalField,
    basis: &ModeBasis,
) -> Result<CorrelationMatrix, TwinError> {
    if basis.n_modes() != field.n_modes() {
        return Err(TwinError::DimensionMismatch {
            expected: basis.n_modes(),
            got: field.n_modes(),
        });
    }
    let e = basis.synthesize(field.amplitudes())?;
    Ok(CorrelationMatrix::from_grid_function(basis.grid(), &e))
}

/// Runs the same computation on both sides of the correspondence and
/// measures the gap.
///
/// Quantum side: evolve the state through `u`, build its correlation matrix.
/// Classical side: map the input state to a field, propagate through `u`,
/// build the field correlation. Returns the max elementwise `|delta C|`.
pub fn equivalence_check(
    state: &SingleParticleState,
    u: &UnitaryOp,
    basis: &ModeBasis,
) -> Result<f64, TwinError> {
    let evolved = apply_unitary(state, u)?;
    let quantum = quantum_correlation(&evolved, basis)?;

    let field = state.to_classical_field();
    let propagated = propagate_field(&field, u)?;
    let classical = classical_correlation(&propagated, basis)?;

    quantum.max_abs_difference(&classical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processor::{multiport_dft, oracle_phase_flip, random_unitary, UnitaryOp};
    use crate::register::random_state;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_propagation_keeps_field() {
        let field = ClassicalField::new(vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let u = UnitaryOp::identity(2).unwrap();
        let out = propagate_field(&field, &u).unwrap();
        assert_eq!(out.amplitudes(), field.amplitudes());
    }

    #[test]
    fn dft_spreads_single_input_port_evenly() {
        let n = 8;
        let mut amps = vec![c(0.0, 0.0); n];
        amps[0] = c(1.0, 0.0);
        let field = ClassicalField::new(amps).unwrap();
        let out = propagate_field(&field, &multiport_dft(n).unwrap()).unwrap();
        let r = 1.0 / (n as f64).sqrt();
        for a in out.amplitudes() {
            assert!((a.re - r).abs() <= 1e-14);
            assert!(a.im.abs() <= 1e-14);
        }
    }

    #[test]
    fn field_propagation_is_bitwise_identical_to_state_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [2usize, 4, 8, 16] {
            let s = random_state(n, &mut rng).unwrap();
            let u = random_unitary(n, &mut rng).unwrap();
            let via_field = propagate_field(&s.to_classical_field(), &u).unwrap();
            let via_state = apply_unitary(&s, &u).unwrap().to_classical_field();
            assert_eq!(via_field.amplitudes(), via_state.amplitudes());
        }
    }

    #[test]
    fn basis_state_correlation_has_single_diagonal_entry() {
        let basis = ModeBasis::standard(4).unwrap();
        let s = SingleParticleState::basis_state(4, 2).unwrap();
        let corr = quantum_correlation(&s, &basis).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == 2 && j == 2 { 1.0 } else { 0.0 };
                assert_eq!(corr.value(i, j), c(expect, 0.0));
            }
        }
    }

    #[test]
    fn correlation_diagonal_gives_mode_probabilities_in_standard_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let s = random_state(8, &mut rng).unwrap();
        let basis = ModeBasis::standard(8).unwrap();
        let corr = quantum_correlation(&s, &basis).unwrap();
        for m in 0..8 {
            let p = s.amplitudes()[m].norm_sqr();
            assert!((corr.value(m, m).re - p).abs() <= 1e-12);
            assert!(corr.value(m, m).im.abs() <= 1e-15);
        }
    }

    #[test]
    fn correlation_trace_is_one_for_normalized_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [2usize, 4, 16] {
            let s = random_state(n, &mut rng).unwrap();
            let basis = ModeBasis::fourier(n, n).unwrap();
            let corr = quantum_correlation(&s, &basis).unwrap();
            let tr = corr.trace();
            assert!((tr.re - 1.0).abs() <= 1e-12, "n={n}: trace {tr}");
            assert!(tr.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn correlation_is_rank_one_by_vanishing_minors() {
        // Brute force: every 2x2 minor of an outer product must vanish.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let s = random_state(6, &mut rng).unwrap();
        let basis = ModeBasis::fourier(6, 6).unwrap();
        let corr = quantum_correlation(&s, &basis).unwrap();
        let g = corr.grid_size();
        for r0 in 0..g {
            for r1 in (r0 + 1)..g {
                for c0 in 0..g {
                    for c1 in (c0 + 1)..g {
                        let minor = corr.value(r0, c0) * corr.value(r1, c1)
                            - corr.value(r0, c1) * corr.value(r1, c0);
                        assert!(minor.norm() <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn zero_field_gives_zero_correlation() {
        let field = ClassicalField::new(vec![c(0.0, 0.0); 4]).unwrap();
        let basis = ModeBasis::fourier(4, 4).unwrap();
        let corr = classical_correlation(&field, &basis).unwrap();
        assert!(corr.values().iter().all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn single_mode_field_correlation_is_mode_function_outer_product() {
        let n = 4;
        let basis = ModeBasis::fourier(n, n).unwrap();
        let mut amps = vec![c(0.0, 0.0); n];
        amps[0] = c(1.0, 0.0);
        let field = ClassicalField::new(amps).unwrap();
        let corr = classical_correlation(&field, &basis).unwrap();
        for i in 0..n {
            for j in 0..n {
                let expect = basis.value(i, 0).conj() * basis.value(j, 0);
                assert!((corr.value(i, j) - expect).norm() <= 1e-14);
            }
        }
    }

    #[test]
    fn correlations_are_hermitian_for_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let s = random_state(8, &mut rng).unwrap();
            let field = s.to_classical_field();
            let basis = ModeBasis::fourier(8, 8).unwrap();
            let corr = classical_correlation(&field, &basis).unwrap();
            assert!(corr.hermiticity_deviation() <= 1e-12);
        }
    }

    #[test]
    fn equivalence_holds_for_basis_state_and_identity() {
        let s = SingleParticleState::basis_state(4, 1).unwrap();
        let u = UnitaryOp::identity(4).unwrap();
        let basis = ModeBasis::fourier(4, 4).unwrap();
        assert_eq!(equivalence_check(&s, &u, &basis).unwrap(), 0.0);
    }

    #[test]
    fn equivalence_holds_for_random_pairs_n8() {
        let mut rng = ChaCha8Rng::seed_from_u64(1001);
        let basis = ModeBasis::fourier(8, 8).unwrap();
        for _ in 0..25 {
            let s = random_state(8, &mut rng).unwrap();
            let u = random_unitary(8, &mut rng).unwrap();
            assert!(equivalence_check(&s, &u, &basis).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn equivalence_holds_through_search_evolution_n16() {
        // Same oracle on both sides of the correspondence.
        let n = 16;
        let basis = ModeBasis::fourier(n, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let s = random_state(n, &mut rng).unwrap();
        for u in [
            multiport_dft(n).unwrap(),
            oracle_phase_flip(n, 11).unwrap(),
            crate::processor::inversion_about_mean(n).unwrap(),
        ] {
            assert!(equivalence_check(&s, &u, &basis).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let s = SingleParticleState::basis_state(4, 0).unwrap();
        let basis = ModeBasis::fourier(8, 8).unwrap();
        assert!(matches!(
            quantum_correlation(&s, &basis),
            Err(TwinError::DimensionMismatch {
                expected: 8,
                got: 4
            })
        ));
        let field = ClassicalField::new(vec![c(1.0, 0.0); 4]).unwrap();
        assert!(matches!(
            classical_correlation(&field, &basis),
            Err(TwinError::DimensionMismatch {
                expected: 8,
                got: 4
            })
        ));
    }

    #[test]
    fn csv_export_is_row_major_re_im_pairs() {
        let basis = ModeBasis::standard(2).unwrap();
        let s = SingleParticleState::basis_state(2, 1).unwrap();
        let corr = quantum_correlation(&s, &basis).unwrap();
        assert_eq!(corr.to_csv(), "0,0,0,0\n0,0,1,0\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn equivalence_and_structure_for_random_pairs(seed in any::<u64>(), n in 2usize..17) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_state(n, &mut rng).unwrap();
            let u = random_unitary(n, &mut rng).unwrap();
            let basis = ModeBasis::fourier(n, n).unwrap();
            prop_assert!(equivalence_check(&s, &u, &basis).unwrap() <= 1e-12);

            let corr = quantum_correlation(&apply_unitary(&s, &u).unwrap(), &basis).unwrap();
            prop_assert!(corr.hermiticity_deviation() <= 1e-12);
            prop_assert!((corr.trace().re - 1.0).abs() <= 1e-10);
        }
    }
}
