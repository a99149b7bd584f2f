//! Unitary evolution of the register and the search primitives built on it.
//!
//! Everything here is a dense `N x N` complex matrix acting on the mode
//! coefficients. Unitarity is verified once at construction (max elementwise
//! deviation of `U^H U` from the identity at most [`UNITARITY_TOLERANCE`]);
//! applications then run unchecked apart from a cheap norm re-validation.
//!
//! The multiport beamsplitter uses the phase convention
//! `U[j][k] = exp(+2 pi i j k / N) / sqrt(N)`, so for `N = 2` it matches the
//! real Hadamard matrix up to floating-point phase error.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg;
use crate::register::{RegisterError, SingleParticleState, NORM_TOLERANCE};

/// Allowed deviation of `U^H U` from the identity, elementwise.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessorError {
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not unitary: max |U^H U - I| = {max_deviation:.3e}")]
    NotUnitary { max_deviation: f64 },
    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },
    #[error("operator needs at least 2 modes, got {0}")]
    TooSmall(usize),
    #[error("applying the unitary drifted the state norm: |psi|^2 = {norm_sqr}")]
    NormDrift { norm_sqr: f64 },
    #[error(transparent)]
    Register(#[from] RegisterError),
}

/// A verified `N x N` unitary acting on the mode coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: Vec<Complex64>, // row-major n_modes x n_modes
    n_modes: usize,
}

impl UnitaryOp {
    /// Wraps a row-major matrix after checking shape and unitarity.
    ///
    /// The unitarity check is O(N^3); it runs here once rather than on every
    /// application.
    pub fn new(n_modes: usize, matrix: Vec<Complex64>) -> Result<Self, ProcessorError> {
        if n_modes < 2 {
            return Err(ProcessorError::TooSmall(n_modes));
        }
        if matrix.len() != n_modes * n_modes {
            return Err(ProcessorError::DimensionMismatch {
                expected: n_modes * n_modes,
                got: matrix.len(),
            });
        }
        let max_deviation = linalg::max_gram_identity_deviation(n_modes, n_modes, &matrix);
        if max_deviation.is_nan() || max_deviation > UNITARITY_TOLERANCE {
            return Err(ProcessorError::NotUnitary { max_deviation });
        }
        Ok(Self { matrix, n_modes })
    }

    pub fn identity(n_modes: usize) -> Result<Self, ProcessorError> {
        if n_modes < 2 {
            return Err(ProcessorError::TooSmall(n_modes));
        }
        let mut matrix = vec![Complex64::new(0.0, 0.0); n_modes * n_modes];
        for i in 0..n_modes {
            matrix[i * n_modes + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { matrix, n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Row-major matrix entries.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.n_modes + col]
    }

    /// `U v` on raw coefficients; the shared evolution for quantum states and
    /// classical fields.
    pub fn apply_to_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, ProcessorError> {
        if v.len() != self.n_modes {
            return Err(ProcessorError::DimensionMismatch {
                expected: self.n_modes,
                got: v.len(),
            });
        }
        let n = self.n_modes;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, out_i) in out.iter_mut().enumerate() {
            let row = &self.matrix[i * n..(i + 1) * n];
            *out_i = row.iter().zip(v).map(|(m, x)| m * x).sum::<Complex64>();
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> UnitaryOp {
        let n = self.n_modes;
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                matrix[j * n + i] = self.matrix[i * n + j].conj();
            }
        }
        UnitaryOp { matrix, n_modes: n }
    }

    /// Max elementwise deviation of `U^H U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        linalg::max_gram_identity_deviation(self.n_modes, self.n_modes, &self.matrix)
    }
}

/// Evolves the register: `psi' = U psi`. The output norm is re-validated
/// against [`NORM_TOLERANCE`] but never silently renormalized, so the quantum
/// path stays bit-identical to the classical field propagation.
pub fn apply_unitary(
    state: &SingleParticleState,
    u: &UnitaryOp,
) -> Result<SingleParticleState, ProcessorError> {
    let out = u.apply_to_vec(state.amplitudes())?;
    let norm_sqr: f64 = out.iter().map(|z| z.norm_sqr()).sum();
    let drift = (norm_sqr - 1.0).abs();
    if drift.is_nan() || drift > NORM_TOLERANCE {
        return Err(ProcessorError::NormDrift { norm_sqr });
    }
    Ok(SingleParticleState::from_raw_normalized(out))
}

/// The search oracle: a diagonal unitary flipping the phase of one mode,
/// `diag(1, ..., -1, ..., 1)` with `-1` at `marked_index`.
pub fn oracle_phase_flip(n_modes: usize, marked_index: usize) -> Result<UnitaryOp, ProcessorError> {
    if n_modes < 2 {
        return Err(ProcessorError::TooSmall(n_modes));
    }
    if marked_index >= n_modes {
        return Err(ProcessorError::IndexOutOfRange {
            index: marked_index,
            n_modes,
        });
    }
    let mut matrix = vec![Complex64::new(0.0, 0.0); n_modes * n_modes];
    for i in 0..n_modes {
        let sign = if i == marked_index { -1.0 } else { 1.0 };
        matrix[i * n_modes + i] = Complex64::new(sign, 0.0);
    }
    // A diagonal of exact +-1 entries is unitary with zero rounding; no
    // numerical re-check needed.
    Ok(UnitaryOp { matrix, n_modes })
}

/// The diffusion operator `2 J / N - I` (J all-ones): reflects every
/// amplitude about the mean. Symmetric by construction.
pub fn inversion_about_mean(n_modes: usize) -> Result<UnitaryOp, ProcessorError> {
    if n_modes < 2 {
        return Err(ProcessorError::TooSmall(n_modes));
    }
    let off = 2.0 / n_modes as f64;
    let diag = off - 1.0;
    let mut matrix = vec![Complex64::new(off, 0.0); n_modes * n_modes];
    for i in 0..n_modes {
        matrix[i * n_modes + i] = Complex64::new(diag, 0.0);
    }
    // Analytically unitary; the check still runs to honor the constructor
    // contract on accumulated rounding.
    UnitaryOp::new(n_modes, matrix)
}

/// The `N x N`-port beamsplitter: the unitary DFT matrix
/// `exp(+2 pi i j k / N) / sqrt(N)`.
pub fn multiport_dft(n_modes: usize) -> Result<UnitaryOp, ProcessorError> {
    if n_modes < 2 {
        return Err(ProcessorError::TooSmall(n_modes));
    }
    let n = n_modes as f64;
    let scale = 1.0 / n.sqrt();
    let mut matrix = vec![Complex64::new(0.0, 0.0); n_modes * n_modes];
    for j in 0..n_modes {
        for k in 0..n_modes {
            // Reduce j*k mod N in integers first; forming 2*pi*j*k directly
            // loses phase precision once j*k is large.
            let t = ((j as u64 * k as u64) % n_modes as u64) as f64;
            let angle = std::f64::consts::TAU * t / n;
            matrix[j * n_modes + k] = Complex64::from_polar(scale, angle);
        }
    }
    UnitaryOp::new(n_modes, matrix)
}

/// A random unitary: a complex Gaussian matrix orthonormalized column by
/// column (modified Gram-Schmidt, two passes). Deterministic per generator
/// state.
pub fn random_unitary<R: Rng + ?Sized>(
    n_modes: usize,
    rng: &mut R,
) -> Result<UnitaryOp, ProcessorError> {
    if n_modes < 2 {
        return Err(ProcessorError::TooSmall(n_modes));
    }
    let n = n_modes;
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for k in 0..n {
        let (done, rest) = cols.split_at_mut(k);
        let col = &mut rest[0];
        // Second orthogonalization pass scrubs the rounding left by the first.
        for _ in 0..2 {
            for prev in done.iter() {
                let proj: Complex64 = prev.iter().zip(col.iter()).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= proj * p;
                }
            }
        }
        let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(ProcessorError::NotUnitary { max_deviation: 1.0 });
        }
        for c in col.iter_mut() {
            *c /= norm;
        }
    }
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, col) in cols.iter().enumerate() {
        for (j, value) in col.iter().enumerate() {
            matrix[j * n + k] = *value;
        }
    }
    UnitaryOp::new(n, matrix)
}

/// Default iteration count for a search over `n_modes` items:
/// `round(pi/4 * sqrt(N))`.
pub fn default_grover_iterations(n_modes: usize) -> u64 {
    (std::f64::consts::FRAC_PI_4 * (n_modes as f64).sqrt()).round() as u64
}

/// A search instance: register size, the marked mode, and how many
/// oracle+diffusion rounds to run. Each round costs exactly one oracle query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverPlan {
    n_modes: usize,
    marked_index: usize,
    n_iterations: u64,
}

impl GroverPlan {
    pub fn new(
        n_modes: usize,
        marked_index: usize,
        n_iterations: u64,
    ) -> Result<Self, ProcessorError> {
        if n_modes < 2 {
            return Err(ProcessorError::TooSmall(n_modes));
        }
        if marked_index >= n_modes {
            return Err(ProcessorError::IndexOutOfRange {
                index: marked_index,
                n_modes,
            });
        }
        Ok(Self {
            n_modes,
            marked_index,
            n_iterations,
        })
    }

    /// Plan with the default `round(pi/4 * sqrt(N))` iteration count.
    pub fn with_default_iterations(
        n_modes: usize,
        marked_index: usize,
    ) -> Result<Self, ProcessorError> {
        Self::new(n_modes, marked_index, default_grover_iterations(n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn marked_index(&self) -> usize {
        self.marked_index
    }

    pub fn n_iterations(&self) -> u64 {
        self.n_iterations
    }

    /// One oracle query per iteration.
    pub fn query_count(&self) -> u64 {
        self.n_iterations
    }
}

/// Final state of a search run plus the resource fragment it consumed.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverOutcome {
    pub state: SingleParticleState,
    pub oracle_queries: u64,
}

/// Runs the search: uniform superposition (multiport on basis mode 0), then
/// `n_iterations` rounds of oracle followed by inversion about the mean.
pub fn grover_run(plan: &GroverPlan) -> Result<GroverOutcome, ProcessorError> {
    let n = plan.n_modes;
    let beamsplitter = multiport_dft(n)?;
    let oracle = oracle_phase_flip(n, plan.marked_index)?;
    let diffusion = inversion_about_mean(n)?;

    let mut state = apply_unitary(&SingleParticleState::basis_state(n, 0)?, &beamsplitter)?;
    for _ in 0..plan.n_iterations {
        state = apply_unitary(&state, &oracle)?;
        state = apply_unitary(&state, &diffusion)?;
    }
    Ok(GroverOutcome {
        state,
        oracle_queries: plan.n_iterations,
    })
}
