//! Particle-counting readout of the modal register.
//!
//! A counter aimed at mode `m` answers one dichotomic question: is the
//! particle there or not? The expectation of that answer is `|psi_m|^2`.
//! Rather than running one counter per mode, the modes are grouped by the
//! bits of their binary label — `log2(N)` counters, one per bit — and a
//! single shot yields the whole bit string of the occupied mode, because the
//! grouped observables are mutually commuting diagonal operators.
//!
//! Conventions:
//!
//! - Register sizes are powers of two for binary readout; anything else is
//!   zero-padded upward (see [`pad_to_power_of_two`]), which leaves every
//!   occupation probability untouched.
//! - Bit 0 is the **most significant** bit of the mode label, so for `N = 8`
//!   the groups are `{4,5,6,7}`, `{2,3,6,7}` and `{1,3,5,7}`.
//! - A shot is simulated by sampling the occupied mode from `|psi_m|^2` and
//!   deriving all detector bits from it. That is faithful because the
//!   grouped counters commute: one joint outcome determines every bit.
//! - Randomness comes from a ChaCha8 generator seeded with a caller `u64`;
//!   shot `i` reads stream `i` of that seed, so shots are independent and
//!   reproducible on every platform, and batches can be merged by summing
//!   counts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::register::SingleParticleState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecoderError {
    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },
    #[error("occupation {0} is not 0 or 1 (single particle)")]
    BadOccupation(u8),
    #[error("register size {0} is not a power of two; pad it first")]
    NotPowerOfTwo(usize),
    #[error("bit index {bit_index} out of range for {n_bits} label bits")]
    BitOutOfRange { bit_index: usize, n_bits: usize },
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty bit vector")]
    EmptyBits,
    #[error("bit vector of length {0} exceeds the addressable mode range")]
    TooManyBits(usize),
    #[error("at least one shot is required")]
    ZeroShots,
}

/// Probability of finding the particle in `mode_index`: `|psi_m|^2`.
pub fn mode_probability(
    state: &SingleParticleState,
    mode_index: usize,
) -> Result<f64, DecoderError> {
    let n_modes = state.n_modes();
    if mode_index >= n_modes {
        return Err(DecoderError::IndexOutOfRange {
            index: mode_index,
            n_modes,
        });
    }
    Ok(state.amplitudes()[mode_index].norm_sqr())
}

/// Expectation of the projector onto `occupation` particles in `mode_index`.
///
/// For one particle the occupation is 0 or 1, so the projector reduces to
/// `delta(n) (1 - N_m) + delta(n-1) N_m` with `N_m` the number operator:
/// the answer is `1 - |psi_m|^2` for `n = 0` and `|psi_m|^2` for `n = 1`.
pub fn projector_expectation(
    state: &SingleParticleState,
    mode_index: usize,
    occupation: u8,
) -> Result<f64, DecoderError> {
    let p = mode_probability(state, mode_index)?;
    match occupation {
        0 => Ok(1.0 - p),
        1 => Ok(p),
        n => Err(DecoderError::BadOccupation(n)),
    }
}

/// A linear mode filter realized as the projection selecting one mode.
///
/// The fully general space-time filter kernel is not modeled; in the
/// propagated mode basis the elementary measurement only needs the projector
/// onto the probed mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeFilter {
    target_mode: usize,
    n_modes: usize,
}

impl ModeFilter {
    pub fn new(target_mode: usize, n_modes: usize) -> Result<Self, DecoderError> {
        if target_mode >= n_modes {
            return Err(DecoderError::IndexOutOfRange {
                index: target_mode,
                n_modes,
            });
        }
        Ok(Self {
            target_mode,
            n_modes,
        })
    }

    pub fn target_mode(&self) -> usize {
        self.target_mode
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The filtered coefficient vector: the target amplitude survives, all
    /// other modes are blocked.
    pub fn apply(&self, state: &SingleParticleState) -> Result<Vec<Complex64>, DecoderError> {
        if state.n_modes() != self.n_modes {
            return Err(DecoderError::DimensionMismatch {
                expected: self.n_modes,
                got: state.n_modes(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_modes];
        out[self.target_mode] = state.amplitudes()[self.target_mode];
        Ok(out)
    }
}

/// One grouped detector: the set of modes whose label has a given bit set.
///
/// Bit 0 is the most significant label bit. Each group collects exactly half
/// of the modes, so `log2(N)` groups suffice to spell out any mode label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorGroup {
    bit_index: usize,
    member_modes: Vec<usize>,
    n_modes: usize,
}

impl DetectorGroup {
    /// The group for `bit_index` over a power-of-two register.
    pub fn new(n_modes: usize, bit_index: usize) -> Result<Self, DecoderError> {
        if n_modes < 2 || !n_modes.is_power_of_two() {
            return Err(DecoderError::NotPowerOfTwo(n_modes));
        }
        let n_bits = n_modes.trailing_zeros() as usize;
        if bit_index >= n_bits {
            return Err(DecoderError::BitOutOfRange { bit_index, n_bits });
        }
        let shift = n_bits - 1 - bit_index;
        let member_modes = (0..n_modes).filter(|m| (m >> shift) & 1 == 1).collect();
        Ok(Self {
            bit_index,
            member_modes,
            n_modes,
        })
    }

    /// The complementary set: modes whose `bit_index` bit is 0. Not itself a
    /// physical counter, but group and complement must sum to certainty.
    pub fn complement(&self) -> DetectorGroup {
        let member_modes = (0..self.n_modes)
            .filter(|m| !self.member_modes.contains(m))
            .collect();
        DetectorGroup {
            bit_index: self.bit_index,
            member_modes,
            n_modes: self.n_modes,
        }
    }

    pub fn bit_index(&self) -> usize {
        self.bit_index
    }

    /// Member modes in ascending order.
    pub fn member_modes(&self) -> &[usize] {
        &self.member_modes
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.member_modes.binary_search(&mode).is_ok()
    }
}

/// Expectation of the grouped counter: `sum_{m in group} |psi_m|^2`.
pub fn group_expectation(
    state: &SingleParticleState,
    group: &DetectorGroup,
) -> Result<f64, DecoderError> {
    if state.n_modes() != group.n_modes {
        return Err(DecoderError::DimensionMismatch {
            expected: group.n_modes,
            got: state.n_modes(),
        });
    }
    Ok(group
        .member_modes
        .iter()
        .map(|&m| state.amplitudes()[m].norm_sqr())
        .sum())
}

/// The bit string of a mode label, most significant bit first.
pub fn mode_bits(mode_index: usize, n_bits: usize) -> Vec<bool> {
    (0..n_bits)
        .map(|i| (mode_index >> (n_bits - 1 - i)) & 1 == 1)
        .collect()
}

/// Outcome of one joint readout shot: the detector bits and the mode label
/// they spell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadoutRecord {
    pub bits: Vec<bool>,
    pub decoded_mode: usize,
    pub shot_index: u64,
}

impl ReadoutRecord {
    /// e.g. `"101"` for mode 5 of 8.
    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Histogram of decoded modes over repeated shots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
    total_shots: u64,
}

impl Histogram {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn n_modes(&self) -> usize {
        self.counts.len()
    }

    pub fn frequency(&self, mode_index: usize) -> f64 {
        self.counts[mode_index] as f64 / self.total_shots as f64
    }

    /// CSV export: `mode_index,count,frequency` header plus one row per
    /// mode, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mode_index,count,frequency\n");
        for (mode, &count) in self.counts.iter().enumerate() {
            out.push_str(&format!("{mode},{count},{}\n", self.frequency(mode)));
        }
        out
    }
}

fn shot_rng(seed: u64, shot_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot_index);
    rng
}

/// Draws one mode from the occupation distribution.
fn draw_mode(state: &SingleParticleState, rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_occupied = 0;
    for (mode, amplitude) in state.amplitudes().iter().enumerate() {
        let p = amplitude.norm_sqr();
        if p > 0.0 {
            last_occupied = mode;
        }
        acc += p;
        if u < acc {
            return mode;
        }
    }
    // u landed in the sliver above the rounded cumulative sum; hand it to the
    // last mode that actually carries probability.
    last_occupied
}

/// One joint shot of all grouped detectors: samples the occupied mode, then
/// reports the `log2(N)` bits of its label.
pub fn sample_readout(
    state: &SingleParticleState,
    rng_seed: u64,
) -> Result<ReadoutRecord, DecoderError> {
    let n_modes = state.n_modes();
    if !n_modes.is_power_of_two() {
        return Err(DecoderError::NotPowerOfTwo(n_modes));
    }
    let n_bits = n_modes.trailing_zeros() as usize;
    let mode = draw_mode(state, &mut shot_rng(rng_seed, 0));
    Ok(ReadoutRecord {
        bits: mode_bits(mode, n_bits),
        decoded_mode: mode,
        shot_index: 0,
    })
}

/// Repeats the whole computation-and-readout `n_shots` times and tallies the
/// decoded modes. Deterministic per seed; shot `i` uses stream `i`.
pub fn repeated_readout(
    state: &SingleParticleState,
    n_shots: u64,
    rng_seed: u64,
) -> Result<Histogram, DecoderError> {
    let n_modes = state.n_modes();
    if !n_modes.is_power_of_two() {
        return Err(DecoderError::NotPowerOfTwo(n_modes));
    }
    if n_shots == 0 {
        return Err(DecoderError::ZeroShots);
    }
    let mut counts = vec![0u64; n_modes];
    for shot in 0..n_shots {
        let mode = draw_mode(state, &mut shot_rng(rng_seed, shot));
        counts[mode] += 1;
    }
    Ok(Histogram {
        counts,
        total_shots: n_shots,
    })
}

/// Locates the fired detector sequence by classical binary search: one bit
/// inspected per step, exactly `bits.len() = log2(N)` steps.
pub fn binary_search_poll(bits: &[bool]) -> Result<(usize, usize), DecoderError> {
    if bits.is_empty() {
        return Err(DecoderError::EmptyBits);
    }
    if bits.len() >= usize::BITS as usize {
        return Err(DecoderError::TooManyBits(bits.len()));
    }
    let mut low = 0usize;
    let mut width = 1usize << bits.len();
    let mut steps = 0usize;
    for &bit in bits {
        width /= 2;
        if bit {
            low += width;
        }
        steps += 1;
    }
    Ok((low, steps))
}

/// Zero-pads the register up to the next power of two so the binary readout
/// applies. Returns the padded state and how many modes were appended; every
/// original occupation probability is preserved exactly.
pub fn pad_to_power_of_two(state: &SingleParticleState) -> (SingleParticleState, usize) {
    let n = state.n_modes();
    let total = n.next_power_of_two();
    if total == n {
        return (state.clone(), 0);
    }
    let mut amplitudes = state.amplitudes().to_vec();
    amplitudes.resize(total, Complex64::new(0.0, 0.0));
    (
        SingleParticleState::from_raw_normalized(amplitudes),
        total - n,
    )
}
