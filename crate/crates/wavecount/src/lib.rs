//! Simulator and analysis toolkit for a single-particle N-mode processor
//! with particle-counting readout, together with its classical-wave twin.
//!
//! A register holding one particle spread over `N` orthonormal modes evolves
//! under dense `N x N` unitaries and is read out by counting the particle in
//! detector modes. Because every observable of such a register reduces to
//! bilinear mode correlations, the same computation can be carried out by a
//! classical interferometer propagating an analytic-signal field through the
//! identical mode network. This crate implements both sides and lets you
//! check their agreement numerically, down to the correlation functions.
//!
//! # What is in the box
//!
//! - [`register`] — the normalized single-particle amplitude vector, its
//!   classical field counterpart, and orthonormal mode bases.
//! - [`processor`] — unitary evolution, the multiport (DFT) beamsplitter,
//!   and the search primitives: oracle phase flip, inversion about the mean,
//!   and a full search run.
//! - [`decoder`] — mode occupation probabilities, binary detector groups
//!   (one counter per bit of the mode label), single-shot and repeated
//!   sampling, and the log2(N)-step poll that locates the fired detector.
//! - [`classical_twin`] — field propagation through the same unitaries and
//!   the correlation-function comparison between the two descriptions.
//! - [`resources`] — the accounting ledger: modes, detectors, readout steps,
//!   oracle queries, and the comparison against classical search costs.
//! - [`cli`] — the experiment runner behind the `wavecount` binary.
//!
//! # Quick start
//!
//! ```
//! use wavecount::processor::{self, GroverPlan};
//! use wavecount::{decoder, resources};
//!
//! let plan = GroverPlan::with_default_iterations(16, 3).unwrap();
//! let outcome = processor::grover_run(&plan).unwrap();
//! let hit = decoder::mode_probability(&outcome.state, 3).unwrap();
//! assert!(hit > 0.96);
//!
//! let ledger = resources::audit_grover(&plan, 1000);
//! assert_eq!(ledger.n_detectors, 4); // log2(16) counters suffice
//! ```
//!
//! Runnable walkthroughs live in `examples/`: `grover_search`,
//! `binary_readout`, `classical_equivalence`, and `resource_audit`.
//!
//! # Conventions
//!
//! - Amplitudes are `Complex64`; states are normalized to unit Euclidean
//!   norm within `1e-12` at construction.
//! - Unitarity is verified at construction time (max elementwise deviation
//!   of `U^H U` from the identity at most `1e-10`), not per application.
//! - Detector bit 0 is the most significant bit of the mode label.
//! - All sampling flows from a single `u64` seed through a counter-based
//!   stream cipher generator, so identical seeds give identical histograms
//!   on every platform.

pub mod classical_twin;
pub mod cli;
pub mod decoder;
mod linalg;
pub mod processor;
pub mod register;
pub mod resources;

pub use classical_twin::CorrelationMatrix;
pub use decoder::{DetectorGroup, Histogram, ReadoutRecord};
pub use processor::{GroverOutcome, GroverPlan, UnitaryOp};
pub use register::{ClassicalField, ModeBasis, SingleParticleState};
pub use resources::{ComparisonReport, ResourceLedger};
