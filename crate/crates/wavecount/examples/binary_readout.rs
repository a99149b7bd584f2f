//! The binary detector layout for an 8-mode register: three grouped
//! counters, one per bit of the mode label, replace eight per-mode counters.
//!
//! ```bash
//! cargo run -p wavecount --example binary_readout
//! ```

use num_complex::Complex64;
use wavecount::decoder::{
    binary_search_poll, group_expectation, projector_expectation, repeated_readout, sample_readout,
    DetectorGroup,
};
use wavecount::register::SingleParticleState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_modes = 8;

    println!("detector groups for {n_modes} modes (bit 0 = most significant):");
    for bit in 0..3 {
        let group = DetectorGroup::new(n_modes, bit)?;
        println!("  bit {bit}: modes {:?}", group.member_modes());
    }

    // A basis state answers every grouped counter deterministically.
    let state = SingleParticleState::basis_state(n_modes, 5)?;
    println!("\nparticle prepared in mode 5 (binary 101):");
    for bit in 0..3 {
        let group = DetectorGroup::new(n_modes, bit)?;
        println!(
            "  counter for bit {bit} fires with probability {}",
            group_expectation(&state, &group)?
        );
    }
    let record = sample_readout(&state, 0)?;
    let (mode, steps) = binary_search_poll(&record.bits)?;
    println!(
        "  one shot reads bits {} -> mode {mode} in {steps} polls",
        record.bit_string()
    );

    // A superposition makes the readout probabilistic, so the run repeats.
    let amplitudes = vec![
        Complex64::new(3.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let state = SingleParticleState::new(amplitudes)?;
    println!("\nsuperposition over modes 0, 2 and 6:");
    for mode in [0usize, 2, 6] {
        println!(
            "  occupation expectation of mode {mode}: {:.4}",
            projector_expectation(&state, mode, 1)?
        );
    }
    let histogram = repeated_readout(&state, 10_000, 1)?;
    println!("  histogram over 10000 shots:");
    for (mode, &count) in histogram.counts().iter().enumerate() {
        if count > 0 {
            println!(
                "    mode {mode}: {count} ({:.4})",
                histogram.frequency(mode)
            );
        }
    }
    Ok(())
}
