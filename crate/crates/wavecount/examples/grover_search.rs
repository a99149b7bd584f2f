//! Search a 64-mode register for one marked mode, watch the success
//! probability climb with each oracle round, then read the answer out with
//! log2(N) binary detectors.
//!
//! ```bash
//! cargo run -p wavecount --example grover_search
//! ```

use wavecount::decoder::{binary_search_poll, mode_probability, repeated_readout, sample_readout};
use wavecount::processor::{default_grover_iterations, grover_run, GroverPlan};
use wavecount::resources::{audit_grover, compare_with_classical};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_modes = 64;
    let marked = 42;
    let shots = 20_000;
    let seed = 7;

    println!("searching {n_modes} modes for marked mode {marked}\n");
    println!("{:>10}{:>22}", "iteration", "success probability");
    for k in 0..=default_grover_iterations(n_modes) {
        let outcome = grover_run(&GroverPlan::new(n_modes, marked, k)?)?;
        let p = mode_probability(&outcome.state, marked)?;
        println!("{k:>10}{p:>22.6}");
    }

    let plan = GroverPlan::with_default_iterations(n_modes, marked)?;
    let outcome = grover_run(&plan)?;

    // One joint shot of the six grouped detectors spells the answer in bits.
    let record = sample_readout(&outcome.state, seed)?;
    let (polled, steps) = binary_search_poll(&record.bits)?;
    println!(
        "\nsingle shot: bits {} -> mode {polled} located in {steps} polling steps",
        record.bit_string()
    );

    let histogram = repeated_readout(&outcome.state, shots, seed)?;
    println!(
        "{} of {} repeated shots landed on mode {marked}",
        histogram.counts()[marked],
        shots
    );

    println!("\nresource ledger");
    let ledger = audit_grover(&plan, shots);
    print!("{}", ledger.to_table());
    println!();
    print!("{}", compare_with_classical(&ledger).to_table());
    Ok(())
}
