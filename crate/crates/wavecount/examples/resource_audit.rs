//! Tally what a search actually costs as the register grows: modes on hand,
//! detectors, polling steps, oracle queries — and where the classical
//! readout floor sits for every processor.
//!
//! ```bash
//! cargo run -p wavecount --example resource_audit
//! ```

use wavecount::processor::GroverPlan;
use wavecount::resources::{audit_grover, compare_with_classical};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>8}{:>12}{:>12}{:>16}{:>18}{:>16}",
        "modes", "detectors", "queries", "queries/sqrt N", "unsorted queries", "readout floor"
    );
    let mut n = 4usize;
    while n <= 1024 {
        let plan = GroverPlan::with_default_iterations(n, 0)?;
        let ledger = audit_grover(&plan, 1);
        let report = compare_with_classical(&ledger);
        println!(
            "{n:>8}{:>12}{:>12}{:>16.4}{:>18}{:>16}",
            ledger.n_detectors,
            ledger.oracle_queries,
            ledger.oracle_queries as f64 / (n as f64).sqrt(),
            report.classical_unsorted_queries,
            report.readout_floor
        );
        n *= 4;
    }

    // Padding: a register that is not a power of two borrows zero modes so
    // the binary readout applies; the ledger records the debt.
    let plan = GroverPlan::with_default_iterations(100, 3)?;
    let ledger = audit_grover(&plan, 500);
    println!("\naudit of a 100-mode register (padded to 128):\n");
    print!("{}", ledger.to_table());

    println!();
    print!("{}", compare_with_classical(&ledger).to_table());
    Ok(())
}
