//! Simon's circuit: exact distribution and a seeded sample.

use std::error::Error;

use qpi::corpus;
use qpi::measure::{distribution, sample_distribution, Gate};
use qpi::unitary::Phi;

pub fn run() -> Result<(), Box<dyn Error>> {
    let dist = distribution(Phi::QUANTUM, &corpus::simon(), &corpus::simon_register(), 0, Gate::Checked)?;
    for (bits, p) in dist.outcomes.iter().zip(&dist.probs) {
        println!("P({bits}) = {p:.6}");
    }
    let report = sample_distribution(&dist, 10_000, 7);
    println!("{}", report.to_json());
    if (dist.prob("00") - 0.5).abs() > 1e-10 || (dist.prob("11") - 0.5).abs() > 1e-10 {
        return Err("outcomes should be 00 and 11 with equal weight".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
