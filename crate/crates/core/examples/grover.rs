//! Three-qubit Grover search for every target, with two and three rounds.

use std::error::Error;

use qpi::corpus::{grover3, grover_oracle, GROVER3_ITERATIONS};
use qpi::measure::{distribution, Gate};
use qpi::unitary::Phi;
use qpi::TypeExpr;

pub fn run() -> Result<(), Box<dyn Error>> {
    let theta = (1.0f64 / 8.0).sqrt().asin();
    for rounds in [2, GROVER3_ITERATIONS] {
        let predicted = ((2 * rounds + 1) as f64 * theta).sin().powi(2);
        println!("{rounds} rounds, predicted success {predicted:.6}");
        for target in 0..8 {
            let program = grover3(grover_oracle(target), rounds);
            let dist = distribution(Phi::QUANTUM, &program, &TypeExpr::One, 0, Gate::Checked)?;
            let bits = format!("{target:03b}");
            let p = dist.prob(&bits);
            println!("  target {bits}: {p:.6}");
            if (p - predicted).abs() > 1e-9 {
                return Err(format!("target {bits} off the amplitude recurrence").into());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
