//! Runs the named laws at the quantum angle and at π/6, where complementarity breaks.

use std::error::Error;
use std::f64::consts::PI;

use qpi::laws::{random_property_suite, run_suite};
use qpi::unitary::Phi;

pub fn run() -> Result<(), Box<dyn Error>> {
    for phi in [Phi::QUANTUM, Phi(PI / 6.0)] {
        let reports = run_suite(phi);
        let failed: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
        println!("phi = {:.5}: {} laws, {} failed", phi.0, reports.len(), failed.len());
        for r in failed {
            println!("  {} deviates by {:.3e}", r.law_name, r.max_deviation);
        }
    }
    for r in random_property_suite(Phi::QUANTUM, 50, 1) {
        println!("{:24} worst deviation {:.2e}", r.law_name, r.max_deviation);
    }
    if run_suite(Phi::QUANTUM).iter().any(|r| !r.holds) {
        return Err("a law failed at the quantum angle".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
