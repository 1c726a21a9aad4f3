//! The rotated copy of the classical swap, evaluated across angles.
//!
//! At φ = π/8 the conjugated swap is exactly Hadamard.

use std::error::Error;
use std::f64::consts::PI;

use qpi::pi::PiTerm;
use qpi::unitary::{eval_tagged, Phi, Tag};
use qpi::TypeExpr;

pub fn run() -> Result<(), Box<dyn Error>> {
    let qubit = TypeExpr::qubit();
    for k in [0.0, 1.0, 2.0, 3.0] {
        let phi = Phi(k * PI / 16.0);
        let m = eval_tagged(phi, Tag::Phi, &PiTerm::SwapPlus, &qubit)?;
        println!("swapP rotated by {:.4} rad:\n{m}", phi.0);
    }
    let h = eval_tagged(Phi::QUANTUM, Tag::Phi, &PiTerm::SwapPlus, &qubit)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let expected = qpi::CMatrix::from_real(2, 2, &[s, s, s, -s])?;
    let diff = h.approx_eq(&expected, 1e-12);
    println!("distance from Hadamard at pi/8: {:.2e}", diff.max_diff);
    if !diff.equal {
        return Err("the quantum angle did not produce Hadamard".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
