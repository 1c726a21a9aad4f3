//! Complex phases from real gates: controlled-S with the imaginary part in an extra qubit.

use std::error::Error;

use qpi::corpus::ctrl_s;
use qpi::laws::ctrl_s_encoding_deviation;
use qpi::qpi::eval_qpi;
use qpi::unitary::Phi;
use qpi::TypeExpr;

pub fn run() -> Result<(), Box<dyn Error>> {
    let register = TypeExpr::qubits(3);
    let m = eval_qpi(Phi::QUANTUM, &ctrl_s(), &register)?;
    println!("real 8x8 matrix:\n{m}");
    let dev = ctrl_s_encoding_deviation(Phi::QUANTUM)?;
    println!("distance from the encoding of diag(1, 1, 1, i): {dev:.2e}");
    if dev > 1e-10 {
        return Err("controlled-S does not match its encoding".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
