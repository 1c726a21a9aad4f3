//! Builds a two-copy program, flattens it to a tagged list and normalizes it.

use std::error::Error;

use qpi::amalgam::{eval_pizh, normalize, to_list, PizhTerm};
use qpi::pi::{self, PiTerm};
use qpi::unitary::Phi;
use qpi::TypeExpr;

pub fn run() -> Result<(), Box<dyn Error>> {
    let qq = TypeExpr::prod(TypeExpr::qubit(), TypeExpr::qubit());
    let h = PizhTerm::ArrPhi(PiTerm::SwapPlus);
    // H on the target, CX, H on the target: a controlled phase flip
    let prog = PizhTerm::seq_all([
        PizhTerm::second(h.clone(), TypeExpr::qubit()),
        PizhTerm::ArrZ(PiTerm::Id),
        PizhTerm::ArrZ(pi::cx()),
        PizhTerm::second(h, TypeExpr::qubit()),
    ]);
    println!("program: {prog}");
    let list = to_list(&prog, &qq)?;
    println!("list ({} elements): {list}", list.len());
    let normal = normalize(&list);
    println!("normal form ({} elements): {normal}", normal.len());
    let before = eval_pizh(Phi::QUANTUM, &list)?;
    let after = eval_pizh(Phi::QUANTUM, &normal)?;
    println!("matrix:\n{after}");
    if !before.approx_eq(&after, 1e-12).equal {
        return Err("normalization changed the semantics".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
