//! Parses a `.qpi` file, checks every definition and evaluates one of them.

use std::error::Error;
use std::path::Path;

use qpi::cli::{check_file, load};
use qpi::qpi::eval_qpi;
use qpi::unitary::Phi;

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/gates.qpi");
    let file = load(&path)?;
    for def in check_file(&file) {
        let def = def?;
        println!("{:10} : {} ~> {}", def.name, def.domain, def.codomain);
    }
    let ctrl_z = check_file(&file).into_iter().flatten().find(|d| d.name == "ctrlZ").ok_or("ctrlZ missing")?;
    let d = ctrl_z.term.as_pure().ok_or("ctrlZ should be pure")?;
    println!("ctrlZ =\n{}", eval_qpi(Phi::QUANTUM, d, &ctrl_z.domain)?);
    print!("reprinted:\n{file}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
