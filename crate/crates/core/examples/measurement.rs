//! Measurement as copy-then-forget, and the totality check before hiding.

use std::error::Error;

use qpi::corpus::{assert_zero, copy_z, h, zero};
use qpi::measure::{compile, measure_phi, measure_z, ChannelTerm, DensityMatrix, Gate, MeasureError};
use qpi::qpi::QpiTerm;
use qpi::unitary::Phi;
use qpi::TypeExpr;

pub fn run() -> Result<(), Box<dyn Error>> {
    let q = TypeExpr::qubit();
    let plus = DensityMatrix::pure(&qpi::CMatrix::from_real(2, 1, &[0.5f64.sqrt(), 0.5f64.sqrt()])?)?;
    println!("measureZ |+><+| =\n{}", measure_z().apply(&plus)?.matrix());
    println!("measureP |+><+| =\n{}", measure_phi(Phi::QUANTUM).apply(&plus)?.matrix());

    let conj = ChannelTerm::seq_all([ChannelTerm::Pure(h()), ChannelTerm::MeasureZ, ChannelTerm::Pure(h())]);
    let (conj, _) = compile(Phi::QUANTUM, &conj, &q, Gate::Checked)?;
    println!("measureP vs H-conjugated measureZ: {:.2e}", measure_phi(Phi::QUANTUM).distance(&conj));

    let twice = measure_z().compose(&measure_z())?;
    println!("measureZ twice vs once: {:.2e}", twice.distance(&measure_z()));

    // post-selection followed by hiding is refused unless asked for
    let partial = QpiTerm::second(QpiTerm::seq(assert_zero(), zero()), q.clone());
    let hide = ChannelTerm::seq(ChannelTerm::Pure(partial), ChannelTerm::Fst);
    let qq = TypeExpr::prod(q.clone(), q.clone());
    match compile(Phi::QUANTUM, &hide, &qq, Gate::Checked) {
        Err(e @ MeasureError::NotTotal { .. }) => println!("refused: {e}"),
        other => return Err(format!("expected a totality error, got {other:?}").into()),
    }
    let (m, _) = compile(Phi::QUANTUM, &hide, &qq, Gate::Unsafe)?;
    println!("with the unsafe gate: trace preserving = {}", m.is_trace_preserving(1e-9));

    let fst = ChannelTerm::seq(ChannelTerm::Pure(copy_z()), ChannelTerm::Fst);
    let snd = ChannelTerm::seq(ChannelTerm::Pure(copy_z()), ChannelTerm::Snd);
    let d = compile(Phi::QUANTUM, &fst, &q, Gate::Checked)?.0.distance(&compile(Phi::QUANTUM, &snd, &q, Gate::Checked)?.0);
    println!("copyZ >>> fst vs copyZ >>> snd: {d:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
