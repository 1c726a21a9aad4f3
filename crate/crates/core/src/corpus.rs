//! The built-in gate library, the copy structures and the worked algorithms.
//!
//! Three-qubit registers are `qubit × (qubit × qubit)`, the leftmost qubit most
//! significant.

use crate::measure::ChannelTerm;
use crate::pi::{self, PiTerm, TypeExpr};
use crate::qpi::QpiTerm;

fn q() -> TypeExpr {
    TypeExpr::qubit()
}

fn qq() -> TypeExpr {
    TypeExpr::prod(q(), q())
}

/// Negation, the classical swap of `1 + 1`.
pub fn x() -> QpiTerm {
    QpiTerm::arr_z(pi::x())
}

/// The same swap taken from the rotated copy; Hadamard at the quantum angle.
pub fn h() -> QpiTerm {
    QpiTerm::arr_phi(PiTerm::SwapPlus)
}

/// Phase flip, as negation conjugated by Hadamard.
pub fn z() -> QpiTerm {
    QpiTerm::seq_all([h(), x(), h()])
}

pub fn cx() -> QpiTerm {
    QpiTerm::arr_z(pi::cx())
}

pub fn ccx() -> QpiTerm {
    QpiTerm::arr_z(pi::ccx())
}

pub fn zero() -> QpiTerm {
    QpiTerm::Zero
}

pub fn one() -> QpiTerm {
    QpiTerm::seq(zero(), x())
}

pub fn plus() -> QpiTerm {
    QpiTerm::seq(zero(), h())
}

pub fn minus() -> QpiTerm {
    QpiTerm::seq(one(), h())
}

pub fn assert_zero() -> QpiTerm {
    QpiTerm::AssertZero
}

pub fn assert_one() -> QpiTerm {
    QpiTerm::seq(x(), assert_zero())
}

/// `|i⟩ ↦ |ii⟩`: pair the input with a fresh `|0⟩` and copy onto it.
pub fn copy_z() -> QpiTerm {
    QpiTerm::seq_all([QpiTerm::UnitiT, QpiTerm::prod(QpiTerm::Id, zero()), cx()])
}

/// `|±⟩ ↦ |±±⟩`.
pub fn copy_x() -> QpiTerm {
    QpiTerm::seq_all([h(), copy_z(), QpiTerm::prod(h(), h())])
}

/// Controlled phase flip on `qubit × qubit`, control on the left.
pub fn ctrl_z() -> QpiTerm {
    QpiTerm::seq_all([QpiTerm::second(h(), q()), cx(), QpiTerm::second(h(), q())])
}

/// A gate on qubit `k` (0, 1 or 2) of a three-qubit register.
pub fn on_qubit(k: usize, g: QpiTerm) -> QpiTerm {
    match k {
        0 => QpiTerm::first(g, qq()),
        1 => QpiTerm::second(QpiTerm::first(g, q()), q()),
        2 => QpiTerm::second(QpiTerm::second(g, q()), q()),
        _ => panic!("qubit index {k} out of range for a three-qubit register"),
    }
}

/// `g` on all three qubits.
pub fn on_all(g: QpiTerm) -> QpiTerm {
    QpiTerm::prod(g.clone(), QpiTerm::prod(g.clone(), g))
}

/// Controlled-S on the first two qubits, with complex amplitudes encoded in
/// the third: `a + ib` is carried as `a|0⟩ + b|1⟩`.
///
/// On the block where both controls are set the last qubit sees `Z` then `X`,
/// i.e. the real matrix `[[0, -1], [1, 0]]` encoding multiplication by `i`.
pub fn ctrl_s() -> QpiTerm {
    QpiTerm::seq_all([on_qubit(2, h()), ccx(), on_qubit(2, h()), ccx()])
}

/// Doubly controlled phase flip, as Hadamard-conjugated Toffoli.
pub fn ccz() -> QpiTerm {
    QpiTerm::seq_all([on_qubit(2, h()), ccx(), on_qubit(2, h())])
}

/// Negates qubits whose bit in `target` is 0, so that `target` maps to `|111⟩`.
fn x_mask(target: usize) -> QpiTerm {
    let flips: Vec<QpiTerm> = (0..3)
        .filter(|k| target >> (2 - k) & 1 == 0)
        .map(|k| on_qubit(k, x()))
        .collect();
    QpiTerm::seq_all(flips)
}

/// Phase oracle marking the basis state `target` (0..8, most significant qubit first).
pub fn grover_oracle(target: usize) -> QpiTerm {
    assert!(target < 8, "target {target} is not a three-bit string");
    QpiTerm::seq_all([x_mask(target), ccz(), x_mask(target)])
}

/// Reflection about `|+++⟩`, up to a global sign.
pub fn amplifier() -> QpiTerm {
    QpiTerm::seq_all([on_all(h()), on_all(x()), ccz(), on_all(x()), on_all(h())])
}

/// `|+++⟩` prepared from the unit type.
pub fn plus3() -> QpiTerm {
    QpiTerm::seq_all([
        QpiTerm::UnitiT,
        QpiTerm::second(QpiTerm::UnitiT, TypeExpr::One),
        on_all(plus()),
    ])
}

/// Measures all three qubits in the computational basis.
pub fn measure3() -> ChannelTerm {
    ChannelTerm::prod(
        ChannelTerm::MeasureZ,
        ChannelTerm::prod(ChannelTerm::MeasureZ, ChannelTerm::MeasureZ),
    )
}

/// Grover search over three qubits: prepare `|+++⟩`, apply oracle then
/// amplifier `iterations` times, measure. Runs from the unit type.
pub fn grover3(oracle: QpiTerm, iterations: usize) -> ChannelTerm {
    let round = QpiTerm::seq(oracle, amplifier());
    let mut steps = vec![plus3()];
    steps.extend(std::iter::repeat_n(round, iterations));
    ChannelTerm::seq(ChannelTerm::Pure(QpiTerm::seq_all(steps)), measure3())
}

/// The iteration count `⌈π/4 · √8⌉`.
pub const GROVER3_ITERATIONS: usize = 3;

// CX between the two registers of `(a0 × a1) × (b0 × b1)`.
fn simon_cx(control: usize, target: usize) -> PiTerm {
    let flip = match target {
        0 => PiTerm::product(PiTerm::SwapPlus, PiTerm::Id),
        _ => PiTerm::product(PiTerm::Id, PiTerm::SwapPlus),
    };
    let core = PiTerm::seq_all([
        PiTerm::AssocrTimes,
        pi::ctrl(PiTerm::product(PiTerm::Id, flip)),
        PiTerm::AssoclTimes,
    ]);
    if control == 0 {
        core
    } else {
        let swap_a = PiTerm::product(PiTerm::SwapTimes, PiTerm::Id);
        PiTerm::seq_all([swap_a.clone(), core, swap_a])
    }
}

/// The oracle part of Simon's circuit on `(a0 × a1) × (b0 × b1)`: each `a`
/// qubit is copied onto both `b` qubits, so `f(a) = f(a ⊕ 11)`.
pub fn simon_oracle() -> QpiTerm {
    QpiTerm::seq_all([(0, 0), (0, 1), (1, 0), (1, 1)].map(|(c, t)| QpiTerm::arr_z(simon_cx(c, t))))
}

pub fn simon_register() -> TypeExpr {
    TypeExpr::prod(qq(), qq())
}

/// Simon's circuit with hidden string `11`: Hadamards on the `a` register,
/// the oracle, Hadamards again, then the `b` register is dropped and `a` measured.
pub fn simon() -> ChannelTerm {
    let h2 = QpiTerm::first(QpiTerm::prod(h(), h()), qq());
    let unitary = QpiTerm::seq_all([h2.clone(), simon_oracle(), h2]);
    ChannelTerm::seq_all([
        ChannelTerm::Pure(unitary),
        ChannelTerm::Fst,
        ChannelTerm::prod(ChannelTerm::MeasureZ, ChannelTerm::MeasureZ),
    ])
}

/// A corpus entry.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedProgram {
    pub name: &'static str,
    pub term: ChannelTerm,
    pub domain: TypeExpr,
    pub doc: &'static str,
}

impl NamedProgram {
    fn pure(name: &'static str, term: QpiTerm, domain: TypeExpr, doc: &'static str) -> Self {
        Self { name, term: ChannelTerm::Pure(term), domain, doc }
    }
}

/// Every built-in program, in a fixed order.
pub fn corpus() -> Vec<NamedProgram> {
    let three = TypeExpr::qubits(3);
    vec![
        NamedProgram::pure("x", x(), q(), "negation"),
        NamedProgram::pure("h", h(), q(), "Hadamard at the quantum angle"),
        NamedProgram::pure("z", z(), q(), "phase flip"),
        NamedProgram::pure("cx", cx(), qq(), "controlled negation"),
        NamedProgram::pure("ccx", ccx(), three.clone(), "Toffoli"),
        NamedProgram::pure("zero", zero(), TypeExpr::One, "the state |0>"),
        NamedProgram::pure("one", one(), TypeExpr::One, "the state |1>"),
        NamedProgram::pure("plus", plus(), TypeExpr::One, "the state |+>"),
        NamedProgram::pure("minus", minus(), TypeExpr::One, "the state |->"),
        NamedProgram::pure("assertZero", assert_zero(), q(), "the effect <0|"),
        NamedProgram::pure("assertOne", assert_one(), q(), "the effect <1|"),
        NamedProgram::pure("copyZ", copy_z(), q(), "copies computational basis states"),
        NamedProgram::pure("copyX", copy_x(), q(), "copies the states |+> and |->"),
        NamedProgram::pure("ctrlZ", ctrl_z(), qq(), "controlled phase flip"),
        NamedProgram::pure("ctrlS", ctrl_s(), three.clone(), "controlled S with the last qubit encoding the imaginary part"),
        NamedProgram::pure("ccz", ccz(), three.clone(), "doubly controlled phase flip"),
        NamedProgram::pure("amplifier", amplifier(), three, "Grover diffusion"),
        NamedProgram {
            name: "grover3",
            term: grover3(grover_oracle(0b101), GROVER3_ITERATIONS),
            domain: TypeExpr::One,
            doc: "three-qubit search for 101",
        },
        NamedProgram { name: "simon", term: simon(), domain: simon_register(), doc: "Simon's circuit with hidden string 11" },
    ]
}

pub fn lookup(name: &str) -> Option<NamedProgram> {
    corpus().into_iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, Complex};
    use crate::measure::{distribution, Gate};
    use crate::qpi::eval_qpi;
    use crate::unitary::{eval_pi, Phi};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn eval(d: &QpiTerm, dom: &TypeExpr) -> CMatrix {
        eval_qpi(Phi::QUANTUM, d, dom).unwrap()
    }

    #[test]
    fn every_entry_typechecks_and_names_are_unique() {
        let all = corpus();
        for p in &all {
            p.term.typecheck(&p.domain).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
        let mut names: Vec<_> = all.iter().map(|p| p.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
    }

    #[test]
    fn states() {
        let s = FRAC_1_SQRT_2;
        assert!(eval(&plus(), &TypeExpr::One).approx_eq(&CMatrix::from_real(2, 1, &[s, s]).unwrap(), 1e-12).equal);
        assert!(eval(&minus(), &TypeExpr::One).approx_eq(&CMatrix::from_real(2, 1, &[s, -s]).unwrap(), 1e-12).equal);
        assert_eq!(eval(&one(), &TypeExpr::One), CMatrix::ket(2, 1));
    }

    #[test]
    fn copy_x_copies_plus() {
        let s = FRAC_1_SQRT_2;
        let plus = CMatrix::from_real(2, 1, &[s, s]).unwrap();
        let out = eval(&copy_x(), &q()).matmul(&plus).unwrap();
        assert!(out.approx_eq(&plus.kron(&plus), 1e-12).equal);
    }

    #[test]
    fn z_is_diagonal() {
        let m = eval(&z(), &q());
        assert!(m.approx_eq(&CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap(), 1e-12).equal);
    }

    #[test]
    fn ccz_and_ctrl_s_blocks() {
        let m = eval(&ccz(), &TypeExpr::qubits(3));
        let mut diag = [Complex::new(1.0, 0.0); 8];
        diag[7] = Complex::new(-1.0, 0.0);
        let expected = CMatrix::from_fn(8, 8, |i, j| if i == j { diag[i] } else { Complex::new(0.0, 0.0) });
        assert!(m.approx_eq(&expected, 1e-12).equal);
        let s = eval(&ctrl_s(), &TypeExpr::qubits(3));
        assert!(s.max_imag() < 1e-12);
        // control off: identity on the first six basis states
        for i in 0..6 {
            assert!((s.get(i, i).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn simon_cx_wiring() {
        let dom = simon_register();
        for (c, t) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let m = eval_pi(&simon_cx(c, t), &dom).unwrap();
            // bit positions from the most significant: a0 a1 b0 b1
            let expected = CMatrix::permutation(16, |i| {
                let control = i >> (3 - c) & 1;
                i ^ (control << (1 - t))
            });
            assert_eq!(m, expected, "cx a{c} -> b{t}");
        }
    }

    #[test]
    fn simon_distribution() {
        let d = distribution(Phi::QUANTUM, &simon(), &simon_register(), 0, Gate::Checked).unwrap();
        assert!((d.prob("00") - 0.5).abs() < 1e-10);
        assert!((d.prob("11") - 0.5).abs() < 1e-10);
        assert!((d.success_prob - 1.0).abs() < 1e-10);
    }

    #[test]
    fn grover_identity_oracle_stays_uniform() {
        let d = distribution(Phi::QUANTUM, &grover3(QpiTerm::Id, 2), &TypeExpr::One, 0, Gate::Checked).unwrap();
        for p in &d.probs {
            assert!((p - 0.125).abs() < 1e-10);
        }
    }
}
