//! States and effects: programs that may allocate ancilla bits in `|0⟩` and
//! assert them back to `⟨0|`.
//!
//! Every program desugars to a single `lift` of a two-copy term
//! `b1 × n1 ↔ b2 × n2`, whose meaning is the contraction
//! `(I ⊗ ⟨0…0|) · U · (I ⊗ |0…0⟩)`.

use std::fmt;

use rand::Rng;

use crate::amalgam::{apply_pizh, eval_term, to_list, write_arr, PizhTerm};
use crate::linalg::CMatrix;
use crate::pi::{PiTerm, TypeError, TypeExpr};
use crate::unitary::{EvalError, Phi};

/// Types an ancilla may have: products of bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AncType {
    One,
    Bit,
    ProdAnc(Box<AncType>, Box<AncType>),
}

impl AncType {
    pub fn prod(a: AncType, b: AncType) -> Self {
        AncType::ProdAnc(Box::new(a), Box::new(b))
    }

    pub fn to_type(&self) -> TypeExpr {
        match self {
            AncType::One => TypeExpr::One,
            AncType::Bit => TypeExpr::qubit(),
            AncType::ProdAnc(a, b) => TypeExpr::prod(a.to_type(), b.to_type()),
        }
    }

    pub fn from_type(t: &TypeExpr) -> Option<AncType> {
        match t {
            TypeExpr::One => Some(AncType::One),
            t if t.is_qubit() => Some(AncType::Bit),
            TypeExpr::Prod(a, b) => Some(AncType::prod(Self::from_type(a)?, Self::from_type(b)?)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.to_type().dim()
    }
}

impl fmt::Display for AncType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_type().fmt(f)
    }
}

/// Programs of the states-and-effects arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QpiTerm {
    Lift(AncType, PizhTerm, AncType),
    Arr(PizhTerm),
    Seq(Box<QpiTerm>, Box<QpiTerm>),
    First(Box<QpiTerm>, TypeExpr),
    Second(Box<QpiTerm>, TypeExpr),
    Prod(Box<QpiTerm>, Box<QpiTerm>),
    Inv(Box<QpiTerm>),
    /// `1 ⇝ 1+1`, the state `|0⟩`.
    Zero,
    /// `1+1 ⇝ 1`, the effect `⟨0|`.
    AssertZero,
    Id,
    SwapT,
    /// `(a × b) × c ⇝ a × (b × c)`
    AssocT,
    /// `a × (b × c) ⇝ (a × b) × c`
    AssocIT,
    /// `b × 1 ⇝ b`
    UniteT,
    /// `b ⇝ b × 1`
    UnitiT,
}

/// `lift [n1, n2] body`, the normal form every program desugars to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub n1: AncType,
    pub body: PizhTerm,
    pub n2: AncType,
}

impl From<Lifted> for QpiTerm {
    fn from(l: Lifted) -> Self {
        QpiTerm::Lift(l.n1, l.body, l.n2)
    }
}

impl QpiTerm {
    pub fn seq(a: QpiTerm, b: QpiTerm) -> Self {
        QpiTerm::Seq(Box::new(a), Box::new(b))
    }

    /// Left-nested sequence; `Id` when empty.
    pub fn seq_all(steps: impl IntoIterator<Item = QpiTerm>) -> Self {
        steps.into_iter().reduce(QpiTerm::seq).unwrap_or(QpiTerm::Id)
    }

    pub fn first(d: QpiTerm, spectator: TypeExpr) -> Self {
        QpiTerm::First(Box::new(d), spectator)
    }

    pub fn second(d: QpiTerm, spectator: TypeExpr) -> Self {
        QpiTerm::Second(Box::new(d), spectator)
    }

    pub fn prod(a: QpiTerm, b: QpiTerm) -> Self {
        QpiTerm::Prod(Box::new(a), Box::new(b))
    }

    pub fn inv(d: QpiTerm) -> Self {
        QpiTerm::Inv(Box::new(d))
    }

    pub fn arr_z(c: PiTerm) -> Self {
        QpiTerm::Arr(PizhTerm::ArrZ(c))
    }

    pub fn arr_phi(c: PiTerm) -> Self {
        QpiTerm::Arr(PizhTerm::ArrPhi(c))
    }

    pub fn typecheck(&self, domain: &TypeExpr) -> Result<TypeExpr, TypeError> {
        let mismatch = |expected: &str| Err(TypeError::new(self, expected, domain));
        match self {
            QpiTerm::Lift(n1, body, n2) => {
                let start = TypeExpr::prod(domain.clone(), n1.to_type());
                match body.typecheck(&start)? {
                    TypeExpr::Prod(b2, m2) if *m2 == n2.to_type() => Ok(*b2),
                    other => Err(TypeError::new(self, format!("a body ending in b * {n2}"), other)),
                }
            }
            QpiTerm::Arr(m) => m.typecheck(domain),
            QpiTerm::Seq(a, b) => b.typecheck(&a.typecheck(domain)?),
            QpiTerm::First(d, s) => match domain {
                TypeExpr::Prod(a, s2) if **s2 == *s => Ok(TypeExpr::prod(d.typecheck(a)?, s.clone())),
                _ => mismatch(&format!("a product b * {s}")),
            },
            QpiTerm::Second(d, s) => match domain {
                TypeExpr::Prod(s2, a) if **s2 == *s => Ok(TypeExpr::prod(s.clone(), d.typecheck(a)?)),
                _ => mismatch(&format!("a product {s} * b")),
            },
            QpiTerm::Prod(a, b) => match domain {
                TypeExpr::Prod(da, db) => Ok(TypeExpr::prod(a.typecheck(da)?, b.typecheck(db)?)),
                _ => mismatch("a product for d1 *** d2"),
            },
            QpiTerm::Inv(d) => {
                let start = d.adjoint().typecheck(domain)?;
                let end = d.typecheck(&start)?;
                if end != *domain {
                    return Err(TypeError::new(self, format!("an inverse ending at {domain}"), end));
                }
                Ok(start)
            }
            QpiTerm::Zero => match domain {
                TypeExpr::One => Ok(TypeExpr::qubit()),
                _ => mismatch("1"),
            },
            QpiTerm::AssertZero => match domain {
                t if t.is_qubit() => Ok(TypeExpr::One),
                _ => mismatch("qubit"),
            },
            QpiTerm::Id => Ok(domain.clone()),
            QpiTerm::SwapT => PizhTerm::SwapT.typecheck(domain),
            QpiTerm::AssocT => PizhTerm::AssocT.typecheck(domain),
            QpiTerm::AssocIT => PizhTerm::AssocIT.typecheck(domain),
            QpiTerm::UniteT => PizhTerm::UniteT.typecheck(domain),
            QpiTerm::UnitiT => PizhTerm::UnitiT.typecheck(domain),
        }
    }

    /// Structural inverse: states become effects and vice versa.
    pub fn adjoint(&self) -> QpiTerm {
        match self {
            QpiTerm::Lift(n1, m, n2) => QpiTerm::Lift(n2.clone(), m.adjoint(), n1.clone()),
            QpiTerm::Arr(m) => QpiTerm::Arr(m.adjoint()),
            QpiTerm::Seq(a, b) => QpiTerm::seq(b.adjoint(), a.adjoint()),
            QpiTerm::First(d, s) => QpiTerm::first(d.adjoint(), s.clone()),
            QpiTerm::Second(d, s) => QpiTerm::second(d.adjoint(), s.clone()),
            QpiTerm::Prod(a, b) => QpiTerm::prod(a.adjoint(), b.adjoint()),
            QpiTerm::Inv(d) => (**d).clone(),
            QpiTerm::Zero => QpiTerm::AssertZero,
            QpiTerm::AssertZero => QpiTerm::Zero,
            QpiTerm::Id => QpiTerm::Id,
            QpiTerm::SwapT => QpiTerm::SwapT,
            QpiTerm::AssocT => QpiTerm::AssocIT,
            QpiTerm::AssocIT => QpiTerm::AssocT,
            QpiTerm::UniteT => QpiTerm::UnitiT,
            QpiTerm::UnitiT => QpiTerm::UniteT,
        }
    }

    pub(crate) fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // `>>>` = 1, `***` = 2, prefix forms = 3
        let binary = |f: &mut fmt::Formatter<'_>, a: &QpiTerm, op: &str, b: &QpiTerm, level: u8| {
            let paren = prec > level;
            if paren {
                f.write_str("(")?;
            }
            a.fmt_prec(f, level)?;
            write!(f, " {op} ")?;
            b.fmt_prec(f, level + 1)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        };
        let prefix = |f: &mut fmt::Formatter<'_>, head: &str, body: &QpiTerm| {
            write!(f, "{head} ")?;
            body.fmt_prec(f, 3)
        };
        match self {
            QpiTerm::Lift(n1, m, n2) => {
                write!(f, "lift [{n1}, {n2}] ")?;
                match m {
                    PizhTerm::Seq(..) | PizhTerm::Prod(..) => write!(f, "({m})"),
                    _ => write!(f, "{m}"),
                }
            }
            QpiTerm::Arr(PizhTerm::ArrZ(c)) => write_arr(f, "arrZ", c, false),
            QpiTerm::Arr(PizhTerm::ArrPhi(c)) => write_arr(f, "arrP", c, false),
            // other two-copy terms print in the shared surface syntax
            QpiTerm::Arr(m) => {
                if prec > 0 {
                    write!(f, "({m})")
                } else {
                    write!(f, "{m}")
                }
            }
            QpiTerm::Seq(a, b) => binary(f, a, ">>>", b, 1),
            QpiTerm::Prod(a, b) => binary(f, a, "***", b, 2),
            QpiTerm::First(d, s) => prefix(f, &format!("first [{s}]"), d),
            QpiTerm::Second(d, s) => prefix(f, &format!("second [{s}]"), d),
            QpiTerm::Inv(d) => prefix(f, "inv", d),
            QpiTerm::Zero => f.write_str("zero"),
            QpiTerm::AssertZero => f.write_str("assertZero"),
            QpiTerm::Id => f.write_str("id"),
            QpiTerm::SwapT => f.write_str("swapT"),
            QpiTerm::AssocT => f.write_str("assocrT"),
            QpiTerm::AssocIT => f.write_str("assoclT"),
            QpiTerm::UniteT => f.write_str("unitelT"),
            QpiTerm::UnitiT => f.write_str("unitilT"),
        }
    }
}

impl fmt::Display for QpiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Rewrites `d` applied at `domain` into a single lift; also returns the codomain.
pub fn desugar(d: &QpiTerm, domain: &TypeExpr) -> Result<(Lifted, TypeExpr), TypeError> {
    use PizhTerm as P;
    let lifted = |n1: AncType, body: PizhTerm, n2: AncType| Lifted { n1, body, n2 };
    match d {
        QpiTerm::Lift(n1, body, n2) => {
            let cod = d.typecheck(domain)?;
            Ok((lifted(n1.clone(), body.clone(), n2.clone()), cod))
        }
        QpiTerm::Arr(m) => {
            let cod = m.typecheck(domain)?;
            let body = P::seq_all([P::UniteT, m.clone(), P::UnitiT]);
            Ok((lifted(AncType::One, body, AncType::One), cod))
        }
        QpiTerm::Id => desugar(&QpiTerm::Arr(P::Id), domain),
        QpiTerm::SwapT => desugar(&QpiTerm::Arr(P::SwapT), domain),
        QpiTerm::AssocT => desugar(&QpiTerm::Arr(P::AssocT), domain),
        QpiTerm::AssocIT => desugar(&QpiTerm::Arr(P::AssocIT), domain),
        QpiTerm::UniteT => desugar(&QpiTerm::Arr(P::UniteT), domain),
        QpiTerm::UnitiT => desugar(&QpiTerm::Arr(P::UnitiT), domain),
        QpiTerm::Zero => {
            let cod = d.typecheck(domain)?;
            Ok((lifted(AncType::Bit, P::SwapT, AncType::One), cod))
        }
        QpiTerm::AssertZero => {
            let cod = d.typecheck(domain)?;
            Ok((lifted(AncType::One, P::SwapT, AncType::Bit), cod))
        }
        QpiTerm::Seq(a, b) => {
            let (m, mid) = desugar(a, domain)?;
            let (p, cod) = desugar(b, &mid)?;
            // b1 × (n1 × n3) ↔ b3 × (n4 × n2)
            let (n2, n3) = (m.n2.to_type(), p.n1.to_type());
            let body = P::seq_all([
                P::AssocIT,
                P::first(m.body, n3),
                P::AssocT,
                P::second(P::SwapT, mid.clone()),
                P::AssocIT,
                P::first(p.body, n2),
                P::AssocT,
            ]);
            Ok((lifted(AncType::prod(m.n1, p.n1), body, AncType::prod(p.n2, m.n2)), cod))
        }
        QpiTerm::First(inner, s) => match domain {
            TypeExpr::Prod(b1, s2) if **s2 == *s => {
                let (m, b2) = desugar(inner, b1)?;
                // (b1 × b3) × n1 ↔ (b2 × b3) × n2
                let body = P::seq_all([
                    P::AssocT,
                    P::second(P::SwapT, (**b1).clone()),
                    P::AssocIT,
                    P::first(m.body, s.clone()),
                    P::AssocT,
                    P::second(P::SwapT, b2.clone()),
                    P::AssocIT,
                ]);
                Ok((lifted(m.n1, body, m.n2), TypeExpr::prod(b2, s.clone())))
            }
            _ => Err(TypeError::new(d, format!("a product b * {s}"), domain)),
        },
        QpiTerm::Second(inner, s) => {
            let rewritten = QpiTerm::seq_all([QpiTerm::SwapT, QpiTerm::first((**inner).clone(), s.clone()), QpiTerm::SwapT]);
            match domain {
                TypeExpr::Prod(s2, _) if **s2 == *s => desugar(&rewritten, domain),
                _ => Err(TypeError::new(d, format!("a product {s} * b"), domain)),
            }
        }
        QpiTerm::Prod(a, b) => match domain {
            TypeExpr::Prod(_, db) => {
                let first = QpiTerm::first((**a).clone(), (**db).clone());
                let TypeExpr::Prod(ca, _) = first.typecheck(domain)? else {
                    unreachable!("first yields a product")
                };
                desugar(&QpiTerm::seq(first, QpiTerm::second((**b).clone(), *ca)), domain)
            }
            _ => Err(TypeError::new(d, "a product for d1 *** d2", domain)),
        },
        QpiTerm::Inv(inner) => {
            let start = d.typecheck(domain)?;
            let (m, _) = desugar(inner, &start)?;
            let body = inverse_body(&m.body, &TypeExpr::prod(domain.clone(), m.n2.to_type()));
            Ok((lifted(m.n2, body, m.n1), start))
        }
    }
}

// The structural adjoint when it typechecks at `domain`, an explicit `inv` otherwise.
fn inverse_body(m: &PizhTerm, domain: &TypeExpr) -> PizhTerm {
    let adj = m.adjoint();
    if adj.typecheck(domain).is_ok() {
        adj
    } else {
        PizhTerm::inv(m.clone())
    }
}

fn zero_column(n: &AncType) -> CMatrix {
    CMatrix::ket(n.dim(), 0)
}

/// Contraction of `d` at `domain`, via its lift normal form.
pub fn eval_qpi(phi: Phi, d: &QpiTerm, domain: &TypeExpr) -> Result<CMatrix, EvalError> {
    let (l, cod) = desugar(d, domain)?;
    eval_lifted(phi, &l, domain, &cod)
}

pub fn eval_lifted(phi: Phi, l: &Lifted, domain: &TypeExpr, cod: &TypeExpr) -> Result<CMatrix, EvalError> {
    let start = TypeExpr::prod(domain.clone(), l.n1.to_type());
    let list = to_list(&l.body, &start)?;
    let inject = CMatrix::identity(domain.dim()).kron(&zero_column(&l.n1));
    let out = apply_pizh(phi, &list, inject)?;
    let project = CMatrix::identity(cod.dim()).kron(&zero_column(&l.n2).dagger());
    Ok(project.matmul(&out)?)
}

/// Contraction of `d` computed compositionally, without desugaring.
pub fn eval_qpi_direct(phi: Phi, d: &QpiTerm, domain: &TypeExpr) -> Result<CMatrix, EvalError> {
    let pizh = |m: PizhTerm| eval_term(phi, &m, domain);
    match d {
        QpiTerm::Lift(..) => {
            let cod = d.typecheck(domain)?;
            let (l, _) = desugar(d, domain)?;
            eval_lifted(phi, &l, domain, &cod)
        }
        QpiTerm::Arr(m) => pizh(m.clone()),
        QpiTerm::Seq(a, b) => {
            let mid = a.typecheck(domain)?;
            let ma = eval_qpi_direct(phi, a, domain)?;
            Ok(eval_qpi_direct(phi, b, &mid)?.matmul(&ma)?)
        }
        QpiTerm::First(inner, s) => match domain {
            TypeExpr::Prod(a, _) => {
                d.typecheck(domain)?;
                Ok(eval_qpi_direct(phi, inner, a)?.kron(&CMatrix::identity(s.dim())))
            }
            _ => Err(d.typecheck(domain).unwrap_err().into()),
        },
        QpiTerm::Second(inner, s) => match domain {
            TypeExpr::Prod(_, a) => {
                d.typecheck(domain)?;
                Ok(CMatrix::identity(s.dim()).kron(&eval_qpi_direct(phi, inner, a)?))
            }
            _ => Err(d.typecheck(domain).unwrap_err().into()),
        },
        QpiTerm::Prod(a, b) => match domain {
            TypeExpr::Prod(da, db) => Ok(eval_qpi_direct(phi, a, da)?.kron(&eval_qpi_direct(phi, b, db)?)),
            _ => Err(d.typecheck(domain).unwrap_err().into()),
        },
        QpiTerm::Inv(inner) => {
            let start = d.typecheck(domain)?;
            Ok(eval_qpi_direct(phi, inner, &start)?.dagger())
        }
        QpiTerm::Zero => {
            d.typecheck(domain)?;
            Ok(CMatrix::ket(2, 0))
        }
        QpiTerm::AssertZero => {
            d.typecheck(domain)?;
            Ok(CMatrix::bra(2, 0))
        }
        QpiTerm::Id => pizh(PizhTerm::Id),
        QpiTerm::SwapT => pizh(PizhTerm::SwapT),
        QpiTerm::AssocT => pizh(PizhTerm::AssocT),
        QpiTerm::AssocIT => pizh(PizhTerm::AssocIT),
        QpiTerm::UniteT => pizh(PizhTerm::UniteT),
        QpiTerm::UnitiT => pizh(PizhTerm::UnitiT),
    }
}

pub const TOTALITY_TOL: f64 = 1e-9;

/// Whether `d ⟫ inv d` is the identity, i.e. `d` never fails.
pub fn totality_check(phi: Phi, d: &QpiTerm, domain: &TypeExpr) -> Result<bool, EvalError> {
    let round_trip = QpiTerm::seq(d.clone(), QpiTerm::inv(d.clone()));
    let m = eval_qpi(phi, &round_trip, domain)?;
    Ok(m.approx_eq(&CMatrix::identity(domain.dim()), TOTALITY_TOL).equal)
}

/// Seeded generation of well-typed programs over qubit registers.
pub mod gen {
    use super::*;
    use crate::pi::gen::random_term;

    /// A random register type: `1`, a qubit, or a product of registers, with
    /// dimension at most `max_dim`.
    pub fn random_register<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> TypeExpr {
        loop {
            let t = grow(rng, 2);
            if t.dim() <= max_dim {
                return t;
            }
        }
    }

    fn grow<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> TypeExpr {
        match (depth, rng.gen_range(0..6)) {
            (0, 0) | (_, 5) => TypeExpr::One,
            (0, _) | (_, 0..=2) => TypeExpr::qubit(),
            _ => TypeExpr::prod(grow(rng, depth - 1), grow(rng, depth - 1)),
        }
    }

    /// A program of roughly `size` steps, well-typed at `domain`, whose
    /// intermediate types never exceed `max_dim`.
    pub fn random_program<R: Rng + ?Sized>(rng: &mut R, domain: &TypeExpr, size: usize, max_dim: usize) -> QpiTerm {
        let mut current = domain.clone();
        let mut steps = Vec::new();
        for _ in 0..size.max(1) {
            let step = random_step(rng, &current, max_dim);
            current = step.typecheck(&current).expect("generated steps are well-typed");
            steps.push(step);
        }
        QpiTerm::seq_all(steps)
    }

    fn random_step<R: Rng + ?Sized>(rng: &mut R, domain: &TypeExpr, max_dim: usize) -> QpiTerm {
        match rng.gen_range(0..10) {
            // allocate a fresh qubit on the right
            0 if domain.dim() * 2 <= max_dim => {
                QpiTerm::seq(QpiTerm::UnitiT, QpiTerm::second(QpiTerm::Zero, domain.clone()))
            }
            // assert the rightmost qubit
            1 => match domain {
                TypeExpr::Prod(a, q) if q.is_qubit() => {
                    QpiTerm::seq(QpiTerm::second(QpiTerm::AssertZero, (**a).clone()), QpiTerm::UniteT)
                }
                _ => arr(rng, domain),
            },
            2 => match domain {
                TypeExpr::Prod(a, b) => {
                    let inner = random_step(rng, a, max_dim / b.dim().max(1));
                    QpiTerm::first(inner, (**b).clone())
                }
                _ => arr(rng, domain),
            },
            3 => match domain {
                TypeExpr::Prod(a, b) => {
                    let inner = random_step(rng, b, max_dim / a.dim().max(1));
                    QpiTerm::second(inner, (**a).clone())
                }
                _ => arr(rng, domain),
            },
            4 => {
                let inner = random_step(rng, domain, max_dim);
                QpiTerm::inv(inner.adjoint())
            }
            _ => arr(rng, domain),
        }
    }

    fn arr<R: Rng + ?Sized>(rng: &mut R, domain: &TypeExpr) -> QpiTerm {
        let size = rng.gen_range(1..=5);
        let (c, _) = random_term(rng, domain, size);
        if rng.gen_bool(0.5) {
            QpiTerm::arr_z(c)
        } else {
            QpiTerm::arr_phi(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi::cx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> TypeExpr {
        TypeExpr::qubit()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.approx_eq(b, tol).equal
    }

    fn copy_z() -> QpiTerm {
        QpiTerm::seq_all([QpiTerm::UnitiT, QpiTerm::prod(QpiTerm::Id, QpiTerm::Zero), QpiTerm::arr_z(cx())])
    }

    #[test]
    fn zero_and_assert_zero_desugar() {
        let (l, cod) = desugar(&QpiTerm::Zero, &TypeExpr::One).unwrap();
        assert_eq!(l, Lifted { n1: AncType::Bit, body: PizhTerm::SwapT, n2: AncType::One });
        assert_eq!(cod, q());
        let (a, _) = desugar(&QpiTerm::AssertZero, &q()).unwrap();
        let (b, _) = desugar(&QpiTerm::inv(QpiTerm::Zero), &q()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn arr_desugar() {
        let m = PizhTerm::ArrPhi(PiTerm::SwapPlus);
        let (l, _) = desugar(&QpiTerm::Arr(m.clone()), &q()).unwrap();
        assert_eq!(l.body, PizhTerm::seq_all([PizhTerm::UniteT, m, PizhTerm::UnitiT]));
        assert_eq!((l.n1, l.n2), (AncType::One, AncType::One));
    }

    #[test]
    fn state_and_effect_matrices() {
        let phi = Phi::QUANTUM;
        assert_eq!(eval_qpi(phi, &QpiTerm::Zero, &TypeExpr::One).unwrap(), CMatrix::ket(2, 0));
        assert_eq!(eval_qpi(phi, &QpiTerm::AssertZero, &q()).unwrap(), CMatrix::bra(2, 0));
        let za = QpiTerm::seq(QpiTerm::Zero, QpiTerm::AssertZero);
        assert_eq!(eval_qpi(phi, &za, &TypeExpr::One).unwrap(), CMatrix::identity(1));
    }

    #[test]
    fn copy_z_copies_basis_states() {
        let m = eval_qpi(Phi::QUANTUM, &copy_z(), &q()).unwrap();
        assert_eq!(m.shape(), (4, 2));
        assert!(close(&m.matmul(&CMatrix::ket(2, 0)).unwrap(), &CMatrix::ket(4, 0), 1e-12));
        assert!(close(&m.matmul(&CMatrix::ket(2, 1)).unwrap(), &CMatrix::ket(4, 3), 1e-12));
    }

    #[test]
    fn first_and_second_place_the_spectator() {
        let phi = Phi(0.3);
        let d = QpiTerm::arr_phi(PiTerm::SwapPlus);
        let u = eval_qpi(phi, &d, &q()).unwrap();
        let f = eval_qpi(phi, &QpiTerm::first(d.clone(), q()), &TypeExpr::prod(q(), q())).unwrap();
        assert!(close(&f, &u.kron(&CMatrix::identity(2)), 1e-12));
        let s = eval_qpi(phi, &QpiTerm::second(d, TypeExpr::One), &TypeExpr::prod(TypeExpr::One, q())).unwrap();
        assert!(close(&s, &u, 1e-12));
        // a state under first
        let z = eval_qpi(phi, &QpiTerm::first(QpiTerm::Zero, q()), &TypeExpr::prod(TypeExpr::One, q())).unwrap();
        assert!(close(&z, &CMatrix::ket(2, 0).kron(&CMatrix::identity(2)), 1e-12));
    }

    #[test]
    fn totality() {
        let phi = Phi::QUANTUM;
        assert!(totality_check(phi, &QpiTerm::arr_phi(PiTerm::SwapPlus), &q()).unwrap());
        assert!(totality_check(phi, &copy_z(), &q()).unwrap());
        assert!(!totality_check(phi, &QpiTerm::AssertZero, &q()).unwrap());
    }

    #[test]
    fn lift_typing() {
        let bad = QpiTerm::Lift(AncType::One, PizhTerm::Id, AncType::Bit);
        assert!(bad.typecheck(&q()).is_err());
        assert!(QpiTerm::Zero.typecheck(&q()).is_err());
        assert!(QpiTerm::AssertZero.typecheck(&TypeExpr::One).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(copy_z().to_string(), "unitilT >>> id *** zero >>> arrZ (ctrl swapP)");
        let l = QpiTerm::Lift(AncType::Bit, PizhTerm::seq(PizhTerm::SwapT, PizhTerm::Id), AncType::One);
        assert_eq!(l.to_string(), "lift [qubit, 1] (swapT >>> id)");
        let nested = QpiTerm::first(QpiTerm::seq(QpiTerm::Zero, QpiTerm::AssertZero), q());
        assert_eq!(nested.to_string(), "first [qubit] (zero >>> assertZero)");
    }

    #[test]
    fn desugared_and_direct_semantics_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..150 {
            let dom = gen::random_register(&mut rng, 8);
            let d = gen::random_program(&mut rng, &dom, 4, 16);
            let a = eval_qpi(Phi::QUANTUM, &d, &dom).unwrap();
            let b = eval_qpi_direct(Phi::QUANTUM, &d, &dom).unwrap();
            assert!(close(&a, &b, 1e-10), "{d}");
            let inv = eval_qpi(Phi::QUANTUM, &QpiTerm::inv(d.clone()), &d.typecheck(&dom).unwrap()).unwrap();
            assert!(close(&inv, &a.dagger(), 1e-10));
            assert!(a.spectral_norm_le_one(1e-9));
        }
    }
}
