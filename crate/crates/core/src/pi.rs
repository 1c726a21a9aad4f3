//! The classical reversible core: finite types built from `0`, `1`, `+`, `×`
//! and the combinators witnessing the rig isomorphisms between them.

use std::fmt;

use rand::Rng;
use thiserror::Error;

/// A finite value type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Zero,
    One,
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
}

impl TypeExpr {
    pub fn sum(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    /// `1 + 1`; the left injection is false, i.e. `|0⟩`.
    pub fn qubit() -> Self {
        Self::sum(TypeExpr::One, TypeExpr::One)
    }

    /// `n` qubits, nested to the right: `qubit × (qubit × (…))`. Zero qubits is `1`.
    pub fn qubits(n: usize) -> Self {
        match n {
            0 => TypeExpr::One,
            1 => Self::qubit(),
            _ => Self::prod(Self::qubit(), Self::qubits(n - 1)),
        }
    }

    /// Number of values of the type, i.e. the dimension of its Hilbert space.
    pub fn dim(&self) -> usize {
        match self {
            TypeExpr::Zero => 0,
            TypeExpr::One => 1,
            TypeExpr::Sum(a, b) => a.dim() + b.dim(),
            TypeExpr::Prod(a, b) => a.dim() * b.dim(),
        }
    }

    pub fn is_qubit(&self) -> bool {
        *self == Self::qubit()
    }

    /// Leaves of a product tree made of `1` and `1+1` only; `None` otherwise.
    /// The count is the number of bits in a classical readout of the type.
    pub fn bit_count(&self) -> Option<usize> {
        match self {
            TypeExpr::One => Some(0),
            t if t.is_qubit() => Some(1),
            TypeExpr::Prod(a, b) => Some(a.bit_count()? + b.bit_count()?),
            _ => None,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // prec 0: anything, 1: operand of `*` (sums need parentheses),
        // 2: right operand of `*`, 3: right operand of `+`
        match self {
            TypeExpr::Zero => f.write_str("0"),
            TypeExpr::One => f.write_str("1"),
            t if t.is_qubit() => f.write_str("qubit"),
            TypeExpr::Sum(a, b) => {
                let paren = prec >= 1;
                if paren {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 3)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            TypeExpr::Prod(a, b) => {
                let paren = prec == 2;
                if paren {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 2)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A combinator of the reversible core.
///
/// Associators follow the usual naming: `assocl` regroups to the left,
/// `assocr` to the right.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PiTerm {
    Id,
    /// `b1 + b2 ↔ b2 + b1`
    SwapPlus,
    /// `b1 + (b2 + b3) ↔ (b1 + b2) + b3`
    AssoclPlus,
    /// `(b1 + b2) + b3 ↔ b1 + (b2 + b3)`
    AssocrPlus,
    /// `0 + b ↔ b`
    UnitePlus,
    /// `b ↔ 0 + b`
    UnitiPlus,
    /// `b1 × b2 ↔ b2 × b1`
    SwapTimes,
    /// `b1 × (b2 × b3) ↔ (b1 × b2) × b3`
    AssoclTimes,
    /// `(b1 × b2) × b3 ↔ b1 × (b2 × b3)`
    AssocrTimes,
    /// `1 × b ↔ b`
    UniteTimes,
    /// `b ↔ 1 × b`
    UnitiTimes,
    /// `(b1 + b2) × b3 ↔ (b1 × b3) + (b2 × b3)`
    Dist,
    Factor,
    /// `b × 0 ↔ 0`
    Absorbl,
    /// `0 ↔ b × 0`; the annotation is the `b` the domain cannot determine.
    Factorzr(TypeExpr),
    Seq(Box<PiTerm>, Box<PiTerm>),
    Sum(Box<PiTerm>, Box<PiTerm>),
    Product(Box<PiTerm>, Box<PiTerm>),
    Inv(Box<PiTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{term}` expects {expected}, found {actual}")]
pub struct TypeError {
    /// Printed form of the offending subterm.
    pub term: String,
    pub expected: String,
    pub actual: String,
}

impl TypeError {
    pub fn new(term: impl fmt::Display, expected: impl Into<String>, actual: impl fmt::Display) -> Self {
        Self {
            term: term.to_string(),
            expected: expected.into(),
            actual: actual.to_string(),
        }
    }
}

impl PiTerm {
    pub fn seq(a: PiTerm, b: PiTerm) -> Self {
        PiTerm::Seq(Box::new(a), Box::new(b))
    }

    /// Left-nested sequence of several steps; the identity when empty.
    pub fn seq_all(steps: impl IntoIterator<Item = PiTerm>) -> Self {
        steps
            .into_iter()
            .reduce(PiTerm::seq)
            .unwrap_or(PiTerm::Id)
    }

    pub fn sum(a: PiTerm, b: PiTerm) -> Self {
        PiTerm::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: PiTerm, b: PiTerm) -> Self {
        PiTerm::Product(Box::new(a), Box::new(b))
    }

    pub fn inv(a: PiTerm) -> Self {
        PiTerm::Inv(Box::new(a))
    }

    pub fn is_primitive(&self) -> bool {
        !matches!(
            self,
            PiTerm::Seq(..) | PiTerm::Sum(..) | PiTerm::Product(..) | PiTerm::Inv(..)
        )
    }

    /// Codomain of the term applied at `domain`, following the typing table forward.
    pub fn typecheck(&self, domain: &TypeExpr) -> Result<TypeExpr, TypeError> {
        use TypeExpr as T;
        let mismatch = |expected: &str| Err(TypeError::new(self, expected, domain));
        match self {
            PiTerm::Id => Ok(domain.clone()),
            PiTerm::SwapPlus => match domain {
                T::Sum(a, b) => Ok(T::Sum(b.clone(), a.clone())),
                _ => mismatch("a sum b1 + b2"),
            },
            PiTerm::AssoclPlus => match domain {
                T::Sum(a, bc) => match bc.as_ref() {
                    T::Sum(b, c) => Ok(T::sum(T::Sum(a.clone(), b.clone()), (**c).clone())),
                    _ => mismatch("b1 + (b2 + b3)"),
                },
                _ => mismatch("b1 + (b2 + b3)"),
            },
            PiTerm::AssocrPlus => match domain {
                T::Sum(ab, c) => match ab.as_ref() {
                    T::Sum(a, b) => Ok(T::sum((**a).clone(), T::Sum(b.clone(), c.clone()))),
                    _ => mismatch("(b1 + b2) + b3"),
                },
                _ => mismatch("(b1 + b2) + b3"),
            },
            PiTerm::UnitePlus => match domain {
                T::Sum(z, b) if **z == T::Zero => Ok((**b).clone()),
                _ => mismatch("0 + b"),
            },
            PiTerm::UnitiPlus => Ok(T::sum(T::Zero, domain.clone())),
            PiTerm::SwapTimes => match domain {
                T::Prod(a, b) => Ok(T::Prod(b.clone(), a.clone())),
                _ => mismatch("a product b1 * b2"),
            },
            PiTerm::AssoclTimes => match domain {
                T::Prod(a, bc) => match bc.as_ref() {
                    T::Prod(b, c) => Ok(T::prod(T::Prod(a.clone(), b.clone()), (**c).clone())),
                    _ => mismatch("b1 * (b2 * b3)"),
                },
                _ => mismatch("b1 * (b2 * b3)"),
            },
            PiTerm::AssocrTimes => match domain {
                T::Prod(ab, c) => match ab.as_ref() {
                    T::Prod(a, b) => Ok(T::prod((**a).clone(), T::Prod(b.clone(), c.clone()))),
                    _ => mismatch("(b1 * b2) * b3"),
                },
                _ => mismatch("(b1 * b2) * b3"),
            },
            PiTerm::UniteTimes => match domain {
                T::Prod(u, b) if **u == T::One => Ok((**b).clone()),
                _ => mismatch("1 * b"),
            },
            PiTerm::UnitiTimes => Ok(T::prod(T::One, domain.clone())),
            PiTerm::Dist => match domain {
                T::Prod(ab, c) => match ab.as_ref() {
                    T::Sum(a, b) => Ok(T::sum(
                        T::Prod(a.clone(), c.clone()),
                        T::Prod(b.clone(), c.clone()),
                    )),
                    _ => mismatch("(b1 + b2) * b3"),
                },
                _ => mismatch("(b1 + b2) * b3"),
            },
            PiTerm::Factor => match domain {
                T::Sum(l, r) => match (l.as_ref(), r.as_ref()) {
                    (T::Prod(a, c1), T::Prod(b, c2)) if c1 == c2 => {
                        Ok(T::prod(T::Sum(a.clone(), b.clone()), (**c1).clone()))
                    }
                    _ => mismatch("(b1 * b3) + (b2 * b3)"),
                },
                _ => mismatch("(b1 * b3) + (b2 * b3)"),
            },
            PiTerm::Absorbl => match domain {
                T::Prod(_, z) if **z == T::Zero => Ok(T::Zero),
                _ => mismatch("b * 0"),
            },
            PiTerm::Factorzr(b) => match domain {
                T::Zero => Ok(T::prod(b.clone(), T::Zero)),
                _ => mismatch("0"),
            },
            PiTerm::Seq(a, b) => {
                let mid = a.typecheck(domain)?;
                b.typecheck(&mid)
            }
            PiTerm::Sum(a, b) => match domain {
                T::Sum(da, db) => Ok(T::sum(a.typecheck(da)?, b.typecheck(db)?)),
                _ => mismatch("a sum for c1 + c2"),
            },
            PiTerm::Product(a, b) => match domain {
                T::Prod(da, db) => Ok(T::prod(a.typecheck(da)?, b.typecheck(db)?)),
                _ => mismatch("a product for c1 * c2"),
            },
            PiTerm::Inv(c) => {
                if c.contains_absorbl() {
                    return Err(TypeError::new(
                        self,
                        "an annotated inverse (write `factorzr [b]` for the inverse of absorbl)",
                        domain,
                    ));
                }
                c.adjoint().typecheck(domain)
            }
        }
    }

    /// The `c` of a term of the exact shape `ctrl c`.
    pub fn as_ctrl(&self) -> Option<&PiTerm> {
        let PiTerm::Seq(front, factor) = self else { return None };
        let PiTerm::Seq(dist, body) = front.as_ref() else { return None };
        if **factor != PiTerm::Factor || **dist != PiTerm::Dist {
            return None;
        }
        match body.as_ref() {
            PiTerm::Sum(l, r) if **l == PiTerm::Id => match r.as_ref() {
                PiTerm::Product(i, c) if **i == PiTerm::Id => Some(c),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn contains_absorbl(&self) -> bool {
        match self {
            PiTerm::Absorbl => true,
            PiTerm::Seq(a, b) | PiTerm::Sum(a, b) | PiTerm::Product(a, b) => {
                a.contains_absorbl() || b.contains_absorbl()
            }
            PiTerm::Inv(c) => c.contains_absorbl(),
            _ => false,
        }
    }

    /// Structural inverse.
    pub fn adjoint(&self) -> PiTerm {
        match self {
            PiTerm::Id => PiTerm::Id,
            PiTerm::SwapPlus => PiTerm::SwapPlus,
            PiTerm::AssoclPlus => PiTerm::AssocrPlus,
            PiTerm::AssocrPlus => PiTerm::AssoclPlus,
            PiTerm::UnitePlus => PiTerm::UnitiPlus,
            PiTerm::UnitiPlus => PiTerm::UnitePlus,
            PiTerm::SwapTimes => PiTerm::SwapTimes,
            PiTerm::AssoclTimes => PiTerm::AssocrTimes,
            PiTerm::AssocrTimes => PiTerm::AssoclTimes,
            PiTerm::UniteTimes => PiTerm::UnitiTimes,
            PiTerm::UnitiTimes => PiTerm::UniteTimes,
            PiTerm::Dist => PiTerm::Factor,
            PiTerm::Factor => PiTerm::Dist,
            // the annotation cannot be recovered without a domain; see `adjoint_at`
            PiTerm::Absorbl => PiTerm::Factorzr(TypeExpr::One),
            PiTerm::Factorzr(_) => PiTerm::Absorbl,
            PiTerm::Seq(a, b) => PiTerm::seq(b.adjoint(), a.adjoint()),
            PiTerm::Sum(a, b) => PiTerm::sum(a.adjoint(), b.adjoint()),
            PiTerm::Product(a, b) => PiTerm::product(a.adjoint(), b.adjoint()),
            PiTerm::Inv(c) => (**c).clone(),
        }
    }

    /// Structural inverse with the annotation of `factorzr` recovered from the
    /// domain the original term is applied at.
    pub fn adjoint_at(&self, domain: &TypeExpr) -> Result<PiTerm, TypeError> {
        Ok(match self {
            PiTerm::Absorbl => match domain {
                TypeExpr::Prod(b, _) => PiTerm::Factorzr((**b).clone()),
                _ => return Err(TypeError::new(self, "b * 0", domain)),
            },
            PiTerm::Seq(a, b) => {
                let mid = a.typecheck(domain)?;
                PiTerm::seq(b.adjoint_at(&mid)?, a.adjoint_at(domain)?)
            }
            PiTerm::Sum(a, b) => match domain {
                TypeExpr::Sum(da, db) => PiTerm::sum(a.adjoint_at(da)?, b.adjoint_at(db)?),
                _ => return Err(TypeError::new(self, "a sum for c1 + c2", domain)),
            },
            PiTerm::Product(a, b) => match domain {
                TypeExpr::Prod(da, db) => PiTerm::product(a.adjoint_at(da)?, b.adjoint_at(db)?),
                _ => return Err(TypeError::new(self, "a product for c1 * c2", domain)),
            },
            other => other.adjoint(),
        })
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // binding strength: `;` = 1, `+` = 2, `*` = 3, prefix = 4; all binary
        // operators are left-associative
        let binary = |f: &mut fmt::Formatter<'_>, a: &PiTerm, op: &str, b: &PiTerm, level: u8| {
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
        match self {
            PiTerm::Id => f.write_str("id"),
            PiTerm::SwapPlus => f.write_str("swapP"),
            PiTerm::AssoclPlus => f.write_str("assoclP"),
            PiTerm::AssocrPlus => f.write_str("assocrP"),
            PiTerm::UnitePlus => f.write_str("unitelP"),
            PiTerm::UnitiPlus => f.write_str("unitilP"),
            PiTerm::SwapTimes => f.write_str("swapT"),
            PiTerm::AssoclTimes => f.write_str("assoclT"),
            PiTerm::AssocrTimes => f.write_str("assocrT"),
            PiTerm::UniteTimes => f.write_str("unitelT"),
            PiTerm::UnitiTimes => f.write_str("unitilT"),
            PiTerm::Dist => f.write_str("dist"),
            PiTerm::Factor => f.write_str("factor"),
            PiTerm::Absorbl => f.write_str("absorbl"),
            PiTerm::Factorzr(b) => write!(f, "factorzr [{b}]"),
            PiTerm::Seq(..) if self.as_ctrl().is_some() => {
                let c = self.as_ctrl().expect("checked");
                if prec > 4 {
                    f.write_str("(")?;
                }
                f.write_str("ctrl ")?;
                c.fmt_prec(f, 4)?;
                if prec > 4 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            PiTerm::Seq(a, b) => binary(f, a, ";", b, 1),
            PiTerm::Sum(a, b) => binary(f, a, "+", b, 2),
            PiTerm::Product(a, b) => binary(f, a, "*", b, 3),
            PiTerm::Inv(c) => {
                f.write_str("inv ")?;
                c.fmt_prec(f, 4)
            }
        }
    }
}

impl fmt::Display for PiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// `ctrl c = dist ; id + (id × c) ; factor`, acting on `qubit × b`.
pub fn ctrl(c: PiTerm) -> PiTerm {
    PiTerm::seq_all([
        PiTerm::Dist,
        PiTerm::sum(PiTerm::Id, PiTerm::product(PiTerm::Id, c)),
        PiTerm::Factor,
    ])
}

/// Negation.
pub fn x() -> PiTerm {
    PiTerm::SwapPlus
}

pub fn cx() -> PiTerm {
    ctrl(x())
}

/// Toffoli.
pub fn ccx() -> PiTerm {
    ctrl(cx())
}

/// Seeded random generation of well-typed terms and small types.
pub mod gen {
    use super::*;

    /// A random type with `1 <= dim <= max_dim`, biased towards qubit registers.
    pub fn random_type<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> TypeExpr {
        assert!(max_dim >= 1);
        loop {
            let t = grow_type(rng, 3);
            let d = t.dim();
            if d >= 1 && d <= max_dim {
                return t;
            }
        }
    }

    fn grow_type<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> TypeExpr {
        if depth == 0 {
            return if rng.gen_bool(0.7) { TypeExpr::qubit() } else { TypeExpr::One };
        }
        match rng.gen_range(0..10) {
            0 => TypeExpr::One,
            1..=3 => TypeExpr::qubit(),
            4 => TypeExpr::Zero,
            5 | 6 => TypeExpr::sum(grow_type(rng, depth - 1), grow_type(rng, depth - 1)),
            _ => TypeExpr::prod(grow_type(rng, depth - 1), grow_type(rng, depth - 1)),
        }
    }

    /// A random term of at most `size` nodes, well-typed at `domain`; returns it
    /// with its codomain. Dimension is invariant, so the codomain has the same
    /// dimension as the domain.
    pub fn random_term<R: Rng + ?Sized>(rng: &mut R, domain: &TypeExpr, size: usize) -> (PiTerm, TypeExpr) {
        let term = grow(rng, domain, size.max(1));
        let cod = term
            .typecheck(domain)
            .expect("generator only builds well-typed terms");
        (term, cod)
    }

    fn grow<R: Rng + ?Sized>(rng: &mut R, domain: &TypeExpr, size: usize) -> PiTerm {
        use TypeExpr as T;
        if size >= 3 {
            match rng.gen_range(0..6) {
                0 | 1 => {
                    let left = rng.gen_range(1..size - 1);
                    let a = grow(rng, domain, left);
                    let mid = a.typecheck(domain).expect("well-typed");
                    let b = grow(rng, &mid, size - 1 - left);
                    return PiTerm::seq(a, b);
                }
                2 => match domain {
                    T::Sum(l, r) => {
                        let left = rng.gen_range(1..size - 1);
                        return PiTerm::sum(grow(rng, l, left), grow(rng, r, size - 1 - left));
                    }
                    T::Prod(l, r) => {
                        let left = rng.gen_range(1..size - 1);
                        return PiTerm::product(grow(rng, l, left), grow(rng, r, size - 1 - left));
                    }
                    _ => {}
                },
                3 => {
                    let inner = grow(rng, domain, size - 1);
                    let back = inner.adjoint_at(domain).expect("well-typed");
                    if back.contains_absorbl() {
                        return inner;
                    }
                    return PiTerm::inv(back);
                }
                _ => {}
            }
        }
        primitive(rng, domain)
    }

    fn primitive<R: Rng + ?Sized>(rng: &mut R, domain: &TypeExpr) -> PiTerm {
        let mut options = vec![PiTerm::Id];
        // type-growing unit introductions are kept rare so types stay small
        if rng.gen_bool(0.15) {
            options.push(PiTerm::UnitiPlus);
            options.push(PiTerm::UnitiTimes);
        }
        for candidate in [
            PiTerm::SwapPlus,
            PiTerm::AssoclPlus,
            PiTerm::AssocrPlus,
            PiTerm::UnitePlus,
            PiTerm::SwapTimes,
            PiTerm::AssoclTimes,
            PiTerm::AssocrTimes,
            PiTerm::UniteTimes,
            PiTerm::Dist,
            PiTerm::Factor,
            PiTerm::Absorbl,
            PiTerm::Factorzr(TypeExpr::qubit()),
        ] {
            if candidate.typecheck(domain).is_ok() {
                options.push(candidate);
            }
        }
        if matches!(domain, TypeExpr::Prod(c, t) if c.is_qubit() && t.is_qubit()) {
            options.push(cx());
        }
        let pick = rng.gen_range(0..options.len());
        options.swap_remove(pick)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> TypeExpr {
        TypeExpr::qubit()
    }

    #[test]
    fn dims() {
        assert_eq!(q().dim(), 2);
        assert_eq!(TypeExpr::prod(q(), q()).dim(), 4);
        assert_eq!(TypeExpr::prod(TypeExpr::Zero, q()).dim(), 0);
    }

    #[test]
    fn typecheck_examples() {
        assert_eq!(PiTerm::SwapPlus.typecheck(&q()).unwrap(), q());
        let qq = TypeExpr::prod(q(), q());
        assert_eq!(ctrl(PiTerm::SwapPlus).typecheck(&qq).unwrap(), qq);
        assert_eq!(ccx().typecheck(&TypeExpr::qubits(3)).unwrap(), TypeExpr::qubits(3));
        let dist = PiTerm::Dist.typecheck(&TypeExpr::prod(q(), TypeExpr::One)).unwrap();
        assert_eq!(
            dist,
            TypeExpr::sum(TypeExpr::prod(TypeExpr::One, TypeExpr::One), TypeExpr::prod(TypeExpr::One, TypeExpr::One))
        );
    }

    #[test]
    fn sequence_mismatch_is_reported_at_the_failing_step() {
        let bad = PiTerm::seq(PiTerm::Dist, PiTerm::SwapTimes);
        let err = bad.typecheck(&TypeExpr::prod(q(), TypeExpr::One)).unwrap_err();
        assert_eq!(err.term, "swapT");
        assert!(err.expected.contains("product"));
        assert_eq!(err.actual, "1 * 1 + 1 * 1");
    }

    #[test]
    fn dist_then_swap_plus_is_well_typed() {
        // swap⁺ accepts any sum, including the sum of products produced by dist
        let t = PiTerm::seq(PiTerm::Dist, PiTerm::SwapPlus);
        assert!(t.typecheck(&TypeExpr::prod(q(), TypeExpr::One)).is_ok());
    }

    #[test]
    fn primitive_errors() {
        assert!(PiTerm::UnitePlus.typecheck(&q()).is_err());
        assert!(PiTerm::Absorbl.typecheck(&q()).is_err());
        assert!(PiTerm::Factorzr(q()).typecheck(&q()).is_err());
        assert_eq!(
            PiTerm::Factorzr(q()).typecheck(&TypeExpr::Zero).unwrap(),
            TypeExpr::prod(q(), TypeExpr::Zero)
        );
        let unbalanced = TypeExpr::sum(TypeExpr::prod(q(), q()), TypeExpr::prod(q(), TypeExpr::One));
        assert!(PiTerm::Factor.typecheck(&unbalanced).is_err());
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(PiTerm::Dist.adjoint(), PiTerm::Factor);
        let a = PiTerm::SwapPlus;
        let b = PiTerm::AssoclPlus;
        assert_eq!(
            PiTerm::seq(a.clone(), b.clone()).adjoint(),
            PiTerm::seq(b.adjoint(), a.adjoint())
        );
        for c in [ccx(), PiTerm::seq(PiTerm::UnitiPlus, PiTerm::SwapPlus), PiTerm::sum(PiTerm::Dist, PiTerm::Absorbl)] {
            assert_eq!(c.adjoint().adjoint(), c);
        }
        assert_eq!(PiTerm::inv(PiTerm::inv(PiTerm::Dist)).adjoint(), PiTerm::inv(PiTerm::Dist));
        assert!(PiTerm::inv(PiTerm::Absorbl).typecheck(&TypeExpr::Zero).is_err());
    }

    #[test]
    fn derived_constructs() {
        assert_eq!(x(), PiTerm::SwapPlus);
        assert_eq!(cx(), ctrl(PiTerm::SwapPlus));
        assert_eq!(ccx(), ctrl(ctrl(PiTerm::SwapPlus)));
        assert_eq!(ctrl(x()).to_string(), "ctrl swapP");
        assert_eq!(ccx().to_string(), "ctrl ctrl swapP");
        assert_eq!(ctrl(PiTerm::seq(x(), x())).to_string(), "ctrl (swapP ; swapP)");
        assert_eq!(PiTerm::seq(cx(), cx()).to_string(), "ctrl swapP ; ctrl swapP");
        let spelled = PiTerm::seq_all([PiTerm::Dist, PiTerm::sum(PiTerm::Id, PiTerm::SwapPlus), PiTerm::Factor]);
        assert_eq!(spelled.to_string(), "dist ; id + swapP ; factor");
    }

    #[test]
    fn adjoint_reverses_types_on_random_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let dom = gen::random_type(&mut rng, 16);
            let (c, cod) = gen::random_term(&mut rng, &dom, 20);
            let back = c.adjoint_at(&dom).unwrap();
            assert_eq!(back.typecheck(&cod).unwrap(), dom, "term {c}");
            if !c.contains_absorbl() {
                assert_eq!(PiTerm::inv(c.clone()).typecheck(&cod).unwrap(), dom);
            }
            assert_eq!(cod.dim(), dom.dim());
            // determinism
            assert_eq!(c.typecheck(&dom).unwrap(), cod);
        }
    }

    #[test]
    fn type_display() {
        let t = TypeExpr::prod(TypeExpr::sum(q(), TypeExpr::One), TypeExpr::prod(q(), q()));
        assert_eq!(t.to_string(), "(qubit + 1) * (qubit * qubit)");
        assert_eq!(TypeExpr::qubits(3).to_string(), "qubit * (qubit * qubit)");
        assert_eq!(TypeExpr::prod(TypeExpr::prod(q(), q()), q()).to_string(), "qubit * qubit * qubit");
    }
}
