//! Name resolution, lowering to program terms, and typechecking with source positions.

use thiserror::Error;

use super::syntax::{Copy, Definition, Expr, ExprKind, PiNode, Pos, Prim, SourceFile};
use crate::amalgam::PizhTerm;
use crate::measure::ChannelTerm;
use crate::pi::{TypeError, TypeExpr};
use crate::qpi::{AncType, QpiTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("{pos}: unknown name `{name}`")]
    UnknownName { name: String, pos: Pos },
    #[error("{pos}: `{name}` is defined in terms of itself")]
    Cycle { name: String, pos: Pos },
    #[error("{pos}: {msg}")]
    Misuse { msg: String, pos: Pos },
    #[error("{pos}: type error at `{}`: expected {}, found {}", .error.term, .error.expected, .error.actual)]
    Type { error: TypeError, pos: Pos },
    #[error("{pos}: `{name}` has type {found}, but is annotated {annotated}")]
    Annotation { name: String, found: String, annotated: String, pos: Pos },
    #[error("{pos}: no input type fits `{name}`; add an annotation `: b1 ~> b2` (at {first} it fails with: {reason})")]
    NoDomain { name: String, first: TypeExpr, reason: String, pos: Pos },
}

/// A definition lowered and typechecked.
#[derive(Debug, Clone, PartialEq)]
pub struct Checked {
    pub name: String,
    pub term: ChannelTerm,
    pub domain: TypeExpr,
    pub codomain: TypeExpr,
}

/// Input types tried, in order, for definitions without an annotation.
pub fn domain_candidates() -> Vec<TypeExpr> {
    let q = TypeExpr::qubit;
    let one = || TypeExpr::One;
    vec![
        q(),
        one(),
        TypeExpr::prod(q(), q()),
        TypeExpr::prod(one(), one()),
        TypeExpr::prod(q(), TypeExpr::prod(q(), q())),
        TypeExpr::prod(TypeExpr::prod(q(), q()), TypeExpr::prod(q(), q())),
        TypeExpr::prod(one(), q()),
        TypeExpr::prod(q(), one()),
    ]
}

struct Lowerer<'a> {
    file: &'a SourceFile,
    stack: Vec<String>,
}

impl<'a> Lowerer<'a> {
    fn lookup(&mut self, name: &str, pos: Pos) -> Result<&'a Definition, CheckError> {
        if self.stack.iter().any(|n| n == name) {
            return Err(CheckError::Cycle { name: name.to_string(), pos });
        }
        self.file.get(name).ok_or_else(|| CheckError::UnknownName { name: name.to_string(), pos })
    }

    fn channel(&mut self, e: &Expr) -> Result<ChannelTerm, CheckError> {
        use ChannelTerm as C;
        let pure = |d: QpiTerm| Ok(C::Pure(d));
        match &e.kind {
            ExprKind::Arr(Copy::Z, c) => pure(QpiTerm::arr_z(c.term.clone())),
            ExprKind::Arr(Copy::P, c) => pure(QpiTerm::arr_phi(c.term.clone())),
            ExprKind::Lift(n1, n2, body) => {
                let anc = |t: &TypeExpr| {
                    AncType::from_type(t).ok_or_else(|| CheckError::Misuse {
                        msg: format!("ancilla type {t} is not built from qubit, 1 and *"),
                        pos: e.pos,
                    })
                };
                pure(QpiTerm::Lift(anc(n1)?, self.pizh(body)?, anc(n2)?))
            }
            ExprKind::Seq(a, b) => Ok(C::seq(self.channel(a)?, self.channel(b)?)),
            ExprKind::Prod(a, b) => Ok(C::prod(self.channel(a)?, self.channel(b)?)),
            ExprKind::First(s, d) => Ok(C::first(self.channel(d)?, s.clone())),
            ExprKind::Second(s, d) => Ok(C::second(self.channel(d)?, s.clone())),
            ExprKind::Inv(d) => match self.channel(d)? {
                C::Pure(d) => pure(QpiTerm::inv(d)),
                other => Err(CheckError::Misuse { msg: format!("`inv` needs a program without measurement or discarding, got `{other}`"), pos: e.pos }),
            },
            ExprKind::Prim(p) => Ok(match p {
                Prim::Zero => C::Pure(QpiTerm::Zero),
                Prim::AssertZero => C::Pure(QpiTerm::AssertZero),
                Prim::Id => C::Pure(QpiTerm::Id),
                Prim::SwapT => C::Pure(QpiTerm::SwapT),
                Prim::AssoclT => C::Pure(QpiTerm::AssocIT),
                Prim::AssocrT => C::Pure(QpiTerm::AssocT),
                Prim::UnitelT => C::Pure(QpiTerm::UniteT),
                Prim::UnitilT => C::Pure(QpiTerm::UnitiT),
                Prim::MeasureZ => C::MeasureZ,
                Prim::MeasureP => C::MeasureP,
                Prim::Discard => C::Discard,
                Prim::Fst => C::Fst,
                Prim::Snd => C::Snd,
            }),
            ExprKind::Name(n) => {
                let def = self.lookup(n, e.pos)?;
                self.stack.push(n.clone());
                let out = self.channel(&def.body);
                self.stack.pop();
                out
            }
        }
    }

    fn pizh(&mut self, e: &Expr) -> Result<PizhTerm, CheckError> {
        use PizhTerm as P;
        match &e.kind {
            ExprKind::Arr(Copy::Z, c) => Ok(P::ArrZ(c.term.clone())),
            ExprKind::Arr(Copy::P, c) => Ok(P::ArrPhi(c.term.clone())),
            ExprKind::Seq(a, b) => Ok(P::seq(self.pizh(a)?, self.pizh(b)?)),
            ExprKind::Prod(a, b) => Ok(P::prod(self.pizh(a)?, self.pizh(b)?)),
            ExprKind::First(s, d) => Ok(P::first(self.pizh(d)?, s.clone())),
            ExprKind::Second(s, d) => Ok(P::second(self.pizh(d)?, s.clone())),
            ExprKind::Inv(d) => Ok(P::inv(self.pizh(d)?)),
            ExprKind::Prim(Prim::Id) => Ok(P::Id),
            ExprKind::Prim(Prim::SwapT) => Ok(P::SwapT),
            ExprKind::Prim(Prim::AssoclT) => Ok(P::AssocIT),
            ExprKind::Prim(Prim::AssocrT) => Ok(P::AssocT),
            ExprKind::Prim(Prim::UnitelT) => Ok(P::UniteT),
            ExprKind::Prim(Prim::UnitilT) => Ok(P::UnitiT),
            ExprKind::Prim(p) => Err(CheckError::Misuse { msg: format!("`{}` cannot appear inside `lift`", p.keyword()), pos: e.pos }),
            ExprKind::Lift(..) => Err(CheckError::Misuse { msg: "`lift` cannot be nested".into(), pos: e.pos }),
            ExprKind::Name(n) => {
                let def = self.lookup(n, e.pos)?;
                self.stack.push(n.clone());
                let out = self.pizh(&def.body);
                self.stack.pop();
                out
            }
        }
    }
}

/// Lowers an expression of `file` to a program.
pub fn lower(file: &SourceFile, e: &Expr) -> Result<ChannelTerm, CheckError> {
    Lowerer { file, stack: Vec::new() }.channel(e)
}

// Position of the deepest subterm whose printed lowering is the offending term.
fn locate(file: &SourceFile, e: &Expr, in_lift: bool, printed: &str) -> Option<Pos> {
    fn pi_locate(node: &PiNode, printed: &str) -> Option<Pos> {
        node.children
            .iter()
            .find_map(|c| pi_locate(c, printed))
            .or_else(|| (node.term.to_string() == printed).then_some(node.pos))
    }
    let deeper = match &e.kind {
        ExprKind::Arr(_, c) => pi_locate(c, printed),
        ExprKind::Lift(_, _, b) => locate(file, b, true, printed),
        ExprKind::Seq(a, b) | ExprKind::Prod(a, b) => {
            locate(file, a, in_lift, printed).or_else(|| locate(file, b, in_lift, printed))
        }
        ExprKind::First(_, d) | ExprKind::Second(_, d) | ExprKind::Inv(d) => locate(file, d, in_lift, printed),
        ExprKind::Prim(_) | ExprKind::Name(_) => None,
    };
    deeper.or_else(|| {
        let mut l = Lowerer { file, stack: Vec::new() };
        let own = if in_lift { l.pizh(e).map(|m| m.to_string()) } else { l.channel(e).map(|c| c.to_string()) };
        (own.ok()? == printed).then_some(e.pos)
    })
}

fn type_error(file: &SourceFile, def: &Definition, error: TypeError) -> CheckError {
    let pos = locate(file, &def.body, false, &error.term).unwrap_or(def.body.pos);
    CheckError::Type { error, pos }
}

/// Lowers and typechecks one definition, at its annotation or at the first
/// candidate input type that fits.
pub fn check_definition(file: &SourceFile, def: &Definition) -> Result<Checked, CheckError> {
    let term = lower(file, &def.body)?;
    let checked = |domain: TypeExpr, codomain: TypeExpr| Checked { name: def.name.clone(), term: term.clone(), domain, codomain };
    match &def.signature {
        Some(sig) => {
            let cod = term.typecheck(&sig.domain).map_err(|e| type_error(file, def, e))?;
            if cod != sig.codomain {
                return Err(CheckError::Annotation {
                    name: def.name.clone(),
                    found: format!("{} ~> {cod}", sig.domain),
                    annotated: format!("{} ~> {}", sig.domain, sig.codomain),
                    pos: def.pos,
                });
            }
            Ok(checked(sig.domain.clone(), cod))
        }
        None => {
            let candidates = domain_candidates();
            let mut first_error = None;
            for b in &candidates {
                match term.typecheck(b) {
                    Ok(cod) => return Ok(checked(b.clone(), cod)),
                    Err(e) => {
                        first_error.get_or_insert(e);
                    }
                }
            }
            let e = first_error.expect("candidates are nonempty");
            let CheckError::Type { error, pos } = type_error(file, def, e) else { unreachable!() };
            Err(CheckError::NoDomain {
                name: def.name.clone(),
                first: candidates[0].clone(),
                reason: format!("`{}` expects {}, found {}", error.term, error.expected, error.actual),
                pos,
            })
        }
    }
}

pub fn check_file(file: &SourceFile) -> Vec<Result<Checked, CheckError>> {
    file.definitions.iter().chain(file.main.as_ref()).map(|d| check_definition(file, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::syntax::parse;
    use crate::corpus;

    fn checked(src: &str, name: &str) -> Result<Checked, CheckError> {
        let f = parse(src).unwrap();
        check_definition(&f, f.get(name).unwrap())
    }

    #[test]
    fn names_inline() {
        let c = checked("def h = arrP swapP\ndef hh : qubit ~> qubit = h >>> h", "hh").unwrap();
        assert_eq!(c.term, ChannelTerm::Pure(QpiTerm::seq(corpus::h(), corpus::h())));
    }

    #[test]
    fn unannotated_domain_is_inferred() {
        let c = checked("def cx = arrZ (ctrl swapP)", "cx").unwrap();
        assert_eq!(c.domain, TypeExpr::prod(TypeExpr::qubit(), TypeExpr::qubit()));
        assert_eq!(checked("def z = zero", "z").unwrap().domain, TypeExpr::One);
    }

    #[test]
    fn type_errors_point_at_the_subterm() {
        let e = checked("def bad : qubit ~> qubit =\n  arrZ (dist ; swapT)", "bad").unwrap_err();
        match e {
            CheckError::Type { pos, error } => {
                assert_eq!(pos, Pos { line: 2, col: 9 });
                assert_eq!(error.term, "dist");
            }
            e => panic!("{e}"),
        }
        let e = checked("def bad : qubit * qubit ~> qubit * qubit =\n  arrZ (dist ; swapT)", "bad").unwrap_err();
        assert!(matches!(e, CheckError::Type { pos: Pos { line: 2, col: 16 }, .. }), "{e}");
        let e = checked("def bad : (1 + 1) * 1 ~> 1 = arrZ (dist ; swapT)", "bad").unwrap_err();
        assert!(matches!(e, CheckError::Type { pos: Pos { line: 1, col: 43 }, .. }), "{e}");
        assert!(matches!(checked("def bad = arrZ (dist ; swapT)", "bad"), Err(CheckError::NoDomain { .. })));
    }

    #[test]
    fn annotation_mismatch() {
        assert!(matches!(checked("def z : 1 ~> 1 = zero", "z"), Err(CheckError::Annotation { .. })));
    }

    #[test]
    fn resolution_errors() {
        assert!(matches!(checked("def a = b", "a"), Err(CheckError::UnknownName { .. })));
        assert!(matches!(checked("def a = b\ndef b = a", "a"), Err(CheckError::Cycle { .. })));
        assert!(matches!(checked("def a = lift [1, 1] zero", "a"), Err(CheckError::Misuse { .. })));
        assert!(matches!(checked("def a = inv measureZ", "a"), Err(CheckError::Misuse { .. })));
    }

    #[test]
    fn measured_programs_lower_to_channels() {
        let c = checked("def m : qubit ~> qubit = arrP swapP >>> measureZ", "m").unwrap();
        assert_eq!(c.term, ChannelTerm::seq(ChannelTerm::Pure(corpus::h()), ChannelTerm::MeasureZ));
    }
}
