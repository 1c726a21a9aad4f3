//! Programs mixing the two copies of the core as lists of tagged terms.
//!
//! Lists are stored in execution order: element 0 runs first.

use std::fmt;

use crate::linalg::CMatrix;
use crate::pi::{PiTerm, TypeError, TypeExpr};
use crate::unitary::{eval_tagged, EvalError, Phi, Tag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedTerm {
    pub tag: Tag,
    pub term: PiTerm,
}

impl TaggedTerm {
    pub fn new(tag: Tag, term: PiTerm) -> Self {
        Self { tag, term }
    }

    pub fn z(term: PiTerm) -> Self {
        Self::new(Tag::Z, term)
    }

    pub fn phi(term: PiTerm) -> Self {
        Self::new(Tag::Phi, term)
    }
}

impl fmt::Display for TaggedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.term, self.tag)
    }
}

/// A chain of tagged terms starting at `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgList {
    pub domain: TypeExpr,
    pub elements: Vec<TaggedTerm>,
}

impl AmalgList {
    pub fn new(domain: TypeExpr, elements: Vec<TaggedTerm>) -> Self {
        Self { domain, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Domain of every element followed by the final codomain.
    pub fn chain(&self) -> Result<Vec<TypeExpr>, TypeError> {
        let mut types = Vec::with_capacity(self.elements.len() + 1);
        let mut current = self.domain.clone();
        for el in &self.elements {
            let next = el.term.typecheck(&current)?;
            types.push(current);
            current = next;
        }
        types.push(current);
        Ok(types)
    }

    pub fn codomain(&self) -> Result<TypeExpr, TypeError> {
        Ok(self.chain()?.pop().expect("chain is never empty"))
    }
}

impl fmt::Display for AmalgList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, el) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{el}")?;
        }
        f.write_str("]")
    }
}

/// Terms of the two-copy arrow.
///
/// `First(d, s)` runs `d` on the left of a pair whose right component has
/// type `s`; `Second(d, s)` is the mirror image with `s` on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PizhTerm {
    ArrZ(PiTerm),
    ArrPhi(PiTerm),
    Seq(Box<PizhTerm>, Box<PizhTerm>),
    First(Box<PizhTerm>, TypeExpr),
    Second(Box<PizhTerm>, TypeExpr),
    Prod(Box<PizhTerm>, Box<PizhTerm>),
    Inv(Box<PizhTerm>),
    SwapT,
    /// `(a × b) × c ↔ a × (b × c)`
    AssocT,
    /// `a × (b × c) ↔ (a × b) × c`
    AssocIT,
    /// `b × 1 ↔ b`
    UniteT,
    /// `b ↔ b × 1`
    UnitiT,
    Id,
}

impl PizhTerm {
    pub fn seq(a: PizhTerm, b: PizhTerm) -> Self {
        PizhTerm::Seq(Box::new(a), Box::new(b))
    }

    /// Left-nested sequence; `Id` when empty.
    pub fn seq_all(steps: impl IntoIterator<Item = PizhTerm>) -> Self {
        steps.into_iter().reduce(PizhTerm::seq).unwrap_or(PizhTerm::Id)
    }

    pub fn first(d: PizhTerm, spectator: TypeExpr) -> Self {
        PizhTerm::First(Box::new(d), spectator)
    }

    pub fn second(d: PizhTerm, spectator: TypeExpr) -> Self {
        PizhTerm::Second(Box::new(d), spectator)
    }

    pub fn prod(a: PizhTerm, b: PizhTerm) -> Self {
        PizhTerm::Prod(Box::new(a), Box::new(b))
    }

    pub fn inv(d: PizhTerm) -> Self {
        PizhTerm::Inv(Box::new(d))
    }

    pub fn typecheck(&self, domain: &TypeExpr) -> Result<TypeExpr, TypeError> {
        let mut sink = Vec::new();
        build(self, domain, &mut sink)
    }

    /// Structural inverse; `ArrZ`/`ArrPhi` adjoint their core term.
    pub fn adjoint(&self) -> PizhTerm {
        match self {
            PizhTerm::ArrZ(c) => PizhTerm::ArrZ(c.adjoint()),
            PizhTerm::ArrPhi(c) => PizhTerm::ArrPhi(c.adjoint()),
            PizhTerm::Seq(a, b) => PizhTerm::seq(b.adjoint(), a.adjoint()),
            PizhTerm::First(d, s) => PizhTerm::first(d.adjoint(), s.clone()),
            PizhTerm::Second(d, s) => PizhTerm::second(d.adjoint(), s.clone()),
            PizhTerm::Prod(a, b) => PizhTerm::prod(a.adjoint(), b.adjoint()),
            PizhTerm::Inv(d) => (**d).clone(),
            PizhTerm::SwapT => PizhTerm::SwapT,
            PizhTerm::AssocT => PizhTerm::AssocIT,
            PizhTerm::AssocIT => PizhTerm::AssocT,
            PizhTerm::UniteT => PizhTerm::UnitiT,
            PizhTerm::UnitiT => PizhTerm::UniteT,
            PizhTerm::Id => PizhTerm::Id,
        }
    }
}

impl PizhTerm {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // `>>>` = 1, `***` = 2, prefix forms = 3
        let binary = |f: &mut fmt::Formatter<'_>, a: &PizhTerm, op: &str, b: &PizhTerm, level: u8| {
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
        let prefix = |f: &mut fmt::Formatter<'_>, head: &str, body: &PizhTerm| {
            let paren = prec > 3;
            if paren {
                f.write_str("(")?;
            }
            write!(f, "{head} ")?;
            body.fmt_prec(f, 3)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        };
        match self {
            PizhTerm::ArrZ(c) => write_arr(f, "arrZ", c, prec > 3),
            PizhTerm::ArrPhi(c) => write_arr(f, "arrP", c, prec > 3),
            PizhTerm::Seq(a, b) => binary(f, a, ">>>", b, 1),
            PizhTerm::Prod(a, b) => binary(f, a, "***", b, 2),
            PizhTerm::First(d, s) => prefix(f, &format!("first [{s}]"), d),
            PizhTerm::Second(d, s) => prefix(f, &format!("second [{s}]"), d),
            PizhTerm::Inv(d) => prefix(f, "inv", d),
            PizhTerm::SwapT => f.write_str("swapT"),
            PizhTerm::AssocT => f.write_str("assocrT"),
            PizhTerm::AssocIT => f.write_str("assoclT"),
            PizhTerm::UniteT => f.write_str("unitelT"),
            PizhTerm::UnitiT => f.write_str("unitilT"),
            PizhTerm::Id => f.write_str("id"),
        }
    }
}

/// `arrZ c` / `arrP c`, with compound core terms parenthesized.
pub(crate) fn write_arr(f: &mut fmt::Formatter<'_>, head: &str, c: &PiTerm, paren: bool) -> fmt::Result {
    if paren {
        f.write_str("(")?;
    }
    if c.is_primitive() {
        write!(f, "{head} {c}")?;
    } else {
        write!(f, "{head} ({c})")?;
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for PizhTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn mismatch(term: &PizhTerm, expected: &str, actual: &TypeExpr) -> TypeError {
    TypeError::new(term, expected, actual)
}

fn push(out: &mut Vec<TaggedTerm>, tag: Tag, term: PiTerm, domain: &TypeExpr) -> Result<TypeExpr, TypeError> {
    let cod = term.typecheck(domain)?;
    out.push(TaggedTerm::new(tag, term));
    Ok(cod)
}

// Appends the list of `d` at `domain` to `out` and returns the codomain.
fn build(d: &PizhTerm, domain: &TypeExpr, out: &mut Vec<TaggedTerm>) -> Result<TypeExpr, TypeError> {
    match d {
        PizhTerm::ArrZ(c) => push(out, Tag::Z, c.clone(), domain),
        PizhTerm::ArrPhi(c) => push(out, Tag::Phi, c.clone(), domain),
        PizhTerm::Id => Ok(domain.clone()),
        PizhTerm::SwapT => push(out, Tag::Z, PiTerm::SwapTimes, domain),
        PizhTerm::AssocT => push(out, Tag::Z, PiTerm::AssocrTimes, domain),
        PizhTerm::AssocIT => push(out, Tag::Z, PiTerm::AssoclTimes, domain),
        PizhTerm::UniteT => push(out, Tag::Z, PiTerm::seq(PiTerm::SwapTimes, PiTerm::UniteTimes), domain),
        PizhTerm::UnitiT => push(out, Tag::Z, PiTerm::seq(PiTerm::UnitiTimes, PiTerm::SwapTimes), domain),
        PizhTerm::Seq(a, b) => {
            let mid = build(a, domain, out)?;
            build(b, &mid, out)
        }
        PizhTerm::First(inner, s) => match domain {
            TypeExpr::Prod(a, s2) if **s2 == *s => {
                let mut local = Vec::new();
                let cod = build(inner, a, &mut local)?;
                out.extend(local.into_iter().map(|el| {
                    TaggedTerm::new(el.tag, PiTerm::product(el.term, PiTerm::Id))
                }));
                Ok(TypeExpr::prod(cod, s.clone()))
            }
            _ => Err(mismatch(d, &format!("a product b * {s}"), domain)),
        },
        PizhTerm::Second(inner, s) => match domain {
            TypeExpr::Prod(s2, a) if **s2 == *s => {
                let swapped = TypeExpr::prod((**a).clone(), s.clone());
                push(out, Tag::Z, PiTerm::SwapTimes, domain)?;
                let mid = build(&PizhTerm::first((**inner).clone(), s.clone()), &swapped, out)?;
                push(out, Tag::Z, PiTerm::SwapTimes, &mid)
            }
            _ => Err(mismatch(d, &format!("a product {s} * b"), domain)),
        },
        PizhTerm::Prod(d1, d2) => match domain {
            TypeExpr::Prod(_, b) => {
                let mid = build(&PizhTerm::first((**d1).clone(), (**b).clone()), domain, out)?;
                let TypeExpr::Prod(a2, _) = &mid else { unreachable!("first yields a product") };
                build(&PizhTerm::second((**d2).clone(), (**a2).clone()), &mid, out)
            }
            _ => Err(mismatch(d, "a product for d1 *** d2", domain)),
        },
        PizhTerm::Inv(inner) => {
            // the inner term runs from the inverse's codomain back to `domain`
            let start = inner.adjoint().typecheck(domain)?;
            let mut local = Vec::new();
            let end = build(inner, &start, &mut local)?;
            if end != *domain {
                return Err(mismatch(d, &format!("an inverse ending at {domain}"), &end));
            }
            let list = AmalgList::new(start.clone(), local);
            out.extend(invert(&list)?.elements);
            Ok(start)
        }
    }
}

/// The list of `d` applied at `domain`.
pub fn to_list(d: &PizhTerm, domain: &TypeExpr) -> Result<AmalgList, TypeError> {
    let mut elements = Vec::new();
    build(d, domain, &mut elements)?;
    Ok(AmalgList::new(domain.clone(), elements))
}

/// Reverses the list and inverts each element.
pub fn invert(m: &AmalgList) -> Result<AmalgList, TypeError> {
    let chain = m.chain()?;
    let cod = chain.last().expect("chain is never empty").clone();
    let mut elements = Vec::with_capacity(m.len());
    for (el, dom) in m.elements.iter().zip(&chain).rev() {
        elements.push(TaggedTerm::new(el.tag, el.term.adjoint_at(dom)?));
    }
    Ok(AmalgList::new(cod, elements))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NormalizeOptions {
    /// Also drop elements whose matrix is within `1e-12` of the identity at
    /// this angle and whose codomain equals their domain.
    pub semantic_identity: Option<Phi>,
}

/// Drops `id` elements and fuses adjacent same-tag elements until nothing changes.
pub fn normalize(m: &AmalgList) -> AmalgList {
    normalize_with(m, NormalizeOptions::default())
}

pub fn normalize_with(m: &AmalgList, options: NormalizeOptions) -> AmalgList {
    let mut elements = m.elements.clone();
    loop {
        let before = elements.len();
        elements = drop_identities(&m.domain, elements, options);
        let mut fused: Vec<TaggedTerm> = Vec::with_capacity(elements.len());
        for el in elements {
            match fused.last_mut() {
                Some(prev) if prev.tag == el.tag => {
                    let earlier = std::mem::replace(&mut prev.term, PiTerm::Id);
                    prev.term = PiTerm::seq(earlier, el.term);
                }
                _ => fused.push(el),
            }
        }
        elements = fused;
        if elements.len() == before {
            return AmalgList::new(m.domain.clone(), elements);
        }
    }
}

fn drop_identities(domain: &TypeExpr, elements: Vec<TaggedTerm>, options: NormalizeOptions) -> Vec<TaggedTerm> {
    let mut kept = Vec::with_capacity(elements.len());
    let mut current = domain.clone();
    for el in elements {
        if el.term == PiTerm::Id {
            continue;
        }
        let next = match el.term.typecheck(&current) {
            Ok(t) => t,
            // ill-typed lists are left for evaluation to report
            Err(_) => {
                kept.push(el);
                continue;
            }
        };
        if let Some(phi) = options.semantic_identity {
            if next == current {
                if let Ok(u) = eval_tagged(phi, el.tag, &el.term, &current) {
                    if u.approx_eq(&CMatrix::identity(current.dim()), 1e-12).equal {
                        continue;
                    }
                }
            }
        }
        kept.push(el);
        current = next;
    }
    kept
}

/// Product of the element matrices in execution order; the identity on an empty list.
pub fn eval_pizh(phi: Phi, m: &AmalgList) -> Result<CMatrix, EvalError> {
    apply_pizh(phi, m, CMatrix::identity(m.domain.dim()))
}

/// `eval_pizh(phi, m) · input`, multiplying element by element from the right.
pub fn apply_pizh(phi: Phi, m: &AmalgList, input: CMatrix) -> Result<CMatrix, EvalError> {
    let mut acc = input;
    let mut current = m.domain.clone();
    for el in &m.elements {
        let next = el.term.typecheck(&current)?;
        let u = eval_tagged(phi, el.tag, &el.term, &current)?;
        acc = u.matmul(&acc)?;
        current = next;
    }
    Ok(acc)
}

/// Matrix of a two-copy term at `domain`.
pub fn eval_term(phi: Phi, d: &PizhTerm, domain: &TypeExpr) -> Result<CMatrix, EvalError> {
    eval_pizh(phi, &to_list(d, domain)?)
}

/// Seeded generation of random chain-typed lists.
pub mod gen {
    use super::*;
    use crate::pi::gen::{random_term, random_type};
    use rand::Rng;

    /// A list of up to `max_len` elements over a random domain of dimension at
    /// most `max_dim`. Identities are mixed in so that normalization has work to do.
    pub fn random_list<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, max_len: usize) -> AmalgList {
        let domain = random_type(rng, max_dim);
        let len = rng.gen_range(0..=max_len);
        let mut current = domain.clone();
        let mut elements = Vec::with_capacity(len);
        for _ in 0..len {
            let tag = if rng.gen_bool(0.5) { Tag::Z } else { Tag::Phi };
            let term = if rng.gen_bool(0.2) {
                PiTerm::Id
            } else {
                let size = rng.gen_range(1..=6);
                random_term(rng, &current, size).0
            };
            current = term.typecheck(&current).expect("generated terms are well-typed");
            elements.push(TaggedTerm::new(tag, term));
        }
        AmalgList::new(domain, elements)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pi::cx;
    use crate::unitary::eval_pi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn q() -> TypeExpr {
        TypeExpr::qubit()
    }

    fn qq() -> TypeExpr {
        TypeExpr::prod(q(), q())
    }

    fn hadamard() -> CMatrix {
        let h = FRAC_1_SQRT_2;
        CMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.approx_eq(b, tol).equal
    }

    #[test]
    fn list_sugar() {
        let d = PizhTerm::seq(PizhTerm::ArrPhi(PiTerm::SwapPlus), PizhTerm::ArrZ(PiTerm::SwapPlus));
        let m = to_list(&d, &q()).unwrap();
        assert_eq!(m.elements, vec![TaggedTerm::phi(PiTerm::SwapPlus), TaggedTerm::z(PiTerm::SwapPlus)]);
        assert_eq!(to_list(&PizhTerm::ArrZ(PiTerm::Id), &q()).unwrap().elements, vec![TaggedTerm::z(PiTerm::Id)]);
    }

    #[test]
    fn first_maps_over_elements() {
        let d = PizhTerm::first(PizhTerm::ArrPhi(PiTerm::SwapPlus), q());
        let m = to_list(&d, &qq()).unwrap();
        assert_eq!(m.elements, vec![TaggedTerm::phi(PiTerm::product(PiTerm::SwapPlus, PiTerm::Id))]);
        let u = eval_pizh(Phi::QUANTUM, &m).unwrap();
        assert!(close(&u, &hadamard().kron(&CMatrix::identity(2)), 1e-12));
    }

    #[test]
    fn second_and_prod() {
        let h = PizhTerm::ArrPhi(PiTerm::SwapPlus);
        let u = eval_term(Phi::QUANTUM, &PizhTerm::second(h.clone(), q()), &qq()).unwrap();
        assert!(close(&u, &CMatrix::identity(2).kron(&hadamard()), 1e-12));
        let x = PizhTerm::ArrZ(PiTerm::SwapPlus);
        let p = eval_term(Phi::QUANTUM, &PizhTerm::prod(h, x.clone()), &qq()).unwrap();
        let xm = eval_pi(&PiTerm::SwapPlus, &q()).unwrap();
        assert!(close(&p, &hadamard().kron(&xm), 1e-12));
    }

    #[test]
    fn spectator_must_match() {
        let d = PizhTerm::first(PizhTerm::Id, TypeExpr::One);
        assert!(to_list(&d, &qq()).is_err());
        assert!(to_list(&PizhTerm::AssocT, &qq()).is_err());
    }

    #[test]
    fn structural_coherences() {
        let t3 = TypeExpr::prod(qq(), q());
        assert_eq!(PizhTerm::AssocT.typecheck(&t3).unwrap(), TypeExpr::qubits(3));
        assert_eq!(PizhTerm::AssocIT.typecheck(&TypeExpr::qubits(3)).unwrap(), t3);
        assert_eq!(PizhTerm::UnitiT.typecheck(&q()).unwrap(), TypeExpr::prod(q(), TypeExpr::One));
        assert_eq!(PizhTerm::UniteT.typecheck(&TypeExpr::prod(q(), TypeExpr::One)).unwrap(), q());
        let u = eval_term(Phi::QUANTUM, &PizhTerm::UnitiT, &q()).unwrap();
        assert_eq!(u, CMatrix::identity(2));
    }

    #[test]
    fn inverse_reverses() {
        let dom = qq();
        let d = PizhTerm::seq(PizhTerm::first(PizhTerm::ArrPhi(PiTerm::SwapPlus), q()), PizhTerm::ArrZ(cx()));
        let m = to_list(&d, &dom).unwrap();
        let inv = to_list(&PizhTerm::inv(d.clone()), &dom).unwrap();
        assert_eq!(inv.elements.len(), 2);
        assert_eq!(inv.elements[0].tag, Tag::Z);
        let u = eval_pizh(Phi::QUANTUM, &m).unwrap();
        let v = eval_pizh(Phi::QUANTUM, &inv).unwrap();
        assert!(close(&v, &u.dagger(), 1e-12));
    }

    #[test]
    fn inverse_of_type_changing_term() {
        // inv unitiT : b × 1 → b
        let m = to_list(&PizhTerm::inv(PizhTerm::UnitiT), &TypeExpr::prod(q(), TypeExpr::One)).unwrap();
        assert_eq!(m.codomain().unwrap(), q());
    }

    #[test]
    fn normalize_examples() {
        let m = AmalgList::new(q(), vec![TaggedTerm::z(PiTerm::Id), TaggedTerm::phi(PiTerm::SwapPlus)]);
        assert_eq!(normalize(&m).elements, vec![TaggedTerm::phi(PiTerm::SwapPlus)]);
        let m = AmalgList::new(q(), vec![TaggedTerm::z(PiTerm::SwapPlus), TaggedTerm::z(PiTerm::SwapPlus)]);
        assert_eq!(
            normalize(&m).elements,
            vec![TaggedTerm::z(PiTerm::seq(PiTerm::SwapPlus, PiTerm::SwapPlus))]
        );
        let m = AmalgList::new(q(), vec![TaggedTerm::z(PiTerm::SwapPlus), TaggedTerm::phi(PiTerm::SwapPlus)]);
        assert_eq!(normalize(&m), m);
    }

    #[test]
    fn normalize_fuses_across_removed_identities() {
        let m = AmalgList::new(
            q(),
            vec![
                TaggedTerm::z(PiTerm::SwapPlus),
                TaggedTerm::phi(PiTerm::Id),
                TaggedTerm::z(PiTerm::SwapPlus),
            ],
        );
        assert_eq!(normalize(&m).len(), 1);
    }

    #[test]
    fn semantic_identity_removal() {
        let xx = PiTerm::seq(PiTerm::SwapPlus, PiTerm::SwapPlus);
        let m = AmalgList::new(q(), vec![TaggedTerm::phi(xx), TaggedTerm::z(PiTerm::SwapPlus)]);
        let opts = NormalizeOptions { semantic_identity: Some(Phi::QUANTUM) };
        let n = normalize_with(&m, opts);
        assert_eq!(n.elements, vec![TaggedTerm::z(PiTerm::SwapPlus)]);
        // an identity matrix that changes the type is kept
        let m = AmalgList::new(q(), vec![TaggedTerm::z(PiTerm::UnitiTimes)]);
        assert_eq!(normalize_with(&m, opts).len(), 1);
    }

    #[test]
    fn eval_examples() {
        let m = AmalgList::new(q(), vec![TaggedTerm::phi(PiTerm::SwapPlus)]);
        assert!(close(&eval_pizh(Phi::QUANTUM, &m).unwrap(), &hadamard(), 1e-12));
        let empty = AmalgList::new(qq(), vec![]);
        assert_eq!(eval_pizh(Phi(0.3), &empty).unwrap(), CMatrix::identity(4));
        let hh = AmalgList::new(q(), vec![TaggedTerm::phi(PiTerm::SwapPlus); 2]);
        assert!(close(&eval_pizh(Phi::QUANTUM, &hh).unwrap(), &CMatrix::identity(2), 1e-12));
    }

    #[test]
    fn later_elements_multiply_on_the_left() {
        let phi = Phi(0.3);
        let m = AmalgList::new(q(), vec![TaggedTerm::phi(PiTerm::SwapPlus), TaggedTerm::z(PiTerm::SwapPlus)]);
        let a = eval_tagged(phi, Tag::Phi, &PiTerm::SwapPlus, &q()).unwrap();
        let b = eval_pi(&PiTerm::SwapPlus, &q()).unwrap();
        assert!(close(&eval_pizh(phi, &m).unwrap(), &b.matmul(&a).unwrap(), 1e-14));
    }

    #[test]
    fn normalize_preserves_random_lists() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let m = gen::random_list(&mut rng, 16, 8);
            let n = normalize(&m);
            assert!(n.len() <= m.len());
            assert!(n.elements.iter().all(|e| e.term != PiTerm::Id));
            assert!(n.elements.windows(2).all(|w| w[0].tag != w[1].tag));
            let a = eval_pizh(Phi::QUANTUM, &m).unwrap();
            let b = eval_pizh(Phi::QUANTUM, &n).unwrap();
            assert!(close(&a, &b, 1e-10));
        }
    }
}
