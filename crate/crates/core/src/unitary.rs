//! Matrix semantics of the reversible core and of its rotated copy.
//!
//! Basis order is lexicographic: the left summand of `a + b` takes the first
//! `dim a` indices, the left factor of `a × b` is most significant. Under that
//! order the associators, unitors and `dist`/`factor` are identity matrices and
//! only the two swaps move anything.

use std::f64::consts::FRAC_PI_8;
use std::fmt;

use thiserror::Error;

use crate::linalg::{CMatrix, LinalgError};
use crate::pi::{PiTerm, TypeExpr, TypeError};

/// Rotation angle of the second copy, in radians.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Phi(pub f64);

impl Phi {
    /// The angle at which the rotated swap is Hadamard.
    pub const QUANTUM: Phi = Phi(FRAC_PI_8);

    pub fn radians(self) -> f64 {
        self.0
    }
}

impl Default for Phi {
    fn default() -> Self {
        Phi::QUANTUM
    }
}

impl fmt::Display for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which copy of the core a term comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Z,
    Phi,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Z => f.write_str("Z"),
            Tag::Phi => f.write_str("φ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The permutation matrix of `c` at `domain`, of shape `dim(cod) × dim(domain)`.
pub fn eval_pi(c: &PiTerm, domain: &TypeExpr) -> Result<CMatrix, EvalError> {
    eval_with_cod(c, domain).map(|(m, _)| m)
}

fn eval_with_cod(c: &PiTerm, domain: &TypeExpr) -> Result<(CMatrix, TypeExpr), EvalError> {
    match c {
        PiTerm::Seq(a, b) => {
            let (ma, mid) = eval_with_cod(a, domain)?;
            let (mb, cod) = eval_with_cod(b, &mid)?;
            Ok((mb.matmul(&ma)?, cod))
        }
        PiTerm::Sum(a, b) => match domain {
            TypeExpr::Sum(da, db) => {
                let (ma, ca) = eval_with_cod(a, da)?;
                let (mb, cb) = eval_with_cod(b, db)?;
                Ok((ma.dsum(&mb), TypeExpr::sum(ca, cb)))
            }
            _ => Err(c.typecheck(domain).unwrap_err().into()),
        },
        PiTerm::Product(a, b) => match domain {
            TypeExpr::Prod(da, db) => {
                let (ma, ca) = eval_with_cod(a, da)?;
                let (mb, cb) = eval_with_cod(b, db)?;
                Ok((ma.kron(&mb), TypeExpr::prod(ca, cb)))
            }
            _ => Err(c.typecheck(domain).unwrap_err().into()),
        },
        PiTerm::Inv(inner) => {
            let cod = c.typecheck(domain)?;
            let (m, _) = eval_with_cod(inner, &cod)?;
            Ok((m.dagger(), cod))
        }
        prim => {
            let cod = prim.typecheck(domain)?;
            Ok((primitive_matrix(prim, domain), cod))
        }
    }
}

fn primitive_matrix(c: &PiTerm, domain: &TypeExpr) -> CMatrix {
    let n = domain.dim();
    match (c, domain) {
        (PiTerm::SwapPlus, TypeExpr::Sum(a, b)) => {
            let (d1, d2) = (a.dim(), b.dim());
            CMatrix::permutation(n, |i| if i < d1 { i + d2 } else { i - d1 })
        }
        (PiTerm::SwapTimes, TypeExpr::Prod(a, b)) => {
            let (d1, d2) = (a.dim(), b.dim());
            CMatrix::permutation(n, |i| (i % d2) * d1 + i / d2)
        }
        // absorbl and factorzr live on dimension 0; everything else is the identity
        _ => CMatrix::identity(n),
    }
}

/// The 2×2 rotation by `phi`.
pub fn r(phi: Phi) -> CMatrix {
    let (s, c) = phi.0.sin_cos();
    CMatrix::from_real(2, 2, &[c, -s, s, c]).expect("2x2")
}

/// The per-type rotation automorphism.
pub fn rot(phi: Phi, b: &TypeExpr) -> CMatrix {
    match b {
        TypeExpr::Zero => CMatrix::zeros(0, 0),
        TypeExpr::One => CMatrix::identity(1),
        TypeExpr::Prod(x, y) => rot(phi, x).kron(&rot(phi, y)),
        // any dimension-1 type is the unit up to identity-matrix coherences
        TypeExpr::Sum(x, y) if is_iso_one(x) && is_iso_one(y) => r(phi),
        TypeExpr::Sum(x, y) => rot(phi, x).dsum(&rot(phi, y)),
    }
}

pub fn is_iso_one(b: &TypeExpr) -> bool {
    b.dim() == 1
}

/// Semantics of a tagged term: the Z copy is untouched, the φ copy is
/// conjugated by the rotations of its domain and codomain.
pub fn eval_tagged(phi: Phi, tag: Tag, c: &PiTerm, domain: &TypeExpr) -> Result<CMatrix, EvalError> {
    let (u, cod) = eval_with_cod(c, domain)?;
    match tag {
        Tag::Z => Ok(u),
        Tag::Phi => {
            let conj = rot(phi, &cod).dagger().matmul(&u)?.matmul(&rot(phi, domain))?;
            Ok(conj)
        }
    }
}
