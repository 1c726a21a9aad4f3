//! Quantum programs built from two copies of a reversible combinator language.
//!
//! The layers stack bottom-up:
//!
//! - [`pi`]: finite types and the reversible combinators between them
//! - [`unitary`]: permutation-matrix semantics and the rotated copy
//! - [`amalgam`]: tagged lists mixing the two copies
//! - [`qpi`]: ancilla lifting, `zero`/`assertZero`, contraction semantics
//! - [`measure`]: density matrices, Kraus maps, measurement and sampling
//! - [`laws`]: semantic equivalence and the law suites
//! - [`corpus`]: the built-in gate library and algorithms
//! - [`cli`]: the `.qpi` text format and command implementations

pub mod linalg;
pub mod pi;
pub mod unitary;
pub mod amalgam;
pub mod qpi;
pub mod measure;
pub mod corpus;
pub mod laws;
pub mod cli;

pub use linalg::{CMatrix, Complex};
pub use pi::{PiTerm, TypeExpr};
pub use unitary::{Phi, Tag};
