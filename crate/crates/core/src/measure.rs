//! Mixed states, Kraus maps, and programs that hide or measure part of their state.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus;
use crate::linalg::{CMatrix, Complex, LinalgError};
use crate::pi::{TypeError, TypeExpr};
use crate::qpi::{eval_qpi, totality_check, QpiTerm};
use crate::unitary::{EvalError, Phi};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("not a contraction: spectral norm {0} exceeds 1")]
    NotContraction(f64),
    #[error("Kraus operators sum to more than the identity (norm {0})")]
    TraceIncreasing(f64),
    #[error("Kraus set is empty or has inconsistent shapes")]
    BadKrausSet,
    #[error("`{stage}` hides part of the state after `{before}`, which is not total; pass the unsafe flag to allow it")]
    NotTotal { before: String, stage: String },
    #[error("output type {0} is not a register of bits")]
    NotClassical(TypeExpr),
    #[error("input index {index} out of range for type {ty}")]
    BadInput { index: usize, ty: TypeExpr },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_SHIFT: f64 = 1e-8;

/// A possibly subnormalized mixed state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self, MeasureError> {
        if !mat.is_square() {
            return Err(MeasureError::NotDensity(format!("shape {:?} is not square", mat.shape())));
        }
        let herm = mat.approx_eq(&mat.dagger(), HERMITIAN_TOL);
        if !herm.equal {
            return Err(MeasureError::NotDensity(format!("not Hermitian (deviation {:e})", herm.max_diff)));
        }
        let tr = mat.trace().re;
        if !(-TRACE_TOL..=1.0 + TRACE_TOL).contains(&tr) {
            return Err(MeasureError::NotDensity(format!("trace {tr} outside [0, 1]")));
        }
        let shifted = mat.add(&CMatrix::identity(mat.rows()).scale(Complex::new(PSD_SHIFT, 0.0)))?;
        if !cholesky_succeeds(&shifted) {
            return Err(MeasureError::NotDensity("not positive semidefinite".into()));
        }
        Ok(Self { mat })
    }

    /// `|v⟩⟨v|` for a column vector `v` of norm at most one.
    pub fn pure(v: &CMatrix) -> Result<Self, MeasureError> {
        Self::new(v.matmul(&v.dagger())?)
    }

    /// `|i⟩⟨i|` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let k = CMatrix::ket(dim, i);
        Self { mat: k.matmul(&k.dagger()).expect("outer product") }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Diagonal entries, i.e. the outcome weights of a computational-basis readout.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.mat.get(i, i).re).collect()
    }
}

fn cholesky_succeeds(a: &CMatrix) -> bool {
    let n = a.rows();
    let mut l = vec![Complex::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = a.get(j, j).re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = Complex::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// A trace-nonincreasing map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMatrix>,
}

const KRAUS_TOL: f64 = 1e-8;
const PRUNE_TOL: f64 = 1e-14;

impl KrausMap {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self, MeasureError> {
        let Some(first) = kraus.first() else {
            return Err(MeasureError::BadKrausSet);
        };
        let (out_dim, in_dim) = first.shape();
        if kraus.iter().any(|k| k.shape() != (out_dim, in_dim)) {
            return Err(MeasureError::BadKrausSet);
        }
        let map = Self { in_dim, out_dim, kraus };
        let norm = map.gram().spectral_norm();
        if norm > 1.0 + KRAUS_TOL {
            return Err(MeasureError::TraceIncreasing(norm));
        }
        Ok(map)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `Σ K†K`.
    pub fn gram(&self) -> CMatrix {
        self.kraus.iter().fold(CMatrix::zeros(self.in_dim, self.in_dim), |acc, k| {
            acc.add(&k.dagger().matmul(k).expect("shapes agree")).expect("shapes agree")
        })
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.gram().approx_eq(&CMatrix::identity(self.in_dim), tol).equal
    }

    pub fn identity(dim: usize) -> Self {
        Self { in_dim: dim, out_dim: dim, kraus: vec![CMatrix::identity(dim)] }
    }

    /// `ρ ↦ CρC†` for a contraction `C`.
    pub fn lift_contraction(c: CMatrix) -> Result<Self, MeasureError> {
        if !c.spectral_norm_le_one(1e-9) {
            return Err(MeasureError::NotContraction(c.spectral_norm()));
        }
        let (out_dim, in_dim) = c.shape();
        Ok(Self { in_dim, out_dim, kraus: vec![c] })
    }

    /// Runs `self`, then `then`.
    pub fn compose(&self, then: &KrausMap) -> Result<Self, MeasureError> {
        if self.out_dim != then.in_dim {
            return Err(LinalgError::Shape { op: "compose", left: (self.out_dim, self.in_dim), right: (then.out_dim, then.in_dim) }.into());
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * then.kraus.len());
        for b in &then.kraus {
            for a in &self.kraus {
                let k = b.matmul(a)?;
                if k.frobenius_norm() > PRUNE_TOL {
                    kraus.push(k);
                }
            }
        }
        if kraus.is_empty() {
            kraus.push(CMatrix::zeros(then.out_dim, self.in_dim));
        }
        Ok(Self { in_dim: self.in_dim, out_dim: then.out_dim, kraus })
    }

    pub fn tensor(&self, other: &KrausMap) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kron(b));
            }
        }
        Self { in_dim: self.in_dim * other.in_dim, out_dim: self.out_dim * other.out_dim, kraus }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix, MeasureError> {
        if rho.dim() != self.in_dim {
            return Err(LinalgError::Shape { op: "apply", left: (self.out_dim, self.in_dim), right: rho.mat.shape() }.into());
        }
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = out.add(&k.matmul(&rho.mat)?.matmul(&k.dagger())?)?;
        }
        Ok(DensityMatrix { mat: out })
    }

    /// `Σ K ⊗ conj(K)`, which determines the map independently of the Kraus set chosen.
    pub fn natural_representation(&self) -> CMatrix {
        self.kraus.iter().fold(CMatrix::zeros(self.out_dim * self.out_dim, self.in_dim * self.in_dim), |acc, k| {
            let conj = k.dagger().transpose();
            acc.add(&k.kron(&conj)).expect("shapes agree")
        })
    }

    /// Largest entrywise difference between the natural representations.
    pub fn distance(&self, other: &KrausMap) -> f64 {
        self.natural_representation().approx_eq(&other.natural_representation(), 0.0).max_diff
    }
}

/// Traces out a whole system of type `b`.
pub fn discard(b: &TypeExpr) -> KrausMap {
    discard_dim(b.dim())
}

pub fn discard_dim(dim: usize) -> KrausMap {
    KrausMap { in_dim: dim, out_dim: 1, kraus: (0..dim).map(|i| CMatrix::bra(dim, i)).collect() }
}

/// Keeps the left component of a pair.
pub fn fst(b1: &TypeExpr, b2: &TypeExpr) -> KrausMap {
    KrausMap::identity(b1.dim()).tensor(&discard(b2))
}

/// Keeps the right component of a pair.
pub fn snd(b1: &TypeExpr, b2: &TypeExpr) -> KrausMap {
    discard(b1).tensor(&KrausMap::identity(b2.dim()))
}

/// Computational-basis measurement: copy, then forget the copy.
pub fn measure_z() -> KrausMap {
    let q = TypeExpr::qubit();
    let copy = eval_qpi(Phi::QUANTUM, &corpus::copy_z(), &q).expect("copy is well-typed");
    KrausMap::lift_contraction(copy).expect("copy is an isometry").compose(&fst(&q, &q)).expect("shapes agree")
}

/// Measurement in the rotated basis at `phi`.
pub fn measure_phi(phi: Phi) -> KrausMap {
    let q = TypeExpr::qubit();
    let copy = eval_qpi(phi, &corpus::copy_x(), &q).expect("copy is well-typed");
    KrausMap::lift_contraction(copy).expect("copy is an isometry").compose(&fst(&q, &q)).expect("shapes agree")
}

/// Programs over the hiding arrow: pure programs plus discarding and measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelTerm {
    Pure(QpiTerm),
    Seq(Box<ChannelTerm>, Box<ChannelTerm>),
    Prod(Box<ChannelTerm>, Box<ChannelTerm>),
    First(Box<ChannelTerm>, TypeExpr),
    Second(Box<ChannelTerm>, TypeExpr),
    Discard,
    Fst,
    Snd,
    MeasureZ,
    MeasureP,
}

impl ChannelTerm {
    /// Sequencing that keeps pure fragments pure.
    pub fn seq(a: ChannelTerm, b: ChannelTerm) -> Self {
        match (a, b) {
            (ChannelTerm::Pure(a), ChannelTerm::Pure(b)) => ChannelTerm::Pure(QpiTerm::seq(a, b)),
            (a, b) => ChannelTerm::Seq(Box::new(a), Box::new(b)),
        }
    }

    pub fn seq_all(steps: impl IntoIterator<Item = ChannelTerm>) -> Self {
        steps.into_iter().reduce(ChannelTerm::seq).unwrap_or(ChannelTerm::Pure(QpiTerm::Id))
    }

    pub fn prod(a: ChannelTerm, b: ChannelTerm) -> Self {
        match (a, b) {
            (ChannelTerm::Pure(a), ChannelTerm::Pure(b)) => ChannelTerm::Pure(QpiTerm::prod(a, b)),
            (a, b) => ChannelTerm::Prod(Box::new(a), Box::new(b)),
        }
    }

    pub fn first(d: ChannelTerm, spectator: TypeExpr) -> Self {
        match d {
            ChannelTerm::Pure(d) => ChannelTerm::Pure(QpiTerm::first(d, spectator)),
            d => ChannelTerm::First(Box::new(d), spectator),
        }
    }

    pub fn second(d: ChannelTerm, spectator: TypeExpr) -> Self {
        match d {
            ChannelTerm::Pure(d) => ChannelTerm::Pure(QpiTerm::second(d, spectator)),
            d => ChannelTerm::Second(Box::new(d), spectator),
        }
    }

    pub fn as_pure(&self) -> Option<&QpiTerm> {
        match self {
            ChannelTerm::Pure(d) => Some(d),
            _ => None,
        }
    }

    /// Whether the term discards part of its input outright.
    pub fn hides(&self) -> bool {
        match self {
            ChannelTerm::Discard | ChannelTerm::Fst | ChannelTerm::Snd => true,
            ChannelTerm::Seq(a, b) | ChannelTerm::Prod(a, b) => a.hides() || b.hides(),
            ChannelTerm::First(d, _) | ChannelTerm::Second(d, _) => d.hides(),
            ChannelTerm::Pure(_) | ChannelTerm::MeasureZ | ChannelTerm::MeasureP => false,
        }
    }

    pub fn typecheck(&self, domain: &TypeExpr) -> Result<TypeExpr, TypeError> {
        let mismatch = |expected: &str| Err(TypeError::new(self, expected, domain));
        match self {
            ChannelTerm::Pure(d) => d.typecheck(domain),
            ChannelTerm::Seq(a, b) => b.typecheck(&a.typecheck(domain)?),
            ChannelTerm::Prod(a, b) => match domain {
                TypeExpr::Prod(da, db) => Ok(TypeExpr::prod(a.typecheck(da)?, b.typecheck(db)?)),
                _ => mismatch("a product for d1 *** d2"),
            },
            ChannelTerm::First(d, s) => match domain {
                TypeExpr::Prod(a, s2) if **s2 == *s => Ok(TypeExpr::prod(d.typecheck(a)?, s.clone())),
                _ => mismatch(&format!("a product b * {s}")),
            },
            ChannelTerm::Second(d, s) => match domain {
                TypeExpr::Prod(s2, a) if **s2 == *s => Ok(TypeExpr::prod(s.clone(), d.typecheck(a)?)),
                _ => mismatch(&format!("a product {s} * b")),
            },
            ChannelTerm::Discard => match domain.dim() {
                0 => mismatch("an inhabited type"),
                _ => Ok(TypeExpr::One),
            },
            ChannelTerm::Fst => match domain {
                TypeExpr::Prod(a, _) => Ok((**a).clone()),
                _ => mismatch("a product b1 * b2"),
            },
            ChannelTerm::Snd => match domain {
                TypeExpr::Prod(_, b) => Ok((**b).clone()),
                _ => mismatch("a product b1 * b2"),
            },
            ChannelTerm::MeasureZ | ChannelTerm::MeasureP => match domain {
                t if t.is_qubit() => Ok(TypeExpr::qubit()),
                _ => mismatch("qubit"),
            },
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, a: &ChannelTerm, op: &str, b: &ChannelTerm, level: u8| {
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
            ChannelTerm::Pure(d) => d.fmt_prec(f, prec),
            ChannelTerm::Seq(a, b) => binary(f, a, ">>>", b, 1),
            ChannelTerm::Prod(a, b) => binary(f, a, "***", b, 2),
            ChannelTerm::First(d, s) => {
                write!(f, "first [{s}] ")?;
                d.fmt_prec(f, 3)
            }
            ChannelTerm::Second(d, s) => {
                write!(f, "second [{s}] ")?;
                d.fmt_prec(f, 3)
            }
            ChannelTerm::Discard => f.write_str("discard"),
            ChannelTerm::Fst => f.write_str("fst"),
            ChannelTerm::Snd => f.write_str("snd"),
            ChannelTerm::MeasureZ => f.write_str("measureZ"),
            ChannelTerm::MeasureP => f.write_str("measureP"),
        }
    }
}

impl fmt::Display for ChannelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Whether to refuse hiding after a stage that may fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gate {
    #[default]
    Checked,
    Unsafe,
}

const TOTAL_TOL: f64 = 1e-9;

/// Compiles `term` at `domain` to a Kraus map; returns it with the codomain.
///
/// With [`Gate::Checked`], any stage followed by a stage that discards must be
/// total: a pure stage must pass [`totality_check`], a mixed one must be trace
/// preserving.
pub fn compile(phi: Phi, term: &ChannelTerm, domain: &TypeExpr, gate: Gate) -> Result<(KrausMap, TypeExpr), MeasureError> {
    let cod = term.typecheck(domain)?;
    let map = match term {
        ChannelTerm::Pure(d) => KrausMap::lift_contraction(eval_qpi(phi, d, domain)?)?,
        ChannelTerm::Seq(a, b) => {
            let (ma, mid) = compile(phi, a, domain, gate)?;
            if gate == Gate::Checked && b.hides() {
                let total = match a.as_ref() {
                    ChannelTerm::Pure(d) => totality_check(phi, d, domain)?,
                    _ => ma.is_trace_preserving(TOTAL_TOL),
                };
                if !total {
                    return Err(MeasureError::NotTotal { before: a.to_string(), stage: b.to_string() });
                }
            }
            let (mb, _) = compile(phi, b, &mid, gate)?;
            ma.compose(&mb)?
        }
        ChannelTerm::Prod(a, b) => {
            let TypeExpr::Prod(da, db) = domain else { unreachable!("typechecked") };
            let (ma, _) = compile(phi, a, da, gate)?;
            let (mb, _) = compile(phi, b, db, gate)?;
            ma.tensor(&mb)
        }
        ChannelTerm::First(d, s) => {
            let TypeExpr::Prod(da, _) = domain else { unreachable!("typechecked") };
            compile(phi, d, da, gate)?.0.tensor(&KrausMap::identity(s.dim()))
        }
        ChannelTerm::Second(d, s) => {
            let TypeExpr::Prod(_, db) = domain else { unreachable!("typechecked") };
            KrausMap::identity(s.dim()).tensor(&compile(phi, d, db, gate)?.0)
        }
        ChannelTerm::Discard => discard(domain),
        ChannelTerm::Fst => {
            let TypeExpr::Prod(a, b) = domain else { unreachable!("typechecked") };
            fst(a, b)
        }
        ChannelTerm::Snd => {
            let TypeExpr::Prod(a, b) = domain else { unreachable!("typechecked") };
            snd(a, b)
        }
        ChannelTerm::MeasureZ => measure_z(),
        ChannelTerm::MeasureP => measure_phi(phi),
    };
    Ok((map, cod))
}

/// Exact outcome weights of a run, before sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    /// Bitstring of each basis state of the output register, most significant first.
    pub outcomes: Vec<String>,
    pub probs: Vec<f64>,
    pub success_prob: f64,
}

impl Distribution {
    pub fn prob(&self, bits: &str) -> f64 {
        self.outcomes.iter().position(|o| o == bits).map_or(0.0, |i| self.probs[i])
    }
}

/// Counts from a seeded run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub counts: BTreeMap<String, u64>,
    pub failures: u64,
    pub shots: u64,
    pub success_prob: f64,
}

impl SampleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

fn bitstring(index: usize, bits: usize) -> String {
    (0..bits).rev().map(|b| if index >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// The readout distribution of `term` on the basis input `input`.
pub fn distribution(phi: Phi, term: &ChannelTerm, domain: &TypeExpr, input: usize, gate: Gate) -> Result<Distribution, MeasureError> {
    if input >= domain.dim() {
        return Err(MeasureError::BadInput { index: input, ty: domain.clone() });
    }
    let cod = term.typecheck(domain)?;
    let bits = cod.bit_count().ok_or_else(|| MeasureError::NotClassical(cod.clone()))?;
    let (map, _) = compile(phi, term, domain, gate)?;
    let rho = map.apply(&DensityMatrix::basis(domain.dim(), input))?;
    let probs: Vec<f64> = rho.diagonal().into_iter().map(|p| p.max(0.0)).collect();
    let success_prob = probs.iter().sum::<f64>().min(1.0);
    let outcomes = (0..probs.len()).map(|i| bitstring(i, bits)).collect();
    Ok(Distribution { outcomes, probs, success_prob })
}

/// Draws `shots` outcomes by inverse CDF with a ChaCha8 stream seeded from `seed`.
/// Probability mass missing from the distribution counts as failures.
pub fn sample_distribution(dist: &Distribution, shots: u64, seed: u64) -> SampleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cumulative = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0;
    for p in &dist.probs {
        acc += p;
        cumulative.push(acc);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut failures = 0;
    for _ in 0..shots {
        let u: f64 = rng.gen();
        match cumulative.iter().position(|&c| u < c) {
            Some(i) => *counts.entry(dist.outcomes[i].clone()).or_default() += 1,
            None => failures += 1,
        }
    }
    SampleReport { counts, failures, shots, success_prob: dist.success_prob }
}

pub fn sample(phi: Phi, term: &ChannelTerm, domain: &TypeExpr, input: usize, shots: u64, seed: u64, gate: Gate) -> Result<SampleReport, MeasureError> {
    let dist = distribution(phi, term, domain, input, gate)?;
    Ok(sample_distribution(&dist, shots, seed))
}
