//! Semantic equivalence checking and the named law suites.
//!
//! Equality is on-the-nose matrix equality: no global phase is quotiented out.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::amalgam::{self, eval_pizh, normalize};
use crate::corpus::{self, assert_one, assert_zero, copy_x, copy_z, ctrl_z, cx, h, minus, one, plus, x, z, zero};
use crate::linalg::{CMatrix, Complex};
use crate::measure::{compile, ChannelTerm, Gate, KrausMap, MeasureError};
use crate::pi::{self, PiTerm, TypeError, TypeExpr};
use crate::qpi::{self, eval_qpi, eval_qpi_direct, QpiTerm};
use crate::unitary::{eval_pi, EvalError, Phi};

/// Tolerance of the named suites.
pub const LAW_TOL: f64 = 1e-10;
/// Tolerance of the randomized property suite.
pub const PROPERTY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LawError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("the two sides have different codomains: {lhs} and {rhs}")]
    CodomainMismatch { lhs: TypeExpr, rhs: TypeExpr },
}

/// Outcome of checking one equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub law_name: String,
    pub phi: f64,
    pub holds: bool,
    pub max_deviation: f64,
    pub lhs_dims: (usize, usize),
    pub rhs_dims: (usize, usize),
}

impl LawReport {
    fn compare(name: &str, phi: Phi, lhs: &CMatrix, rhs: &CMatrix, tol: f64) -> Self {
        let max_deviation = lhs.approx_eq(rhs, tol).max_diff;
        Self {
            law_name: name.to_string(),
            phi: phi.0,
            holds: max_deviation <= tol,
            max_deviation,
            lhs_dims: lhs.shape(),
            rhs_dims: rhs.shape(),
        }
    }

    /// Folds another check of the same law into this one, keeping the worst case.
    fn absorb(&mut self, other: LawReport) {
        if other.max_deviation > self.max_deviation || other.max_deviation.is_nan() {
            self.max_deviation = other.max_deviation;
            self.lhs_dims = other.lhs_dims;
            self.rhs_dims = other.rhs_dims;
        }
        self.holds &= other.holds;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Compares the denotations of `d1` and `d2` at `domain`.
pub fn equiv(phi: Phi, d1: &QpiTerm, d2: &QpiTerm, domain: &TypeExpr, tol: f64) -> Result<LawReport, LawError> {
    equiv_named(&format!("{d1} = {d2}"), phi, d1, d2, domain, tol)
}

fn equiv_named(name: &str, phi: Phi, d1: &QpiTerm, d2: &QpiTerm, domain: &TypeExpr, tol: f64) -> Result<LawReport, LawError> {
    let lhs_cod = d1.typecheck(domain)?;
    let rhs_cod = d2.typecheck(domain)?;
    if lhs_cod != rhs_cod {
        return Err(LawError::CodomainMismatch { lhs: lhs_cod, rhs: rhs_cod });
    }
    let lhs = eval_qpi(phi, d1, domain)?;
    let rhs = eval_qpi(phi, d2, domain)?;
    Ok(LawReport::compare(name, phi, &lhs, &rhs, tol))
}

/// Compares two programs with hiding through their natural representations.
pub fn channel_equiv(name: &str, phi: Phi, a: &ChannelTerm, b: &ChannelTerm, domain: &TypeExpr, tol: f64) -> Result<LawReport, LawError> {
    let (ma, ca) = compile(phi, a, domain, Gate::Checked)?;
    let (mb, cb) = compile(phi, b, domain, Gate::Checked)?;
    if ca != cb {
        return Err(LawError::CodomainMismatch { lhs: ca, rhs: cb });
    }
    Ok(LawReport::compare(name, phi, &ma.natural_representation(), &mb.natural_representation(), tol))
}

fn q() -> TypeExpr {
    TypeExpr::qubit()
}

fn qq() -> TypeExpr {
    TypeExpr::prod(q(), q())
}

fn seq(steps: impl IntoIterator<Item = QpiTerm>) -> QpiTerm {
    QpiTerm::seq_all(steps)
}

fn prod(a: QpiTerm, b: QpiTerm) -> QpiTerm {
    QpiTerm::prod(a, b)
}

fn id() -> QpiTerm {
    QpiTerm::Id
}

fn classical_structure(phi: Phi, label: &str, copy: QpiTerm) -> Result<Vec<LawReport>, LawError> {
    let inv = QpiTerm::inv(copy.clone());
    Ok(vec![
        equiv_named(
            &format!("{label}.assoc"),
            phi,
            &seq([copy.clone(), prod(id(), copy.clone())]),
            &seq([copy.clone(), prod(copy.clone(), id()), QpiTerm::AssocT]),
            &q(),
            LAW_TOL,
        )?,
        equiv_named(&format!("{label}.comm"), phi, &seq([copy.clone(), QpiTerm::SwapT]), &copy, &q(), LAW_TOL)?,
        equiv_named(&format!("{label}.special"), phi, &seq([copy.clone(), inv.clone()]), &id(), &q(), LAW_TOL)?,
        // Associators make both sides well typed on qubit × qubit.
        equiv_named(
            &format!("{label}.frobenius"),
            phi,
            &seq([prod(copy.clone(), id()), QpiTerm::AssocT, prod(id(), inv.clone())]),
            &seq([prod(id(), copy), QpiTerm::AssocIT, prod(inv, id())]),
            &qq(),
            LAW_TOL,
        )?,
    ])
}

/// Controlled gates the execution laws are checked against: a fixed family
/// plus a few random classical circuits drawn from a fixed seed.
pub fn ctrl_law_family() -> Vec<(PiTerm, TypeExpr)> {
    let swap_cx = PiTerm::seq(PiTerm::seq(PiTerm::SwapTimes, pi::cx()), PiTerm::SwapTimes);
    let mut family = vec![(pi::x(), q()), (pi::cx(), qq()), (swap_cx, qq())];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..6 {
        let b = pi::gen::random_type(&mut rng, 8);
        let (c, cod) = pi::gen::random_term(&mut rng, &b, 6);
        if cod == b {
            family.push((c, b));
        }
    }
    family
}

fn execution_laws(phi: Phi) -> Result<Vec<LawReport>, LawError> {
    let unit = TypeExpr::One;
    let mut reports = vec![equiv_named("exec.zeroAssertZero", phi, &seq([zero(), assert_zero()]), &id(), &unit, LAW_TOL)?];

    let mut zero_ctrl: Option<LawReport> = None;
    let mut one_ctrl: Option<LawReport> = None;
    for (c, b) in ctrl_law_family() {
        let domain = TypeExpr::prod(TypeExpr::One, b);
        let controlled = QpiTerm::arr_z(pi::ctrl(c.clone()));
        let z_report = equiv_named(
            "exec.zeroCtrl",
            phi,
            &seq([prod(zero(), id()), controlled.clone()]),
            &prod(zero(), id()),
            &domain,
            LAW_TOL,
        )?;
        let o_report = equiv_named(
            "exec.oneCtrl",
            phi,
            &seq([prod(one(), id()), controlled]),
            &prod(one(), QpiTerm::arr_z(c)),
            &domain,
            LAW_TOL,
        )?;
        match zero_ctrl.as_mut() {
            Some(r) => r.absorb(z_report),
            None => zero_ctrl = Some(z_report),
        }
        match one_ctrl.as_mut() {
            Some(r) => r.absorb(o_report),
            None => one_ctrl = Some(o_report),
        }
    }
    reports.extend(zero_ctrl);
    reports.extend(one_ctrl);
    reports.push(equiv_named(
        "exec.hadamardSwap",
        phi,
        &seq([zero(), h(), assert_one()]),
        &seq([one(), h(), assert_zero()]),
        &unit,
        LAW_TOL,
    )?);
    Ok(reports)
}

/// The six-stage complementarity composite on `qubit × qubit`.
pub fn complementarity_term() -> QpiTerm {
    seq([
        prod(copy_z(), id()),
        QpiTerm::AssocT,
        prod(id(), QpiTerm::inv(copy_x())),
        prod(id(), copy_x()),
        QpiTerm::AssocIT,
        prod(QpiTerm::inv(copy_z()), id()),
    ])
}

pub fn complementarity_composite(phi: Phi) -> Result<CMatrix, LawError> {
    Ok(eval_qpi(phi, &complementarity_term(), &qq())?)
}

/// The composite is `U†U` for `U = (id ⊗ δX†)(δZ ⊗ id)`. With isometric copies
/// its trace is always 2, so it is never `I`; it equals `I/2` exactly when
/// the two bases are mutually unbiased, which is what is checked.
pub fn complementarity(phi: Phi) -> Result<LawReport, LawError> {
    let composite = complementarity_composite(phi)?;
    let target = CMatrix::identity(4).scale(Complex::new(0.5, 0.0));
    Ok(LawReport::compare("complementarity", phi, &composite, &target, LAW_TOL))
}

/// Hadamard up to conjugation by `Z` and/or `X`.
pub fn canonical_forms() -> [CMatrix; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let m = |v: [f64; 4]| CMatrix::from_real(2, 2, &v.map(|e| e * s)).expect("2×2");
    [m([1.0, 1.0, 1.0, -1.0]), m([1.0, -1.0, -1.0, -1.0]), m([-1.0, 1.0, 1.0, 1.0]), m([-1.0, -1.0, -1.0, 1.0])]
}

pub fn canonicity(phi: Phi) -> Result<LawReport, LawError> {
    let gate = eval_qpi(phi, &h(), &q())?;
    let mut best: Option<LawReport> = None;
    for form in canonical_forms() {
        let r = LawReport::compare("canonicity", phi, &gate, &form, LAW_TOL);
        if best.as_ref().is_none_or(|b| r.max_deviation < b.max_deviation) {
            best = Some(r);
        }
    }
    Ok(best.expect("four candidates"))
}

fn circuit_identities(phi: Phi) -> Result<Vec<LawReport>, LawError> {
    let unit = TypeExpr::One;
    let unit2 = TypeExpr::prod(TypeExpr::One, TypeExpr::One);
    let sq = |g: QpiTerm| QpiTerm::second(g, q());
    Ok(vec![
        equiv_named("xInv", phi, &seq([x(), x()]), &id(), &q(), LAW_TOL)?,
        equiv_named("hInv", phi, &seq([h(), h()]), &id(), &q(), LAW_TOL)?,
        equiv_named("zOnMinus", phi, &seq([minus(), z()]), &plus(), &unit, LAW_TOL)?,
        equiv_named("ctrlExample", phi, &seq([prod(one(), minus()), ctrl_z()]), &prod(one(), plus()), &unit2, LAW_TOL)?,
        equiv_named(
            "twoQubitIdentity",
            phi,
            &seq([sq(z()), sq(h()), cx()]),
            &seq([ctrl_z(), sq(h()), sq(x())]),
            &qq(),
            LAW_TOL,
        )?,
    ])
}

fn measurement_laws(phi: Phi) -> Result<Vec<LawReport>, LawError> {
    let pure = ChannelTerm::Pure;
    Ok(vec![
        channel_equiv(
            "measureConjugation",
            phi,
            &ChannelTerm::MeasureP,
            &ChannelTerm::seq_all([pure(h()), ChannelTerm::MeasureZ, pure(h())]),
            &q(),
            LAW_TOL,
        )?,
        channel_equiv(
            "measureFstSnd",
            phi,
            &ChannelTerm::seq(pure(copy_z()), ChannelTerm::Fst),
            &ChannelTerm::seq(pure(copy_z()), ChannelTerm::Snd),
            &q(),
            LAW_TOL,
        )?,
    ])
}

/// Every named law at `phi`, in a fixed order.
pub fn run_suite(phi: Phi) -> Vec<LawReport> {
    let groups: [fn(Phi) -> Result<Vec<LawReport>, LawError>; 6] = [
        |p| classical_structure(p, "copyZ", copy_z()),
        |p| classical_structure(p, "copyX", copy_x()),
        execution_laws,
        |p| Ok(vec![complementarity(p)?, canonicity(p)?]),
        circuit_identities,
        measurement_laws,
    ];
    groups
        .iter()
        .flat_map(|g| g(phi).expect("built-in laws are well typed"))
        .collect()
}

fn aggregate(name: &str, phi: Phi, checks: impl IntoIterator<Item = LawReport>) -> LawReport {
    let mut total = LawReport {
        law_name: name.to_string(),
        phi: phi.0,
        holds: true,
        max_deviation: 0.0,
        lhs_dims: (0, 0),
        rhs_dims: (0, 0),
    };
    for c in checks {
        total.absorb(c);
    }
    total
}

fn deviation_report(name: &str, phi: Phi, deviation: f64, dims: (usize, usize)) -> LawReport {
    LawReport {
        law_name: name.to_string(),
        phi: phi.0,
        holds: deviation <= PROPERTY_TOL,
        max_deviation: deviation,
        lhs_dims: dims,
        rhs_dims: dims,
    }
}

/// Randomized checks across the layers. Each report folds `count` samples
/// (lifted programs get `2·count/5`) into its worst case.
pub fn random_property_suite(phi: Phi, count: usize, seed: u64) -> Vec<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = PROPERTY_TOL;
    let mut unitarity = Vec::new();
    let mut dagger = Vec::new();
    for _ in 0..count {
        let b = pi::gen::random_type(&mut rng, 64);
        let (c, _) = pi::gen::random_term(&mut rng, &b, 10);
        let u = eval_pi(&c, &b).expect("generated term evaluates");
        let gram = u.dagger().matmul(&u).expect("square");
        let mut r = LawReport::compare("pi.unitarity", phi, &gram, &CMatrix::identity(u.cols()), tol);
        if !u.is_permutation() {
            r.holds = false;
            r.max_deviation = r.max_deviation.max(1.0);
        }
        unitarity.push(r);
        let adj = eval_pi(&c.adjoint_at(&b).expect("generated term has an adjoint"), &u_cod(&c, &b)).expect("adjoint evaluates");
        dagger.push(LawReport::compare("pi.dagger", phi, &adj, &u.dagger(), tol));
    }

    let mut normalizer = Vec::new();
    for _ in 0..count {
        let m = amalgam::gen::random_list(&mut rng, 16, 8);
        let before = eval_pizh(phi, &m).expect("generated list evaluates");
        let after = eval_pizh(phi, &normalize(&m)).expect("normal form evaluates");
        normalizer.push(LawReport::compare("pizh.normalize", phi, &after, &before, tol));
    }

    let lifted_count = count * 2 / 5;
    let mut contraction = Vec::new();
    let mut functor = Vec::new();
    let mut inverse = Vec::new();
    let mut desugar = Vec::new();
    for _ in 0..lifted_count {
        let domain = qpi::gen::random_register(&mut rng, 8);
        let size = rng.gen_range(1..6);
        let d = qpi::gen::random_program(&mut rng, &domain, size, 16);
        let cod = d.typecheck(&domain).expect("generated program typechecks");
        let m = eval_qpi(phi, &d, &domain).expect("generated program evaluates");
        contraction.push(deviation_report("qpi.contraction", phi, (m.spectral_norm() - 1.0).max(0.0), m.shape()));
        desugar.push(LawReport::compare(
            "qpi.desugarAgreement",
            phi,
            &m,
            &eval_qpi_direct(phi, &d, &domain).expect("generated program evaluates"),
            tol,
        ));
        let inv = eval_qpi(phi, &QpiTerm::inv(d.clone()), &cod).expect("inverse evaluates");
        inverse.push(LawReport::compare("qpi.inverseCoherence", phi, &inv, &m.dagger(), tol));
        let size = rng.gen_range(1..4);
        let e = qpi::gen::random_program(&mut rng, &cod, size, 16);
        let composite = eval_qpi(phi, &QpiTerm::seq(d.clone(), e.clone()), &domain).expect("composite evaluates");
        let me = eval_qpi(phi, &e, &cod).expect("second stage evaluates");
        functor.push(LawReport::compare("qpi.functoriality", phi, &composite, &me.matmul(&m).expect("shapes chain"), tol));
    }

    vec![
        aggregate("pi.unitarity", phi, unitarity),
        aggregate("pi.dagger", phi, dagger),
        aggregate("pizh.normalize", phi, normalizer),
        aggregate("qpi.contraction", phi, contraction),
        aggregate("qpi.desugarAgreement", phi, desugar),
        aggregate("qpi.inverseCoherence", phi, inverse),
        aggregate("qpi.functoriality", phi, functor),
    ]
}

fn u_cod(c: &PiTerm, b: &TypeExpr) -> TypeExpr {
    c.typecheck(b).expect("generated term typechecks")
}

/// Channel built from a lifted unitary, for callers comparing against raw Kraus maps.
pub fn lift_unitary(phi: Phi, d: &QpiTerm, domain: &TypeExpr) -> Result<KrausMap, LawError> {
    Ok(KrausMap::lift_contraction(eval_qpi(phi, d, domain)?)?)
}

/// Whether `ctrlS` acts as `diag(1, 1, 1, i)` on two qubits under the encoding
/// `a + ib ↦ [[a, -b], [b, a]]`; returns the largest deviation.
pub fn ctrl_s_encoding_deviation(phi: Phi) -> Result<f64, LawError> {
    let register = TypeExpr::prod(q(), qq());
    let real = eval_qpi(phi, &corpus::ctrl_s(), &register)?;
    let i = Complex::new(0.0, 1.0);
    let one = Complex::new(1.0, 0.0);
    let target = CMatrix::from_fn(4, 4, |r, c| if r != c { Complex::new(0.0, 0.0) } else if r == 3 { i } else { one });
    let encoded = CMatrix::from_fn(8, 8, |r, c| {
        let z = target.get(r / 2, c / 2);
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => Complex::new(z.re, 0.0),
            (0, 1) => Complex::new(-z.im, 0.0),
            _ => Complex::new(z.im, 0.0),
        }
    });
    Ok(real.approx_eq(&encoded, 0.0).max_diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quantum_angle_suite_holds() {
        for r in run_suite(Phi::QUANTUM) {
            assert!(r.holds, "{} deviates by {}", r.law_name, r.max_deviation);
        }
    }

    #[test]
    fn suite_has_expected_shape() {
        let names: Vec<String> = run_suite(Phi::QUANTUM).into_iter().map(|r| r.law_name).collect();
        assert_eq!(names.iter().filter(|n| n.starts_with("copy")).count(), 8);
        assert_eq!(names.iter().filter(|n| n.starts_with("exec.")).count(), 4);
        assert!(names.contains(&"complementarity".to_string()));
    }

    #[test]
    fn complementarity_separates_angles() {
        for k in 0..4 {
            let r = complementarity(Phi(PI / 8.0 + k as f64 * PI / 4.0)).unwrap();
            assert!(r.holds, "k = {k}: {}", r.max_deviation);
            assert!(canonicity(Phi(PI / 8.0 + k as f64 * PI / 4.0)).unwrap().holds);
        }
        for phi in [0.0, PI / 6.0, PI / 3.0] {
            let r = complementarity(Phi(phi)).unwrap();
            assert!(!r.holds && r.max_deviation > 0.05, "φ = {phi}: {}", r.max_deviation);
        }
        assert!(complementarity(Phi(PI / 6.0)).unwrap().max_deviation > 0.1);
    }

    #[test]
    fn literal_composite_has_trace_two() {
        let at = |phi: f64| complementarity_composite(Phi(phi)).unwrap();
        for phi in [0.0, PI / 8.0, PI / 6.0, 0.3] {
            assert!((at(phi).trace().re - 2.0).abs() < 1e-12);
        }
        let projector = CMatrix::from_real(4, 4, &[1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 1.]).unwrap();
        assert!(at(0.0).approx_eq(&projector, 1e-12).equal);
        let half = CMatrix::identity(4).scale(Complex::new(0.5, 0.0));
        assert!(at(PI / 8.0).approx_eq(&half, 1e-12).equal);
    }

    #[test]
    fn equiv_reports_deviation() {
        let r = equiv(Phi::QUANTUM, &x(), &h(), &q(), LAW_TOL).unwrap();
        assert!(!r.holds);
        assert!((r.max_deviation - (1.0 - std::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12 || (r.max_deviation - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(equiv(Phi::QUANTUM, &seq([h(), h()]), &id(), &q(), LAW_TOL).unwrap().holds);
    }

    #[test]
    fn equiv_rejects_codomain_mismatch() {
        assert!(matches!(
            equiv(Phi::QUANTUM, &copy_z(), &id(), &q(), LAW_TOL),
            Err(LawError::CodomainMismatch { .. })
        ));
    }

    #[test]
    fn random_suite_is_deterministic_and_holds() {
        let a = random_property_suite(Phi::QUANTUM, 40, 7);
        assert_eq!(a, random_property_suite(Phi::QUANTUM, 40, 7));
        for r in a {
            assert!(r.holds, "{} deviates by {}", r.law_name, r.max_deviation);
        }
    }

    #[test]
    fn ctrl_s_matches_encoding() {
        assert!(ctrl_s_encoding_deviation(Phi::QUANTUM).unwrap() < 1e-10);
    }
}
