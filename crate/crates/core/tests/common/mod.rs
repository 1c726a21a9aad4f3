//! Oracles written independently of the library's evaluators.
#![allow(dead_code)]

use qpi::linalg::{CMatrix, Complex};
use qpi::pi::{PiTerm, TypeExpr};

/// A value of a finite type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Unit,
    Left(Box<Value>),
    Right(Box<Value>),
    Pair(Box<Value>, Box<Value>),
}

use Value::*;

fn left(v: Value) -> Value {
    Left(Box::new(v))
}

fn right(v: Value) -> Value {
    Right(Box::new(v))
}

fn pair(a: Value, b: Value) -> Value {
    Pair(Box::new(a), Box::new(b))
}

/// All values of `t`: left summand first, left factor most significant.
pub fn values(t: &TypeExpr) -> Vec<Value> {
    match t {
        TypeExpr::Zero => vec![],
        TypeExpr::One => vec![Unit],
        TypeExpr::Sum(a, b) => values(a).into_iter().map(left).chain(values(b).into_iter().map(right)).collect(),
        TypeExpr::Prod(a, b) => {
            let bs = values(b);
            values(a).into_iter().flat_map(|x| bs.iter().map(move |y| pair(x.clone(), y.clone()))).collect()
        }
    }
}

/// Runs `c` on the value `v` of type `t`, following each combinator's
/// action on values.
pub fn apply(c: &PiTerm, t: &TypeExpr, v: Value) -> Value {
    use PiTerm as P;
    let bad = || -> Value { panic!("{c} applied to an ill-typed value at {t}") };
    match c {
        P::Id => v.clone(),
        P::SwapPlus => match v {
            Left(x) => Right(x),
            Right(y) => Left(y),
            _ => bad(),
        },
        P::AssoclPlus => match v {
            Left(x) => left(Left(x)),
            Right(r) => match *r {
                Left(y) => left(Right(y)),
                Right(z) => Right(z),
                _ => bad(),
            },
            _ => bad(),
        },
        P::AssocrPlus => match v {
            Left(l) => match *l {
                Left(x) => Left(x),
                Right(y) => right(Left(y)),
                _ => bad(),
            },
            Right(z) => right(Right(z)),
            _ => bad(),
        },
        P::UnitePlus => match v {
            Right(y) => *y,
            _ => bad(),
        },
        P::UnitiPlus => Right(Box::new(v)),
        P::SwapTimes => match v {
            Pair(a, b) => Pair(b, a),
            _ => bad(),
        },
        P::AssoclTimes => match v {
            Pair(a, bc) => match *bc {
                Pair(b, c) => pair(Pair(a, b), *c),
                _ => bad(),
            },
            _ => bad(),
        },
        P::AssocrTimes => match v {
            Pair(ab, c) => match *ab {
                Pair(a, b) => pair(*a, Pair(b, c)),
                _ => bad(),
            },
            _ => bad(),
        },
        P::UniteTimes => match v {
            Pair(_, b) => *b,
            _ => bad(),
        },
        P::UnitiTimes => pair(Unit, v),
        P::Dist => match v {
            Pair(s, c) => match *s {
                Left(a) => left(Pair(a, c)),
                Right(b) => right(Pair(b, c)),
                _ => bad(),
            },
            _ => bad(),
        },
        P::Factor => match v {
            Left(p) => match *p {
                Pair(a, c) => pair(Left(a), *c),
                _ => bad(),
            },
            Right(p) => match *p {
                Pair(b, c) => pair(Right(b), *c),
                _ => bad(),
            },
            _ => bad(),
        },
        P::Absorbl | P::Factorzr(_) => bad(),
        P::Seq(a, b) => {
            let mid = a.typecheck(t).unwrap();
            let w = apply(a, t, v);
            apply(b, &mid, w)
        }
        P::Sum(a, b) => match (t, v) {
            (TypeExpr::Sum(ta, _), Left(x)) => left(apply(a, ta, *x)),
            (TypeExpr::Sum(_, tb), Right(y)) => right(apply(b, tb, *y)),
            _ => bad(),
        },
        P::Product(a, b) => match (t, v) {
            (TypeExpr::Prod(ta, tb), Pair(x, y)) => pair(apply(a, ta, *x), apply(b, tb, *y)),
            _ => bad(),
        },
        P::Inv(inner) => {
            let dom = c.typecheck(t).unwrap();
            values(&dom)
                .into_iter()
                .find(|u| apply(inner, &dom, u.clone()) == v)
                .unwrap_or_else(bad)
        }
    }
}

/// The permutation matrix of `c` at `t`, built from its action on values.
pub fn value_matrix(c: &PiTerm, t: &TypeExpr) -> CMatrix {
    let cod = c.typecheck(t).unwrap();
    let outs = values(&cod);
    let ins = values(t);
    let images: Vec<usize> = ins
        .into_iter()
        .map(|v| {
            let w = apply(c, t, v);
            outs.iter().position(|o| *o == w).expect("image is a value of the codomain")
        })
        .collect();
    CMatrix::from_fn(outs.len(), images.len(), |i, j| Complex::new(if images[j] == i { 1.0 } else { 0.0 }, 0.0))
}

/// Simon's circuit with hidden string 11 on a dense 16-dimensional vector:
/// returns the probabilities of the four outcomes of the first register.
pub fn simon_brute_force() -> [f64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // index = a0 a1 b0 b1, most significant first
    let bit = |i: usize, k: usize| (i >> (3 - k)) & 1;
    let hadamard_a = |psi: &[f64]| -> Vec<f64> {
        let mut out = psi.to_vec();
        for k in 0..2 {
            let mut next = vec![0.0; 16];
            for i in 0..16 {
                let flipped = i ^ (1 << (3 - k));
                let sign = if bit(i, k) == 1 { -1.0 } else { 1.0 };
                next[i] += s * sign * out[i];
                next[flipped] += s * out[i];
            }
            out = next;
        }
        out
    };
    let mut psi = vec![0.0; 16];
    psi[0] = 1.0;
    psi = hadamard_a(&psi);
    let mut after = vec![0.0; 16];
    for i in 0..16 {
        let f = bit(i, 0) ^ bit(i, 1);
        let j = i ^ (f << 1) ^ f;
        after[j] += psi[i];
    }
    psi = hadamard_a(&after);
    let mut probs = [0.0; 4];
    for (i, amp) in psi.iter().enumerate() {
        probs[i >> 2] += amp * amp;
    }
    probs
}

/// Success probability of `rounds` Grover iterations on 8 items, dense.
pub fn grover_dense(target: usize, rounds: usize) -> f64 {
    let n = 8;
    let mut psi = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..rounds {
        psi[target] = -psi[target];
        let mean = psi.iter().sum::<f64>() / n as f64;
        for a in psi.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
    psi[target] * psi[target]
}

/// `sin²((2k+1)·asin(1/√8))`
pub fn grover_formula(rounds: usize) -> f64 {
    let theta = (1.0f64 / 8.0).sqrt().asin();
    ((2 * rounds + 1) as f64 * theta).sin().powi(2)
}
