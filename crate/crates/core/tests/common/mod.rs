//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! The oracles work on dense `BigRational` matrices and never call into the
//! crate's sparse kernels, so they can be used to cross-check them.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use whq::gen::{
    chein_double, group_algebra, groupoid_algebra, loop_algebra, loopoid_algebra, symmetric3,
    GroupoidPresentation,
};
use whq::linalg::invert;
use whq::{t, FieldSpec, LinMap, Morphism, Scalar, SpaceSig, Whq};

pub const Q: FieldSpec = FieldSpec::Rationals;

pub type Dense = Vec<Vec<BigRational>>;

fn cached(cell: &'static OnceLock<Whq>, make: impl FnOnce() -> Whq) -> Whq {
    cell.get_or_init(make).clone()
}

pub fn s3() -> Whq {
    static W: OnceLock<Whq> = OnceLock::new();
    cached(&W, || group_algebra(Q, &symmetric3()).unwrap())
}

pub fn pair3() -> Whq {
    static W: OnceLock<Whq> = OnceLock::new();
    cached(&W, || groupoid_algebra(Q, &GroupoidPresentation::pair(3)).unwrap())
}

pub fn chein_s3() -> Whq {
    static W: OnceLock<Whq> = OnceLock::new();
    cached(&W, || loop_algebra(Q, &chein_double(&symmetric3()).unwrap()).unwrap())
}

pub fn loopoid48() -> Whq {
    static W: OnceLock<Whq> = OnceLock::new();
    cached(&W, || loopoid_algebra(Q, 2, &chein_double(&symmetric3()).unwrap()).unwrap())
}

/// The four structures the acceptance criteria are stated on.
pub fn four() -> Vec<(&'static str, Whq)> {
    vec![
        ("S3", s3()),
        ("pair3", pair3()),
        ("chein(S3)", chein_s3()),
        ("loopoid48", loopoid48()),
    ]
}

/// The three smaller ones, for property tests that rebuild everything per case.
pub fn small() -> Vec<(&'static str, Whq)> {
    vec![("S3", s3()), ("pair3", pair3()), ("chein(S3)", chein_s3())]
}

pub fn big(s: &Scalar) -> BigRational {
    s.as_big_rational().expect("rational scalar")
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn dense(f: &LinMap) -> Dense {
    let mut m = vec![vec![BigRational::zero(); f.ncols()]; f.nrows()];
    for (r, c, s) in f.triplets() {
        m[r][c] = big(&s);
    }
    m
}

pub fn dense_of(m: &Morphism) -> Dense {
    dense(&m.eval())
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Kronecker product with the left factor's index varying slowest.
pub fn dense_kron(a: &Dense, b: &Dense) -> Dense {
    let (ar, br) = (a.len(), b.len());
    let ac = a.first().map_or(0, |r| r.len());
    let bc = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigRational::zero(); ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[i * br + k][j * bc + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

pub fn dense_identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

/// Rank by plain Gaussian elimination.
pub fn dense_rank(m: &Dense) -> usize {
    let mut m = m.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn dense_sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect()
}

pub fn linmap(dom: SpaceSig, cod: SpaceSig, m: &Dense) -> LinMap {
    let mut trip = Vec::new();
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.is_zero() {
                trip.push((r, c, Q.parse_scalar(&v.to_string()).unwrap()));
            }
        }
    }
    LinMap::from_triplets(Q, dom, cod, trip).unwrap()
}

/// Small rational entries, about a third of them zero.
pub fn entries(len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec(
        prop_oneof![2 => Just((0i64, 1i64)), 3 => (-4i64..=4, 1i64..=3)],
        len,
    )
}

pub fn from_entries(dom: SpaceSig, cod: SpaceSig, e: &[(i64, i64)]) -> LinMap {
    let cols = dom.dim();
    let mut trip = Vec::new();
    for (k, &(n, d)) in e.iter().enumerate() {
        if n != 0 {
            trip.push((k / cols, k % cols, Q.from_ratio(n, d).unwrap()));
        }
    }
    LinMap::from_triplets(Q, dom, cod, trip).unwrap()
}

/// A random linear map between the given spaces.
pub fn any_map(dom: SpaceSig, cod: SpaceSig) -> impl Strategy<Value = LinMap> {
    let len = dom.dim() * cod.dim();
    entries(len).prop_map(move |e| from_entries(dom.clone(), cod.clone(), &e))
}

/// One elementary step of a random change of basis.
#[derive(Clone, Debug)]
pub enum Step {
    Swap(usize, usize),
    Add(usize, usize, i64),
    Scale(usize, i64),
}

pub fn steps(n: usize, len: usize) -> impl Strategy<Value = Vec<Step>> {
    let step = prop_oneof![
        (0..n, 0..n).prop_map(|(i, j)| Step::Swap(i, j)),
        (0..n, 0..n, prop_oneof![-2i64..=-1, 1i64..=2]).prop_map(|(i, j, c)| Step::Add(i, j, c)),
        (0..n, prop_oneof![Just(-1i64), Just(2), Just(3)]).prop_map(|(i, c)| Step::Scale(i, c)),
    ];
    prop::collection::vec(step, 1..=len)
}

/// Product of elementary matrices, sparse when there are few steps.
pub fn invertible(sig: &SpaceSig, steps: &[Step]) -> LinMap {
    let n = sig.dim();
    let mut m = dense_identity(n);
    for s in steps {
        match *s {
            Step::Swap(i, j) => m.swap(i, j),
            Step::Add(i, j, c) if i != j => {
                let row = m[j].clone();
                for (k, v) in row.iter().enumerate() {
                    m[i][k] += v * rat(c, 1);
                }
            }
            Step::Add(..) => {}
            Step::Scale(i, c) => {
                for v in m[i].iter_mut() {
                    *v *= rat(c, 1);
                }
            }
        }
    }
    linmap(sig.clone(), sig.clone(), &m)
}

/// The same structure written in the basis given by the columns of `p`.
pub fn conjugate(w: &Whq, p: &LinMap) -> Whq {
    let pm = Morphism::map(p.clone());
    let pi = Morphism::map(invert(p, "P").unwrap());
    Whq::new(
        w.space.clone(),
        (&pm * &w.eta).materialize(),
        (&pm * &w.mu * t![pi, pi]).materialize(),
        (&w.eps * &pi).materialize(),
        (t![pm, pm] * &w.delta * &pi).materialize(),
        (&pm * &w.lambda * &pi).materialize(),
    )
    .unwrap()
}
