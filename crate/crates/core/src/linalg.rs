//! Exact sparse elimination.
//!
//! Everything here goes through one routine: the reduced echelon basis of the
//! span of a family of sparse vectors, pivoting on the lowest nonzero index.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linmap::{axpby, LinMap, SparseVec};
use crate::scalar::{FieldSpec, Scalar};

/// A reduced echelon basis: `rows[k]` has leading index `pivots[k]` with
/// coefficient 1, and every other row is zero at every pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseVec>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn reduce_into(field: FieldSpec, basis: &mut BTreeMap<usize, SparseVec>, mut v: SparseVec) {
    let one = field.one();
    let mut k = 0;
    while k < v.len() {
        let idx = v[k].0;
        if let Some(b) = basis.get(&idx) {
            let c = -&v[k].1;
            v = axpby(&one, &v, &c, b);
        } else {
            k += 1;
        }
    }
    if v.is_empty() {
        return;
    }
    // first entry not at an existing pivot becomes the pivot; earlier entries
    // were cleared above, so it is the lowest index
    let lead = v.iter().position(|e| !basis.contains_key(&e.0)).unwrap();
    debug_assert_eq!(lead, 0);
    let inv = v[0].1.inv().unwrap();
    let v: SparseVec = v.into_iter().map(|(i, s)| (i, &s * &inv)).collect();
    basis.insert(v[0].0, v);
}

/// Reduced echelon basis of the span of `vectors`.
pub fn echelon<I: IntoIterator<Item = SparseVec>>(field: FieldSpec, vectors: I) -> Echelon {
    let mut basis: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for v in vectors {
        if !v.is_empty() {
            reduce_into(field, &mut basis, v);
        }
    }
    back_reduce(field, basis)
}

fn back_reduce(field: FieldSpec, mut basis: BTreeMap<usize, SparseVec>) -> Echelon {
    let one = field.one();
    let pivots: Vec<usize> = basis.keys().copied().collect();
    let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for &p in pivots.iter().rev() {
        let mut v = basis.remove(&p).unwrap();
        let mut k = 1;
        while k < v.len() {
            let idx = v[k].0;
            if let Some(b) = done.get(&idx) {
                let c = -&v[k].1;
                v = axpby(&one, &v, &c, b);
            } else {
                k += 1;
            }
        }
        done.insert(p, v);
    }
    let (pivots, rows) = done.into_iter().unzip();
    Echelon { pivots, rows }
}

pub fn column_echelon(f: &LinMap) -> Echelon {
    echelon(f.field(), f.columns())
}

pub fn row_echelon(f: &LinMap) -> Echelon {
    echelon(f.field(), f.transpose().columns())
}

pub fn rank(f: &LinMap) -> usize {
    if f.ncols() <= f.nrows() {
        column_echelon(f).rank()
    } else {
        row_echelon(f).rank()
    }
}

/// Kernel basis from a row echelon form over `n` columns: one vector per free
/// column, with coefficient 1 there and 0 at every other free column.
pub fn kernel_basis(field: FieldSpec, ech: &Echelon, n: usize) -> (Vec<usize>, Vec<SparseVec>) {
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    // column f of the kernel needs -R[p][f] for every pivot row p
    let mut by_free: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (p, row) in ech.pivots.iter().zip(&ech.rows) {
        for (j, s) in row.iter().skip(1) {
            by_free.entry(*j).or_default().push((*p, -s));
        }
    }
    let vecs = free
        .iter()
        .map(|&f| {
            let mut v = by_free.remove(&f).unwrap_or_default();
            v.push((f, field.one()));
            v.sort_unstable_by_key(|e| e.0);
            v
        })
        .collect();
    (free, vecs)
}

/// Exact inverse of a square map, or the rank when it is singular.
pub fn invert(f: &LinMap, what: &str) -> Result<LinMap> {
    let n = f.ncols();
    let singular = |rank| Error::NotInvertible {
        what: what.to_string(),
        rows: f.nrows(),
        cols: n,
        rank,
    };
    if f.nrows() != n {
        return Err(singular(rank(f)));
    }
    let field = f.field();
    let rows = f.transpose().columns();
    let augmented = rows.into_iter().enumerate().map(|(i, mut r)| {
        r.push((n + i, field.one()));
        r
    });
    let ech = echelon(field, augmented);
    let r = ech.pivots.iter().filter(|&&p| p < n).count();
    if r < n {
        return Err(singular(r));
    }
    // row k of the reduced form is [e_k | row k of the inverse]
    let mut cols: Vec<SparseVec> = vec![Vec::new(); n];
    for (k, row) in ech.rows.iter().enumerate() {
        for (j, s) in row.iter().skip(1) {
            debug_assert!(*j >= n);
            cols[j - n].push((k, s.clone()));
        }
    }
    Ok(LinMap::from_columns(field, f.cod().clone(), f.dom().clone(), cols))
}
