//! Sparse exact linear maps between tensor products of named spaces.
//!
//! Storage is compressed sparse column. Composite indices are row-major over the
//! factor sequence: in `A⊗B` the basis vector `e_a⊗e_b` has index `a*dim(B)+b`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use crate::space::SpaceSig;

/// A sparse vector: strictly increasing indices, no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Sorts, merges duplicate indices and drops zeros.
pub fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    if v.len() <= 1 {
        v.retain(|e| !e.1.is_zero());
        return v;
    }
    v.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, s) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc = &*acc + &s,
            _ => {
                if let Some((_, acc)) = out.last() {
                    if acc.is_zero() {
                        out.pop();
                    }
                }
                out.push((i, s));
            }
        }
    }
    if let Some((_, acc)) = out.last() {
        if acc.is_zero() {
            out.pop();
        }
    }
    out
}

/// `a*x + b*y` for sparse vectors.
pub fn axpby(a: &Scalar, x: &[(usize, Scalar)], b: &Scalar, y: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            let v = a * &x[i].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
        } else if take_y {
            let v = b * &y[j].1;
            if !v.is_zero() {
                out.push((y[j].0, v));
            }
            j += 1;
        } else {
            let v = &(a * &x[i].1) + &(b * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    field: FieldSpec,
    dom: SpaceSig,
    cod: SpaceSig,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<Scalar>,
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap({} -> {}, nnz {})", self.dom, self.cod, self.nnz())?;
        if self.nnz() <= 64 {
            for (r, c, v) in self.triplets() {
                write!(f, " [{r},{c}]={v}")?;
            }
        }
        Ok(())
    }
}

impl LinMap {
    /// Builds a map from already-normalized columns.
    pub fn from_columns(
        field: FieldSpec,
        dom: SpaceSig,
        cod: SpaceSig,
        cols: Vec<SparseVec>,
    ) -> LinMap {
        assert_eq!(cols.len(), dom.dim(), "column count must equal domain dimension");
        let mut col_ptr = Vec::with_capacity(cols.len() + 1);
        let nnz: usize = cols.iter().map(|c| c.len()).sum();
        let mut row_idx = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        col_ptr.push(0);
        let rows = cod.dim();
        for c in cols {
            for (r, v) in c {
                debug_assert!(r < rows && !v.is_zero());
                row_idx.push(r);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        LinMap {
            field,
            dom,
            cod,
            col_ptr,
            row_idx,
            vals,
        }
    }

    pub fn from_triplets(
        field: FieldSpec,
        dom: SpaceSig,
        cod: SpaceSig,
        triplets: Vec<(usize, usize, Scalar)>,
    ) -> Result<LinMap> {
        let (rows, cols) = (cod.dim(), dom.dim());
        let mut by_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Format(format!(
                    "entry ({r}, {c}) out of range for a {rows}x{cols} map"
                )));
            }
            if v.field() != field {
                return Err(Error::Format(format!(
                    "entry ({r}, {c}) = {v} is not in field {field}"
                )));
            }
            by_col[c].push((r, v));
        }
        let cols = by_col.into_iter().map(normalize).collect();
        Ok(LinMap::from_columns(field, dom, cod, cols))
    }

    pub fn zero(field: FieldSpec, dom: SpaceSig, cod: SpaceSig) -> LinMap {
        let n = dom.dim();
        LinMap::from_columns(field, dom, cod, vec![Vec::new(); n])
    }

    pub fn identity(field: FieldSpec, sig: SpaceSig) -> LinMap {
        let cols = (0..sig.dim()).map(|j| vec![(j, field.one())]).collect();
        LinMap::from_columns(field, sig.clone(), sig, cols)
    }

    /// The symmetry `c_{M,N}: M⊗N → N⊗M`.
    pub fn swap(field: FieldSpec, m: &SpaceSig, n: &SpaceSig) -> LinMap {
        let (dm, dn) = (m.dim(), n.dim());
        let cols = (0..dm * dn)
            .map(|k| {
                let (i, j) = (k / dn, k % dn);
                vec![(j * dm + i, field.one())]
            })
            .collect();
        LinMap::from_columns(field, m.tensor(n), n.tensor(m), cols)
    }

    /// The 1×1 map given by a scalar.
    pub fn scalar(s: Scalar) -> LinMap {
        let field = s.field();
        let col = if s.is_zero() { vec![] } else { vec![(0, s)] };
        LinMap::from_columns(field, SpaceSig::unit(), SpaceSig::unit(), vec![col])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dom(&self) -> &SpaceSig {
        &self.dom
    }

    pub fn cod(&self) -> &SpaceSig {
        &self.cod
    }

    pub fn nrows(&self) -> usize {
        self.cod.dim()
    }

    pub fn ncols(&self) -> usize {
        self.col_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn column(&self, j: usize) -> (&[usize], &[Scalar]) {
        let (a, b) = (self.col_ptr[j], self.col_ptr[j + 1]);
        (&self.row_idx[a..b], &self.vals[a..b])
    }

    pub fn column_vec(&self, j: usize) -> SparseVec {
        let (r, v) = self.column(j);
        r.iter().copied().zip(v.iter().cloned()).collect()
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        (0..self.ncols()).map(|j| self.column_vec(j)).collect()
    }

    pub fn entry(&self, r: usize, c: usize) -> Scalar {
        let (rows, vals) = self.column(c);
        match rows.binary_search(&r) {
            Ok(k) => vals[k].clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// All nonzero entries in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::with_capacity(self.nnz());
        for j in 0..self.ncols() {
            let (r, v) = self.column(j);
            for (ri, vi) in r.iter().zip(v) {
                out.push((*ri, j, vi.clone()));
            }
        }
        out
    }

    /// Same matrix with new signatures of equal total dimension.
    pub fn retype(&self, dom: SpaceSig, cod: SpaceSig) -> LinMap {
        assert_eq!(dom.dim(), self.dom.dim());
        assert_eq!(cod.dim(), self.cod.dim());
        LinMap {
            dom,
            cod,
            ..self.clone()
        }
    }

    /// Applies the map to a sparse vector.
    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        if v.len() == 1 && v[0].1.is_one() {
            return self.column_vec(v[0].0);
        }
        let mut acc = Vec::new();
        for (k, s) in v {
            let (r, vals) = self.column(*k);
            for (ri, vi) in r.iter().zip(vals) {
                acc.push((*ri, s * vi));
            }
        }
        normalize(acc)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LinMap) -> Result<LinMap> {
        if self.dom != g.cod {
            return Err(Error::SignatureMismatch {
                context: "compose".into(),
                left: self.dom.clone(),
                right: g.cod.clone(),
            });
        }
        let cols = (0..g.ncols())
            .map(|j| {
                let (r, v) = g.column(j);
                let col: Vec<(usize, Scalar)> =
                    r.iter().copied().zip(v.iter().cloned()).collect();
                self.apply(&col)
            })
            .collect();
        Ok(LinMap::from_columns(
            self.field,
            g.dom.clone(),
            self.cod.clone(),
            cols,
        ))
    }

    /// Kronecker product `self ⊗ g`.
    pub fn tensor(&self, g: &LinMap) -> LinMap {
        let (gr, gc) = (g.nrows(), g.ncols());
        let mut cols = Vec::with_capacity(self.ncols() * gc);
        for jf in 0..self.ncols() {
            let (rf, vf) = self.column(jf);
            for jg in 0..gc {
                let (rg, vg) = g.column(jg);
                let mut col = Vec::with_capacity(rf.len() * rg.len());
                for (a, x) in rf.iter().zip(vf) {
                    for (b, y) in rg.iter().zip(vg) {
                        col.push((a * gr + b, x * y));
                    }
                }
                cols.push(col);
            }
        }
        LinMap::from_columns(
            self.field,
            self.dom.tensor(&g.dom),
            self.cod.tensor(&g.cod),
            cols,
        )
    }

    /// Exact linear combination of maps sharing a signature.
    pub fn lincomb(terms: &[(Scalar, &LinMap)]) -> Result<LinMap> {
        let (_, first) = terms.first().ok_or_else(|| {
            Error::Format("lincomb needs at least one term to fix the signature".into())
        })?;
        for (_, t) in terms {
            if t.dom != first.dom || t.cod != first.cod {
                let (left, right) = if t.dom != first.dom {
                    (first.dom.clone(), t.dom.clone())
                } else {
                    (first.cod.clone(), t.cod.clone())
                };
                return Err(Error::SignatureMismatch {
                    context: "lincomb".into(),
                    left,
                    right,
                });
            }
        }
        let cols = (0..first.ncols())
            .map(|j| {
                let mut acc = Vec::new();
                for (s, t) in terms {
                    let (r, v) = t.column(j);
                    for (ri, vi) in r.iter().zip(v) {
                        acc.push((*ri, s * vi));
                    }
                }
                normalize(acc)
            })
            .collect();
        Ok(LinMap::from_columns(
            first.field,
            first.dom.clone(),
            first.cod.clone(),
            cols,
        ))
    }

    pub fn add(&self, g: &LinMap) -> Result<LinMap> {
        LinMap::lincomb(&[(self.field.one(), self), (self.field.one(), g)])
    }

    pub fn sub(&self, g: &LinMap) -> Result<LinMap> {
        LinMap::lincomb(&[(self.field.one(), self), (-self.field.one(), g)])
    }

    pub fn scale(&self, s: &Scalar) -> LinMap {
        let cols = (0..self.ncols())
            .map(|j| {
                let (r, v) = self.column(j);
                r.iter()
                    .zip(v)
                    .map(|(ri, vi)| (*ri, s * vi))
                    .filter(|e| !e.1.is_zero())
                    .collect()
            })
            .collect();
        LinMap::from_columns(self.field, self.dom.clone(), self.cod.clone(), cols)
    }

    pub fn transpose(&self) -> LinMap {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.nrows()];
        for j in 0..self.ncols() {
            let (r, v) = self.column(j);
            for (ri, vi) in r.iter().zip(v) {
                cols[*ri].push((j, vi.clone()));
            }
        }
        LinMap::from_columns(self.field, self.cod.clone(), self.dom.clone(), cols)
    }

    /// Exact entrywise equality including signatures.
    pub fn equals(&self, g: &LinMap) -> bool {
        self == g
    }

    /// First column (then row) where the two matrices differ.
    pub fn first_difference(&self, g: &LinMap) -> Option<(usize, usize, Scalar, Scalar)> {
        assert_eq!(self.ncols(), g.ncols());
        for j in 0..self.ncols() {
            if self.column(j) != g.column(j) {
                return first_diff_in(&self.column_vec(j), &g.column_vec(j), self.field)
                    .map(|(r, a, b)| (j, r, a, b));
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod
            && (0..self.ncols()).all(|j| {
                let (r, v) = self.column(j);
                r.len() == 1 && r[0] == j && v[0].is_one()
            })
    }
}

/// First index where two sparse vectors disagree, with both values.
pub fn first_diff_in(a: &[(usize, Scalar)], b: &[(usize, Scalar)], field: FieldSpec) -> Option<(usize, Scalar, Scalar)> {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return None,
            (Some((r, x)), None) => return Some((*r, x.clone(), field.zero())),
            (None, Some((r, y))) => return Some((*r, field.zero(), y.clone())),
            (Some((r, x)), Some((s, y))) => {
                if r < s {
                    return Some((*r, x.clone(), field.zero()));
                }
                if s < r {
                    return Some((*s, field.zero(), y.clone()));
                }
                if x != y {
                    return Some((*r, x.clone(), y.clone()));
                }
                i += 1;
                j += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn swap_moves_basis_vectors() {
        let two = SpaceSig::atom("A", 2);
        let s = LinMap::swap(q(), &two, &two);
        // e_0⊗e_1 has index 1, e_1⊗e_0 has index 2
        assert_eq!(s.apply(&[(1, q().one())]), vec![(2, q().one())]);
        let one = SpaceSig::atom("B", 1);
        assert!(LinMap::swap(q(), &one, &one).is_identity());
    }

    #[test]
    fn swap_is_an_involution() {
        for m in 1..=8 {
            for n in 1..=8 {
                let (a, b) = (SpaceSig::atom("M", m), SpaceSig::atom("N", n));
                let c = LinMap::swap(q(), &a, &b);
                let d = LinMap::swap(q(), &b, &a);
                assert!(d.compose(&c).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn tensor_with_unit_is_absorbed() {
        let h = SpaceSig::atom("H", 3);
        let f = LinMap::from_triplets(
            q(),
            h.clone(),
            h.clone(),
            vec![(0, 1, q().from_i64(2)), (2, 0, q().from_i64(-1))],
        )
        .unwrap();
        let k = LinMap::identity(q(), SpaceSig::unit());
        assert_eq!(k.tensor(&f), f);
        assert_eq!(f.tensor(&k), f);
        let i2 = LinMap::identity(q(), SpaceSig::atom("A", 2));
        let i3 = LinMap::identity(q(), SpaceSig::atom("B", 3));
        assert!(i2.tensor(&i3).is_identity());
        assert_eq!(i2.tensor(&i3).ncols(), 6);
    }

    #[test]
    fn difference_with_self_is_zero() {
        let h = SpaceSig::atom("H", 2);
        let f = LinMap::from_triplets(q(), h.clone(), h, vec![(0, 1, q().from_i64(5))]).unwrap();
        assert!(f.sub(&f).unwrap().is_zero());
        assert!(f.equals(&f));
    }

    #[test]
    fn compose_checks_signatures() {
        let a = LinMap::identity(q(), SpaceSig::atom("A", 2));
        let b = LinMap::identity(q(), SpaceSig::atom("B", 2));
        assert!(matches!(a.compose(&b), Err(Error::SignatureMismatch { .. })));
    }
}
