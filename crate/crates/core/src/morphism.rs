//! Lazy string-diagram expressions.
//!
//! A `Morphism` is evaluated column by column on sparse vectors, so composites on
//! large tensor powers never need to be stored as matrices. `eval` materializes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linmap::{first_diff_in, normalize, LinMap, SparseVec};
use crate::scalar::{FieldSpec, Scalar};
use crate::space::SpaceSig;

#[derive(Clone)]
enum Kind {
    Map(Arc<LinMap>),
    Id,
    Swap(usize, usize),
    /// `fs[0] ∘ fs[1] ∘ …`
    Chain(Arc<[Morphism]>),
    Tensor(Arc<[Morphism]>),
    Sum(Arc<[(Scalar, Morphism)]>),
}

#[derive(Clone)]
pub struct Morphism {
    field: FieldSpec,
    dom: SpaceSig,
    cod: SpaceSig,
    kind: Kind,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({} -> {})", self.dom, self.cod)
    }
}

/// Domains at least this large are evaluated in parallel.
const PAR_THRESHOLD: usize = 256;

impl Morphism {
    pub fn map(f: LinMap) -> Morphism {
        Morphism {
            field: f.field(),
            dom: f.dom().clone(),
            cod: f.cod().clone(),
            kind: Kind::Map(Arc::new(f)),
        }
    }

    pub fn id(field: FieldSpec, sig: &SpaceSig) -> Morphism {
        Morphism {
            field,
            dom: sig.clone(),
            cod: sig.clone(),
            kind: Kind::Id,
        }
    }

    pub fn swap(field: FieldSpec, m: &SpaceSig, n: &SpaceSig) -> Morphism {
        Morphism {
            field,
            dom: m.tensor(n),
            cod: n.tensor(m),
            kind: Kind::Swap(m.dim(), n.dim()),
        }
    }

    pub fn zero(field: FieldSpec, dom: &SpaceSig, cod: &SpaceSig) -> Morphism {
        Morphism::map(LinMap::zero(field, dom.clone(), cod.clone()))
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

    fn is_primitive(&self) -> bool {
        matches!(self.kind, Kind::Map(_) | Kind::Id | Kind::Swap(..))
    }

    /// `self ∘ g`.
    pub fn try_compose(&self, g: &Morphism) -> Result<Morphism> {
        if self.dom != g.cod {
            return Err(Error::SignatureMismatch {
                context: "compose".into(),
                left: self.dom.clone(),
                right: g.cod.clone(),
            });
        }
        if matches!(self.kind, Kind::Id) {
            return Ok(g.clone());
        }
        if matches!(g.kind, Kind::Id) {
            return Ok(self.clone());
        }
        let mut parts: Vec<Morphism> = Vec::new();
        for m in [self, g] {
            match &m.kind {
                Kind::Chain(fs) => parts.extend(fs.iter().cloned()),
                _ => parts.push(m.clone()),
            }
        }
        Ok(Morphism {
            field: self.field,
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            kind: Kind::Chain(parts.into()),
        })
    }

    /// `g ∘ self`, reading left to right.
    pub fn then(&self, g: &Morphism) -> Morphism {
        g * self
    }

    /// Tensor product of a list of factors; composite factors are materialized.
    pub fn tensor_all(fs: &[Morphism]) -> Morphism {
        let field = fs.first().map(|f| f.field).unwrap_or(FieldSpec::Rationals);
        let mut parts: Vec<Morphism> = Vec::new();
        for f in fs {
            if f.dom.is_unit() && f.cod.is_unit() && matches!(f.kind, Kind::Id) {
                continue;
            }
            match &f.kind {
                Kind::Tensor(inner) => parts.extend(inner.iter().cloned()),
                _ if f.is_primitive() => parts.push(f.clone()),
                _ => parts.push(Morphism::map(f.eval())),
            }
        }
        // adjacent identities merge into one
        let mut merged: Vec<Morphism> = Vec::new();
        for p in parts {
            if let (Some(last), Kind::Id) = (merged.last_mut(), &p.kind) {
                if matches!(last.kind, Kind::Id) {
                    let sig = last.dom.tensor(&p.dom);
                    *last = Morphism::id(field, &sig);
                    continue;
                }
            }
            merged.push(p);
        }
        match merged.len() {
            0 => Morphism::id(field, &SpaceSig::unit()),
            1 => merged.pop().unwrap(),
            _ => {
                let dom = merged.iter().fold(SpaceSig::unit(), |a, m| a.tensor(&m.dom));
                let cod = merged.iter().fold(SpaceSig::unit(), |a, m| a.tensor(&m.cod));
                Morphism {
                    field,
                    dom,
                    cod,
                    kind: Kind::Tensor(merged.into()),
                }
            }
        }
    }

    pub fn tensor(&self, g: &Morphism) -> Morphism {
        Morphism::tensor_all(&[self.clone(), g.clone()])
    }

    pub fn try_lincomb(terms: Vec<(Scalar, Morphism)>) -> Result<Morphism> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Format("empty linear combination".into()))?
            .1
            .clone();
        for (_, t) in &terms {
            if t.dom != first.dom || t.cod != first.cod {
                return Err(Error::SignatureMismatch {
                    context: "linear combination".into(),
                    left: first.dom.tensor(&first.cod),
                    right: t.dom.tensor(&t.cod),
                });
            }
        }
        let mut flat = Vec::new();
        for (s, t) in terms {
            match &t.kind {
                Kind::Sum(inner) => {
                    flat.extend(inner.iter().map(|(c, m)| (&s * c, m.clone())))
                }
                _ => flat.push((s, t)),
            }
        }
        Ok(Morphism {
            field: first.field,
            dom: first.dom.clone(),
            cod: first.cod.clone(),
            kind: Kind::Sum(flat.into()),
        })
    }

    pub fn scale(&self, s: Scalar) -> Morphism {
        Morphism::try_lincomb(vec![(s, self.clone())]).unwrap()
    }

    /// Image of the basis vector `e_j`.
    pub fn apply_basis(&self, j: usize) -> SparseVec {
        match &self.kind {
            Kind::Map(f) => f.column_vec(j),
            Kind::Id => vec![(j, self.field.one())],
            Kind::Swap(m, n) => vec![((j % n) * m + j / n, self.field.one())],
            _ => self.apply(&[(j, self.field.one())]),
        }
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        match &self.kind {
            Kind::Map(f) => f.apply(v),
            Kind::Id => v.to_vec(),
            Kind::Swap(m, n) => {
                let (m, n) = (*m, *n);
                let mut out: SparseVec = v
                    .iter()
                    .map(|(j, s)| ((j % n) * m + j / n, s.clone()))
                    .collect();
                out.sort_unstable_by_key(|e| e.0);
                out
            }
            Kind::Chain(fs) => {
                let mut cur = v.to_vec();
                for f in fs.iter().rev() {
                    if cur.is_empty() {
                        break;
                    }
                    cur = f.apply(&cur);
                }
                cur
            }
            Kind::Tensor(fs) => self.apply_tensor(fs, v),
            Kind::Sum(ts) => {
                let mut acc = Vec::new();
                for (s, t) in ts.iter() {
                    for (i, x) in t.apply(v) {
                        acc.push((i, s * &x));
                    }
                }
                normalize(acc)
            }
        }
    }

    fn apply_tensor(&self, fs: &[Morphism], v: &[(usize, Scalar)]) -> SparseVec {
        let in_dims: Vec<usize> = fs.iter().map(|f| f.dom.dim()).collect();
        let out_dims: Vec<usize> = fs.iter().map(|f| f.cod.dim()).collect();
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        let mut idx = vec![0usize; fs.len()];
        for (j, s) in v {
            let mut r = *j;
            for k in (0..fs.len()).rev() {
                idx[k] = r % in_dims[k];
                r /= in_dims[k];
            }
            // Kronecker product of the factor columns
            let mut cur: Vec<(usize, Scalar)> = vec![(0, s.clone())];
            for (k, f) in fs.iter().enumerate() {
                let col = f.apply_basis(idx[k]);
                if col.is_empty() {
                    cur.clear();
                    break;
                }
                let mut next = Vec::with_capacity(cur.len() * col.len());
                for (a, x) in &cur {
                    for (b, y) in &col {
                        next.push((a * out_dims[k] + b, x * y));
                    }
                }
                cur = next;
            }
            acc.extend(cur);
        }
        normalize(acc)
    }

    /// Materializes the matrix.
    pub fn eval(&self) -> LinMap {
        if let Kind::Map(f) = &self.kind {
            return (**f).clone();
        }
        let n = self.dom.dim();
        let cols: Vec<SparseVec> = if n >= PAR_THRESHOLD {
            (0..n).into_par_iter().map(|j| self.apply_basis(j)).collect()
        } else {
            (0..n).map(|j| self.apply_basis(j)).collect()
        };
        LinMap::from_columns(self.field, self.dom.clone(), self.cod.clone(), cols)
    }

    /// Materialized copy, shared.
    pub fn materialize(&self) -> Morphism {
        if matches!(self.kind, Kind::Map(_)) || self.is_primitive() {
            return self.clone();
        }
        Morphism::map(self.eval())
    }

    /// The first basis column on which two morphisms differ, with the first
    /// differing row and both values.
    pub fn first_difference(&self, g: &Morphism) -> Result<Option<Difference>> {
        if self.dom != g.dom || self.cod != g.cod {
            let (left, right) = if self.dom != g.dom {
                (self.dom.clone(), g.dom.clone())
            } else {
                (self.cod.clone(), g.cod.clone())
            };
            return Err(Error::SignatureMismatch {
                context: "comparison".into(),
                left,
                right,
            });
        }
        let n = self.dom.dim();
        let test = |j: usize| -> Option<Difference> {
            let (a, b) = (self.apply_basis(j), g.apply_basis(j));
            if a == b {
                return None;
            }
            first_diff_in(&a, &b, self.field).map(|(row, lhs, rhs)| Difference {
                column: j,
                row,
                lhs,
                rhs,
            })
        };
        Ok(if n >= PAR_THRESHOLD {
            (0..n).into_par_iter().map(test).find_first(|d| d.is_some()).flatten()
        } else {
            (0..n).map(test).find(|d| d.is_some()).flatten()
        })
    }

    pub fn equals(&self, g: &Morphism) -> bool {
        matches!(self.first_difference(g), Ok(None))
    }
}

/// Where two morphisms disagree: input basis column, output row, and both entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Difference {
    pub column: usize,
    pub row: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl Mul for &Morphism {
    type Output = Morphism;
    fn mul(self, g: &Morphism) -> Morphism {
        match self.try_compose(g) {
            Ok(m) => m,
            Err(e) => panic!("ill-typed composite: {e}"),
        }
    }
}

impl Mul for Morphism {
    type Output = Morphism;
    fn mul(self, g: Morphism) -> Morphism {
        &self * &g
    }
}

impl Mul<&Morphism> for Morphism {
    type Output = Morphism;
    fn mul(self, g: &Morphism) -> Morphism {
        &self * g
    }
}

impl Mul<Morphism> for &Morphism {
    type Output = Morphism;
    fn mul(self, g: Morphism) -> Morphism {
        self * &g
    }
}

impl Add for &Morphism {
    type Output = Morphism;
    fn add(self, g: &Morphism) -> Morphism {
        let one = self.field.one();
        Morphism::try_lincomb(vec![(one.clone(), self.clone()), (one, g.clone())])
            .unwrap_or_else(|e| panic!("ill-typed sum: {e}"))
    }
}

impl Sub for &Morphism {
    type Output = Morphism;
    fn sub(self, g: &Morphism) -> Morphism {
        let one = self.field.one();
        Morphism::try_lincomb(vec![(one.clone(), self.clone()), (-one, g.clone())])
            .unwrap_or_else(|e| panic!("ill-typed difference: {e}"))
    }
}

impl Add for Morphism {
    type Output = Morphism;
    fn add(self, g: Morphism) -> Morphism {
        &self + &g
    }
}

impl Sub for Morphism {
    type Output = Morphism;
    fn sub(self, g: Morphism) -> Morphism {
        &self - &g
    }
}

impl Neg for &Morphism {
    type Output = Morphism;
    fn neg(self) -> Morphism {
        self.scale(-self.field.one())
    }
}

impl From<LinMap> for Morphism {
    fn from(f: LinMap) -> Morphism {
        Morphism::map(f)
    }
}

/// `t![f, g, h]` is `f⊗g⊗h`.
#[macro_export]
macro_rules! t {
    ($($m:expr),+ $(,)?) => {
        $crate::morphism::Morphism::tensor_all(&[$(($m).clone()),+])
    };
}
