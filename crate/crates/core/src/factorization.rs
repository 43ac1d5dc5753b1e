//! Idempotent splitting, equalizers, coequalizers and factorization through them.
//!
//! Bases for images and kernels are reduced-echelon bases, so results are
//! reproducible. Every factorization checks its precondition and re-verifies
//! the defining equation of its output.

use crate::error::{Error, Result};
use crate::linalg::{self, column_echelon, echelon, kernel_basis};
use crate::linmap::{LinMap, SparseVec};
use crate::morphism::Morphism;
use crate::space::SpaceSig;

/// `e = i∘p` with `p∘i = id`.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub image_dim: usize,
    pub object: SpaceSig,
    pub i: Morphism,
    pub p: Morphism,
}

pub fn split_idempotent(e: &Morphism, name: &str) -> Result<SplitPair> {
    if e.dom() != e.cod() {
        return Err(Error::SignatureMismatch {
            context: format!("splitting {name}"),
            left: e.dom().clone(),
            right: e.cod().clone(),
        });
    }
    let em = e.eval();
    let me = Morphism::map(em.clone());
    if let Some(d) = (&me * &me).first_difference(&me)? {
        return Err(Error::NotIdempotent {
            what: name.to_string(),
            column: d.column,
        });
    }
    let field = em.field();
    let ech = column_echelon(&em);
    let object = SpaceSig::atom(name, ech.rank());
    let y = em.cod().clone();
    let i = LinMap::from_columns(field, object.clone(), y.clone(), ech.rows.clone());
    // coordinates at the pivots recover a vector of the image
    let mut proj_cols: Vec<SparseVec> = vec![Vec::new(); y.dim()];
    for (k, &p) in ech.pivots.iter().enumerate() {
        proj_cols[p].push((k, field.one()));
    }
    let proj = LinMap::from_columns(field, y.clone(), object.clone(), proj_cols);
    let p = proj.compose(&em)?;
    let split = SplitPair {
        image_dim: ech.rank(),
        object,
        i: Morphism::map(i),
        p: Morphism::map(p),
    };
    verify(&(&split.p * &split.i), &Morphism::id(field, &split.object), "p∘i = id")?;
    verify(&(&split.i * &split.p), &me, "i∘p = e")?;
    Ok(split)
}

fn verify(lhs: &Morphism, rhs: &Morphism, what: &str) -> Result<()> {
    match lhs.first_difference(rhs)? {
        None => Ok(()),
        Some(d) => Err(Error::FactorizationFailure(format!(
            "{what} fails at column {}",
            d.column
        ))),
    }
}

fn check_pair(f: &Morphism, g: &Morphism, what: &str) -> Result<()> {
    if f.dom() != g.dom() {
        return Err(Error::SignatureMismatch {
            context: what.to_string(),
            left: f.dom().clone(),
            right: g.dom().clone(),
        });
    }
    if f.cod() != g.cod() {
        return Err(Error::SignatureMismatch {
            context: what.to_string(),
            left: f.cod().clone(),
            right: g.cod().clone(),
        });
    }
    Ok(())
}

/// Injection of `ker(f−g)` plus a left inverse of it.
#[derive(Clone, Debug)]
pub struct EqualizerData {
    pub object: SpaceSig,
    pub arrow: Morphism,
    pub retraction: Morphism,
    pub f: Morphism,
    pub g: Morphism,
}

impl EqualizerData {
    pub fn object_dim(&self) -> usize {
        self.object.dim()
    }
}

pub fn equalizer(f: &Morphism, g: &Morphism, name: &str) -> Result<EqualizerData> {
    check_pair(f, g, "equalizer")?;
    let field = f.field();
    let d = (f - g).eval();
    let n = d.ncols();
    let ech = echelon(field, d.transpose().columns());
    let (free, ker) = kernel_basis(field, &ech, n);
    let object = SpaceSig::atom(name, free.len());
    let arrow = LinMap::from_columns(field, object.clone(), f.dom().clone(), ker);
    let mut ret_cols: Vec<SparseVec> = vec![Vec::new(); n];
    for (k, &j) in free.iter().enumerate() {
        ret_cols[j].push((k, field.one()));
    }
    let retraction = LinMap::from_columns(field, f.dom().clone(), object.clone(), ret_cols);
    let eq = EqualizerData {
        object,
        arrow: Morphism::map(arrow),
        retraction: Morphism::map(retraction),
        f: f.clone(),
        g: g.clone(),
    };
    verify(&(f * &eq.arrow), &(g * &eq.arrow), "f∘i = g∘i")?;
    verify(
        &(&eq.retraction * &eq.arrow),
        &Morphism::id(field, &eq.object),
        "r∘i = id",
    )?;
    Ok(eq)
}

/// The unique `u` with `arrow∘u = t`.
pub fn factor_through_equalizer(eq: &EqualizerData, t: &Morphism) -> Result<Morphism> {
    if let Some(d) = (&eq.f * t).first_difference(&(&eq.g * t))? {
        return Err(Error::DoesNotEqualize { column: d.column });
    }
    let u = (&eq.retraction * t).materialize();
    verify(&(&eq.arrow * &u), t, "i∘u = t")?;
    Ok(u)
}

/// Projection onto `coker(f−g)` plus a right inverse of it.
#[derive(Clone, Debug)]
pub struct CoequalizerData {
    pub object: SpaceSig,
    pub arrow: Morphism,
    pub section: Morphism,
    pub f: Morphism,
    pub g: Morphism,
}

impl CoequalizerData {
    pub fn object_dim(&self) -> usize {
        self.object.dim()
    }

    /// `X⊗q` as the coequalizer of `X⊗f` and `X⊗g`.
    pub fn tensor_left(&self, x: &SpaceSig) -> CoequalizerData {
        let field = self.arrow.field();
        let id = Morphism::id(field, x);
        CoequalizerData {
            object: x.tensor(&self.object),
            arrow: id.tensor(&self.arrow),
            section: id.tensor(&self.section),
            f: id.tensor(&self.f),
            g: id.tensor(&self.g),
        }
    }

    /// Another right inverse of the arrow: the section shifted by `(f−g)∘x`,
    /// where `x` sends every basis vector to the first basis vector of the
    /// relation space.
    pub fn alternate_section(&self) -> Morphism {
        let field = self.arrow.field();
        let rel = self.f.dom().clone();
        if rel.dim() == 0 {
            return self.section.clone();
        }
        let cols = vec![vec![(0, field.one())]; self.object.dim()];
        let x = Morphism::map(LinMap::from_columns(field, self.object.clone(), rel, cols));
        (&self.section + &((&self.f - &self.g) * x)).materialize()
    }
}

pub fn coequalizer(f: &Morphism, g: &Morphism, name: &str) -> Result<CoequalizerData> {
    check_pair(f, g, "coequalizer")?;
    let field = f.field();
    let d = (f - g).eval();
    let m = d.nrows();
    let ech = column_echelon(&d);
    let mut is_pivot = vec![false; m];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let nonpivot: Vec<usize> = (0..m).filter(|&r| !is_pivot[r]).collect();
    let mut pos = vec![usize::MAX; m];
    for (k, &r) in nonpivot.iter().enumerate() {
        pos[r] = k;
    }
    let object = SpaceSig::atom(name, nonpivot.len());
    // q kills every echelon vector: q(e_p) = -Σ_n b_p[n] q(e_n)
    let mut cols: Vec<SparseVec> = vec![Vec::new(); m];
    for &r in &nonpivot {
        cols[r] = vec![(pos[r], field.one())];
    }
    for (p, row) in ech.pivots.iter().zip(&ech.rows) {
        cols[*p] = row.iter().skip(1).map(|(n, s)| (pos[*n], -s)).collect();
    }
    let arrow = LinMap::from_columns(field, f.cod().clone(), object.clone(), cols);
    let sec_cols = nonpivot.iter().map(|&r| vec![(r, field.one())]).collect();
    let section = LinMap::from_columns(field, object.clone(), f.cod().clone(), sec_cols);
    let q = CoequalizerData {
        object,
        arrow: Morphism::map(arrow),
        section: Morphism::map(section),
        f: f.clone(),
        g: g.clone(),
    };
    verify(&(&q.arrow * f), &(&q.arrow * g), "q∘f = q∘g")?;
    verify(
        &(&q.arrow * &q.section),
        &Morphism::id(field, &q.object),
        "q∘s = id",
    )?;
    Ok(q)
}

/// The unique `u` with `u∘arrow = t`.
pub fn factor_through_coequalizer(q: &CoequalizerData, t: &Morphism) -> Result<Morphism> {
    factor_through_coequalizer_with(q, t, &q.section)
}

/// As `factor_through_coequalizer`, using a caller-supplied right inverse of the arrow.
pub fn factor_through_coequalizer_with(
    q: &CoequalizerData,
    t: &Morphism,
    section: &Morphism,
) -> Result<Morphism> {
    if let Some(d) = (t * &q.f).first_difference(&(t * &q.g))? {
        return Err(Error::DoesNotCoequalize { column: d.column });
    }
    verify(
        &(&q.arrow * section),
        &Morphism::id(q.arrow.field(), &q.object),
        "supplied section is a right inverse",
    )?;
    let u = (t * section).materialize();
    verify(&(&u * &q.arrow), t, "u∘q = t")?;
    Ok(u)
}

pub fn invert(f: &Morphism, what: &str) -> Result<Morphism> {
    Ok(Morphism::map(linalg::invert(&f.eval(), what)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn m(dim: usize, entries: &[(usize, usize, (i64, i64))]) -> Morphism {
        let s = SpaceSig::atom("Y", dim);
        let t = entries
            .iter()
            .map(|(r, c, (n, d))| (*r, *c, q().from_ratio(*n, *d).unwrap()))
            .collect();
        Morphism::map(LinMap::from_triplets(q(), s.clone(), s, t).unwrap())
    }

    #[test]
    fn split_of_identity_and_projection() {
        let id = Morphism::id(q(), &SpaceSig::atom("Y", 3));
        let s = split_idempotent(&id, "Z").unwrap();
        assert_eq!(s.image_dim, 3);
        assert!(s.i.eval().retype(s.i.cod().clone(), s.i.cod().clone()).is_identity());
        let e = m(2, &[(0, 0, (1, 1))]);
        let s = split_idempotent(&e, "Z").unwrap();
        assert_eq!(s.image_dim, 1);
        assert_eq!(s.i.eval().triplets(), vec![(0, 0, q().one())]);
    }

    #[test]
    fn non_idempotent_is_rejected() {
        let e = m(2, &[(0, 0, (2, 1))]);
        assert!(matches!(
            split_idempotent(&e, "Z"),
            Err(Error::NotIdempotent { column: 0, .. })
        ));
    }

    #[test]
    fn equalizer_and_coequalizer_extremes() {
        let y = SpaceSig::atom("Y", 2);
        let id = Morphism::id(q(), &y);
        let zero = Morphism::zero(q(), &y, &y);
        assert_eq!(equalizer(&id, &id, "E").unwrap().object_dim(), 2);
        assert_eq!(equalizer(&id, &zero, "E").unwrap().object_dim(), 0);
        assert_eq!(coequalizer(&id, &id, "C").unwrap().object_dim(), 2);
        assert_eq!(coequalizer(&id, &zero, "C").unwrap().object_dim(), 0);
    }

    #[test]
    fn factorization_requires_precondition() {
        let y = SpaceSig::atom("Y", 2);
        let id = Morphism::id(q(), &y);
        let swap = m(2, &[(1, 0, (1, 1)), (0, 1, (1, 1))]);
        let c = coequalizer(&id, &swap, "C").unwrap();
        assert_eq!(c.object_dim(), 1);
        let u = factor_through_coequalizer(&c, &c.arrow).unwrap();
        assert!(u.eval().retype(c.object.clone(), c.object.clone()).is_identity());
        assert!(matches!(
            factor_through_coequalizer(&c, &id),
            Err(Error::DoesNotCoequalize { column: 0 })
        ));
        let e = equalizer(&id, &swap, "E").unwrap();
        assert!(matches!(
            factor_through_equalizer(&e, &id),
            Err(Error::DoesNotEqualize { column: 0 })
        ));
    }
}
