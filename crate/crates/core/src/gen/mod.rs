//! Generators for group, loop, groupoid and loopoid algebras.
//!
//! All of them are spanned by group-like basis elements: `δ(g) = g⊗g`,
//! `ε(g) = 1`, `λ(g) = g⁻¹`, and the product is a partial table.

pub mod cayley;
pub mod groupoid;

pub use cayley::{chein_double, cyclic, non_ip_loop, symmetric3, CayleyTable, IpReport};
pub use groupoid::GroupoidPresentation;

use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::morphism::Morphism;
use crate::scalar::FieldSpec;
use crate::space::SpaceSig;
use crate::whq::Whq;

/// Structure maps of the span of a set with a partial product.
///
/// `product[a][b]` is the basis index of `a·b` or `None` for zero, `units` are
/// the basis elements summed to form the unit and `inverse` is the antipode.
pub fn partial_product_algebra(
    field: FieldSpec,
    name: &str,
    product: &[Vec<Option<usize>>],
    units: &[usize],
    inverse: &[usize],
) -> Whq {
    let n = product.len();
    let h = SpaceSig::atom(name, n);
    let k = SpaceSig::unit();
    let one = field.one();
    let mut units = units.to_vec();
    units.sort_unstable();
    let eta = LinMap::from_columns(
        field,
        k.clone(),
        h.clone(),
        vec![units.iter().map(|&u| (u, one.clone())).collect()],
    );
    let mu_cols = (0..n * n)
        .map(|j| match product[j / n][j % n] {
            Some(r) => vec![(r, one.clone())],
            None => vec![],
        })
        .collect();
    let mu = LinMap::from_columns(field, h.power(2), h.clone(), mu_cols);
    let eps = LinMap::from_columns(field, h.clone(), k, vec![vec![(0, one.clone())]; n]);
    let delta = LinMap::from_columns(
        field,
        h.clone(),
        h.power(2),
        (0..n).map(|g| vec![(g * n + g, one.clone())]).collect(),
    );
    let lambda = LinMap::from_columns(
        field,
        h.clone(),
        h.clone(),
        inverse.iter().map(|&g| vec![(g, one.clone())]).collect(),
    );
    Whq::new(
        h,
        Morphism::map(eta),
        Morphism::map(mu),
        Morphism::map(eps),
        Morphism::map(delta),
        Morphism::map(lambda),
    )
    .expect("generated maps are well typed")
}

/// Runs the axiom checker on a generated structure.
fn certified(mut w: Whq) -> Result<Whq> {
    let rep = w.validate()?;
    match rep.first_failure() {
        None => Ok(w),
        Some(c) => Err(Error::AxiomVerificationFailed(c.name.clone())),
    }
}

/// Algebra of an I.P. loop: a Hopf quasigroup, a Hopf algebra when associative.
pub fn loop_algebra(field: FieldSpec, t: &CayleyTable) -> Result<Whq> {
    let inv = t.inverses()?;
    let n = t.order();
    let product: Vec<Vec<Option<usize>>> = (0..n)
        .map(|a| (0..n).map(|b| Some(t.mul(a, b))).collect())
        .collect();
    certified(partial_product_algebra(
        field,
        "H",
        &product,
        &[t.identity()],
        &inv,
    ))
}

/// Group algebra; the table must be associative.
pub fn group_algebra(field: FieldSpec, t: &CayleyTable) -> Result<Whq> {
    if let Some((a, b, c)) = t.associator_witness() {
        return Err(Error::NotALoop(format!(
            "group algebra needs an associative table; ({a},{b},{c}) fails"
        )));
    }
    loop_algebra(field, t)
}

/// Groupoid algebra: composition when composable, zero otherwise.
pub fn groupoid_algebra(field: FieldSpec, p: &GroupoidPresentation) -> Result<Whq> {
    p.validate()?;
    certified(partial_product_algebra(
        field,
        "H",
        &p.compose,
        &p.identities,
        &p.inverses,
    ))
}

/// Basis index of `(x, a, y)` in the loopoid algebra over `n` objects and a loop of order `m`.
pub fn loopoid_index(n: usize, m: usize, x: usize, a: usize, y: usize) -> usize {
    (x * m + a) * n + y
}

/// Span of triples `(x, a, y)` with `(x,a,y)(y,b,z) = (x,ab,z)` and zero when
/// the middle objects differ.
pub fn loopoid_algebra(field: FieldSpec, objects: usize, t: &CayleyTable) -> Result<Whq> {
    if objects == 0 {
        return Err(Error::InvalidGroupoid("loopoid needs at least one object".into()));
    }
    let inv = t.inverses()?;
    let (n, m) = (objects, t.order());
    let idx = |x, a, y| loopoid_index(n, m, x, a, y);
    let dim = n * n * m;
    let mut product = vec![vec![None; dim]; dim];
    for x in 0..n {
        for a in 0..m {
            for y in 0..n {
                for b in 0..m {
                    for z in 0..n {
                        product[idx(x, a, y)][idx(y, b, z)] = Some(idx(x, t.mul(a, b), z));
                    }
                }
            }
        }
    }
    let units: Vec<usize> = (0..n).map(|x| idx(x, t.identity(), x)).collect();
    let mut inverse = vec![0; dim];
    for x in 0..n {
        for a in 0..m {
            for y in 0..n {
                inverse[idx(x, a, y)] = idx(y, inv[a], x);
            }
        }
    }
    certified(partial_product_algebra(field, "H", &product, &units, &inverse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::whq::Classification;

    #[test]
    fn small_families_classify() {
        let q = FieldSpec::Rationals;
        let c2 = loop_algebra(q, &cyclic(2)).unwrap();
        assert_eq!(c2.classify().unwrap().kind, Classification::HopfAlgebra);
        let pair = groupoid_algebra(q, &GroupoidPresentation::pair(2)).unwrap();
        assert_eq!(pair.classify().unwrap().kind, Classification::WeakHopfAlgebra);
        let lp = loopoid_algebra(q, 2, &cyclic(2)).unwrap();
        assert_eq!(lp.dim(), 8);
        assert_eq!(lp.classify().unwrap().kind, Classification::WeakHopfAlgebra);
    }
}
