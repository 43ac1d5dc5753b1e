mod common;

use common::*;
use num_integer::Integer;
use num_traits::{One, Signed};
use proptest::prelude::*;

use whq::gen::{cyclic, group_algebra};
use whq::{t, Error, FieldSpec, LinMap, Morphism, SpaceSig};

fn sig(name: &str, n: usize) -> SpaceSig {
    SpaceSig::atom(name, n)
}

fn triple() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=4, 1usize..=4, 1usize..=4)
}

fn chain() -> impl Strategy<Value = (LinMap, LinMap, LinMap)> {
    (triple(), 1usize..=4).prop_flat_map(|((a, b, c), d)| {
        (
            any_map(sig("A", a), sig("B", b)),
            any_map(sig("B", b), sig("C", c)),
            any_map(sig("C", c), sig("D", d)),
        )
    })
}

fn pair_of_maps(max: usize) -> impl Strategy<Value = (LinMap, LinMap)> {
    (1..=max, 1..=max, 1..=max, 1..=max).prop_flat_map(|(a, b, c, d)| {
        (any_map(sig("A", a), sig("B", b)), any_map(sig("C", c), sig("D", d)))
    })
}

fn reduced(f: &LinMap) -> bool {
    f.triplets().iter().all(|(_, _, s)| {
        let r = big(s);
        r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_matches_dense_product((f, g, _) in chain()) {
        let gf = g.compose(&f).unwrap();
        prop_assert_eq!(dense(&gf), dense_mul(&dense(&g), &dense(&f)));
        prop_assert!(reduced(&gf));
    }

    #[test]
    fn tensor_matches_kronecker((f, g) in pair_of_maps(4)) {
        let fg = f.tensor(&g);
        prop_assert_eq!(dense(&fg), dense_kron(&dense(&f), &dense(&g)));
        prop_assert_eq!(fg.dom().dim(), f.dom().dim() * g.dom().dim());
    }

    #[test]
    fn composition_is_associative((f, g, h) in chain()) {
        let (f, g, h) = (Morphism::map(f), Morphism::map(g), Morphism::map(h));
        let left = (&(&h * &g) * &f).materialize();
        let right = (&h * &(&g * &f)).materialize();
        prop_assert!(left.equals(&right));
    }

    #[test]
    fn tensor_is_functorial(
        (f1, f2, _) in chain(),
        (g1, g2, _) in chain(),
    ) {
        let (f1, f2, g1, g2) = (Morphism::map(f1), Morphism::map(f2), Morphism::map(g1), Morphism::map(g2));
        let left = t![f2, g2] * t![f1, g1];
        let right = t![&f2 * &f1, &g2 * &g1];
        prop_assert!(left.equals(&right));
    }

    #[test]
    fn swap_is_natural((f, g) in pair_of_maps(6)) {
        let (fm, gm) = (Morphism::map(f.clone()), Morphism::map(g.clone()));
        let before = Morphism::swap(Q, f.dom(), g.dom());
        let after = Morphism::swap(Q, f.cod(), g.cod());
        prop_assert!((after * t![fm, gm]).equals(&(t![gm, fm] * before)));
    }

    #[test]
    fn lazy_and_materialized_agree((f, g, h) in chain()) {
        let lazy = Morphism::map(h) * Morphism::map(g) * Morphism::map(f);
        let dense_side = dense(&lazy.eval());
        prop_assert_eq!(dense_of(&lazy.materialize()), dense_side);
    }

    #[test]
    fn difference_with_itself_is_zero((f, _) in pair_of_maps(5)) {
        prop_assert!(f.sub(&f).unwrap().is_zero());
        let m = Morphism::map(f);
        prop_assert!((&m - &m).eval().is_zero());
    }

    #[test]
    fn lincomb_matches_dense((f, g) in (1usize..=4, 1usize..=4).prop_flat_map(|(a, b)| {
        (any_map(sig("A", a), sig("B", b)), any_map(sig("A", a), sig("B", b)))
    }), a in -5i64..=5, b in 1i64..=5) {
        let sa = Q.from_i64(a);
        let sb = Q.from_ratio(1, b).unwrap();
        let h = LinMap::lincomb(&[(sa, &f), (sb, &g)]).unwrap();
        let df = dense(&f);
        let dg = dense(&g);
        let expect: Dense = df.iter().zip(&dg).map(|(x, y)| {
            x.iter().zip(y).map(|(p, q)| p * rat(a, 1) + q * rat(1, b)).collect()
        }).collect();
        prop_assert_eq!(dense(&h), expect);
        prop_assert!(reduced(&h));
    }

    #[test]
    fn prime_field_arithmetic_matches_integers(x in 0u64..1_000_000_007, y in 1u64..1_000_000_007) {
        let p = 1_000_000_007u64;
        let f = FieldSpec::prime(p).unwrap();
        let (sx, sy) = (f.from_i64(x as i64), f.from_i64(y as i64));
        let prod = (x as u128 * y as u128 % p as u128) as u64;
        prop_assert_eq!(&sx * &sy, f.from_i64(prod as i64));
        prop_assert_eq!(&sx + &sy, f.from_i64(((x + y) % p) as i64));
        prop_assert_eq!(&sx - &sy, f.from_i64(((x + p - y) % p) as i64));
        let inv = sy.inv().unwrap();
        prop_assert!((&sy * &inv).is_one());
        prop_assert_eq!(f.from_i64(-(y as i64)), -sy);
    }

    #[test]
    fn rationals_survive_overflow(a in 1i64..=i64::MAX / 2, b in 2i64..=i64::MAX / 2) {
        let sa = Q.from_ratio(a, b).unwrap();
        let sq = &sa * &sa;
        let back = &sq * &sa.inv().unwrap();
        prop_assert_eq!(back.clone(), sa.clone());
        prop_assert_eq!(big(&sq), rat(a, b) * rat(a, b));
    }
}

#[test]
fn unit_tensor_unit_on_c2() {
    let w = group_algebra(Q, &cyclic(2)).unwrap();
    let ee = t![w.eta, w.eta].eval();
    assert_eq!(ee.dom(), &SpaceSig::unit());
    assert_eq!(ee.cod(), &w.space.power(2));
    assert_eq!(ee.triplets(), vec![(0, 0, Q.one())]);
}

#[test]
fn swap_is_an_involution() {
    for m in 1..=8 {
        for n in 1..=8 {
            let (a, b) = (sig("M", m), sig("N", n));
            let c = Morphism::swap(Q, &a, &b);
            let back = Morphism::swap(Q, &b, &a);
            assert!((&back * &c).equals(&Morphism::id(Q, &a.tensor(&b))), "{m}x{n}");
            let map = c.eval();
            for i in 0..m {
                for j in 0..n {
                    assert!(map.entry(j * m + i, i * n + j).is_one());
                }
            }
            assert_eq!(map.nnz(), m * n);
        }
    }
}

#[test]
fn mismatched_composition_is_an_error() {
    let f = Morphism::zero(Q, &sig("A", 2), &sig("B", 3));
    let g = Morphism::zero(Q, &sig("A", 3), &sig("C", 1));
    match g.try_compose(&f) {
        Err(Error::SignatureMismatch { left, right, .. }) => {
            assert_eq!(left, sig("A", 3));
            assert_eq!(right, sig("B", 3));
        }
        other => panic!("expected a signature mismatch, got {other:?}"),
    }
}

#[test]
fn same_dimension_different_names_do_not_compose() {
    let f = Morphism::id(Q, &sig("A", 2));
    let g = Morphism::id(Q, &sig("B", 2));
    assert!(g.try_compose(&f).is_err());
}

#[test]
fn unit_space_is_neutral_for_tensor() {
    let a = sig("A", 3);
    assert_eq!(SpaceSig::unit().tensor(&a), a);
    assert_eq!(a.tensor(&SpaceSig::unit()), a);
    let f = Morphism::id(Q, &a);
    let k = Morphism::id(Q, &SpaceSig::unit());
    assert!(t![k, f].equals(&f));
}

#[test]
fn flatten_and_unflatten_are_inverse() {
    let s = SpaceSig::from_factors(vec![("A".into(), 2), ("B".into(), 3), ("C".into(), 4)]);
    for idx in 0..s.dim() {
        let multi = s.unflatten(idx);
        assert_eq!(s.flatten(&multi), idx);
    }
    assert_eq!(s.unflatten(1 * 12 + 2 * 4 + 3), vec![1, 2, 3]);
}

#[test]
fn prime_field_rejects_composites() {
    assert!(FieldSpec::prime(12).is_err());
    assert!(FieldSpec::prime(13).is_ok());
    let f = FieldSpec::prime(7).unwrap();
    assert_eq!(f.from_ratio(1, 3).unwrap(), f.from_i64(5));
    assert!(f.from_ratio(1, 7).is_err());
}

#[test]
fn scalars_parse_both_minus_signs() {
    assert_eq!(Q.parse_scalar("-3/6").unwrap(), Q.from_ratio(-1, 2).unwrap());
    assert_eq!(Q.parse_scalar("\u{2212}3/6").unwrap(), Q.from_ratio(-1, 2).unwrap());
    assert!(Q.parse_scalar("1/0").is_err());
    assert_eq!(Q.from_ratio(-4, 6).unwrap().to_string(), "-2/3");
}
