mod common;

use common::*;
use proptest::prelude::*;

use whq::factorization::{
    coequalizer, equalizer, factor_through_coequalizer, factor_through_coequalizer_with,
    factor_through_equalizer, invert, split_idempotent,
};
use whq::{t, Error, LinMap, Morphism, SpaceSig};

fn sig(name: &str, n: usize) -> SpaceSig {
    SpaceSig::atom(name, n)
}

fn m(map: LinMap) -> Morphism {
    Morphism::map(map)
}

/// `P∘diag(mask)∘P⁻¹`.
fn idempotent(n: usize) -> impl Strategy<Value = (Morphism, usize)> {
    (prop::collection::vec(any::<bool>(), n), steps(n, 6)).prop_map(move |(mask, st)| {
        let s = sig("V", n);
        let p = invertible(&s, &st);
        let mut d = dense_identity(n);
        for (k, keep) in mask.iter().enumerate() {
            if !keep {
                d[k][k] = rat(0, 1);
            }
        }
        let diag = m(linmap(s.clone(), s.clone(), &d));
        let e = (m(p.clone()) * diag * invert(&m(p), "P").unwrap()).materialize();
        (e, mask.iter().filter(|b| **b).count())
    })
}

fn parallel_pair() -> impl Strategy<Value = (Morphism, Morphism)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(a, b)| {
        (any_map(sig("A", a), sig("B", b)), any_map(sig("A", a), sig("B", b)))
            .prop_map(|(f, g)| (m(f), m(g)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_idempotent_laws((e, rank) in (1usize..=6).prop_flat_map(idempotent)) {
        let sp = split_idempotent(&e, "E").unwrap();
        prop_assert_eq!(sp.image_dim, rank);
        prop_assert_eq!(sp.image_dim, dense_rank(&dense_of(&e)));
        prop_assert!((&sp.i * &sp.p).equals(&e));
        prop_assert!((&sp.p * &sp.i).equals(&Morphism::id(Q, &sp.object)));
        prop_assert!((&sp.i * &sp.p * &sp.i).equals(&sp.i));
        prop_assert!((&sp.p * &sp.i * &sp.p).equals(&sp.p));
    }

    #[test]
    fn equalizer_rank_nullity((f, g) in parallel_pair()) {
        let eq = equalizer(&f, &g, "E").unwrap();
        let r = dense_rank(&dense_sub(&dense_of(&f), &dense_of(&g)));
        prop_assert_eq!(eq.object_dim(), f.dom().dim() - r);
        prop_assert!((&f * &eq.arrow).equals(&(&g * &eq.arrow)));
        prop_assert_eq!(dense_rank(&dense_of(&eq.arrow)), eq.object_dim());
    }

    #[test]
    fn coequalizer_rank_nullity((f, g) in parallel_pair()) {
        let q = coequalizer(&f, &g, "C").unwrap();
        let r = dense_rank(&dense_sub(&dense_of(&f), &dense_of(&g)));
        prop_assert_eq!(q.object_dim(), f.cod().dim() - r);
        prop_assert!((&q.arrow * &f).equals(&(&q.arrow * &g)));
        prop_assert_eq!(dense_rank(&dense_of(&q.arrow)), q.object_dim());
    }

    #[test]
    fn equalizer_universal_property(
        (f, g) in parallel_pair(),
        x in 1usize..=3,
        seed in entries(25 * 3),
    ) {
        let eq = equalizer(&f, &g, "E").unwrap();
        let k = eq.object_dim();
        let s = from_entries(sig("X", x), eq.object.clone(), &seed[..x * k]);
        let t = (&eq.arrow * &m(s.clone())).materialize();
        let u = factor_through_equalizer(&eq, &t).unwrap();
        // the arrow is injective, so the factorization is the map we started from
        prop_assert!(u.equals(&m(s)));
    }

    #[test]
    fn coequalizer_universal_property(
        (f, g) in parallel_pair(),
        x in 1usize..=3,
        seed in entries(25 * 3),
        alt in any::<bool>(),
    ) {
        let q = coequalizer(&f, &g, "C").unwrap();
        let k = q.object_dim();
        let s = from_entries(q.object.clone(), sig("X", x), &seed[..x * k]);
        let t = (&m(s.clone()) * &q.arrow).materialize();
        let u = if alt {
            factor_through_coequalizer_with(&q, &t, &q.alternate_section()).unwrap()
        } else {
            factor_through_coequalizer(&q, &t).unwrap()
        };
        prop_assert!(u.equals(&m(s)));
    }

    #[test]
    fn non_equalizing_maps_are_rejected((f, g) in parallel_pair()) {
        prop_assume!(!f.equals(&g));
        let eq = equalizer(&f, &g, "E").unwrap();
        let id = Morphism::id(Q, f.dom());
        let is_dne = matches!(factor_through_equalizer(&eq, &id), Err(Error::DoesNotEqualize { .. }));
        prop_assert!(is_dne);
        let q = coequalizer(&f, &g, "C").unwrap();
        let id = Morphism::id(Q, f.cod());
        let is_dnc = matches!(factor_through_coequalizer(&q, &id), Err(Error::DoesNotCoequalize { .. }));
        prop_assert!(is_dnc);
    }

    #[test]
    fn inverse_is_a_two_sided_inverse(st in (1usize..=6).prop_flat_map(|n| steps(n, 8).prop_map(move |s| (n, s)))) {
        let (n, st) = st;
        let s = sig("V", n);
        let p = invertible(&s, &st);
        let pi = invert(&m(p.clone()), "P").unwrap();
        prop_assert_eq!(dense_mul(&dense(&p), &dense_of(&pi)), dense_identity(n));
        prop_assert_eq!(dense_mul(&dense_of(&pi), &dense(&p)), dense_identity(n));
    }

    #[test]
    fn singular_maps_are_not_invertible(f in (1usize..=5).prop_flat_map(|n| any_map(sig("V", n), sig("V", n)))) {
        let r = dense_rank(&dense(&f));
        let n = f.ncols();
        match invert(&m(f), "f") {
            Ok(_) => prop_assert_eq!(r, n),
            Err(Error::NotInvertible { rank, .. }) => {
                prop_assert!(r < n);
                prop_assert_eq!(rank, r);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

fn small(dim: usize, entries: &[(usize, usize, (i64, i64))]) -> Morphism {
    let s = sig("Y", dim);
    let trip = entries
        .iter()
        .map(|&(r, c, (n, d))| (r, c, Q.from_ratio(n, d).unwrap()))
        .collect();
    m(LinMap::from_triplets(Q, s.clone(), s, trip).unwrap())
}

#[test]
fn diagonal_projection_splits_to_a_line() {
    let e = small(2, &[(0, 0, (1, 1))]);
    let sp = split_idempotent(&e, "E").unwrap();
    assert_eq!(sp.image_dim, 1);
    assert_eq!(sp.object, sig("E", 1));
}

#[test]
fn averaging_matrix_splits_to_a_line() {
    let half = (1, 2);
    let e = small(2, &[(0, 0, half), (0, 1, half), (1, 0, half), (1, 1, half)]);
    let sp = split_idempotent(&e, "E").unwrap();
    assert_eq!(sp.image_dim, 1);
    assert!((&sp.i * &sp.p).equals(&e));
}

#[test]
fn non_idempotent_is_rejected() {
    let e = small(2, &[(0, 0, (2, 1))]);
    assert!(matches!(
        split_idempotent(&e, "E"),
        Err(Error::NotIdempotent { column: 0, .. })
    ));
}

#[test]
fn degenerate_pairs() {
    let s = sig("Y", 3);
    let id = Morphism::id(Q, &s);
    let zero = Morphism::zero(Q, &s, &s);
    assert_eq!(equalizer(&id, &id, "E").unwrap().object_dim(), 3);
    assert_eq!(coequalizer(&id, &id, "C").unwrap().object_dim(), 3);
    let eq = equalizer(&id, &zero, "E").unwrap();
    assert_eq!(eq.object_dim(), 0);
    assert_eq!(coequalizer(&id, &zero, "C").unwrap().object_dim(), 0);
    // the zero-dimensional equalizer still has a working universal property
    let u = factor_through_equalizer(&eq, &Morphism::zero(Q, &sig("X", 2), &s)).unwrap();
    assert_eq!(u.cod().dim(), 0);
}

#[test]
fn tensoring_a_coequalizer_keeps_it_a_coequalizer() {
    let f = small(3, &[(0, 0, (1, 1)), (1, 2, (1, 1))]);
    let g = small(3, &[(0, 1, (1, 1))]);
    let q = coequalizer(&f, &g, "C").unwrap();
    let x = sig("X", 2);
    let qx = q.tensor_left(&x);
    let t = t![Morphism::id(Q, &x), f];
    let fresh = coequalizer(&t, &t![Morphism::id(Q, &x), g], "D").unwrap();
    assert_eq!(qx.object_dim(), fresh.object_dim());
    assert!((&qx.arrow * &qx.f).equals(&(&qx.arrow * &qx.g)));
}

#[test]
fn target_map_pair_on_the_pair_groupoid() {
    let w = pair3();
    let h = w.id();
    let pl = w.projections().pi_l;
    let eq = equalizer(&w.delta, &(t![h, pl] * &w.delta), "E").unwrap();
    let mu_pl = &w.mu * t![h, pl];
    let q = coequalizer(&w.mu, &mu_pl, "C").unwrap();
    let ip = dense_kron(&dense_identity(9), &dense(&pl.eval()));
    let delta = dense_of(&w.delta);
    let mu = dense_of(&w.mu);
    let eq_oracle = 9 - dense_rank(&dense_sub(&delta, &dense_mul(&ip, &delta)));
    let co_oracle = 9 - dense_rank(&dense_sub(&mu, &dense_mul(&mu, &ip)));
    assert_eq!(eq.object_dim(), eq_oracle);
    assert_eq!(q.object_dim(), co_oracle);
    assert_eq!((eq_oracle, co_oracle), (3, 3));
}
