mod common;

use common::*;
use proptest::prelude::*;

use whq::cleft::*;
use whq::galois::*;
use whq::gen::{cyclic, group_algebra};
use whq::{t, Error, Morphism, Whq};

fn extension(w: &Whq) -> Extension {
    let an = analyze(ComoduleMagma::regular(w)).unwrap();
    assert!(an.report.passed(), "{:?}", an.report.first_failure());
    an.extension.unwrap()
}

fn with_h_inv(cm: &ComoduleMagma, h: Morphism, h_inv: Morphism) -> CleftWitness {
    CleftWitness::new(cm, h.materialize(), h_inv.materialize()).unwrap()
}

#[test]
fn identity_and_antipode_cleave_the_four_structures() {
    for (name, w) in four() {
        let e = extension(&w);
        let cw = CleftWitness::regular(&e.cm).unwrap();
        let rep = check_cleft(&e.cm, &cw).unwrap();
        assert!(rep.passed(), "{name}: {:?}", rep.first_failure());
        let (props, p_a) = cleft_properties(&e.cm, &e.coinv, &cw).unwrap();
        assert!(props.passed(), "{name}: {:?}", props.first_failure());
        let p_a = p_a.unwrap();
        assert!((&e.coinv.i * &p_a).equals(&q_map(&e.cm, &cw)), "{name}");
        assert_eq!(check_c2_equivalence(&e.cm, &cw).unwrap(), (true, true), "{name}");
        assert_eq!(check_c4_equivalence(&e.cm, &cw).unwrap(), (true, true), "{name}");
    }
}

#[test]
fn group_algebra_of_c2_is_cleft() {
    let w = group_algebra(Q, &cyclic(2)).unwrap();
    let e = extension(&w);
    let cw = CleftWitness::regular(&e.cm).unwrap();
    assert!(check_cleft(&e.cm, &cw).unwrap().passed());
    assert!(cleft_properties(&e.cm, &e.coinv, &cw).unwrap().0.passed());
    assert_eq!(check_c2_equivalence(&e.cm, &cw).unwrap(), (true, true));
    assert_eq!(check_c4_equivalence(&e.cm, &cw).unwrap(), (true, true));
}

#[test]
fn hopf_quasigroup_form_of_the_cleft_conditions() {
    let w = chein_s3();
    let e = extension(&w);
    let cw = CleftWitness::regular(&e.cm).unwrap();
    let rep = check_cleft_hopf_quasigroup(&e.cm, &cw).unwrap();
    assert!(rep.passed(), "{:?}", rep.first_failure());
}

#[test]
fn zero_inverse_fails_the_first_condition() {
    let e = extension(&s3());
    let zero = Morphism::zero(Q, &e.cm.h.space, &e.cm.a.space);
    let cw = with_h_inv(&e.cm, e.cm.idh(), zero);
    let rep = check_cleft(&e.cm, &cw).unwrap();
    let c1 = rep.get("c1").unwrap();
    assert!(!c1.passed);
    assert!(c1.counterexample.is_some());
    assert!(rep.get("comodule-morphism").unwrap().passed);
}

#[test]
fn cleaving_map_through_the_target_fails_property_iv() {
    for w in [pair3(), loopoid48()] {
        let e = extension(&w);
        let pl = e.cm.projections().pi_l.clone();
        let cw = with_h_inv(&e.cm, &e.cm.idh() * &pl, w.lambda.clone());
        let (props, _) = cleft_properties(&e.cm, &e.coinv, &cw).unwrap();
        let iv: Vec<_> = props.checks.iter().filter(|c| c.name.starts_with("iv")).collect();
        assert!(iv.iter().any(|c| !c.passed && c.counterexample.is_some()));
    }
}

#[test]
fn identity_as_inverse_breaks_both_forms_of_c2() {
    for w in [s3(), chein_s3()] {
        let e = extension(&w);
        let cw = with_h_inv(&e.cm, e.cm.idh(), e.cm.idh());
        assert_eq!(check_c2_equivalence(&e.cm, &cw).unwrap(), (false, false));
    }
}

#[test]
fn round_trips_on_the_four_structures() {
    for (name, w) in four() {
        let e = extension(&w);
        let cw = CleftWitness::regular(&e.cm).unwrap();
        let rt = round_trip(&e, Start::Cleft(cw)).unwrap();
        assert!(rt.round_trip, "{name}: {:?}", rt.report.first_failure());
        assert!(rt.report.get("galois-from-cleft.matches-exact-inverse").unwrap().passed);
        assert!(rt.report.checks.iter().any(|c| c.name.starts_with("cleft-from-galois.cleft.")));

        let nb = regular_normal_basis(&e.cm, &e.coinv).unwrap();
        let rt = round_trip(&e, Start::Galois(nb.clone(), None)).unwrap();
        assert!(rt.round_trip, "{name}: {:?}", rt.report.first_failure());
        let lift = regular_gamma_inverse_lift(&w);
        let gi = gamma_inverse_from_lift(&e.toc, &e.nabla, &lift).unwrap();
        let rt = round_trip(&e, Start::Galois(nb, Some(gi))).unwrap();
        assert!(rt.round_trip, "{name}: {:?}", rt.report.first_failure());
        assert!(rt.report.get("galois-from-cleft.matches-start-inverse").unwrap().passed);
    }
}

#[test]
fn constructions_reproduce_the_known_witnesses() {
    for (name, w) in small() {
        let e = extension(&w);
        let cw = CleftWitness::regular(&e.cm).unwrap();
        let forward = galois_from_cleft(&e, &cw).unwrap();
        assert!(forward.report.passed(), "{name}: {:?}", forward.report.first_failure());
        let back = cleft_from_galois(&e, &forward.galois, &forward.normal_basis).unwrap();
        assert!(back.report.passed(), "{name}: {:?}", back.report.first_failure());
        // the cleaving map is recovered up to the unit of the coinvariants,
        // which for (H, δ_H) is the identity itself
        assert!(back.cleft.h.equals(&cw.h), "{name}: h");
        assert!(back.cleft.h_inv.equals(&cw.h_inv), "{name}: h_inv");
    }
}

#[test]
fn cleft_from_galois_needs_almost_lineality() {
    let w = pair3();
    let e = extension(&w);
    let h = w.id();
    let pl = w.projections().pi_l;
    let lift = regular_gamma_inverse_lift(&w) * t![pl, h];
    let bad = GaloisWitness {
        gamma: e.gamma.gamma.clone(),
        gamma_inv: gamma_inverse_from_lift(&e.toc, &e.nabla, &lift).unwrap(),
    };
    let nb = regular_normal_basis(&e.cm, &e.coinv).unwrap();
    assert!(matches!(
        cleft_from_galois(&e, &bad, &nb),
        Err(Error::AlmostLinealityRequired)
    ));
    let rt = round_trip(&e, Start::Galois(nb, Some(bad.gamma_inv))).unwrap();
    assert!(!rt.round_trip);
    assert!(!rt.report.get("start.almostlineal").unwrap().passed);
}

#[test]
fn hopf_quasigroup_corollary() {
    for w in [chein_s3(), s3(), group_algebra(Q, &cyclic(2)).unwrap()] {
        let e = extension(&w);
        let cw = CleftWitness::regular(&e.cm).unwrap();
        let rep = corollary_hq(&e, &cw).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        for c in ["nabla-identity", "omega-identity", "b-unit", "h-conv-h-inv", "h-inv-conv-h"] {
            assert!(rep.get(c).unwrap().passed, "{c}");
        }
    }
}

#[test]
fn corollary_rejects_weak_structures() {
    for w in [pair3(), loopoid48()] {
        let e = extension(&w);
        let cw = CleftWitness::regular(&e.cm).unwrap();
        assert!(matches!(corollary_hq(&e, &cw), Err(Error::NotAHopfQuasigroup)));
    }
}

#[test]
fn witness_signatures_are_checked() {
    let e = extension(&s3());
    let bad = Morphism::id(Q, &e.cm.h.space.power(2));
    assert!(matches!(
        CleftWitness::new(&e.cm, bad, e.cm.idh()),
        Err(Error::SignatureMismatch { .. })
    ));
}

/// Cleft verification for the candidate `(id, λ)` and Galois verification with
/// the canonical normal basis, each as one flag.
fn both_sides(cm: ComoduleMagma) -> Option<(bool, bool)> {
    let an = analyze(cm).unwrap();
    let e = an.extension?;
    let cw = CleftWitness::regular(&e.cm).unwrap();
    let cleft = check_cleft(&e.cm, &cw).unwrap().passed()
        && cleft_properties(&e.cm, &e.coinv, &cw).unwrap().0.passed();
    let galois = match is_galois(&e.gamma) {
        Err(_) => false,
        Ok(g) => {
            let almost = check_gamma_inv_almost_lineal(&e.cm, &g.gamma_inv, &e.toc, &e.nabla)
                .unwrap()
                .passed;
            let nb = regular_normal_basis(&e.cm, &e.coinv)
                .map(|nb| check_normal_basis(&e.cm, &e.coinv, &nb).unwrap().passed())
                .unwrap_or(false);
            almost && nb
        }
    };
    Some((cleft, galois))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cleft_exactly_when_galois_with_normal_basis(
        k in 0usize..3,
        trivial in any::<bool>(),
        st in steps(6, 4),
    ) {
        let (_, w) = small().swap_remove(k);
        let st: Vec<Step> = st.into_iter().map(|s| match s {
            Step::Swap(i, j) => Step::Swap(i % w.dim(), j % w.dim()),
            Step::Add(i, j, c) => Step::Add(i % w.dim(), j % w.dim(), c),
            Step::Scale(i, c) => Step::Scale(i % w.dim(), c),
        }).collect();
        let v = conjugate(&w, &invertible(&w.space, &st));
        let cm = if trivial {
            let rho = t![v.id(), v.eta].materialize();
            ComoduleMagma::new(v.clone(), v.magma(), rho).unwrap()
        } else {
            ComoduleMagma::regular(&v)
        };
        // instances that fail the gates are outside the statement
        if let Some((cleft, galois)) = both_sides(cm) {
            prop_assert_eq!(cleft, galois);
            prop_assert_eq!(cleft, !trivial);
        }
    }
}

#[test]
fn trivial_coaction_is_neither_cleft_nor_galois() {
    let w = s3();
    let rho = t![w.id(), w.eta].materialize();
    let cm = ComoduleMagma::new(w.clone(), w.magma(), rho).unwrap();
    assert_eq!(both_sides(cm), Some((false, false)));
    assert_eq!(both_sides(ComoduleMagma::regular(&w)), Some((true, true)));
}
