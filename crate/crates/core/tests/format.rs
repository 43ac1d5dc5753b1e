mod common;

use common::*;

use whq::format::{cayley_document, read_tables, regular_document, StructureFile};
use whq::gen::{cyclic, symmetric3};
use whq::{Error, FieldSpec};

#[test]
fn rendered_documents_load_back_to_the_same_maps() {
    for (name, w) in four() {
        let doc = regular_document(&w, vec![("family".into(), toml::Value::String(name.into()))]);
        let text = doc.render();
        assert_eq!(text, doc.render());
        let f = StructureFile::parse(&text).unwrap();
        assert_eq!(f.meta["family"], name);
        for (a, b) in [
            (&f.whq.mu, &w.mu),
            (&f.whq.eta, &w.eta),
            (&f.whq.delta, &w.delta),
            (&f.whq.eps, &w.eps),
            (&f.whq.lambda, &w.lambda),
        ] {
            assert_eq!(dense_of(a), dense_of(b), "{name}");
        }
        assert!(f.env.morphisms["pi_l"].equals(&w.projections().pi_l));
        let cm = f.comodule_magma().unwrap();
        assert!(f.cleft_witness(&cm).unwrap().is_some());
        assert!(f.gamma_inverse_lift(&cm).unwrap().is_some());
    }
}

#[test]
fn generator_sections_build_the_structure() {
    let text = cayley_document(Q, "chein", None, &symmetric3());
    let f = StructureFile::parse(&text).unwrap();
    assert_eq!(f.whq.dim(), 12);
    assert!(f.whq.mu.equals(&chein_s3().mu));
    let (table, groupoid) = read_tables(&text).unwrap();
    assert_eq!(table.unwrap(), symmetric3());
    assert!(groupoid.is_none());

    let text = cayley_document(FieldSpec::prime(7).unwrap(), "loopoid", Some(2), &cyclic(3));
    let f = StructureFile::parse(&text).unwrap();
    assert_eq!(f.whq.dim(), 2 * 2 * 3);
    assert_eq!(f.field, FieldSpec::prime(7).unwrap());
}

#[test]
fn defines_are_evaluated_in_order() {
    let mut text = cayley_document(Q, "group", None, &cyclic(3));
    text.push_str(
        "\n[[define]]\nname = \"sq\"\nexpr = \"delta ; mu\"\n\
         \n[[define]]\nname = \"sq2\"\nexpr = \"sq ; sq\"\n",
    );
    let f = StructureFile::parse(&text).unwrap();
    let sq = &f.env.morphisms["sq"];
    assert!(f.env.morphisms["sq2"].equals(&(sq * sq)));
    // on C3 the basis element g goes to g², so squaring twice gives g⁴ = g
    assert!(f.env.morphisms["sq2"].equals(&f.whq.id()));
}

#[test]
fn malformed_files_are_rejected() {
    let ok = cayley_document(Q, "group", None, &cyclic(2));
    let cases = [
        format!("{ok}\n[extra]\nx = 1\n"),
        ok.replace("field = \"Q\"", "field = \"F_6\""),
        ok.replace("\"group\"", "\"semigroup\""),
        "field = \"Q\"\n[spaces]\nH = 2\n[morphisms.mu]\ndom = [\"H\"]\ncod = [\"H\"]\nentries = [[2, 0, \"1\"]]\n"
            .to_string(),
        "field = \"Q\"\n[spaces]\nH = 2\n[morphisms.mu]\ndom = [\"V\"]\ncod = [\"H\"]\nentries = []\n".to_string(),
        format!("{ok}\n[[define]]\nname = \"mu\"\nexpr = \"id[H]\"\n"),
        "field = \"Q\"\n[generator]\nfamily = \"group\"\n".to_string(),
    ];
    for text in &cases {
        match StructureFile::parse(text) {
            Err(Error::Format(_)) => {}
            other => panic!("accepted or wrong error for\n{text}\n{:?}", other.map(|f| f.whq.dim())),
        }
    }
}

#[test]
fn bindings_are_type_checked() {
    let mut doc = regular_document(&s3(), vec![]);
    doc.set("cleft", "h", "delta");
    let f = StructureFile::parse(&doc.render()).unwrap();
    let cm = f.comodule_magma().unwrap();
    assert!(matches!(f.cleft_witness(&cm), Err(Error::SignatureMismatch { .. })));

    let mut doc = regular_document(&s3(), vec![]);
    doc.set("galois", "gamma_inv_lift", "mu ; nu");
    let f = StructureFile::parse(&doc.render()).unwrap();
    assert!(matches!(
        f.gamma_inverse_lift(&f.comodule_magma().unwrap()),
        Err(Error::UnknownName { .. })
    ));

    let mut doc = regular_document(&s3(), vec![]);
    doc.set("structure", "lambda", "eps ; mu");
    assert!(matches!(
        StructureFile::parse(&doc.render()),
        Err(Error::ArityMismatch { .. })
    ));
}
