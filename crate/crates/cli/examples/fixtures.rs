//! Writes the structure files under `tests/fixtures`.
//!
//! ```text
//! cargo run -p whq-cli --example fixtures -- crates/cli/tests/fixtures
//! ```

use std::path::{Path, PathBuf};

use whq::format::{cayley_document, regular_document, Document};
use whq::gen::{
    chein_double, cyclic, group_algebra, groupoid_algebra, loop_algebra, loopoid_algebra, non_ip_loop,
    symmetric3, GroupoidPresentation,
};
use whq::{FieldSpec, LinMap, Whq};

fn meta(items: &[(&str, toml::Value)]) -> Vec<(String, toml::Value)> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn write(dir: &Path, name: &str, text: &str) {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    println!("wrote {}", p.display());
}

fn replace_morphism(doc: &mut Document, name: &str, map: LinMap) {
    let slot = doc.morphisms.iter_mut().find(|m| m.0 == name).unwrap();
    slot.3 = map;
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or("crates/cli/tests/fixtures".into()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = FieldSpec::Rationals;
    let s3 = group_algebra(q, &symmetric3()).unwrap();
    let pair3 = groupoid_algebra(q, &GroupoidPresentation::pair(3)).unwrap();
    let m = chein_double(&symmetric3()).unwrap();
    let chein = loop_algebra(q, &m).unwrap();
    let loopoid = loopoid_algebra(q, 2, &m).unwrap();
    let family = |f: &str| toml::Value::String(f.into());
    let base = |b: &str| toml::Value::String(b.into());

    let regular: [(&str, &Whq, Vec<(String, toml::Value)>); 4] = [
        ("s3.whq", &s3, meta(&[("family", family("group")), ("base", base("S3"))])),
        (
            "pair3.whq",
            &pair3,
            meta(&[("family", family("pair-groupoid")), ("objects", 3.into())]),
        ),
        ("chein_s3.whq", &chein, meta(&[("family", family("chein")), ("base", base("S3"))])),
        (
            "loopoid48.whq",
            &loopoid,
            meta(&[
                ("family", family("loopoid")),
                ("objects", 2.into()),
                ("base", base("chein(S3)")),
            ]),
        ),
    ];
    for (name, w, md) in regular {
        write(&dir, name, &regular_document(w, md).render());
    }

    let mutation = |m: &str| ("mutation", toml::Value::String(m.into()));

    let c2 = group_algebra(q, &cyclic(2)).unwrap();
    let mut doc = regular_document(&c2, meta(&[mutation("zero antipode")]));
    replace_morphism(&mut doc, "lambda", LinMap::zero(q, c2.space.clone(), c2.space.clone()));
    write(&dir, "mut_zero_antipode.whq", &doc.render());

    // λ replaced by λ∘Π^L, with Π^L computed from the unmutated maps
    let mut doc = regular_document(&pair3, meta(&[mutation("antipode after target map")]));
    doc.defines.push(("target".into(), "delta ; (id[H] (x) lambda) ; mu".into()));
    doc.defines.push(("lambda_target".into(), "target ; lambda".into()));
    doc.set("structure", "lambda", "lambda_target");
    write(&dir, "mut_lambda_target.whq", &doc.render());

    let mut doc = regular_document(&pair3, meta(&[mutation("coaction through the target map")]));
    doc.set("comodule", "space", "H");
    doc.set("comodule", "mu", "mu");
    doc.set("comodule", "eta", "eta");
    doc.set("comodule", "rho", "pi_l ; delta");
    write(&dir, "mut_wrong_coaction.whq", &doc.render());

    let mut doc = regular_document(&pair3, meta(&[mutation("perturbed inverse of the canonical morphism")]));
    doc.set(
        "galois",
        "gamma_inv_lift",
        "(pi_l (x) id[H]) ; (id[H] (x) delta) ; (id[H] (x) lambda (x) id[H]) ; (mu (x) id[H])",
    );
    write(&dir, "mut_perturbed_gamma_inv.whq", &doc.render());

    let t = non_ip_loop(5, 7).unwrap();
    write(&dir, "mut_non_ip.whq", &cayley_document(q, "loop", None, &t));

    let mut doc = regular_document(&s3, meta(&[mutation("zero normal-basis idempotent")]));
    doc.morphisms.push((
        "zero_hh".into(),
        vec!["H".into(), "H".into()],
        vec!["H".into(), "H".into()],
        LinMap::zero(q, s3.space.power(2), s3.space.power(2)),
    ));
    doc.set("normal_basis", "omega_lift", "zero_hh");
    write(&dir, "mut_broken_omega.whq", &doc.render());
}
