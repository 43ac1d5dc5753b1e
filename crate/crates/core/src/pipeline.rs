//! End-to-end runs over a structure file, one per command-line subcommand.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::check::{check_eq, Check, Counterexample, Report};
use crate::cleft::{
    check_c2_equivalence, check_c4_equivalence, check_cleft, check_cleft_hopf_quasigroup,
    cleft_properties, corollary_hq, round_trip, Start,
};
use crate::dsl::{parse_expr, print_classical};
use crate::error::{Error, Result};
use crate::format::StructureFile;
use crate::galois::{
    analyze, build_ma, check_galois_lemma, check_gamma_inv_almost_lineal, check_ma,
    check_nabladeh, check_normal_basis, gamma_inverse_from_lift, is_galois, stage, Extension,
    GaloisWitness,
};

/// The machine-readable result of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub summary: BTreeMap<String, String>,
    pub sections: Vec<Report>,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            passed: true,
            first_failure: None,
            summary: BTreeMap::new(),
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, r: Report) {
        self.sections.push(r);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.insert(key.to_string(), value.to_string());
    }

    /// Fills in `passed` and `first_failure` from the sections.
    pub fn finish(mut self) -> RunReport {
        self.first_failure = self.sections.iter().find_map(|s| {
            s.first_failure()
                .map(|c| format!("{}.{}", s.title, c.name))
        });
        self.passed = self.first_failure.is_none();
        self
    }

    pub fn checks(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.sections
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s.title.as_str(), c)))
    }

    /// Human-readable rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for s in &self.sections {
            let bad = s.checks.iter().filter(|c| !c.passed).count();
            out.push_str(&format!(
                "[{}] {} checks, {} failed\n",
                s.title,
                s.checks.len(),
                bad
            ));
            for c in &s.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                out.push_str(&format!("  {mark} {}", c.name));
                if let Some(d) = &c.detail {
                    out.push_str(&format!(" ({d})"));
                }
                out.push('\n');
                if let Some(w) = &c.counterexample {
                    out.push_str(&format!(
                        "       at input {:?}, output {:?}: {} vs {}\n",
                        w.input, w.output, w.lhs, w.rhs
                    ));
                }
            }
        }
        match &self.first_failure {
            None => out.push_str(&format!("{}: all checks passed\n", self.command)),
            Some(f) => out.push_str(&format!("{}: first failure {f}\n", self.command)),
        }
        out
    }
}

/// A report for a run that stopped on a verification error.
pub fn error_report(command: &str, e: &Error) -> RunReport {
    let mut rep = RunReport::new(command);
    let mut section = Report::new("error");
    let check = match e {
        Error::IPVerificationFailed { x, y } => Check {
            name: "generator.inverse-property".into(),
            passed: false,
            counterexample: Some(Counterexample {
                input: vec![*x, *y],
                output: vec![],
                lhs: "x⁻¹(xy) or (yx)x⁻¹".into(),
                rhs: "y".into(),
            }),
            detail: Some(e.to_string()),
        },
        Error::NotALoop(_) => Check::fail("generator.loop", e.to_string()),
        Error::AxiomVerificationFailed(_) => Check::fail("generator.axioms", e.to_string()),
        _ => Check::fail("error", e.to_string()),
    };
    section.push(check);
    rep.section(section);
    rep.finish()
}

/// Axioms, derived identities, classification and the `H_L` monoid.
pub fn run_check(file: &StructureFile) -> Result<RunReport> {
    let w = &file.whq;
    let mut rep = RunReport::new("check");
    rep.note("field", file.field);
    rep.note("dim", w.dim());
    for (k, v) in &file.meta {
        rep.note(&format!("meta.{k}"), v);
    }
    let axioms = w.check_axioms()?;
    let ok = axioms.passed();
    rep.section(axioms);
    rep.section(w.check_identity_suite()?);
    if ok {
        let c = w.classify_unchecked()?;
        rep.note("classification", c.kind);
        if let Some((a, b, x)) = c.associator {
            rep.note("associator", format!("({a}, {b}, {x})"));
        }
        let mut hl = Report::new("hl-monoid");
        if let Some(m) = stage(&mut hl, "split", w.hl_monoid())? {
            rep.note("dim H_L", m.split.image_dim);
            hl.checks.extend(m.report.checks);
        }
        rep.section(hl);
    }
    Ok(rep.finish())
}

fn analysis(file: &StructureFile, rep: &mut RunReport) -> Result<Option<Extension>> {
    let cm = file.comodule_magma()?;
    let an = analyze(cm)?;
    rep.section(an.report);
    if let Some(e) = &an.extension {
        rep.note("dim A^coH", e.coinv.dim());
        rep.note("dim A□H", e.nabla.box_dim);
        rep.note("dim A⊗_{A^coH}A", e.toc.dim());
    }
    Ok(an.extension)
}

/// Coinvariants, `∇`, `γ`, inversion, almost-lineality, and the normal-basis
/// and `m_A` checks when a witness is bound.
pub fn run_galois(file: &StructureFile) -> Result<RunReport> {
    let mut rep = RunReport::new("galois");
    let Some(ext) = analysis(file, &mut rep)? else {
        return Ok(rep.finish());
    };
    let cm = &ext.cm;
    let mut g = Report::new("galois");
    if file.comodule.is_none() {
        g.push(check_nabladeh(cm, &ext.nabla)?);
    }
    let exact = match is_galois(&ext.gamma) {
        Ok(w) => {
            g.push(Check::pass("gamma-invertible"));
            Some(w)
        }
        Err(e) if e.is_input_error() => return Err(e),
        Err(e) => {
            g.push(Check::fail("gamma-invertible", e.to_string()));
            None
        }
    };
    let witness = match file.gamma_inverse_lift(cm)? {
        Some(lift) => {
            let gi = gamma_inverse_from_lift(&ext.toc, &ext.nabla, &lift)?;
            let w = GaloisWitness {
                gamma: ext.gamma.gamma.clone(),
                gamma_inv: gi,
            };
            g.push(check_gamma_inv_almost_lineal(cm, &w.gamma_inv, &ext.toc, &ext.nabla)?);
            let checks = w.verify("supplied-inverse")?;
            let ok = checks.iter().all(|c| c.passed);
            g.extend(checks);
            ok.then_some(w)
        }
        None => {
            if let Some(w) = &exact {
                g.push(check_gamma_inv_almost_lineal(cm, &w.gamma_inv, &ext.toc, &ext.nabla)?);
            }
            exact
        }
    };
    if let Some(w) = &witness {
        g.absorb(
            "lemma",
            check_galois_lemma(cm, &ext.toc, &ext.nabla, &w.gamma_inv)?,
        );
    }
    rep.section(g);
    if let Some(nbw) = file.normal_basis_witness(cm, &ext.coinv)? {
        let nb = check_normal_basis(cm, &ext.coinv, &nbw)?;
        let nb_ok = nb.passed();
        rep.section(nb);
        if let (true, Some(w)) = (nb_ok, &witness) {
            let mut ma = Report::new("mA");
            if let Some(m) = stage(
                &mut ma,
                "construction",
                build_ma(cm, &ext.coinv, &ext.toc, &nbw, None),
            )? {
                let r = check_ma(cm, &ext.coinv, &ext.toc, &ext.nabla, &w.gamma_inv, &nbw, &m)?;
                ma.checks.extend(r.checks);
            }
            rep.section(ma);
        }
    }
    Ok(rep.finish())
}

fn bool_pair(p: (bool, bool)) -> String {
    format!("({}, {})", p.0, p.1)
}

/// The cleft conditions and their consequences for the bound `h`, `h⁻¹`.
pub fn run_cleft(file: &StructureFile) -> Result<RunReport> {
    let mut rep = RunReport::new("cleft");
    let cm = file.comodule_magma()?;
    let w = file
        .cleft_witness(&cm)?
        .ok_or_else(|| Error::Format("the file has no [cleft] bindings".into()))?;
    let ext = analysis(file, &mut rep)?;
    rep.section(check_cleft(&cm, &w)?);
    if let Some(ext) = &ext {
        let (props, _) = cleft_properties(&cm, &ext.coinv, &w)?;
        rep.section(props);
    }
    let c2 = check_c2_equivalence(&cm, &w)?;
    let c4 = check_c4_equivalence(&cm, &w)?;
    rep.note("c2 pair", bool_pair(c2));
    rep.note("c4 pair", bool_pair(c4));
    let mut eq = Report::new("equivalences");
    eq.push(Check::flag("c2-coaction-form", c2.0 == c2.1, bool_pair(c2)));
    eq.push(Check::flag("c4-multiplication-form", c4.0 == c4.1, bool_pair(c4)));
    rep.section(eq);
    if is_hopf_quasigroup(file) {
        rep.section(check_cleft_hopf_quasigroup(&cm, &w)?);
    }
    Ok(rep.finish())
}

fn is_hopf_quasigroup(file: &StructureFile) -> bool {
    let p = file.whq.projections();
    let ee = file.whq.eta_eps();
    p.pi_l.equals(&ee) && p.pi_r.equals(&ee)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Cleft,
    Galois,
}

/// Both directions of the cleft/Galois characterization, starting from the
/// bound witnesses.
pub fn run_roundtrip(file: &StructureFile, from: Direction) -> Result<RunReport> {
    let mut rep = RunReport::new("roundtrip");
    let Some(ext) = analysis(file, &mut rep)? else {
        return Ok(rep.finish());
    };
    let cm = &ext.cm;
    let start = match from {
        Direction::Cleft => {
            let w = file
                .cleft_witness(cm)?
                .ok_or_else(|| Error::Format("the file has no [cleft] bindings".into()))?;
            Start::Cleft(w)
        }
        Direction::Galois => {
            let nbw = file
                .normal_basis_witness(cm, &ext.coinv)?
                .ok_or_else(|| Error::Format("the file has no [normal_basis] bindings".into()))?;
            let gi = match file.gamma_inverse_lift(cm)? {
                Some(l) => Some(gamma_inverse_from_lift(&ext.toc, &ext.nabla, &l)?),
                None => None,
            };
            Start::Galois(nbw, gi)
        }
    };
    let hq_start = match &start {
        Start::Cleft(w) => Some(w.clone()),
        Start::Galois(..) => None,
    };
    let mut rt = Report::new("round-trip");
    match stage(&mut rt, "pipeline", round_trip(&ext, start))? {
        Some(eq) => {
            rep.note("start", &eq.start);
            rt.checks.extend(eq.report.checks);
        }
        None => {}
    }
    rep.section(rt);
    rep.note("hopf quasigroup", is_hopf_quasigroup(file));
    if let (true, Some(w)) = (is_hopf_quasigroup(file), hq_start) {
        let mut c = Report::new("corollary");
        if let Some(r) = stage(&mut c, "pipeline", corollary_hq(&ext, &w))? {
            c.checks.extend(r.checks);
        }
        rep.section(c);
    }
    Ok(rep.finish())
}

/// `lhs = rhs` for two expressions over the file's names.
pub fn run_eval(file: &StructureFile, lhs: &str, rhs: &str) -> Result<RunReport> {
    let mut rep = RunReport::new("eval");
    let (l, r) = (parse_expr(lhs)?, parse_expr(rhs)?);
    let (lm, rm) = (file.env.eval(&l)?, file.env.eval(&r)?);
    rep.note("lhs", print_classical(&l));
    rep.note("rhs", print_classical(&r));
    rep.note("lhs signature", format!("{} -> {}", lm.dom(), lm.cod()));
    rep.note("rhs signature", format!("{} -> {}", rm.dom(), rm.cod()));
    let mut s = Report::new("eval");
    for (what, a, b) in [("domains", lm.dom(), rm.dom()), ("codomains", lm.cod(), rm.cod())] {
        if a != b {
            return Err(Error::SignatureMismatch {
                context: format!("{what} of the two sides"),
                left: a.clone(),
                right: b.clone(),
            });
        }
    }
    s.push(check_eq("identity", &lm, &rm)?);
    rep.section(s);
    Ok(rep.finish())
}
