//! The structure file: a TOML document with the field, named spaces, sparse
//! morphisms and bindings written as morphism expressions.
//!
//! ```toml
//! field = "Q"
//! [meta]
//! family = "group"
//! [spaces]
//! H = 2
//! [morphisms.mu]
//! dom = ["H", "H"]
//! cod = ["H"]
//! entries = [[0, 0, "1"], [1, 1, "1"], [1, 2, "1"], [0, 3, "1"]]
//! [[define]]
//! name = "target"
//! expr = "delta ; (id[H] (x) lambda) ; mu"
//! [structure]            # roles default to their own names and space "H"
//! lambda = "lambda"
//! [comodule]             # absent: the regular comodule (H, δ)
//! space = "H"
//! mu = "mu"
//! eta = "eta"
//! rho = "delta"
//! [cleft]
//! h = "id[H]"
//! h_inv = "lambda"
//! [normal_basis]         # maps on A⊗H and A, restricted to the coinvariants
//! omega_lift = "mu ; delta ; (pi_l (x) id[H])"
//! omega_prime_lift = "delta ; (pi_l (x) id[H])"
//! omega_map_lift = "mu"
//! [galois]               # a map A⊗H → A⊗A inducing the inverse
//! gamma_inv_lift = "(id[H] (x) delta) ; (id[H] (x) lambda (x) id[H]) ; (mu (x) id[H])"
//! ```
//!
//! Instead of `[morphisms]` a file may carry a `[generator]` section with a
//! `[cayley]` table or a `[groupoid]` presentation; the structure maps are then
//! generated and bound to `mu`, `eta`, `delta`, `eps`, `lambda` on space `H`.
//! Once the structure is bound, `pi_l`, `pi_r`, `pi_l_bar` and `pi_r_bar`
//! are available to the later sections unless a file defines them itself.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::cleft::CleftWitness;
use crate::dsl::Env;
use crate::error::{Error, Result};
use crate::galois::{restrict_to_coinvariants, CoinvariantData, ComoduleMagma, NormalBasisWitness};
use crate::gen::{
    chein_double, group_algebra, groupoid_algebra, loop_algebra, loopoid_algebra, CayleyTable,
    GroupoidPresentation,
};
use crate::linmap::LinMap;
use crate::morphism::Morphism;
use crate::scalar::FieldSpec;
use crate::space::SpaceSig;
use crate::whq::{expect_sig, UnitalMagma, Whq};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    field: String,
    #[serde(default)]
    meta: BTreeMap<String, toml::Value>,
    #[serde(default)]
    spaces: BTreeMap<String, usize>,
    #[serde(default)]
    morphisms: BTreeMap<String, RawMorphism>,
    #[serde(default)]
    define: Vec<RawDefine>,
    generator: Option<RawGenerator>,
    cayley: Option<RawCayley>,
    groupoid: Option<RawGroupoid>,
    structure: Option<RawStructure>,
    comodule: Option<ComoduleBindings>,
    cleft: Option<CleftBindings>,
    normal_basis: Option<NormalBasisBindings>,
    galois: Option<GaloisBindings>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    dom: Vec<String>,
    cod: Vec<String>,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefine {
    name: String,
    expr: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    family: String,
    objects: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCayley {
    table: Vec<Vec<usize>>,
}

#[derive(Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupoid {
    objects: usize,
    ends: Vec<(usize, usize)>,
    /// `-1` where the pair is not composable.
    compose: Vec<Vec<i64>>,
    identities: Vec<usize>,
    inverses: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    #[serde(default = "default_space")]
    space: String,
    #[serde(default = "role_mu")]
    mu: String,
    #[serde(default = "role_eta")]
    eta: String,
    #[serde(default = "role_delta")]
    delta: String,
    #[serde(default = "role_eps")]
    eps: String,
    #[serde(default = "role_lambda")]
    lambda: String,
}

fn default_space() -> String {
    "H".into()
}
fn role_mu() -> String {
    "mu".into()
}
fn role_eta() -> String {
    "eta".into()
}
fn role_delta() -> String {
    "delta".into()
}
fn role_eps() -> String {
    "eps".into()
}
fn role_lambda() -> String {
    "lambda".into()
}

impl Default for RawStructure {
    fn default() -> RawStructure {
        RawStructure {
            space: default_space(),
            mu: role_mu(),
            eta: role_eta(),
            delta: role_delta(),
            eps: role_eps(),
            lambda: role_lambda(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleBindings {
    pub space: String,
    pub mu: String,
    pub eta: String,
    pub rho: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CleftBindings {
    pub h: String,
    pub h_inv: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalBasisBindings {
    pub omega_lift: String,
    pub omega_prime_lift: String,
    pub omega_map_lift: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisBindings {
    pub gamma_inv_lift: String,
}

/// A loaded structure file with its structure maps bound.
#[derive(Clone, Debug)]
pub struct StructureFile {
    pub field: FieldSpec,
    pub meta: BTreeMap<String, String>,
    pub env: Env,
    pub whq: Whq,
    pub comodule: Option<ComoduleBindings>,
    pub cleft: Option<CleftBindings>,
    pub normal_basis: Option<NormalBasisBindings>,
    pub galois: Option<GaloisBindings>,
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn space_of(spaces: &BTreeMap<String, SpaceSig>, names: &[String], what: &str) -> Result<SpaceSig> {
    let mut s = SpaceSig::unit();
    for n in names {
        let f = spaces
            .get(n)
            .ok_or_else(|| format_err(format!("{what} uses undeclared space {n:?}")))?;
        s = s.tensor(f);
    }
    Ok(s)
}

fn generated(raw: &RawFile, field: FieldSpec) -> Result<Option<Whq>> {
    let Some(g) = &raw.generator else {
        return Ok(None);
    };
    let table = || -> Result<CayleyTable> {
        let t = raw
            .cayley
            .as_ref()
            .ok_or_else(|| format_err(format!("family {:?} needs a [cayley] table", g.family)))?;
        CayleyTable::new(t.table.clone())
    };
    let w = match g.family.as_str() {
        "group" => group_algebra(field, &table()?)?,
        "loop" => loop_algebra(field, &table()?)?,
        "chein" => loop_algebra(field, &chein_double(&table()?)?)?,
        "loopoid" => loopoid_algebra(field, g.objects.unwrap_or(1), &table()?)?,
        "groupoid" => {
            let p = raw
                .groupoid
                .as_ref()
                .ok_or_else(|| format_err("family \"groupoid\" needs a [groupoid] section"))?;
            groupoid_algebra(field, &presentation(p.clone()))?
        }
        other => return Err(format_err(format!("unknown generator family {other:?}"))),
    };
    Ok(Some(w))
}

fn insert_new(env: &mut Env, name: &str, m: Morphism) -> Result<()> {
    if env.morphisms.insert(name.to_string(), m).is_some() {
        return Err(format_err(format!("morphism {name:?} is defined twice")));
    }
    Ok(())
}

impl StructureFile {
    pub fn load(path: &Path) -> Result<StructureFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        StructureFile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<StructureFile> {
        let raw: RawFile = toml::from_str(text).map_err(|e| format_err(e.to_string()))?;
        let field: FieldSpec = raw.field.parse()?;
        let mut env = Env::new(field);
        for (name, &dim) in &raw.spaces {
            env.spaces.insert(name.clone(), SpaceSig::atom(name, dim));
        }
        for (name, m) in &raw.morphisms {
            let what = format!("morphism {name:?}");
            let dom = space_of(&env.spaces, &m.dom, &what)?;
            let cod = space_of(&env.spaces, &m.cod, &what)?;
            let mut triples = Vec::with_capacity(m.entries.len());
            for (r, c, s) in &m.entries {
                if *r >= cod.dim() || *c >= dom.dim() {
                    return Err(format_err(format!(
                        "{what}: entry ({r}, {c}) outside a {}x{} matrix",
                        cod.dim(),
                        dom.dim()
                    )));
                }
                triples.push((*r, *c, field.parse_scalar(s)?));
            }
            let map = LinMap::from_triplets(field, dom, cod, triples)?;
            env.morphisms.insert(name.clone(), Morphism::map(map));
        }
        let gen = generated(&raw, field)?;
        if let Some(w) = &gen {
            if env.spaces.insert("H".into(), w.space.clone()).is_some() {
                return Err(format_err("a generated structure owns the space name \"H\""));
            }
            for (n, m) in [
                ("mu", &w.mu),
                ("eta", &w.eta),
                ("delta", &w.delta),
                ("eps", &w.eps),
                ("lambda", &w.lambda),
            ] {
                insert_new(&mut env, n, m.clone())?;
            }
        }
        for d in &raw.define {
            let m = env.eval_str(&d.expr)?.materialize();
            insert_new(&mut env, &d.name, m)?;
        }
        let s = raw.structure.unwrap_or_default();
        let space = env
            .spaces
            .get(&s.space)
            .cloned()
            .ok_or_else(|| format_err(format!("structure space {:?} is not declared", s.space)))?;
        let bind = |e: &str| env.eval_str(e).map(|m| m.materialize());
        let whq = Whq::new(
            space,
            bind(&s.eta)?,
            bind(&s.mu)?,
            bind(&s.eps)?,
            bind(&s.delta)?,
            bind(&s.lambda)?,
        )?;
        let p = whq.projections();
        for (n, m) in [
            ("pi_l", p.pi_l),
            ("pi_r", p.pi_r),
            ("pi_l_bar", p.pi_l_bar),
            ("pi_r_bar", p.pi_r_bar),
        ] {
            env.morphisms.entry(n.to_string()).or_insert(m.materialize());
        }
        let meta = raw
            .meta
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), v)
            })
            .collect();
        Ok(StructureFile {
            field,
            meta,
            env,
            whq,
            comodule: raw.comodule,
            cleft: raw.cleft,
            normal_basis: raw.normal_basis,
            galois: raw.galois,
        })
    }

    fn eval(&self, src: &str) -> Result<Morphism> {
        Ok(self.env.eval_str(src)?.materialize())
    }

    /// The bound comodule magma, or `(H, δ_H)` when none is given.
    pub fn comodule_magma(&self) -> Result<ComoduleMagma> {
        let Some(c) = &self.comodule else {
            return Ok(ComoduleMagma::regular(&self.whq));
        };
        let space = self
            .env
            .spaces
            .get(&c.space)
            .cloned()
            .ok_or_else(|| format_err(format!("comodule space {:?} is not declared", c.space)))?;
        let a = UnitalMagma::new(space, self.eval(&c.eta)?, self.eval(&c.mu)?)?;
        ComoduleMagma::new(self.whq.clone(), a, self.eval(&c.rho)?)
    }

    pub fn cleft_witness(&self, cm: &ComoduleMagma) -> Result<Option<CleftWitness>> {
        match &self.cleft {
            None => Ok(None),
            Some(c) => Ok(Some(CleftWitness::new(cm, self.eval(&c.h)?, self.eval(&c.h_inv)?)?)),
        }
    }

    pub fn normal_basis_witness(
        &self,
        cm: &ComoduleMagma,
        coinv: &CoinvariantData,
    ) -> Result<Option<NormalBasisWitness>> {
        let Some(nb) = &self.normal_basis else {
            return Ok(None);
        };
        let a = &cm.a.space;
        let ah = a.tensor(&cm.h.space);
        let omega_lift = self.eval(&nb.omega_lift)?;
        expect_sig("omega_lift", &omega_lift, &ah, &ah)?;
        let omega_prime_lift = self.eval(&nb.omega_prime_lift)?;
        expect_sig("omega_prime_lift", &omega_prime_lift, a, &ah)?;
        let omega_map_lift = match &nb.omega_map_lift {
            Some(s) => {
                let m = self.eval(s)?;
                expect_sig("omega_map_lift", &m, &ah, a)?;
                Some(m)
            }
            None => None,
        };
        let (om, omp, omm) = restrict_to_coinvariants(
            cm,
            coinv,
            &omega_lift,
            &omega_prime_lift,
            omega_map_lift.as_ref(),
        )?;
        Ok(Some(NormalBasisWitness::from_parts(&om, &omp, omm.as_ref())?))
    }

    /// The map `A⊗H → A⊗A` bound as a lift of `γ_A⁻¹`.
    pub fn gamma_inverse_lift(&self, cm: &ComoduleMagma) -> Result<Option<Morphism>> {
        let Some(g) = &self.galois else {
            return Ok(None);
        };
        let a = &cm.a.space;
        let m = self.eval(&g.gamma_inv_lift)?;
        expect_sig("gamma_inv_lift", &m, &a.tensor(&cm.h.space), &a.power(2))?;
        Ok(Some(m))
    }
}

/// A structure file under construction, rendered with stable ordering.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub field: String,
    pub meta: Vec<(String, toml::Value)>,
    pub spaces: Vec<(String, usize)>,
    pub morphisms: Vec<(String, Vec<String>, Vec<String>, LinMap)>,
    pub defines: Vec<(String, String)>,
    pub sections: Vec<(String, Vec<(String, String)>)>,
}

fn quoted(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn name_list(v: &[String]) -> String {
    let items: Vec<String> = v.iter().map(|s| quoted(s)).collect();
    format!("[{}]", items.join(", "))
}

impl Document {
    pub fn render(&self) -> String {
        let mut out = format!("field = {}\n", quoted(&self.field));
        if !self.meta.is_empty() {
            out.push_str("\n[meta]\n");
            for (k, v) in &self.meta {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        if !self.spaces.is_empty() {
            out.push_str("\n[spaces]\n");
            for (k, d) in &self.spaces {
                out.push_str(&format!("{k} = {d}\n"));
            }
        }
        for (name, dom, cod, map) in &self.morphisms {
            out.push_str(&format!(
                "\n[morphisms.{name}]\ndom = {}\ncod = {}\n",
                name_list(dom),
                name_list(cod)
            ));
            let entries: Vec<String> = map
                .triplets()
                .into_iter()
                .map(|(r, c, s)| format!("[{r}, {c}, {}]", quoted(&s.to_string())))
                .collect();
            if entries.is_empty() {
                out.push_str("entries = []\n");
            } else {
                out.push_str("entries = [\n");
                for chunk in entries.chunks(6) {
                    out.push_str(&format!("  {},\n", chunk.join(", ")));
                }
                out.push_str("]\n");
            }
        }
        for (name, expr) in &self.defines {
            out.push_str(&format!(
                "\n[[define]]\nname = {}\nexpr = {}\n",
                quoted(name),
                quoted(expr)
            ));
        }
        for (section, items) in &self.sections {
            out.push_str(&format!("\n[{section}]\n"));
            for (k, v) in items {
                out.push_str(&format!("{k} = {}\n", quoted(v)));
            }
        }
        out
    }

    pub fn set(&mut self, section: &str, key: &str, value: &str) {
        let idx = match self.sections.iter().position(|(s, _)| s == section) {
            Some(i) => i,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                self.sections.len() - 1
            }
        };
        let items = &mut self.sections[idx].1;
        match items.iter_mut().find(|(k, _)| k == key) {
            Some(item) => item.1 = value.to_string(),
            None => items.push((key.to_string(), value.to_string())),
        }
    }
}

/// A self-contained file for a generated structure with the regular comodule
/// and the witnesses of the regular example bound.
pub fn regular_document(w: &Whq, meta: Vec<(String, toml::Value)>) -> Document {
    let h = || vec!["H".to_string()];
    let hh = || vec!["H".to_string(), "H".to_string()];
    let k = Vec::<String>::new;
    let mut doc = Document {
        field: w.field().to_string(),
        meta,
        spaces: vec![("H".into(), w.dim())],
        morphisms: vec![
            ("mu".into(), hh(), h(), w.mu.eval()),
            ("eta".into(), k(), h(), w.eta.eval()),
            ("delta".into(), h(), hh(), w.delta.eval()),
            ("eps".into(), h(), k(), w.eps.eval()),
            ("lambda".into(), h(), h(), w.lambda.eval()),
        ],
        ..Document::default()
    };
    doc.set("cleft", "h", "id[H]");
    doc.set("cleft", "h_inv", "lambda");
    doc.set("normal_basis", "omega_lift", "mu ; delta ; (pi_l (x) id[H])");
    doc.set("normal_basis", "omega_prime_lift", "delta ; (pi_l (x) id[H])");
    doc.set("normal_basis", "omega_map_lift", "mu");
    doc.set(
        "galois",
        "gamma_inv_lift",
        "(id[H] (x) delta) ; (id[H] (x) lambda (x) id[H]) ; (mu (x) id[H])",
    );
    doc
}

/// A generator-only file for a Cayley table.
pub fn cayley_document(field: FieldSpec, family: &str, objects: Option<usize>, t: &CayleyTable) -> String {
    let mut out = format!("field = {}\n\n[generator]\nfamily = {}\n", quoted(&field.to_string()), quoted(family));
    if let Some(n) = objects {
        out.push_str(&format!("objects = {n}\n"));
    }
    out.push_str("\n[cayley]\ntable = [\n");
    for row in t.rows() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("  [{}],\n", cells.join(", ")));
    }
    out.push_str("]\n");
    out
}

#[derive(Deserialize)]
struct TableFile {
    cayley: Option<RawCayley>,
    groupoid: Option<RawGroupoid>,
}

/// The `[cayley]` and `[groupoid]` sections of a file; other sections are ignored.
pub fn read_tables(text: &str) -> Result<(Option<CayleyTable>, Option<GroupoidPresentation>)> {
    let raw: TableFile = toml::from_str(text).map_err(|e| format_err(e.to_string()))?;
    let cayley = match raw.cayley {
        Some(c) => Some(CayleyTable::new(c.table)?),
        None => None,
    };
    Ok((cayley, raw.groupoid.map(presentation)))
}

fn presentation(p: RawGroupoid) -> GroupoidPresentation {
    GroupoidPresentation {
        objects: p.objects,
        ends: p.ends,
        compose: p
            .compose
            .iter()
            .map(|row| row.iter().map(|&v| usize::try_from(v).ok()).collect())
            .collect(),
        identities: p.identities,
        inverses: p.inverses,
    }
}
