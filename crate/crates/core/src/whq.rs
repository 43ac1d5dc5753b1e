//! Weak Hopf quasigroups given by structure maps on one space `H`.

use serde::Serialize;

use crate::check::{check_chain, check_eq, Check, Report};
use crate::error::{Error, Result};
use crate::factorization::{coequalizer, equalizer, split_idempotent, SplitPair};
use crate::morphism::Morphism;
use crate::scalar::FieldSpec;
use crate::space::SpaceSig;
use crate::t;

#[derive(Clone, Debug)]
pub struct UnitalMagma {
    pub space: SpaceSig,
    pub eta: Morphism,
    pub mu: Morphism,
}

impl UnitalMagma {
    pub fn new(space: SpaceSig, eta: Morphism, mu: Morphism) -> Result<UnitalMagma> {
        expect_sig("eta", &eta, &SpaceSig::unit(), &space)?;
        expect_sig("mu", &mu, &space.power(2), &space)?;
        Ok(UnitalMagma { space, eta, mu })
    }

    pub fn field(&self) -> FieldSpec {
        self.mu.field()
    }

    pub fn id(&self) -> Morphism {
        Morphism::id(self.field(), &self.space)
    }

    pub fn unit_checks(&self) -> Result<Vec<Check>> {
        let a = self.id();
        Ok(vec![
            check_eq("unit-right", &(&self.mu * t![a, self.eta]), &a)?,
            check_eq("unit-left", &(&self.mu * t![self.eta, a]), &a)?,
        ])
    }

    /// First basis triple `(a, b, c)` with `(ab)c ≠ a(bc)`.
    pub fn associator_witness(&self) -> Result<Option<(usize, usize, usize)>> {
        let a = self.id();
        let left = &self.mu * t![self.mu, a];
        let right = &self.mu * t![a, self.mu];
        Ok(left.first_difference(&right)?.map(|d| {
            let m = self.space.power(3).unflatten(d.column);
            (m[0], m[1], m[2])
        }))
    }
}

#[derive(Clone, Debug)]
pub struct Comonoid {
    pub space: SpaceSig,
    pub eps: Morphism,
    pub delta: Morphism,
}

impl Comonoid {
    pub fn new(space: SpaceSig, eps: Morphism, delta: Morphism) -> Result<Comonoid> {
        expect_sig("eps", &eps, &space, &SpaceSig::unit())?;
        expect_sig("delta", &delta, &space, &space.power(2))?;
        Ok(Comonoid { space, eps, delta })
    }

    pub fn checks(&self) -> Result<Vec<Check>> {
        let d = Morphism::id(self.delta.field(), &self.space);
        Ok(vec![
            check_eq("counit-left", &(t![self.eps, d] * &self.delta), &d)?,
            check_eq("counit-right", &(t![d, self.eps] * &self.delta), &d)?,
            check_eq(
                "coassociativity",
                &(t![self.delta, d] * &self.delta),
                &(t![d, self.delta] * &self.delta),
            )?,
        ])
    }
}

pub(crate) fn expect_sig(name: &str, m: &Morphism, dom: &SpaceSig, cod: &SpaceSig) -> Result<()> {
    if m.dom() != dom {
        return Err(Error::SignatureMismatch {
            context: format!("domain of {name}"),
            left: dom.clone(),
            right: m.dom().clone(),
        });
    }
    if m.cod() != cod {
        return Err(Error::SignatureMismatch {
            context: format!("codomain of {name}"),
            left: cod.clone(),
            right: m.cod().clone(),
        });
    }
    Ok(())
}

/// `μ_A∘(f⊗g)∘δ_D`.
pub fn convolution(
    f: &Morphism,
    g: &Morphism,
    comagma: &Comonoid,
    magma: &UnitalMagma,
) -> Result<Morphism> {
    for (n, m) in [("f", f), ("g", g)] {
        expect_sig(n, m, &comagma.space, &magma.space)?;
    }
    Ok(&magma.mu * t![f, g] * &comagma.delta)
}

/// A candidate weak Hopf quasigroup. It can be built unchecked; `validated`
/// records the outcome of the last axiom check.
#[derive(Clone, Debug)]
pub struct Whq {
    pub space: SpaceSig,
    pub eta: Morphism,
    pub mu: Morphism,
    pub eps: Morphism,
    pub delta: Morphism,
    pub lambda: Morphism,
    pub validated: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Projections {
    pub pi_l: Morphism,
    pub pi_r: Morphism,
    pub pi_l_bar: Morphism,
    pub pi_r_bar: Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    HopfAlgebra,
    WeakHopfAlgebra,
    HopfQuasigroup,
    WeakHopfQuasigroupProper,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::HopfAlgebra => "HopfAlgebra",
            Classification::WeakHopfAlgebra => "WeakHopfAlgebra",
            Classification::HopfQuasigroup => "HopfQuasigroup",
            Classification::WeakHopfQuasigroupProper => "WeakHopfQuasigroupProper",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifyResult {
    pub kind: Classification,
    pub associative: bool,
    pub weak: bool,
    /// First basis triple where the product is not associative.
    pub associator: Option<(usize, usize, usize)>,
}

/// The monoid `H_L` obtained by splitting the target map.
#[derive(Clone, Debug)]
pub struct HlMonoid {
    pub split: SplitPair,
    pub eta: Morphism,
    pub mu: Morphism,
    pub eps: Morphism,
    pub delta: Morphism,
    pub report: Report,
}

impl Whq {
    pub fn new(
        space: SpaceSig,
        eta: Morphism,
        mu: Morphism,
        eps: Morphism,
        delta: Morphism,
        lambda: Morphism,
    ) -> Result<Whq> {
        let k = SpaceSig::unit();
        expect_sig("eta", &eta, &k, &space)?;
        expect_sig("mu", &mu, &space.power(2), &space)?;
        expect_sig("eps", &eps, &space, &k)?;
        expect_sig("delta", &delta, &space, &space.power(2))?;
        expect_sig("lambda", &lambda, &space, &space)?;
        Ok(Whq {
            space,
            eta,
            mu,
            eps,
            delta,
            lambda,
            validated: None,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.mu.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn id(&self) -> Morphism {
        Morphism::id(self.field(), &self.space)
    }

    /// `c_{H,H}`.
    pub fn swap(&self) -> Morphism {
        Morphism::swap(self.field(), &self.space, &self.space)
    }

    pub fn magma(&self) -> UnitalMagma {
        UnitalMagma {
            space: self.space.clone(),
            eta: self.eta.clone(),
            mu: self.mu.clone(),
        }
    }

    pub fn comonoid(&self) -> Comonoid {
        Comonoid {
            space: self.space.clone(),
            eps: self.eps.clone(),
            delta: self.delta.clone(),
        }
    }

    /// `f∗g` on `H`.
    pub fn conv(&self, f: &Morphism, g: &Morphism) -> Morphism {
        &self.mu * t![f, g] * &self.delta
    }

    /// `δ∘η`.
    pub fn delta_eta(&self) -> Morphism {
        (&self.delta * &self.eta).materialize()
    }

    /// `ε∘μ`.
    pub fn eps_mu(&self) -> Morphism {
        (&self.eps * &self.mu).materialize()
    }

    /// `η∘ε`.
    pub fn eta_eps(&self) -> Morphism {
        (&self.eta * &self.eps).materialize()
    }

    /// `δ_{H⊗H} = (H⊗c⊗H)∘(δ⊗δ)`.
    pub fn delta_hh(&self) -> Morphism {
        let h = self.id();
        t![h, self.swap(), h] * t![self.delta, self.delta]
    }

    /// `Π^L = id∗λ`, `Π^R = λ∗id`, and the barred maps from their closed forms.
    pub fn projections(&self) -> Projections {
        let h = self.id();
        Projections {
            pi_l: self.conv(&h, &self.lambda).materialize(),
            pi_r: self.conv(&self.lambda, &h).materialize(),
            pi_l_bar: (t![h, self.eps_mu()] * t![self.delta_eta(), h]).materialize(),
            pi_r_bar: (t![self.eps_mu(), h] * t![h, self.delta_eta()]).materialize(),
        }
    }

    /// Closed forms of the target and source maps from (a4-1)/(a4-2).
    pub fn closed_form_targets(&self) -> (Morphism, Morphism) {
        let h = self.id();
        let c = self.swap();
        let l = t![self.eps_mu(), h] * t![h, c] * t![self.delta_eta(), h];
        let r = t![h, self.eps_mu()] * t![c, h] * t![h, self.delta_eta()];
        (l.materialize(), r.materialize())
    }

    /// Unit, counit and the axioms (a1)–(a4-7). Associativity is not an axiom
    /// and is reported by `classify`.
    pub fn check_axioms(&self) -> Result<Report> {
        let mut rep = Report::new("axioms");
        let h = self.id();
        let c = self.swap();
        let (mu, delta, lambda) = (&self.mu, &self.delta, &self.lambda);
        rep.extend(self.magma().unit_checks()?);
        rep.extend(self.comonoid().checks()?);
        rep.push(check_eq(
            "a1",
            &(delta * mu),
            &(t![mu, mu] * self.delta_hh()),
        )?);
        let emu = self.eps_mu();
        let a2 = [
            &emu * t![mu, h],
            &emu * t![h, mu],
            t![emu, emu] * t![h, delta, h],
            t![emu, emu] * t![h, &c * delta, h],
        ];
        rep.extend(check_chain("a2", &a2.iter().collect::<Vec<_>>())?);
        let de = self.delta_eta();
        let a3 = [
            t![delta, h] * &de,
            t![h, mu, h] * t![de, de],
            t![h, mu * &c, h] * t![de, de],
        ];
        rep.extend(check_chain("a3", &a3.iter().collect::<Vec<_>>())?);
        let p = self.projections();
        let (l, r) = self.closed_form_targets();
        rep.push(check_eq("a4-1", &p.pi_l, &l)?);
        rep.push(check_eq("a4-2", &p.pi_r, &r)?);
        rep.extend(check_chain(
            "a4-3",
            &[
                &self.conv(lambda, &p.pi_l),
                &self.conv(&p.pi_r, lambda),
                lambda,
            ],
        )?);
        rep.push(check_eq(
            "a4-4",
            &(mu * t![lambda, mu] * t![delta, h]),
            &(mu * t![p.pi_r, h]),
        )?);
        rep.push(check_eq(
            "a4-5",
            &(mu * t![h, mu] * t![h, lambda, h] * t![delta, h]),
            &(mu * t![p.pi_l, h]),
        )?);
        rep.push(check_eq(
            "a4-6",
            &(mu * t![mu, lambda] * t![h, delta]),
            &(mu * t![h, p.pi_l]),
        )?);
        rep.push(check_eq(
            "a4-7",
            &(mu * t![mu, h] * t![h, lambda, h] * t![h, delta]),
            &(mu * t![h, p.pi_r]),
        )?);
        Ok(rep)
    }

    /// Runs `check_axioms` and records the outcome.
    pub fn validate(&mut self) -> Result<Report> {
        let rep = self.check_axioms()?;
        self.validated = Some(rep.passed());
        Ok(rep)
    }

    pub fn classify(&self) -> Result<ClassifyResult> {
        let rep = self.check_axioms()?;
        if let Some(f) = rep.first_failure() {
            return Err(Error::NotAWhq {
                failed: f.name.clone(),
            });
        }
        self.classify_unchecked()
    }

    /// Classification without re-running the axiom check.
    pub fn classify_unchecked(&self) -> Result<ClassifyResult> {
        let associator = self.magma().associator_witness()?;
        let p = self.projections();
        let ee = self.eta_eps();
        let weak = !(p.pi_l.equals(&ee) && p.pi_r.equals(&ee));
        let kind = match (associator.is_none(), weak) {
            (true, false) => Classification::HopfAlgebra,
            (true, true) => Classification::WeakHopfAlgebra,
            (false, false) => Classification::HopfQuasigroup,
            (false, true) => Classification::WeakHopfQuasigroupProper,
        };
        Ok(ClassifyResult {
            kind,
            associative: associator.is_none(),
            weak,
            associator,
        })
    }

    /// The derived identities that every weak Hopf quasigroup satisfies.
    pub fn check_identity_suite(&self) -> Result<Report> {
        let mut rep = Report::new("identities");
        let h = self.id();
        let c = self.swap();
        let (eta, mu, eps, delta, lambda) =
            (&self.eta, &self.mu, &self.eps, &self.delta, &self.lambda);
        let p = self.projections();
        let (pl, pr, plb, prb) = (&p.pi_l, &p.pi_r, &p.pi_l_bar, &p.pi_r_bar);
        let emu = self.eps_mu();
        let de = self.delta_eta();
        let dhh = self.delta_hh();
        let mut eq = |name: &str, l: Morphism, r: Morphism| -> Result<()> {
            rep.push(check_eq(name, &l, &r)?);
            Ok(())
        };

        eq("pi-l/1", self.conv(pl, &h), h.clone())?;
        eq("pi-l/2", self.conv(&h, pr), h.clone())?;
        eq("pi-eta/1", pl * eta, eta.clone())?;
        eq("pi-eta/2", pr * eta, eta.clone())?;
        eq("pi-varep/1", eps * pl, eps.clone())?;
        eq("pi-varep/2", eps * pr, eps.clone())?;
        eq("lambda-eta", lambda * eta, eta.clone())?;
        eq("eps-lambda", eps * lambda, eps.clone())?;
        eq("idempotent-pi-l", pl * pl, pl.clone())?;
        eq("idempotent-pi-r", pr * pr, pr.clone())?;
        eq("idempotent-pi-l-bar", plb * plb, plb.clone())?;
        eq("idempotent-pi-r-bar", prb * prb, prb.clone())?;

        eq("mu-pi-l", mu * t![h, pl], t![emu, h] * t![h, c] * t![delta, h])?;
        eq("mu-pi-r", mu * t![pr, h], t![h, emu] * t![c, h] * t![h, delta])?;
        eq("mu-pi-l-var", mu * t![h, plb], t![h, emu] * t![delta, h])?;
        eq("mu-pi-r-var", mu * t![prb, h], t![emu, h] * t![h, delta])?;
        eq("delta-pi-l", t![h, pl] * delta, t![mu, h] * t![h, c] * t![de, h])?;
        eq("delta-pi-r", t![pr, h] * delta, t![h, mu] * t![c, h] * t![h, de])?;
        eq("delta-pi-l-var", t![plb, h] * delta, t![h, mu] * t![de, h])?;
        eq("delta-pi-r-var", t![h, prb] * delta, t![mu, h] * t![h, de])?;

        eq("pi-delta-mu-pi-1", pl * mu * t![h, pl], pl * mu)?;
        eq("pi-delta-mu-pi-2", pr * mu * t![pr, h], pr * mu)?;
        eq("pi-delta-mu-pi-3", t![h, pl] * delta * pl, delta * pl)?;
        eq("pi-delta-mu-pi-4", t![pr, h] * delta * pr, delta * pr)?;

        eq("pi-composition-1/1", pl * plb, pl.clone())?;
        eq("pi-composition-1/2", pl * prb, prb.clone())?;
        eq("pi-composition-2/1", plb * pl, plb.clone())?;
        eq("pi-composition-2/2", prb * pl, pl.clone())?;
        eq("pi-composition-3/1", pr * plb, plb.clone())?;
        eq("pi-composition-3/2", pr * prb, pr.clone())?;
        eq("pi-composition-4/1", plb * pr, pr.clone())?;
        eq("pi-composition-4/2", prb * pr, prb.clone())?;

        eq("pi-antipode-composition-1/1", pl * lambda, pl * pr)?;
        eq("pi-antipode-composition-1/2", pl * pr, lambda * pr)?;
        eq("pi-antipode-composition-2/1", pr * lambda, pr * pl)?;
        eq("pi-antipode-composition-2/2", pr * pl, lambda * pl)?;
        eq("pi-antipode-composition-3/1", pl.clone(), prb * lambda)?;
        eq("pi-antipode-composition-3/2", prb * lambda, lambda * plb)?;
        eq("pi-antipode-composition-4/1", pr.clone(), plb * lambda)?;
        eq("pi-antipode-composition-4/2", plb * lambda, lambda * prb)?;

        let pl_h_delta = (t![pl, h] * delta).materialize();
        eq("mu-assoc-1/1", mu * t![mu, h] * t![h, pl_h_delta], mu.clone())?;
        eq("mu-assoc-1/2", mu.clone(), mu * t![mu, pr] * t![h, delta])?;
        let mu_pr_h = (mu * t![pr, h]).materialize();
        eq("mu-assoc-2/1", mu * t![pl, mu] * t![delta, h], mu.clone())?;
        eq("mu-assoc-2/2", mu.clone(), mu * t![h, mu_pr_h] * t![delta, h])?;
        let mu_pl_h = (mu * t![pl, h]).materialize();
        let mu_l_h = (mu * t![lambda, h]).materialize();
        eq(
            "mu-assoc-3/1",
            mu * t![lambda, mu_pl_h] * t![delta, h],
            mu_l_h.clone(),
        )?;
        eq(
            "mu-assoc-3/2",
            mu_l_h.clone(),
            mu * t![pr, mu_l_h] * t![delta, h],
        )?;
        let l_pl_delta = (t![lambda, pl] * delta).materialize();
        let pr_l_delta = (t![pr, lambda] * delta).materialize();
        let mu_h_l = (mu * t![h, lambda]).materialize();
        eq(
            "mu-assoc-4/1",
            mu * t![mu, h] * t![h, l_pl_delta],
            mu_h_l.clone(),
        )?;
        eq(
            "mu-assoc-4/2",
            mu_h_l.clone(),
            mu * t![mu, h] * t![h, pr_l_delta],
        )?;

        let mu_h_pl = (mu * t![h, pl]).materialize();
        eq(
            "2-mu-delta-pi-l",
            t![mu, mu_h_pl] * &dhh,
            t![mu, h] * t![h, c] * t![delta, h],
        )?;
        eq(
            "2-mu-delta-pi-r",
            t![mu_pr_h, mu] * &dhh,
            t![h, mu] * t![c, h] * t![h, delta],
        )?;
        eq("anti-antipode-1", lambda * mu, mu * &c * t![lambda, lambda])?;
        eq("anti-antipode-2", delta * lambda, t![lambda, lambda] * &c * delta)?;

        eq("pi-mu-pi-pi", pl * mu * t![pl, pl], mu * t![pl, pl])?;
        drop(eq);

        match split_idempotent(pl, "H_L") {
            Ok(split) => {
                let il = &split.i;
                let mu_il_h = (mu * t![il, h]).materialize();
                let mu_h_il = (mu * t![h, il]).materialize();
                let pairs = [
                    ("monoid-hl-1", mu * t![mu_il_h, h], mu * t![il, mu]),
                    ("monoid-hl-2", mu * t![h, mu_il_h], mu * t![mu_h_il, h]),
                    ("monoid-hl-3", mu * t![h, mu_h_il], mu * t![mu, il]),
                    ("aux-1-monoid-hl", delta * &mu_il_h, t![mu, h] * t![il, delta]),
                    (
                        "aux-2-monoid-hl",
                        delta * &mu_h_il,
                        t![mu, h] * t![h, c] * t![delta, il],
                    ),
                ];
                for (n, l, r) in pairs {
                    rep.push(check_eq(n, &l, &r)?);
                }
            }
            Err(e) => {
                for n in [
                    "monoid-hl-1",
                    "monoid-hl-2",
                    "monoid-hl-3",
                    "aux-1-monoid-hl",
                    "aux-2-monoid-hl",
                ] {
                    rep.push(Check::fail(n, format!("target map does not split: {e}")));
                }
            }
        }
        Ok(rep)
    }

    /// Splits the target map and builds the monoid structure on its image.
    pub fn hl_monoid(&self) -> Result<HlMonoid> {
        let h = self.id();
        let p = self.projections();
        let split = split_idempotent(&p.pi_l, "H_L")?;
        let (il, pl) = (&split.i, &split.p);
        let hl = split.object.clone();
        let eta = (pl * &self.eta).materialize();
        let mu = (pl * &self.mu * t![il, il]).materialize();
        let eps = (&self.eps * il).materialize();
        let delta = (t![pl, pl] * &self.delta * il).materialize();
        let mut rep = Report::new("H_L");

        let eq = equalizer(&self.delta, &(t![h, p.pi_l] * &self.delta), "E")?;
        rep.push(Check::flag(
            "equalizer-dim",
            eq.object_dim() == split.image_dim,
            format!("equalizer has dim {}, H_L has dim {}", eq.object_dim(), split.image_dim),
        ));
        rep.push(check_eq("equalizer-image", &(&p.pi_l * &eq.arrow), &eq.arrow)?);
        rep.push(check_eq(
            "equalizer-equalizes",
            &(&self.delta * il),
            &(t![h, p.pi_l] * &self.delta * il),
        )?);
        let coeq = coequalizer(&self.mu, &(&self.mu * t![h, p.pi_l]), "C")?;
        rep.push(Check::flag(
            "coequalizer-dim",
            coeq.object_dim() == split.image_dim,
            format!(
                "coequalizer has dim {}, H_L has dim {}",
                coeq.object_dim(),
                split.image_dim
            ),
        ));
        rep.push(check_eq(
            "coequalizer-coequalizes",
            &(pl * &self.mu),
            &(pl * &self.mu * t![h, p.pi_l]),
        )?);
        let magma = UnitalMagma {
            space: hl.clone(),
            eta: eta.clone(),
            mu: mu.clone(),
        };
        rep.extend(magma.unit_checks()?);
        let como = Comonoid {
            space: hl.clone(),
            eps: eps.clone(),
            delta: delta.clone(),
        };
        rep.extend(como.checks()?);
        let assoc = magma.associator_witness()?;
        rep.push(Check::flag(
            "associativity",
            assoc.is_none(),
            format!("associator witness {assoc:?}"),
        ));
        if let Some((a, b, c)) = assoc {
            return Err(Error::AssociativityFailure {
                what: "H_L".into(),
                a,
                b,
                c,
            });
        }
        Ok(HlMonoid {
            split,
            eta,
            mu,
            eps,
            delta,
            report: rep,
        })
    }
}
