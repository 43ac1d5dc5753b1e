//! Cleft extensions and the two constructions between cleft and Galois data.

use serde::Serialize;

use crate::check::{check_chain, check_eq, Check, Report};
use crate::error::{Error, Result};
use crate::factorization::{factor_through_coequalizer, factor_through_equalizer};
use crate::galois::{
    build_ma, check_galois_lemma, check_gamma_inv_almost_lineal, check_ma, check_normal_basis,
    is_galois, CoinvariantData, ComoduleMagma, Extension, GaloisWitness, NormalBasisWitness,
};
use crate::morphism::Morphism;
use crate::t;
use crate::whq::expect_sig;

/// A cleaving morphism `h: H → A` and its convolution-type inverse.
#[derive(Clone, Debug)]
pub struct CleftWitness {
    pub h: Morphism,
    pub h_inv: Morphism,
}

impl CleftWitness {
    pub fn new(cm: &ComoduleMagma, h: Morphism, h_inv: Morphism) -> Result<CleftWitness> {
        expect_sig("h", &h, &cm.h.space, &cm.a.space)?;
        expect_sig("h_inv", &h_inv, &cm.h.space, &cm.a.space)?;
        Ok(CleftWitness { h, h_inv })
    }

    /// `h = id`, `h⁻¹ = λ` for `(H, δ_H)`.
    pub fn regular(cm: &ComoduleMagma) -> Result<CleftWitness> {
        CleftWitness::new(cm, cm.idh().materialize(), cm.h.lambda.clone())
    }
}

/// `μ_A∘(μ_A⊗A)∘(A⊗f⊗g)∘(A⊗δ_H)`.
fn twisted_action(cm: &ComoduleMagma, f: &Morphism, g: &Morphism) -> Morphism {
    let a = cm.ida();
    &cm.a.mu * t![cm.a.mu, a] * t![a, f, g] * t![a, cm.h.delta]
}

/// Comodule-morphism property of `h` and (c1)–(c4).
pub fn check_cleft(cm: &ComoduleMagma, w: &CleftWitness) -> Result<Report> {
    let (a, h) = (cm.ida(), cm.idh());
    let (hh, hi) = (&w.h, &w.h_inv);
    let (rho, delta) = (&cm.rho, &cm.h.delta);
    let mut rep = Report::new("cleft");
    rep.push(check_eq("comodule-morphism", &(rho * hh), &(t![hh, h] * delta))?);
    let hi_h = cm.conv(hi, hh).materialize();
    let h_hi = cm.conv(hh, hi).materialize();
    rep.push(check_eq("c1", &hi_h, &cm.target_of_unit())?);
    rep.push(check_eq(
        "c2",
        &(t![a, cm.h.mu] * t![cm.c_ha(), h] * t![h, rho * hi] * delta),
        &(t![a, cm.projections().pi_r_bar] * rho * hi),
    )?);
    rep.push(check_eq(
        "c3",
        &twisted_action(cm, hi, hh),
        &(&cm.a.mu * t![a, hi_h]),
    )?);
    rep.push(check_eq(
        "c4",
        &twisted_action(cm, hh, hi),
        &(&cm.a.mu * t![a, h_hi]),
    )?);
    Ok(rep)
}

/// The Hopf-quasigroup form (d1)–(d4) of the cleft conditions, with the
/// strengthened (d4) that drops `h∗h⁻¹`.
pub fn check_cleft_hopf_quasigroup(cm: &ComoduleMagma, w: &CleftWitness) -> Result<Report> {
    let (a, h) = (cm.ida(), cm.idh());
    let (hh, hi) = (&w.h, &w.h_inv);
    let (rho, delta) = (&cm.rho, &cm.h.delta);
    let mut rep = Report::new("cleft-hq");
    let unit_counit = (&cm.a.eta * &cm.h.eps).materialize();
    rep.push(check_eq("d1", &cm.conv(hi, hh), &unit_counit)?);
    rep.push(check_eq(
        "d2",
        &(t![a, cm.h.mu] * t![cm.c_ha(), h] * t![h, rho * hi] * delta),
        &t![hi, cm.h.eta],
    )?);
    rep.push(check_eq(
        "d3",
        &twisted_action(cm, hi, hh),
        &t![a, cm.h.eps],
    )?);
    let c4_left = twisted_action(cm, hh, hi);
    rep.push(check_eq("d4", &c4_left, &(&cm.a.mu * t![a, cm.conv(hh, hi)]))?);
    rep.push(check_eq("d4-new", &c4_left, &t![a, cm.h.eps])?);
    Ok(rep)
}

/// `q_A = μ_A∘(A⊗h⁻¹)∘ρ_A`.
pub fn q_map(cm: &ComoduleMagma, w: &CleftWitness) -> Morphism {
    (&cm.a.mu * t![cm.ida(), w.h_inv] * &cm.rho).materialize()
}

/// Basic properties of a cleft extension. Returns `p_A` with `q_A = i_A∘p_A`
/// when (i) holds.
pub fn cleft_properties(
    cm: &ComoduleMagma,
    coinv: &CoinvariantData,
    w: &CleftWitness,
) -> Result<(Report, Option<Morphism>)> {
    let (a, h) = (cm.ida(), cm.idh());
    let (hh, hi) = (&w.h, &w.h_inv);
    let mut rep = Report::new("cleft-properties");
    let hi_h = cm.conv(hi, hh).materialize();
    let h_hi = cm.conv(hh, hi).materialize();
    let q = q_map(cm, w);
    match factor_through_equalizer(&coinv.eq, &h_hi) {
        Ok(_) => rep.push(Check::pass("i/conv")),
        Err(e) => rep.push(Check::fail("i/conv", e.to_string())),
    }
    let p_a = match factor_through_equalizer(&coinv.eq, &q) {
        Ok(p) => {
            rep.push(Check::pass("i/q"));
            Some(p)
        }
        Err(e) => {
            rep.push(Check::fail("i/q", e.to_string()));
            None
        }
    };
    rep.push(check_eq(
        "ii",
        &(&cm.a.mu * t![hi_h, a]),
        &(t![a, cm.h.eps_mu()] * t![cm.c_ha(), h] * t![h, cm.rho]),
    )?);
    rep.extend(check_chain(
        "iii",
        &[&cm.conv(&hi_h, hi), hi, &cm.conv(hi, &h_hi)],
    )?);
    rep.extend(check_chain(
        "iv",
        &[&cm.conv(hh, &hi_h), hh, &cm.conv(&h_hi, hh)],
    )?);
    rep.push(check_eq("v", &(&cm.a.mu * t![a, hi_h] * &cm.rho), &a)?);
    let vi = check_eq(
        "vi",
        &(&cm.a.mu * t![cm.a.mu, a] * t![a, q, hh] * t![a, cm.rho]),
        &cm.a.mu,
    )?;
    rep.push(vi);
    Ok((rep, p_a))
}

/// `(c2, ρ_A∘h⁻¹ = (h⁻¹⊗λ_H)∘c_{H,H}∘δ_H)`.
pub fn check_c2_equivalence(cm: &ComoduleMagma, w: &CleftWitness) -> Result<(bool, bool)> {
    let c2 = check_cleft(cm, w)?.get("c2").map(|c| c.passed).unwrap_or(false);
    let rhs = t![w.h_inv, cm.h.lambda] * cm.h.swap() * &cm.h.delta;
    let other = (&cm.rho * &w.h_inv).equals(&rhs);
    Ok((c2, other))
}

/// `(c4, μ_A∘(μ_A⊗h⁻¹)∘(A⊗ρ_A) = μ_A∘(A⊗q_A))`.
pub fn check_c4_equivalence(cm: &ComoduleMagma, w: &CleftWitness) -> Result<(bool, bool)> {
    let c4 = check_cleft(cm, w)?.get("c4").map(|c| c.passed).unwrap_or(false);
    let a = cm.ida();
    let lhs = &cm.a.mu * t![cm.a.mu, w.h_inv] * t![a, cm.rho];
    let rhs = &cm.a.mu * t![a, q_map(cm, w)];
    Ok((c4, lhs.equals(&rhs)))
}

/// Galois and normal-basis data built from a cleft witness.
#[derive(Clone, Debug)]
pub struct CleftToGalois {
    pub galois: GaloisWitness,
    pub normal_basis: NormalBasisWitness,
    pub p_a: Morphism,
    pub report: Report,
}

/// `γ_A⁻¹ = n_A∘(μ_A⊗A)∘(A⊗((h⁻¹⊗h)∘δ_H))∘i_{A⊗H}` and the normal basis from
/// `ω_A = μ_A∘(i_A⊗h)`, `ω'_A = (p_A⊗H)∘ρ_A`.
pub fn galois_from_cleft(ext: &Extension, w: &CleftWitness) -> Result<CleftToGalois> {
    let cm = &ext.cm;
    let (a, h) = (cm.ida(), cm.idh());
    let (coinv, toc, nab) = (&ext.coinv, &ext.toc, &ext.nabla);
    let mut rep = Report::new("galois-from-cleft");
    let gamma_inv = (&toc.n.arrow
        * t![cm.a.mu, a]
        * t![a, t![w.h_inv, w.h] * &cm.h.delta]
        * &nab.split.i)
        .materialize();
    let galois = GaloisWitness {
        gamma: ext.gamma.gamma.clone(),
        gamma_inv: gamma_inv.clone(),
    };
    let inverse_checks = galois.verify("gamma-inverse")?;
    let inverse_ok = inverse_checks.iter().all(|c| c.passed);
    rep.extend(inverse_checks);
    if !inverse_ok {
        return Err(Error::FactorizationFailure(
            "the cleft formula does not invert the canonical morphism".into(),
        ));
    }
    rep.push(check_gamma_inv_almost_lineal(cm, &gamma_inv, toc, nab)?);
    let (props, p_a) = cleft_properties(cm, coinv, w)?;
    let p_a = match p_a {
        Some(p) => p,
        None => factor_through_equalizer(&coinv.eq, &q_map(cm, w))?,
    };
    rep.absorb("properties", props);
    let i = &coinv.i;
    let omega_map = (&cm.a.mu * t![i, w.h]).materialize();
    let omega_prime = (t![p_a, h] * &cm.rho).materialize();
    let omega = (&omega_prime * &omega_map).materialize();
    rep.push(check_eq("omega-retraction", &(&omega_map * &omega_prime), &a)?);
    let h_hi = cm.conv(&w.h, &w.h_inv);
    rep.push(check_eq(
        "omega-ia",
        &(t![i, h] * &omega),
        &(t![cm.a.mu, h] * t![i, t![h_hi, h] * &cm.h.delta]),
    )?);
    let c = coinv.id();
    rep.push(check_eq(
        "old-equa",
        &(&p_a * &cm.a.mu * t![i, a]),
        &(&coinv.mu * t![c, p_a]),
    )?);
    rep.push(check_eq(
        "omega-fin",
        &omega,
        &(t![&coinv.mu * t![c, p_a], h] * t![c, &cm.rho * &w.h]),
    )?);
    let normal_basis = NormalBasisWitness::from_parts(&omega, &omega_prime, Some(&omega_map))?;
    rep.absorb("normal-basis", check_normal_basis(cm, coinv, &normal_basis)?);
    Ok(CleftToGalois {
        galois,
        normal_basis,
        p_a,
        report: rep,
    })
}

/// Cleft data built from Galois and normal-basis data.
#[derive(Clone, Debug)]
pub struct GaloisToCleft {
    pub cleft: CleftWitness,
    pub m_a: Morphism,
    pub report: Report,
}

/// `h = ω_A∘(η_{A^coH}⊗H)` with `ω_A = b_A⁻¹∘r_A`, and
/// `h⁻¹ = m_A∘γ_A⁻¹∘p_{A⊗H}∘(η_A⊗H)`.
pub fn cleft_from_galois(
    ext: &Extension,
    galois: &GaloisWitness,
    nbw: &NormalBasisWitness,
) -> Result<GaloisToCleft> {
    let cm = &ext.cm;
    let h = cm.idh();
    let (coinv, toc, nab) = (&ext.coinv, &ext.toc, &ext.nabla);
    let gi = &galois.gamma_inv;
    let mut rep = Report::new("cleft-from-galois");
    let almost = check_gamma_inv_almost_lineal(cm, gi, toc, nab)?;
    if !almost.passed {
        return Err(Error::AlmostLinealityRequired);
    }
    rep.push(almost);
    rep.absorb("galois-lemma", check_galois_lemma(cm, toc, nab, gi)?);
    let m_a = build_ma(cm, coinv, toc, nbw, None)?;
    rep.absorb("mA", check_ma(cm, coinv, toc, nab, gi, nbw, &m_a)?);
    let hh = (nbw.omega_map() * t![coinv.eta, h]).materialize();
    let hi = (&m_a * gi * &nab.split.p * t![cm.a.eta, h]).materialize();
    let mu_bar = factor_through_coequalizer(&toc.n, &cm.a.mu)?;
    rep.push(check_eq(
        "igualdadmsubAomega",
        &mu_bar,
        &(&cm.a.mu * t![m_a, hh] * &toc.rho2),
    )?);
    rep.push(check_eq(
        "igualdadmsubAomega-2",
        &mu_bar,
        &(t![cm.ida(), cm.h.eps] * &nab.split.i * &galois.gamma),
    )?);
    let w = CleftWitness { h: hh, h_inv: hi };
    rep.absorb("cleft", check_cleft(cm, &w)?);
    let (props, _) = cleft_properties(cm, coinv, &w)?;
    rep.absorb("properties", props);
    Ok(GaloisToCleft {
        cleft: w,
        m_a,
        report: rep,
    })
}

/// Where a round trip starts.
#[derive(Clone, Debug)]
pub enum Start {
    Cleft(CleftWitness),
    /// A normal-basis witness, with a candidate `γ_A⁻¹` or none to invert `γ_A` exactly.
    Galois(NormalBasisWitness, Option<Morphism>),
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub start: String,
    pub report: Report,
    /// True when every witness constructed along the way verified.
    pub round_trip: bool,
}

/// Runs one direction of the characterization and then the other.
pub fn round_trip(ext: &Extension, start: Start) -> Result<EquivalenceReport> {
    let cm = &ext.cm;
    let mut report = Report::new("round-trip");
    let exact = is_galois(&ext.gamma);
    let start_name;
    match start {
        Start::Cleft(w) => {
            start_name = "cleft";
            report.absorb("start.cleft", check_cleft(cm, &w)?);
            if !report.passed() {
                return Ok(finish(start_name, report));
            }
            let forward = galois_from_cleft(ext, &w)?;
            report.absorb("galois-from-cleft", forward.report.clone());
            match &exact {
                Ok(g) => report.push(check_eq(
                    "galois-from-cleft.matches-exact-inverse",
                    &forward.galois.gamma_inv,
                    &g.gamma_inv,
                )?),
                Err(e) => report.push(Check::fail(
                    "galois-from-cleft.matches-exact-inverse",
                    e.to_string(),
                )),
            }
            let back = cleft_from_galois(ext, &forward.galois, &forward.normal_basis)?;
            report.absorb("cleft-from-galois", back.report);
        }
        Start::Galois(nbw, candidate) => {
            start_name = "galois";
            let galois = match candidate {
                Some(gi) => GaloisWitness {
                    gamma: ext.gamma.gamma.clone(),
                    gamma_inv: gi,
                },
                None => match exact {
                    Ok(g) => g,
                    Err(e) => {
                        report.push(Check::fail("start.gamma-invertible", e.to_string()));
                        return Ok(finish(start_name, report));
                    }
                },
            };
            report.extend(galois.verify("start.gamma-inverse")?);
            report.absorb("start.normal-basis", check_normal_basis(cm, &ext.coinv, &nbw)?);
            let almost =
                check_gamma_inv_almost_lineal(cm, &galois.gamma_inv, &ext.toc, &ext.nabla)?;
            let mut almost = almost;
            almost.name = "start.almostlineal".into();
            report.push(almost);
            if !report.passed() {
                return Ok(finish(start_name, report));
            }
            let back = cleft_from_galois(ext, &galois, &nbw)?;
            report.absorb("cleft-from-galois", back.report.clone());
            let forward = galois_from_cleft(ext, &back.cleft)?;
            report.absorb("galois-from-cleft", forward.report);
            report.push(check_eq(
                "galois-from-cleft.matches-start-inverse",
                &forward.galois.gamma_inv,
                &galois.gamma_inv,
            )?);
        }
    }
    Ok(finish(start_name, report))
}

fn finish(start: &str, report: Report) -> EquivalenceReport {
    EquivalenceReport {
        start: start.to_string(),
        round_trip: report.passed(),
        report,
    }
}

/// The Hopf-quasigroup specialization: `∇_A = id`, `Ω_A = id`,
/// `b_A∘η_A = η_{A^coH}⊗η_H`, and `h∗h⁻¹ = h⁻¹∗h = η_A⊗ε_H` for the
/// reconstructed witness.
pub fn corollary_hq(ext: &Extension, w: &CleftWitness) -> Result<Report> {
    let cm = &ext.cm;
    let p = cm.projections();
    let eta_eps = cm.h.eta_eps();
    if !(p.pi_l.equals(&eta_eps) && p.pi_r.equals(&eta_eps)) {
        return Err(Error::NotAHopfQuasigroup);
    }
    let mut rep = Report::new("corollary-hq");
    rep.push(check_eq(
        "nabla-identity",
        &ext.nabla.nabla,
        &Morphism::id(cm.field(), &cm.a.space.tensor(&cm.h.space)),
    )?);
    rep.push(check_eq(
        "coinvariants-trivial-coaction",
        &(&cm.rho * &ext.coinv.i),
        &t![ext.coinv.i, cm.h.eta],
    )?);
    rep.absorb("start", check_cleft_hopf_quasigroup(cm, w)?);
    let forward = galois_from_cleft(ext, w)?;
    let nbw = &forward.normal_basis;
    rep.push(check_eq(
        "omega-identity",
        &nbw.omega,
        &Morphism::id(cm.field(), nbw.omega.dom()),
    )?);
    rep.push(check_eq(
        "b-unit",
        &(nbw.omega_prime() * &cm.a.eta),
        &t![ext.coinv.eta, cm.h.eta],
    )?);
    let back = cleft_from_galois(ext, &forward.galois, nbw)?;
    let (hh, hi) = (&back.cleft.h, &back.cleft.h_inv);
    let unit_counit = (&cm.a.eta * &cm.h.eps).materialize();
    rep.push(check_eq("h-conv-h-inv", &cm.conv(hh, hi), &unit_counit)?);
    rep.push(check_eq("h-inv-conv-h", &cm.conv(hi, hh), &unit_counit)?);
    rep.push(check_eq("h-total", &(hh * &cm.h.eta), &cm.a.eta)?);
    rep.absorb("reconstructed", check_cleft_hopf_quasigroup(cm, &back.cleft)?);
    Ok(rep)
}
