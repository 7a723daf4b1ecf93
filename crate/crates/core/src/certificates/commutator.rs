//! Claims about `[R, R]`: generation by the off-diagonal Peirce pair, its
//! finite generating set, the passage to the Jordan pair, and the full
//! pipeline for idempotents with `ReR = R(1-e)R = R`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use super::words::lemma2_generating_set;
use super::{
    derived_subspace, elements_of, hyp, random_in, report_for, rng, CertOptions, Certificate, Claim,
    Hypotheses,
};
use crate::algebra::{AlgebraPresentation, Element};
use crate::closure::{lie_span, pair_span, word_budget, GeneratorSet, Side, Span, Structure};
use crate::decomposition::peirce_decompose;
use crate::error::{Error, Result};
use crate::linalg::{Subspace, Vector};

/// `[R,R]` is the Lie closure of `eR(1-e) + (1-e)Re` when `R(1-e)R = R`.
pub fn lemma1_certificate(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    p.check_element(e)?;
    let mut h = Hypotheses::default();
    h.require(p.is_idempotent(e), hyp::IDEMPOTENT);
    if h.ok() {
        h.require(report_for(p, e).complement_ideal_full, hyp::COMPLEMENT);
    }
    if !h.ok() {
        return Ok(Certificate::not_met(Claim::Lemma1, h.into_failed()));
    }
    let peirce = peirce_decompose(p, e)?;
    let off = peirce.e_r_f().sum(peirce.f_r_e())?;
    let gens = GeneratorSet::from_elements(Structure::Lie, "peirce", "eR(1-e) + (1-e)Re basis", &elements_of(&off))?;
    let trace = lie_span(p, &gens.elements(), opts.exec)?;
    let target = derived_subspace(p, opts.exec)?;
    let detail = json!({
        "peirce_dims": peirce.dims(),
        "derived_span_rank": target.span.rank(),
        "derived_rank": target.rank(),
    });
    Ok(Certificate::compare(Claim::Lemma1, gens, trace, Span::Single(target.closure), true, detail))
}

/// The words of length `<= 3d + 1` generate the associative pair `(eR(1-e), (1-e)Re)`.
pub fn lemma2_certificate(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    let set = match lemma2_generating_set(p, e, None, opts)? {
        Ok(s) => s,
        Err(failed) => return Ok(Certificate::not_met(Claim::Lemma2, failed)),
    };
    let trace = pair_span(p, Structure::AssocPair, &set.minus(), &set.plus(), opts.exec)?;
    let (minus, plus) = set.components.clone();
    let detail = json!({
        "d": set.d,
        "max_word_len": set.max_word_len,
        "words_enumerated": set.words_enumerated,
        "component_dims": [minus.rank(), plus.rank()],
        "witnesses": set.witnesses,
    });
    Ok(Certificate::compare(
        Claim::Lemma2,
        set.generators,
        trace,
        Span::Pair { minus, plus },
        true,
        detail,
    ))
}

/// Monomials `x_{i1} y x_{i2} y ... x_{ik}` with pairwise distinct `x`
/// indices, built level by level. A monomial is kept, and extended further,
/// only if it enlarges the span of the monomials kept so far, so the result
/// is a subset of the full distinct-index family.
pub(crate) fn distinct_index_monomials(p: &AlgebraPresentation, xs: &[Element], ys: &[Element], budget: usize) -> Result<Vec<Element>> {
    let mut span = Subspace::zero(p.field(), p.dim());
    let mut out = Vec::new();
    let mut frontier: Vec<(Element, Vec<bool>)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        if span.push(x.coords()) {
            let mut used = vec![false; xs.len()];
            used[i] = true;
            out.push(x.clone());
            frontier.push((x.clone(), used));
        }
    }
    let mut count = xs.len();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, used) in &frontier {
            for y in ys {
                let wy = p.mul(w, y);
                for (i, x) in xs.iter().enumerate() {
                    if used[i] {
                        continue;
                    }
                    count += 1;
                    if count > budget {
                        return Err(Error::BudgetExceeded { cap: budget });
                    }
                    let v = p.mul(&wy, x);
                    if span.push(v.coords()) {
                        let mut u = used.clone();
                        u[i] = true;
                        out.push(v.clone());
                        next.push((v, u));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Jordan-pair generators built from associative-pair generators.
pub(crate) fn jordan_generators(p: &AlgebraPresentation, minus: &[Element], plus: &[Element]) -> Result<(Vec<Element>, Vec<Element>)> {
    let budget = word_budget();
    Ok((
        distinct_index_monomials(p, minus, plus, budget)?,
        distinct_index_monomials(p, plus, minus, budget)?,
    ))
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub samples: usize,
    pub seed: u64,
    /// identity name -> (instances checked, failures)
    pub checks: BTreeMap<String, (usize, usize)>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.values().all(|&(_, bad)| bad == 0)
    }

    pub fn holds(&self, name: &str) -> bool {
        self.checks.get(name).is_some_and(|&(n, bad)| n > 0 && bad == 0)
    }

    fn record(&mut self, name: &str, ok: bool) {
        let e = self.checks.entry(name.to_string()).or_default();
        e.0 += 1;
        if !ok {
            e.1 += 1;
        }
    }
}

pub const J1: &str = "J1";
pub const J2: &str = "J2";
pub const J3: &str = "J3";
pub const SYMMETRIZED: &str = "symmetrized (1)";
pub const LINEARIZED: &str = "linearized (2)";
pub const TRANSFER: &str = "transfer";

/// Evaluates the selected identities on `samples` random substitutions for
/// each side `σ` of the pair `(minus, plus)`.
pub(crate) fn check_identities(
    p: &AlgebraPresentation,
    minus: &[Vector],
    plus: &[Vector],
    names: &[&str],
    samples: usize,
    seed: u64,
) -> IdentityReport {
    let mut rng = rng(seed);
    let mut rep = IdentityReport {
        samples,
        seed,
        checks: BTreeMap::new(),
    };
    let jt = |a: &Element, b: &Element, c: &Element| p.jtriple(a, b, c);
    for _ in 0..samples {
        for (same, opp) in [(plus, minus), (minus, plus)] {
            let mut a = || random_in(p, &mut rng, same);
            let (x, u, u2, z_same) = (a(), a(), a(), a());
            let mut b = || random_in(p, &mut rng, opp);
            let (y, v, z) = (b(), b(), b());
            for &name in names {
                let ok = match name {
                    J1 => jt(&x, &y, &jt(&x, &z, &x)) == jt(&x, &jt(&y, &x, &z), &x),
                    J2 => jt(&jt(&x, &y, &x), &y, &z_same) == jt(&x, &jt(&y, &x, &y), &z_same),
                    J3 => {
                        let q = jt(&x, &y, &x);
                        jt(&q, &z, &q) == jt(&x, &jt(&y, &jt(&x, &z, &x), &y), &x)
                    }
                    SYMMETRIZED => {
                        let xyu = p.mul3(&x, &y, &u);
                        let lhs = &p.mul3(&xyu, &v, &u) + &p.mul3(&p.mul3(&u, &v, &x), &y, &u);
                        lhs == jt(&xyu, &v, &u)
                    }
                    LINEARIZED => {
                        let xy = p.mul(&x, &y);
                        let lhs = p.mul(&xy, &jt(&u, &v, &u2));
                        let rhs = &(&jt(&p.mul(&xy, &u), &v, &u2) + &jt(&p.mul(&xy, &u2), &v, &u))
                            - &jt(&u, &p.mul(&v, &xy), &u2);
                        lhs == rhs
                    }
                    TRANSFER => jt(&x, &y, &u) == p.bracket(&p.bracket(&x, &y), &u),
                    other => panic!("unknown identity {other}"),
                };
                rep.record(name, ok);
            }
        }
    }
    rep
}

/// Jordan pair axioms, the symmetrized and linearized identities, and the
/// bracket transfer identity on the pair `(eR(1-e), (1-e)Re)`.
pub fn identity_suite(p: &AlgebraPresentation, e: &Element, samples: usize, seed: u64) -> Result<IdentityReport> {
    p.check_element(e)?;
    if !p.is_idempotent(e) {
        return Err(Error::NotIdempotent(p.display(e)));
    }
    let peirce = peirce_decompose(p, e)?;
    Ok(check_identities(
        p,
        peirce.e_r_f().basis(),
        peirce.f_r_e().basis(),
        &[J1, J2, J3, SYMMETRIZED, LINEARIZED, TRANSFER],
        samples,
        seed,
    ))
}

/// The Jordan pair of `(eR(1-e), (1-e)Re)` is generated by the
/// distinct-index monomials in the associative-pair generators.
pub fn lemma3_jordan_check(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    let set = match lemma2_generating_set(p, e, None, opts)? {
        Ok(s) => s,
        Err(failed) => return Ok(Certificate::not_met(Claim::Lemma3, failed)),
    };
    let (cm, cp) = &set.components;
    let ids = check_identities(p, cm.basis(), cp.basis(), &[SYMMETRIZED, LINEARIZED], opts.samples, opts.seed);
    let (minus, plus) = (set.minus(), set.plus());
    let (jm, jp) = jordan_generators(p, &minus, &plus)?;
    let jordan = pair_span(p, Structure::JordanPair, &jm, &jp, opts.exec)?;
    let assoc = pair_span(p, Structure::AssocPair, &minus, &plus, opts.exec)?;
    let gens = GeneratorSet::pair(Structure::JordanPair, "distinct-index monomial", &jm, &jp)?;
    let detail = json!({
        "identities": ids,
        "monomials": [jm.len(), jp.len()],
        "assoc_pair_dims": [assoc.pair().0.rank(), assoc.pair().1.rank()],
    });
    Ok(Certificate::compare(Claim::Lemma3, gens, jordan, assoc.final_span, ids.all_hold(), detail).with_seed(opts.seed))
}

/// Full pipeline: pair generators, Jordan-pair generators, Lie closure,
/// compared with `[R, R]`.
pub fn theorem1_certify(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    p.check_element(e)?;
    let mut h = Hypotheses::default();
    h.require(p.validate().is_clean(), hyp::VALID);
    h.require(p.is_idempotent(e), hyp::IDEMPOTENT);
    if h.ok() {
        let rep = report_for(p, e);
        h.require(rep.rer_full, hyp::RER);
        h.require(rep.complement_ideal_full, hyp::COMPLEMENT);
    }
    if !h.ok() {
        return Ok(Certificate::not_met(Claim::Theorem1, h.into_failed()));
    }
    let set = match lemma2_generating_set(p, e, None, opts)? {
        Ok(s) => s,
        Err(failed) => return Ok(Certificate::not_met(Claim::Theorem1, failed)),
    };
    let (minus, plus) = (set.minus(), set.plus());
    let (jm, jp) = jordan_generators(p, &minus, &plus)?;
    let jordan = pair_span(p, Structure::JordanPair, &jm, &jp, opts.exec)?;
    let (cm, cp) = &set.components;
    let jordan_full = jordan.pair() == (cm, cp);

    let mut gens = GeneratorSet::new(Structure::Lie);
    for (side, xs) in [(Side::Minus, &jm), (Side::Plus, &jp)] {
        for (i, x) in xs.iter().enumerate() {
            gens.push(format!("j{side}{i}"), x.clone(), &format!("jordan pair generator ({side})"), None)?;
        }
    }
    let trace = lie_span(p, &gens.elements(), opts.exec)?;
    let target = derived_subspace(p, opts.exec)?;
    let ids = check_identities(p, cm.basis(), cp.basis(), &[TRANSFER], opts.samples, opts.seed);
    let detail = json!({
        "d": set.d,
        "max_word_len": set.max_word_len,
        "pair_generators": [minus.len(), plus.len()],
        "pair_dims": [cm.rank(), cp.rank()],
        "jordan_generators": [jm.len(), jp.len()],
        "jordan_closure_is_pair": jordan_full,
        "transfer_identity": ids,
        "derived_rank": target.rank(),
        "final_rank": trace.final_rank(),
    });
    let ok = ids.all_hold() && jordan_full;
    Ok(Certificate::compare(Claim::Theorem1, gens, trace, Span::Single(target.closure), ok, detail).with_seed(opts.seed))
}
