//! Randomized stagnation probes on truncated counterexamples, and the
//! desk-scale checks for simple and semiprime algebras.

use rand::Rng;
use serde_json::json;

use super::{elements_of, hyp, random_in, rng, CertOptions, Certificate, Claim, Hypotheses};
use crate::algebra::{ideal_closure, AlgebraPresentation, Element};
use crate::closure::{assoc_span, lie_span, GeneratorSet, Span, Structure};
use crate::decomposition::{kh_split, z_grading_with};
use crate::error::Result;
use crate::exec::Exec;
use crate::linalg::Subspace;

/// Closes `trials` random generator sets of size at most `max_gen` drawn
/// from `target`. Passes when every closure stays strictly below `target`;
/// fails as soon as one trial reaches it.
pub fn stagnation_probe(
    p: &AlgebraPresentation,
    target: &Subspace,
    trials: usize,
    max_gen: usize,
    seed: u64,
    exec: Exec,
) -> Result<Certificate> {
    let max_gen = max_gen.max(1);
    let basis = target.basis();
    let runs = exec.map_range(trials, |t| -> Result<(usize, usize)> {
        let mut r = rng(seed.wrapping_add(t as u64));
        let g = r.gen_range(1..=max_gen);
        let gens: Vec<Element> = (0..g).map(|_| random_in(p, &mut r, basis)).collect();
        Ok((g, lie_span(p, &gens, Exec::Sequential)?.final_rank()))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let ranks: Vec<usize> = runs.iter().map(|r| r.1).collect();
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let reached = ranks.iter().any(|&r| r == target.rank());
    let within_gen_count = runs.iter().all(|&(g, r)| r <= g);
    let abelian = brackets_vanish(p, target);
    let detail = json!({
        "target_rank": target.rank(),
        "trials": trials,
        "max_gen": max_gen,
        "ranks": ranks,
        "max_rank": max_rank,
        "every_rank_at_most_generator_count": within_gen_count,
        "target_bracket_abelian": abelian,
        "reached_target": reached,
    });
    let mut cert = Certificate::checked(Claim::Stagnation, !reached, detail).with_seed(seed);
    cert.target = Some(Span::Single(target.clone()));
    Ok(cert)
}

fn brackets_vanish(p: &AlgebraPresentation, s: &Subspace) -> bool {
    let b = elements_of(s);
    b.iter().all(|x| b.iter().all(|y| p.bracket(x, y).is_zero()))
}

/// Every ideal generated by one basis vector, or one vector of a `K` basis.
fn principal_ideals(p: &AlgebraPresentation) -> Result<Vec<Subspace>> {
    let mut seeds = p.basis_elements();
    if p.has_involution() {
        seeds.extend(elements_of(&kh_split(p, None)?.k));
    }
    Ok(seeds.iter().map(|x| ideal_closure(p, std::slice::from_ref(x))).collect())
}

fn squares_to_zero(p: &AlgebraPresentation, ideal: &Subspace) -> bool {
    let b = elements_of(ideal);
    b.iter().all(|x| b.iter().all(|y| p.mul(x, y).is_zero()))
}

/// `R` is generated by `K_{-2} + K_2` when `R` is simple and `e + e* = 1`.
pub fn lemma8_check(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    p.check_element(e)?;
    let mut h = Hypotheses::default();
    h.require(p.has_involution(), hyp::INVOLUTION);
    h.require(p.is_idempotent(e), hyp::IDEMPOTENT);
    if !h.ok() {
        return Ok(Certificate::not_met(Claim::Lemma8, h.into_failed()));
    }
    let es = p.star(e);
    h.require(p.mul(e, &es).is_zero() && p.mul(&es, e).is_zero(), hyp::ORTHOGONAL);
    h.require(p.unit().is_some_and(|u| *u == e + &es), hyp::S_ZERO);
    h.require(principal_ideals(p)?.iter().all(|i| i.is_zero() || i.is_full()), hyp::SIMPLE);
    if !h.ok() {
        return Ok(Certificate::not_met(Claim::Lemma8, h.into_failed()));
    }
    let grading = z_grading_with(p, e, opts.exec)?;
    let kh = kh_split(p, Some(&grading))?;
    let seeds: Vec<Element> = [-2, 2].iter().flat_map(|&d| elements_of(kh.k_deg(d))).collect();
    let gens = GeneratorSet::from_elements(Structure::Associative, "k", "K_{-2} ∪ K_2 basis", &seeds)?;
    let trace = assoc_span(p, &seeds, opts.exec)?;
    let detail = json!({
        "grading_dims": grading.dims(),
        "k_minus2_dim": kh.k_deg(-2).rank(),
        "k2_dim": kh.k_deg(2).rank(),
        "desk_scale": "simplicity checked on ideals generated by single basis and K-basis vectors",
    });
    let full = Span::Single(Subspace::full(p.field(), p.dim()));
    Ok(Certificate::compare(Claim::Lemma8, gens, trace, full, true, detail))
}

/// In a semiprime algebra with involution, `kKk = 0` forces `k = 0`.
///
/// Without semiprimeness the certificate is hypothesis-not-met and, when one
/// exists, names a nonzero `k ∈ K` with `kKk = 0`.
pub fn lemma9_check(p: &AlgebraPresentation, opts: &CertOptions) -> Result<Certificate> {
    if !p.has_involution() {
        return Ok(Certificate::not_met(Claim::Lemma9, vec![hyp::INVOLUTION.into()]));
    }
    let k = kh_split(p, None)?.k;
    let kb = elements_of(&k);
    let kills = |x: &Element| kb.iter().all(|b| p.mul3(x, b, x).is_zero());

    let nilpotent: Vec<Subspace> = principal_ideals(p)?
        .into_iter()
        .filter(|i| !i.is_zero() && squares_to_zero(p, i))
        .collect();
    if let Some(largest) = nilpotent.iter().map(Subspace::rank).max() {
        // One witness per distinct square-zero ideal; the first found in K ∩ I.
        let mut seen: Vec<&Subspace> = Vec::new();
        let mut witnesses = Vec::new();
        for ideal in &nilpotent {
            if seen.contains(&ideal) {
                continue;
            }
            seen.push(ideal);
            let inside = k.intersect(ideal)?;
            if let Some(w) = elements_of(&inside).into_iter().find(|x| !x.is_zero() && kills(x)) {
                witnesses.push(p.display(&w));
            }
        }
        witnesses.sort();
        witnesses.dedup();
        let mut cert = Certificate::not_met(Claim::Lemma9, vec![hyp::SEMIPRIME.into()]);
        cert.detail = json!({
            "square_zero_ideals": seen.len(),
            "largest_square_zero_ideal_dim": largest,
            "witnesses": witnesses,
        });
        return Ok(cert);
    }

    let mut r = rng(opts.seed);
    let mut random_failures = 0;
    for _ in 0..opts.samples {
        let x = random_in(p, &mut r, k.basis());
        if !x.is_zero() && kills(&x) {
            random_failures += 1;
        }
    }
    let basis_failures = kb.iter().filter(|x| kills(x)).count();
    let detail = json!({
        "k_dim": k.rank(),
        "samples": opts.samples,
        "random_failures": random_failures,
        "basis_failures": basis_failures,
        "desk_scale": "semiprimeness checked on ideals generated by single basis and K-basis vectors",
    });
    Ok(Certificate::checked(Claim::Lemma9, random_failures == 0 && basis_failures == 0, detail).with_seed(opts.seed))
}
