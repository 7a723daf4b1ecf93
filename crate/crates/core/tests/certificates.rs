//! Certificate examples on desk-scale instances, soundness re-checks of every
//! pass, and invariance under relabeling of the declared generators.

mod common;

use algcert::algebra::{AlgebraPresentation, Element};
use algcert::certificates::{
    certify, lemma2_generating_set, stagnation_probe, CertOptions, Certificate, Claim, Verdict,
};
use algcert::closure::{Side, Span, Structure};
use algcert::decomposition::{kh_split, z_grading};
use algcert::exec::Exec;
use algcert::field::FieldKind;
use algcert::instances::{build_example1, build_example2, build_matrix_algebra, MatrixInvolution};
use algcert::linalg::Subspace;
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldKind = FieldKind::Rational;

fn matrix(n: usize, inv: MatrixInvolution) -> AlgebraPresentation {
    build_matrix_algebra(n, Q, inv).unwrap()
}

fn cert(p: &AlgebraPresentation, claim: Claim) -> Certificate {
    certify(p, claim, "e", &CertOptions::default()).unwrap()
}

fn elements(s: &Subspace) -> Vec<Element> {
    s.basis().iter().cloned().map(Element::new).collect()
}

fn final_ints(c: &Certificate) -> Vec<Vec<i64>> {
    subspace_ints(c.trace.as_ref().unwrap().final_span.single().unwrap())
}

/// Re-applies the structure's products to the final basis and checks that
/// nothing escapes.
fn closed(p: &AlgebraPresentation, structure: Structure, span: &Span) -> bool {
    let inside = |s: &Subspace, x: &Element| s.contains(x.coords()).unwrap();
    match (structure, span) {
        (Structure::Lie, Span::Single(s)) => {
            let b = elements(s);
            b.iter().all(|x| b.iter().all(|y| inside(s, &p.commutator(x, y).unwrap())))
        }
        (Structure::Associative, Span::Single(s)) => {
            let b = elements(s);
            b.iter().all(|x| b.iter().all(|y| inside(s, &p.multiply(x, y).unwrap())))
        }
        (_, Span::Pair { minus, plus }) => {
            let triple = |a: &Element, b: &Element, c: &Element| {
                if structure == Structure::JordanPair {
                    p.triple_jordan(a, b, c).unwrap()
                } else {
                    p.triple_assoc(a, b, c).unwrap()
                }
            };
            let (m, pl) = (elements(minus), elements(plus));
            let side_ok = |xs: &[Element], ys: &[Element], s: &Subspace| {
                xs.iter().all(|a| ys.iter().all(|b| xs.iter().all(|c| inside(s, &triple(a, b, c)))))
            };
            side_ok(&m, &pl, minus) && side_ok(&pl, &m, plus)
        }
        _ => false,
    }
}

#[test]
fn every_pass_is_closed_and_matches_its_target() {
    let instances = vec![
        matrix(2, MatrixInvolution::None),
        matrix(3, MatrixInvolution::Transpose),
        matrix(3, MatrixInvolution::Flip),
        matrix(4, MatrixInvolution::Flip),
        matrix(2, MatrixInvolution::Symplectic),
        build_example1(3, Q).unwrap(),
        build_example2(2, Q).unwrap(),
    ];
    let mut checked = 0;
    for p in &instances {
        for claim in Claim::ALL {
            let c = cert(p, claim);
            if c.verdict != Verdict::Pass {
                continue;
            }
            let (Some(trace), Some(target), Some(gens)) = (&c.trace, &c.target, &c.generators) else {
                continue;
            };
            assert_eq!(&trace.final_span, target, "{} {claim}", p.name());
            assert!(closed(p, gens.structure, &trace.final_span), "{} {claim}", p.name());
            checked += 1;
        }
    }
    assert!(checked >= 20, "only {checked} generation passes");
}

#[test]
fn commutator_claims_on_matrix_algebras() {
    for n in 2..=3 {
        let p = matrix(n, MatrixInvolution::None);
        for claim in [Claim::Lemma1, Claim::Theorem1] {
            let c = cert(&p, claim);
            assert_eq!(c.verdict, Verdict::Pass);
            assert!(same_span(&final_ints(&c), &derived(n, &units(n))));
        }
        assert_eq!(cert(&p, Claim::Lemma3).verdict, Verdict::Pass);
    }
    let ex1 = build_example1(8, Q).unwrap();
    let c = cert(&ex1, Claim::Lemma1);
    assert_eq!(c.verdict, Verdict::HypothesisNotMet);
    assert!(c.failed_hypotheses.iter().any(|h| h == "R(1-e)R = R"));
}

#[test]
fn pair_generating_set_with_explicit_complement() {
    let opts = CertOptions::default();
    let p = matrix(2, MatrixInvolution::None);
    let f = p.basis_element(3);
    let set = lemma2_generating_set(&p, p.named("e").unwrap(), Some(&f), &opts).unwrap().unwrap();
    assert_eq!(set.d, 1);
    let minus: Vec<Vec<i64>> = set.minus().iter().map(to_ints).collect();
    let plus: Vec<Vec<i64>> = set.plus().iter().map(to_ints).collect();
    assert!(same_span(&minus, &[unit(2, 1, 2)]));
    assert!(same_span(&plus, &[unit(2, 2, 1)]));

    let p = matrix(3, MatrixInvolution::None);
    let f = &p.basis_element(4) + &p.basis_element(8);
    let set = lemma2_generating_set(&p, p.named("e").unwrap(), Some(&f), &opts).unwrap().unwrap();
    assert_eq!((set.components.0.rank(), set.components.1.rank()), (2, 2));
    for w in &set.witnesses {
        assert!(w.length <= set.d);
    }

    let not_idempotent = &p.basis_element(4) + &p.basis_element(4);
    let failed = lemma2_generating_set(&p, p.named("e").unwrap(), Some(&not_idempotent), &opts).unwrap().unwrap_err();
    assert_eq!(failed, vec!["f^2 = f".to_string()]);
}

#[test]
fn skew_claims_on_flip_instances() {
    for (n, rank) in [(3, 3), (4, 6)] {
        let p = matrix(n, MatrixInvolution::Flip);
        for claim in [Claim::Lemma4, Claim::Lemma5, Claim::Lemma6, Claim::Lemma7, Claim::Theorem2, Claim::Lemma9] {
            assert_eq!(cert(&p, claim).verdict, Verdict::Pass, "M{n} {claim}");
        }
        let c = cert(&p, Claim::Lemma6);
        let oracle = lie_closure(n, &derived(n, &flip_skew(n)));
        assert_eq!(oracle.len(), rank);
        assert!(same_span(&final_ints(&c), &oracle));
        let c = cert(&p, Claim::Lemma4);
        for side in c.detail["sides"].as_array().unwrap() {
            assert_eq!(side["polarization_matches_circle_span"], true);
        }
        // s != 0 here, so the e + e* = 1 claim does not apply.
        assert_eq!(cert(&p, Claim::Lemma8).verdict, Verdict::HypothesisNotMet);
    }
}

#[test]
fn flip_m3_gradings_by_hand() {
    let p = matrix(3, MatrixInvolution::Flip);
    let kh = kh_split(&p, Some(&z_grading(&p, p.named("e").unwrap()).unwrap())).unwrap();
    assert!(kh.k_deg(2).is_zero());
    assert!(same_span(&subspace_ints(kh.h_deg(2)), &[unit(3, 3, 1)]));
    assert!(same_span(&subspace_ints(kh.k_deg(1)), &[sub(&unit(3, 3, 2), &unit(3, 2, 1))]));
}

#[test]
fn symplectic_m2() {
    let p = matrix(2, MatrixInvolution::Symplectic);
    let c = cert(&p, Claim::Lemma8);
    assert_eq!(c.verdict, Verdict::Pass);
    let kh = kh_split(&p, Some(&z_grading(&p, p.named("e").unwrap()).unwrap())).unwrap();
    assert!(same_span(&subspace_ints(kh.k_deg(-2)), &[unit(2, 1, 2)]));
    assert!(same_span(&subspace_ints(kh.k_deg(2)), &[unit(2, 2, 1)]));
    for claim in [Claim::Lemma4, Claim::Lemma6, Claim::Theorem2] {
        let c = cert(&p, claim);
        assert_eq!(c.verdict, Verdict::HypothesisNotMet, "{claim}");
        assert_eq!(c.failed_hypotheses, vec!["R(1-e-e*)R = R".to_string()]);
    }
}

#[test]
fn semiprime_check() {
    let p = matrix(2, MatrixInvolution::Transpose);
    assert_eq!(cert(&p, Claim::Lemma9).verdict, Verdict::Pass);
    let k = sub(&unit(2, 1, 2), &unit(2, 2, 1));
    assert_eq!(mul(2, &mul(2, &k, &k), &k), neg(&k));

    let ex2 = build_example2(2, Q).unwrap();
    let c = cert(&ex2, Claim::Lemma9);
    assert_eq!(c.verdict, Verdict::HypothesisNotMet);
    let witnesses: Vec<&str> = c.detail["witnesses"].as_array().unwrap().iter().map(|w| w.as_str().unwrap()).collect();
    assert!(witnesses.iter().any(|w| w.contains('x')), "{witnesses:?}");
}

#[test]
fn theorems_refuse_counterexamples() {
    for d in 1..=4 {
        let ex1 = build_example1(d, Q).unwrap();
        let ex2 = build_example2(d, Q).unwrap();
        for (p, claim) in [(&ex1, Claim::Theorem1), (&ex1, Claim::Theorem2), (&ex2, Claim::Theorem2)] {
            assert_eq!(cert(p, claim).verdict, Verdict::HypothesisNotMet, "{} {claim}", p.name());
        }
        // The truncated m2_example2 does satisfy the commutator hypotheses.
        assert_ne!(cert(&ex2, Claim::Theorem1).verdict, Verdict::Fail);
    }
}

#[test]
fn probe_reaches_generated_targets() {
    let p = matrix(2, MatrixInvolution::None);
    let target = algcert::certificates::derived_subspace(&p, Exec::Sequential).unwrap();
    let c = stagnation_probe(&p, &target.closure, 20, 2, 1, Exec::Sequential).unwrap();
    assert_eq!(c.verdict, Verdict::Fail);
    assert_eq!(c.detail["reached_target"], true);
}

#[test]
fn seeded_claims_replay() {
    let p = matrix(4, MatrixInvolution::Flip);
    let opts = CertOptions {
        seed: 42,
        ..CertOptions::default()
    };
    for claim in [Claim::Lemma7, Claim::Lemma9, Claim::Theorem1, Claim::Stagnation] {
        let a = certify(&p, claim, "e", &opts).unwrap();
        let b = certify(&p, claim, "e", &CertOptions { exec: Exec::Sequential, ..opts.clone() }).unwrap();
        assert_eq!(a, b, "{claim}");
    }
}

fn relabeled(p: &AlgebraPresentation, seed: u64) -> AlgebraPresentation {
    let mut gens = p.generators().to_vec();
    gens.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut q = p.clone();
    q.set_generators(gens);
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn theorem1_ignores_generator_order(seed in any::<u64>()) {
        let p = matrix(3, MatrixInvolution::None);
        let q = relabeled(&p, seed);
        let (a, b) = (cert(&p, Claim::Theorem1), cert(&q, Claim::Theorem1));
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(&a.trace.unwrap().final_span, &b.trace.unwrap().final_span);
    }

    #[test]
    fn theorem2_ignores_generator_order(seed in any::<u64>()) {
        let p = matrix(3, MatrixInvolution::Flip);
        let q = relabeled(&p, seed);
        let (a, b) = (cert(&p, Claim::Theorem2), cert(&q, Claim::Theorem2));
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(&a.trace.unwrap().final_span, &b.trace.unwrap().final_span);
    }
}

#[test]
fn pair_generators_carry_sides() {
    let p = matrix(3, MatrixInvolution::None);
    let c = cert(&p, Claim::Lemma2);
    let gens = c.generators.unwrap();
    assert_eq!(gens.structure, Structure::AssocPair);
    assert_eq!(gens.side(Side::Minus).len(), 2);
    assert_eq!(gens.side(Side::Plus).len(), 2);
}
