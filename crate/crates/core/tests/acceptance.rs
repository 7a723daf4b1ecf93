//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use algcert::algebra::{AlgebraPresentation, Element};
use algcert::certificates::{
    certify, derived_k_subspace, derived_subspace, identity_suite, lemma2_generating_set, lemma5_sets, CertOptions, Certificate,
    Claim, Verdict,
};
use algcert::closure::{closure, stable_word_span, GeneratorSet, Structure};
use algcert::decomposition::{peirce_decompose, z_grading};
use algcert::field::FieldKind;
use algcert::format::to_canonical_json;
use algcert::instances::{
    build_example1, build_example2, build_matrix_algebra, build_truncated_polynomial, example1_upper_component,
    example2_x_component, MatrixInvolution,
};
use algcert::linalg::Subspace;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const Q: FieldKind = FieldKind::Rational;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn matrix(n: usize, inv: MatrixInvolution) -> AlgebraPresentation {
    build_matrix_algebra(n, Q, inv).unwrap()
}

fn e_of(p: &AlgebraPresentation) -> Element {
    p.named("e").unwrap().clone()
}

fn run(p: &AlgebraPresentation, claim: Claim) -> (Certificate, Duration) {
    let t = Instant::now();
    let cert = certify(p, claim, "e", &CertOptions::default()).unwrap();
    (cert, t.elapsed())
}

fn final_span(cert: &Certificate) -> &Subspace {
    cert.trace.as_ref().expect("trace").final_span.single().expect("single span")
}

fn criterion1() -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=4 {
        let p = matrix(n, MatrixInvolution::None);
        let (cert, took) = run(&p, Claim::Theorem1);
        ensure(cert.verdict == Verdict::Pass, format!("M{n}: verdict {:?}", cert.verdict))?;
        let got = subspace_ints(final_span(&cert));
        ensure(got.len() == n * n - 1, format!("M{n}: rank {}", got.len()))?;
        let oracle = derived(n, &units(n));
        ensure(same_span(&got, &oracle), format!("M{n}: closure differs from brute-force [R,R]"))?;
        ensure(took < Duration::from_secs(10), format!("M{n}: {took:?}"))?;
        notes.push(format!("n={n} rank {} in {:.2}s", got.len(), took.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn criterion2() -> Outcome {
    let mut notes = Vec::new();
    for (n, expected) in [(3, 3), (4, 6)] {
        let p = matrix(n, MatrixInvolution::Flip);
        let (cert, took) = run(&p, Claim::Theorem2);
        ensure(cert.verdict == Verdict::Pass, format!("M{n} flip: verdict {:?}", cert.verdict))?;
        let got = subspace_ints(final_span(&cert));
        ensure(got.len() == expected, format!("M{n} flip: rank {}", got.len()))?;
        let library = derived_k_subspace(&p, Default::default()).unwrap();
        ensure(*final_span(&cert) == library.closure, "differs from derived_k_subspace")?;
        let k = flip_skew(n);
        let oracle = lie_closure(n, &derived(n, &k));
        ensure(same_span(&got, &oracle), format!("M{n} flip: closure differs from brute-force [K,K]"))?;
        ensure(took < Duration::from_secs(30), format!("M{n} flip: {took:?}"))?;
        notes.push(format!("n={n} rank {} in {:.2}s", got.len(), took.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn criterion3() -> Outcome {
    let mut notes = Vec::new();
    for (n, dim) in [(2, 1), (3, 2)] {
        let p = matrix(n, MatrixInvolution::None);
        let set = lemma2_generating_set(&p, &e_of(&p), None, &CertOptions::default()).unwrap().unwrap();
        let trace = closure(&p, &set.generators, Default::default()).unwrap();
        let (minus, plus) = trace.pair();
        // eR(1-e) = first row off the diagonal; (1-e)Re = first column.
        let row: Vec<Mat> = (2..=n).map(|j| unit(n, 1, j)).collect();
        let col: Vec<Mat> = (2..=n).map(|i| unit(n, i, 1)).collect();
        ensure(same_span(&subspace_ints(minus), &row), format!("M{n}: minus side"))?;
        ensure(same_span(&subspace_ints(plus), &col), format!("M{n}: plus side"))?;
        ensure(minus.rank() == dim && plus.rank() == dim, format!("M{n}: dims"))?;
        ensure(set.max_word_len == 3 * set.d + 1, "word bound")?;
        notes.push(format!("M{n} d={} dims ({dim},{dim})", set.d));
    }
    Ok(notes.join(", "))
}

fn criterion4() -> Outcome {
    for n in [3, 4] {
        let p = matrix(n, MatrixInvolution::Flip);
        let (cert, _) = run(&p, Claim::Lemma4);
        ensure(cert.verdict == Verdict::Pass, format!("M{n} flip: verdict {:?}", cert.verdict))?;
        for side in cert.detail["sides"].as_array().unwrap() {
            ensure(side["k_equality"] == true && side["h_equality"] == true, "subspace equality")?;
        }
    }
    // k = E32 - E21 squares to -E31, computed both here and in the certificate.
    let n = 3;
    let k = sub(&unit(n, 3, 2), &unit(n, 2, 1));
    ensure(mul(n, &k, &k) == neg(&unit(n, 3, 1)), "hand witness")?;
    let p = matrix(3, MatrixInvolution::Flip);
    let (cert, _) = run(&p, Claim::Lemma4);
    let witnessed = cert.detail["sides"].as_array().unwrap().iter().any(|side| {
        side["squares"].as_array().unwrap().iter().any(|w| {
            let k = w["k"].as_str().unwrap();
            (k == "E21 - E32" || k == "-E21 + E32") && w["k_squared"] == "-E31"
        })
    });
    ensure(witnessed, "certificate does not reproduce k^2 = -E31")?;
    Ok("M3/M4 flip equalities exact; k = E32 - E21, k^2 = -E31".into())
}

fn criterion5() -> Outcome {
    let opts = CertOptions::default();
    for n in [3, 4] {
        let p = matrix(n, MatrixInvolution::Flip);
        let sets = lemma5_sets(&p, &e_of(&p), &opts).unwrap().expect("hypotheses hold");
        ensure(sets.holds(), format!("M{n} flip: spans"))?;
        let deg = |d: i32| -> Vec<Mat> {
            (1..=n)
                .flat_map(|i| (1..=n).map(move |j| (i, j)))
                .filter(|&(i, j)| flip_degree(n, i, j) == d)
                .map(|(i, j)| unit(n, i, j))
                .collect()
        };
        for (m, target, two) in [(&sets.m_minus1, 1, 2), (&sets.m_plus1, -1, -2)] {
            let mut products = Vec::new();
            for x in m {
                let x = to_ints(x);
                for r in deg(two) {
                    products.push(mul(n, &x, &r));
                    products.push(mul(n, &r, &x));
                }
            }
            ensure(same_span(&products, &deg(target)), format!("M{n} flip: R_{target} not spanned"))?;
            for x in m {
                let x = to_ints(x);
                ensure(flip(n, &x) == neg(&x), "set element is not skew")?;
            }
        }
    }
    let p = matrix(2, MatrixInvolution::Symplectic);
    let (cert, _) = run(&p, Claim::Lemma5);
    ensure(cert.verdict == Verdict::Pass, "M2 symplectic verdict")?;
    ensure(cert.detail["grading_dims"] == serde_json::json!([1, 0, 2, 0, 1]), "M2 symplectic dims")?;
    Ok("M3/M4 flip spanning equalities exact; M2 symplectic vacuous".into())
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algcert"))
}

fn criterion6() -> Outcome {
    let d = 8;
    let opts = CertOptions {
        trials: 50,
        max_gen: 5,
        ..CertOptions::default()
    };
    let ex1 = build_example1(d, Q).unwrap();
    let cert = certify(&ex1, Claim::Stagnation, "e", &opts).unwrap();
    let ranks: Vec<u64> = cert.detail["ranks"].as_array().unwrap().iter().map(|r| r.as_u64().unwrap()).collect();
    ensure(ranks.len() == 50 && ranks.iter().all(|&r| r <= 5), "triangular_example1 ranks exceed 5")?;
    ensure(cert.detail["target_rank"] == 8 && cert.verdict == Verdict::Pass, "triangular_example1 target")?;
    let rr = derived_subspace(&ex1, Default::default()).unwrap();
    let upper = example1_upper_component(d);
    ensure(
        rr.closure.basis().iter().all(|v| v.iter().enumerate().all(|(i, c)| c.is_zero() || upper.contains(&i))),
        "[R,R] outside the strictly upper part",
    )?;
    let basis: Vec<Element> = rr.closure.basis().iter().cloned().map(Element::new).collect();
    for a in &basis {
        for b in &basis {
            ensure(ex1.commutator(a, b).unwrap().is_zero(), "triangular_example1 bracket nonzero")?;
        }
    }

    let ex2 = build_example2(d, Q).unwrap();
    let kk = derived_k_subspace(&ex2, Default::default()).unwrap();
    let x_part = example2_x_component(d);
    ensure(
        kk.span.basis().iter().all(|v| v.iter().enumerate().all(|(i, c)| c.is_zero() || x_part.contains(&i))),
        "[K,K] outside the x-component",
    )?;
    let basis: Vec<Element> = kk.closure.basis().iter().cloned().map(Element::new).collect();
    for a in &basis {
        for b in &basis {
            ensure(ex2.commutator(a, b).unwrap().is_zero(), "m2_example2 bracket nonzero")?;
        }
    }
    let probe = certify(&ex2, Claim::Stagnation, "e", &opts).unwrap();
    ensure(probe.verdict == Verdict::Pass, "m2_example2 probe reached the target")?;

    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("ex1.json");
    let f2 = dir.path().join("ex2.json");
    std::fs::write(&f1, to_canonical_json(&ex1)).unwrap();
    std::fs::write(&f2, to_canonical_json(&ex2)).unwrap();
    for (file, claim) in [(&f1, "thm1"), (&f1, "thm2"), (&f2, "thm2")] {
        let status = bin().arg("certify").arg(file).args(["--claim", claim]).output().unwrap().status;
        ensure(status.code() == Some(3), format!("{} {claim}: exit {:?}", file.display(), status.code()))?;
    }
    Ok(format!(
        "triangular_example1 max rank {} < 8, abelian; m2_example2 [K,K] rank {} in x-part, abelian; theorem pipelines exit 3",
        ranks.iter().max().unwrap(),
        kk.closure.rank()
    ))
}

fn small_instances() -> Vec<AlgebraPresentation> {
    let mut out = vec![
        matrix(2, MatrixInvolution::None),
        matrix(2, MatrixInvolution::Transpose),
        matrix(2, MatrixInvolution::Symplectic),
        matrix(3, MatrixInvolution::None),
        matrix(3, MatrixInvolution::Flip),
        build_matrix_algebra(2, FieldKind::prime(7).unwrap(), MatrixInvolution::Transpose).unwrap(),
        build_example2(1, Q).unwrap(),
    ];
    for d in 1..=3 {
        out.push(build_example1(d, Q).unwrap());
    }
    for d in [2, 5, 9] {
        out.push(build_truncated_polynomial(d, Q).unwrap());
    }
    out
}

fn random_element(p: &AlgebraPresentation, rng: &mut ChaCha8Rng, basis: &[Element]) -> Element {
    let f = p.field();
    let mut x = p.zero();
    for b in basis {
        x = x.add_scaled(&f.from_i64(rng.gen_range(-2..=2)), b);
    }
    x
}

fn agree(p: &AlgebraPresentation, set: &GeneratorSet) -> Result<(), String> {
    let closed = closure(p, set, Default::default()).map_err(|e| e.to_string())?;
    let limit = if set.structure.is_pair() { 15 } else { 12 };
    let (oracle, _) = stable_word_span(p, set, limit).map_err(|e| format!("{}: {e}", p.name()))?;
    ensure(
        closed.final_span == oracle,
        format!("{} {:?}: closure rank {} vs oracle {}", p.name(), set.structure, closed.final_rank(), oracle.rank()),
    )
}

fn criterion7() -> Outcome {
    let mut runs = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in small_instances() {
        ensure(p.dim() <= 9, "instance too large")?;
        let basis = p.basis_elements();
        let declared: Vec<Element> = p.generators_or_basis().into_iter().map(|(_, x)| x).collect();
        let random: Vec<Element> = (0..2).map(|_| random_element(&p, &mut rng, &basis)).collect();
        for structure in [Structure::Lie, Structure::Associative] {
            for gens in [&declared, &random] {
                agree(&p, &GeneratorSet::from_elements(structure, "g", "test", gens).unwrap())?;
                runs += 1;
            }
        }
        for (_, e) in p.idempotents() {
            let peirce = peirce_decompose(&p, e).unwrap();
            let minus: Vec<Element> = peirce.e_r_f().basis().iter().cloned().map(Element::new).collect();
            let plus: Vec<Element> = peirce.f_r_e().basis().iter().cloned().map(Element::new).collect();
            let pick = |xs: &[Element], rng: &mut ChaCha8Rng| -> Vec<Element> {
                if xs.is_empty() {
                    Vec::new()
                } else {
                    vec![random_element(&p, rng, xs)]
                }
            };
            let (m, pl) = (pick(&minus, &mut rng), pick(&plus, &mut rng));
            if m.is_empty() && pl.is_empty() {
                continue;
            }
            for structure in [Structure::AssocPair, Structure::JordanPair] {
                agree(&p, &GeneratorSet::pair(structure, "test", &m, &pl).unwrap())?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} closure/oracle comparisons agree"))
}

fn criterion8() -> Outcome {
    let instances = vec![
        matrix(2, MatrixInvolution::None),
        matrix(3, MatrixInvolution::None),
        matrix(4, MatrixInvolution::None),
        matrix(3, MatrixInvolution::Flip),
        matrix(4, MatrixInvolution::Flip),
        matrix(2, MatrixInvolution::Symplectic),
        build_example1(3, Q).unwrap(),
        build_example2(2, Q).unwrap(),
    ];
    let mut total = 0;
    for p in &instances {
        let report = identity_suite(p, &e_of(p), 100, 11).unwrap();
        ensure(report.checks.len() == 6, format!("{}: identities run {}", p.name(), report.checks.len()))?;
        for (name, (count, bad)) in &report.checks {
            ensure(*count >= 100, format!("{} {name}: only {count} substitutions", p.name()))?;
            ensure(*bad == 0, format!("{} {name}: {bad} failures", p.name()))?;
            total += count;
        }
    }
    Ok(format!("{total} exact substitutions, zero failures"))
}

fn criterion9() -> Outcome {
    let mut checked = 0;
    let graded = vec![
        matrix(3, MatrixInvolution::Flip),
        matrix(4, MatrixInvolution::Flip),
        matrix(5, MatrixInvolution::Flip),
        matrix(2, MatrixInvolution::Symplectic),
        build_example2(2, Q).unwrap(),
        build_example2(4, Q).unwrap(),
    ];
    for p in &graded {
        let g = z_grading(p, &e_of(p)).unwrap();
        ensure(g.violations.is_empty(), format!("{}: {} violations", p.name(), g.violations.len()))?;
        ensure(g.is_direct_sum(), format!("{}: not a direct sum", p.name()))?;
        ensure(g.checked_products == p.dim() * p.dim(), format!("{}: not exhaustive", p.name()))?;
        checked += g.checked_products;
    }
    // Matrix units sit in the degree given by the index formula.
    for n in 3..=5 {
        let p = matrix(n, MatrixInvolution::Flip);
        let g = z_grading(&p, &e_of(&p)).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let u = p.basis_element((i - 1) * n + (j - 1));
                let d = flip_degree(n, i, j);
                ensure(g.component(d).contains(u.coords()).unwrap(), format!("E{i}{j} not in R_{d}"))?;
            }
        }
    }
    Ok(format!("{checked} basis products land in R_(i+j), zero violations"))
}

fn strip_wall_time(text: &str) -> String {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("wall_time_ms");
    serde_json::to_string(&v).unwrap()
}

fn criterion10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let m3 = dir.path().join("m3f.json");
    let ex1 = dir.path().join("ex1.json");
    let out = bin().args(["build", "--kind", "flip_matrix_n", "--n", "3", "-o"]).arg(&m3).output().unwrap();
    ensure(out.status.success(), "build failed")?;
    std::fs::write(&ex1, to_canonical_json(&build_example1(8, Q).unwrap())).unwrap();
    let runs: Vec<Vec<String>> = vec![
        vec!["validate".into(), m3.display().to_string()],
        vec!["decompose".into(), m3.display().to_string()],
        vec!["closure".into(), m3.display().to_string(), "--structure".into(), "lie".into(), "--gens".into(), "E12,E21".into()],
        vec!["oracle".into(), m3.display().to_string(), "--structure".into(), "associative".into(), "--max-len".into(), "3".into()],
        vec!["certify".into(), m3.display().to_string(), "--claim".into(), "thm2".into(), "--seed".into(), "7".into()],
        vec!["certify".into(), m3.display().to_string(), "--claim".into(), "lemma7".into(), "--seed".into(), "3".into()],
        vec!["certify".into(), ex1.display().to_string(), "--claim".into(), "stagnation".into(), "--seed".into(), "5".into()],
    ];
    for args in &runs {
        let a = bin().args(args).output().unwrap();
        let b = bin().args(args).arg("--sequential").output().unwrap();
        let c = bin().args(args).output().unwrap();
        let (a, b, c) = (
            String::from_utf8(a.stdout).unwrap(),
            String::from_utf8(b.stdout).unwrap(),
            String::from_utf8(c.stdout).unwrap(),
        );
        ensure(strip_wall_time(&a) == strip_wall_time(&c), format!("{args:?}: repeated runs differ"))?;
        let mut vb: Value = serde_json::from_str(&b).unwrap();
        let mut va: Value = serde_json::from_str(&a).unwrap();
        for v in [&mut va, &mut vb] {
            let o = v.as_object_mut().unwrap();
            o.remove("wall_time_ms");
            o.remove("command");
        }
        ensure(va == vb, format!("{args:?}: parallel and sequential runs differ"))?;
    }
    Ok(format!("{} CLI runs byte-identical modulo wall time", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("thm1 certificate on M_n(Q), n = 2..4", criterion1),
        ("thm2 certificate on flip M_3, M_4", criterion2),
        ("pair generating set bound on M_2, M_3", criterion3),
        ("grading-two equalities and the k^2 witness", criterion4),
        ("odd-degree spanning sets", criterion5),
        ("counterexample stagnation probes", criterion6),
        ("closure/oracle equivalence, dim <= 9", criterion7),
        ("identity suite", criterion8),
        ("grading soundness", criterion9),
        ("determinism", criterion10),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let mut err = std::io::stderr().lock();
        match outcome {
            Ok(note) => writeln!(err, "criterion {:>2}: PASS  {name}: {note}", i + 1).unwrap(),
            Err(why) => {
                writeln!(err, "criterion {:>2}: FAIL  {name}: {why}", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
