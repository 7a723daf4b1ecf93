//! Claims about `[K, K]` under the grading by `e, e*, s = 1 - e - e*`.

use serde_json::{json, Value};

use super::words::{alternating_products, lemma2_generating_set, witnesses_for, RawWitness, WordBasis};
use super::{
    derived_k_subspace, elements_of, independent, random_in, rng, skew_context, span_of, CertOptions, Certificate,
    Claim, SkewContext,
};
use crate::algebra::{AlgebraPresentation, Element, UnitalView};
use crate::closure::{lie_span, word_budget, GeneratorSet, Span, Structure};
use crate::error::Result;
use crate::linalg::{solve_combination, Subspace, Vector};

fn squares_of(p: &AlgebraPresentation, k: &[Element]) -> Vec<(Element, Element)> {
    // (k, k^2) for basis vectors and pairwise sums; enough to span {k^2 : k in span}
    let mut out = Vec::new();
    for (i, a) in k.iter().enumerate() {
        out.push((a.clone(), p.mul(a, a)));
        for b in &k[i + 1..] {
            let s = a + b;
            let sq = p.mul(&s, &s);
            out.push((s, sq));
        }
    }
    out
}

fn bracket_span(p: &AlgebraPresentation, xs: &[Element], ys: &[Element]) -> Subspace {
    let mut s = Subspace::zero(p.field(), p.dim());
    for x in xs {
        for y in ys {
            s.push(p.bracket(x, y).coords());
        }
    }
    s
}

fn circle_span(p: &AlgebraPresentation, xs: &[Element]) -> Subspace {
    let mut s = Subspace::zero(p.field(), p.dim());
    for x in xs {
        for y in xs {
            s.push(p.jordan(x, y).coords());
        }
    }
    s
}

/// `K_{±2} = [K_{±1}, K_{±1}]` and `H_{±2} = span{k^2 : k ∈ K_{±1}}`.
pub fn lemma4_check(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    let ctx = match skew_context(p, e, false, true, opts.exec)? {
        Ok(c) => c,
        Err(failed) => return Ok(Certificate::not_met(Claim::Lemma4, failed)),
    };
    let mut ok = true;
    let mut sides = Vec::new();
    for sign in [1, -1] {
        let k1 = elements_of(ctx.k(sign));
        let squares_shown: Vec<Value> = squares_of(p, &k1)
            .iter()
            .map(|(k, sq)| json!({"k": p.display(k), "k_squared": p.display(sq)}))
            .collect();
        let brackets = bracket_span(p, &k1, &k1);
        let squares = span_of(p, &squares_of(p, &k1).into_iter().map(|(_, sq)| sq).collect::<Vec<_>>());
        let circles = circle_span(p, &k1);
        let k_eq = brackets == *ctx.k(2 * sign);
        let h_eq = squares == *ctx.h(2 * sign);
        let polarization = squares == circles;
        ok &= k_eq && h_eq && polarization;
        sides.push(json!({
            "degree": 2 * sign,
            "k1_dim": k1.len(),
            "k2_dim": ctx.k(2 * sign).rank(),
            "h2_dim": ctx.h(2 * sign).rank(),
            "bracket_span_dim": brackets.rank(),
            "square_span_dim": squares.rank(),
            "k_equality": k_eq,
            "h_equality": h_eq,
            "polarization_matches_circle_span": polarization,
            "squares": squares_shown,
        }));
    }
    Ok(Certificate::checked(
        Claim::Lemma4,
        ok,
        json!({"grading_dims": ctx.grading.dims(), "sides": sides}),
    ))
}

/// The finite sets `M_{-1} ⊂ K_{-1}` and `M_1 ⊂ K_1` with
/// `R_1 = M_{-1}R_2 + R_2M_{-1}` and `R_{-1} = M_1R_{-2} + R_{-2}M_1`.
#[derive(Clone, Debug)]
pub struct Lemma5Sets {
    pub m_minus1: Vec<Element>,
    pub m_plus1: Vec<Element>,
    pub r1_spanned: bool,
    pub r_minus1_spanned: bool,
    /// Word length used to extend a set when the witness words fell short.
    pub extended_to: [Option<usize>; 2],
}

impl Lemma5Sets {
    pub fn holds(&self) -> bool {
        self.r1_spanned && self.r_minus1_spanned
    }
}

fn product_span(p: &AlgebraPresentation, m: &[Element], r: &Subspace) -> Subspace {
    let rs = elements_of(r);
    let mut s = Subspace::zero(p.field(), p.dim());
    for x in m {
        for y in &rs {
            s.push(p.mul(x, y).coords());
            s.push(p.mul(y, x).coords());
        }
    }
    s
}

/// Builds `M_{-1} = {{e w s}}` over the right-hand witness words `w` of the
/// decompositions `a_i = Σ α v e w`, and `M_1 = {{e* w s}}` from the
/// decompositions through `e*`. A set whose spanning equality fails is
/// extended by `{x w s}` over all words of growing length.
pub(crate) fn build_lemma5(p: &AlgebraPresentation, e: &Element, ctx: &SkewContext, opts: &CertOptions) -> Result<Lemma5Sets> {
    let exec = opts.exec;
    let view = UnitalView::new(p);
    let alg = view.algebra();
    let ev = view.embed(e);
    let esv = view.embed(&ctx.grading.e_star);
    let sv = &view.complement(&ev) - &esv;
    let gens = p.generators_or_basis();
    let words = WordBasis::build(&view, &gens, 3 * opts.cap + 1, exec);

    let word_value = |w: Option<usize>| w.map_or_else(|| view.one(), |i| words.words[i].value.clone());
    let braced = |x: &Element, w: &Element| p.brace_of(&view.restrict(&alg.mul3(x, w, &sv)));

    let mut out = Lemma5Sets {
        m_minus1: Vec::new(),
        m_plus1: Vec::new(),
        r1_spanned: false,
        r_minus1_spanned: false,
        extended_to: [None, None],
    };
    for (slot, x, name, target, grade2) in [(0, &ev, "e", 1, 2), (1, &esv, "e*", -1, -2)] {
        let raw: Vec<RawWitness> = witnesses_for(&view, &words, &gens, x, name, opts.cap, exec)?;
        let rights = raw.iter().flat_map(|w| w.terms.iter().map(|t| t.2));
        let mut m = independent(p, rights.map(|w| braced(x, &word_value(w))).filter(|b| !b.is_zero()));
        let mut spanned = product_span(p, &m, ctx.r(grade2)) == *ctx.r(target);
        if !spanned {
            for len in 1..=3 * opts.cap + 1 {
                let more = words.up_to(len).map(|w| braced(x, &w.value));
                m = independent(p, m.into_iter().chain(more).filter(|b| !b.is_zero()));
                spanned = product_span(p, &m, ctx.r(grade2)) == *ctx.r(target);
                if spanned {
                    out.extended_to[slot] = Some(len);
                    break;
                }
            }
        }
        if slot == 0 {
            out.m_minus1 = m;
            out.r1_spanned = spanned;
        } else {
            out.m_plus1 = m;
            out.r_minus1_spanned = spanned;
        }
    }
    Ok(out)
}

/// Returns `None` when the hypotheses fail.
pub fn lemma5_sets(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Option<Lemma5Sets>> {
    match skew_context(p, e, false, false, opts.exec)? {
        Ok(ctx) => build_lemma5(p, e, &ctx, opts).map(Some),
        Err(_) => Ok(None),
    }
}

pub fn lemma5_certificate(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    let ctx = match skew_context(p, e, false, false, opts.exec)? {
        Ok(c) => c,
        Err(failed) => return Ok(Certificate::not_met(Claim::Lemma5, failed)),
    };
    let sets = build_lemma5(p, e, &ctx, opts)?;
    let in_k = sets.m_minus1.iter().all(|m| ctx.k(-1).holds(m.coords()))
        && sets.m_plus1.iter().all(|m| ctx.k(1).holds(m.coords()));
    let detail = json!({
        "grading_dims": ctx.grading.dims(),
        "m_minus1": sets.m_minus1.iter().map(|m| p.display(m)).collect::<Vec<_>>(),
        "m_plus1": sets.m_plus1.iter().map(|m| p.display(m)).collect::<Vec<_>>(),
        "r1_spanned": sets.r1_spanned,
        "r_minus1_spanned": sets.r_minus1_spanned,
        "sets_inside_k": in_k,
        "extended_to": sets.extended_to,
    });
    Ok(Certificate::checked(Claim::Lemma5, sets.holds() && in_k, detail))
}

/// `K_{±1}, K_{±2} ⊆ [K, K]`, and `[K, K]` is the Lie closure of `K_{-1} ∪ K_1`.
pub fn lemma6_check(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    let ctx = match skew_context(p, e, false, true, opts.exec)? {
        Ok(c) => c,
        Err(failed) => return Ok(Certificate::not_met(Claim::Lemma6, failed)),
    };
    let target = derived_k_subspace(p, opts.exec)?;
    let inside = [-2, -1, 1, 2].iter().all(|&d| ctx.k(d).is_subspace_of(&target.span));
    let seeds: Vec<Element> = [-1, 1].iter().flat_map(|&d| elements_of(ctx.k(d))).collect();
    let gens = GeneratorSet::from_elements(Structure::Lie, "k", "K_{-1} ∪ K_1 basis", &seeds)?;
    let trace = lie_span(p, &seeds, opts.exec)?;
    let detail = json!({
        "grading_dims": ctx.grading.dims(),
        "k_dims": ([-2, -1, 0, 1, 2].map(|d| ctx.k(d).rank())),
        "nonzero_degrees_inside_derived": inside,
        "derived_span_rank": target.span.rank(),
        "derived_rank": target.rank(),
    });
    Ok(Certificate::compare(Claim::Lemma6, gens, trace, Span::Single(target.closure), inside, detail))
}

/// Random element of `K_d` or `H_d`, choosing a nonzero part at random.
fn random_kh(p: &AlgebraPresentation, rng: &mut rand_chacha::ChaCha8Rng, parts: &[&[Vector]]) -> Element {
    use rand::seq::SliceRandom;
    let nonempty: Vec<&&[Vector]> = parts.iter().filter(|b| !b.is_empty()).collect();
    match nonempty.choose(rng) {
        Some(b) => random_in(p, rng, b),
        None => p.zero(),
    }
}

/// Alternating products `a_1 b_1 ... a_n b_n a_{n+1}` with `a_i ∈ K_2 ∪ H_2`,
/// `b_j ∈ K_{-2} ∪ H_{-2}` and a repeated `b`, checked to lie in
/// `Σ (shorter alternating products of the same factors)(K_{-2}K_2 + H_{-2}H_2)`.
pub fn lemma7_reduction_check(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    use rand::Rng;
    let ctx = match skew_context(p, e, false, false, opts.exec)? {
        Ok(c) => c,
        Err(failed) => return Ok(Certificate::not_met(Claim::Lemma7, failed)),
    };
    let n = opts.n_bound.max(2);
    let mut tail = Subspace::zero(p.field(), p.dim());
    for (x, y) in [(ctx.k(-2), ctx.k(2)), (ctx.h(-2), ctx.h(2))] {
        for a in elements_of(x) {
            for b in elements_of(y) {
                tail.push(p.mul(&a, &b).coords());
            }
        }
    }
    let tail = elements_of(&tail);
    let mut rng = rng(opts.seed);
    let mut failures = 0;
    for _ in 0..opts.samples {
        let a: Vec<Element> = (0..=n).map(|_| random_kh(p, &mut rng, &[ctx.k(2).basis(), ctx.h(2).basis()])).collect();
        let mut b: Vec<Element> = (0..n).map(|_| random_kh(p, &mut rng, &[ctx.k(-2).basis(), ctx.h(-2).basis()])).collect();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        b[j] = b[i].clone();
        let mut lhs = a[0].clone();
        for k in 0..n {
            lhs = p.mul3(&lhs, &b[k], &a[k + 1]);
        }
        // words a b a ... a over the same factors with r < n b-factors
        let shorter = alternating_products(p, &a, &b, n, word_budget())?;
        let mut rhs = Subspace::zero(p.field(), p.dim());
        for w in &shorter {
            for t in &tail {
                rhs.push(p.mul(w, t).coords());
            }
        }
        if !rhs.holds(lhs.coords()) {
            failures += 1;
        }
    }
    let detail = json!({
        "n": n,
        "samples": opts.samples,
        "failures": failures,
        "tail_dim": tail.len(),
        "kh_dims": {"k_minus2": ctx.k(-2).rank(), "h_minus2": ctx.h(-2).rank(), "k2": ctx.k(2).rank(), "h2": ctx.h(2).rank()},
    });
    Ok(Certificate::checked(Claim::Lemma7, failures == 0, detail).with_seed(opts.seed))
}

/// `k` with `x = Σ α k^2`, from squares of basis vectors and pairwise sums.
fn square_roots(p: &AlgebraPresentation, x: &Element, k_basis: &[Element]) -> Option<Vec<Element>> {
    let sq = squares_of(p, k_basis);
    let cols: Vec<Vector> = sq.iter().map(|(_, s)| s.coords().to_vec()).collect();
    let coeffs = solve_combination(p.field(), &cols, x.coords())?;
    Some(
        coeffs
            .iter()
            .zip(sq)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, (k, _))| k)
            .collect(),
    )
}

/// Full pipeline: grading, lemma4 and lemma5 checks, the pair generators of
/// `(R_{-2}, R_2)` split into skew and symmetric parts, the bounded products
/// `P_{±2}`, and the union set, whose Lie closure is compared with `[K, K]`.
pub fn theorem2_certify(p: &AlgebraPresentation, e: &Element, opts: &CertOptions) -> Result<Certificate> {
    let exec = opts.exec;
    let ctx = match skew_context(p, e, true, true, exec)? {
        Ok(c) => c,
        Err(failed) => return Ok(Certificate::not_met(Claim::Theorem2, failed)),
    };
    let lemma4 = lemma4_check(p, e, opts)?;
    let sets = build_lemma5(p, e, &ctx, opts)?;
    let pair = match lemma2_generating_set(p, e, Some(&ctx.grading.e_star), opts)? {
        Ok(s) => s,
        Err(failed) => return Ok(Certificate::not_met(Claim::Theorem2, failed)),
    };
    let split = |xs: Vec<Element>| {
        independent(
            p,
            xs.iter()
                .flat_map(|x| {
                    let s = p.star(x);
                    [x - &s, x + &s]
                })
                .filter(|x| !x.is_zero()),
        )
    };
    let b = split(pair.minus());
    let a = split(pair.plus());
    let n = a.len().max(b.len());
    let budget = word_budget();
    let p2 = alternating_products(p, &a, &b, n + 2, budget)?;
    let pm2 = alternating_products(p, &b, &a, n + 2, budget)?;
    let all_p: Vec<Element> = p2.iter().chain(&pm2).cloned().collect();

    let k_plus1 = elements_of(ctx.k(1));
    let k_minus1 = elements_of(ctx.k(-1));
    let mut roots_ok = true;
    let mut roots: Vec<Element> = Vec::new();
    for (set, kb) in [(&p2, &k_plus1), (&pm2, &k_minus1)] {
        for q in set.iter() {
            let h = q + &p.star(q);
            match square_roots(p, &h, kb) {
                Some(ks) => roots.extend(ks),
                None => roots_ok = false,
            }
        }
    }
    let roots = independent(p, roots);

    let mut gens = GeneratorSet::new(Structure::Lie);
    let mut add = |prefix: &str, provenance: &str, xs: Vec<Element>| -> Result<()> {
        for (i, x) in independent(p, xs.into_iter().filter(|x| !x.is_zero())).into_iter().enumerate() {
            gens.push(format!("{prefix}{i}"), x, provenance, None)?;
        }
        Ok(())
    };
    add("m-", "M_{-1}", sets.m_minus1.clone())?;
    add("m+", "M_1", sets.m_plus1.clone())?;
    let braces: Vec<Element> = all_p.iter().map(|x| p.brace_of(x)).collect();
    let mut pq = Vec::new();
    for x in &braces {
        for y in &braces {
            pq.push(p.bracket(x, y));
        }
    }
    add("pq", "[{p},{q}]", pq)?;
    let mut circ = Vec::new();
    for x in &all_p {
        let h = x + &p.star(x);
        for k in &roots {
            circ.push(p.bracket(&p.jordan(&h, k), k));
        }
    }
    add("hk", "[(p+p*)∘k, k]", circ)?;
    let mut mp = Vec::new();
    for (ms, ps) in [(&sets.m_minus1, &p2), (&sets.m_plus1, &pm2)] {
        for m in ms.iter() {
            for x in ps.iter() {
                mp.push(p.brace_of(&p.mul(m, x)));
            }
        }
    }
    add("mp", "{M_{-1}P_2} ∪ {M_1P_{-2}}", mp)?;

    let target = derived_k_subspace(p, exec)?;
    let union_inside = gens.elements.iter().all(|g| target.closure.holds(g.element.coords()));
    let trace = lie_span(p, &gens.elements(), exec)?;
    let sub_ok = lemma4.verdict == super::Verdict::Pass && sets.holds() && roots_ok;
    let detail = json!({
        "grading_dims": ctx.grading.dims(),
        "lemma4": lemma4.detail,
        "lemma5": {"m_minus1": sets.m_minus1.len(), "m_plus1": sets.m_plus1.len(), "holds": sets.holds(), "extended_to": sets.extended_to},
        "d": pair.d,
        "pair_generators": {"a2": a.len(), "b_minus2": b.len(), "n": n},
        "products": {"p2": p2.len(), "p_minus2": pm2.len(), "max_factors": n + 2},
        "square_roots_found": roots_ok,
        "union_size": gens.len(),
        "union_inside_target": union_inside,
        "derived_k_rank": target.rank(),
        "final_rank": trace.final_rank(),
    });
    Ok(Certificate::compare(
        Claim::Theorem2,
        gens,
        trace,
        Span::Single(target.closure),
        sub_ok && union_inside,
        detail,
    )
    .with_seed(opts.seed))
}
