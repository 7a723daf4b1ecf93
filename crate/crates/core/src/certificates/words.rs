//! Words in the declared generators, decomposition witnesses
//! `a = Σ α u x v`, and the finite generating set of a Peirce pair
//! `(eRf, fRe)`.

use serde::Serialize;

use super::{generators_generate, hyp, independent, CertOptions, Hypotheses};
use crate::algebra::{AlgebraPresentation, Element, UnitalView};
use crate::closure::{GeneratorSet, Side, Structure};
use crate::decomposition::sandwich_component;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Scalar;
use crate::linalg::{solve_combination, Subspace, Vector};

/// A product of generators, in the coordinates of a [`UnitalView`].
#[derive(Clone, Debug)]
pub struct Word {
    pub label: String,
    pub len: usize,
    pub value: Element,
}

/// Words of increasing length, keeping only those that enlarge the span of
/// the words already kept. `span{kept words of length <= L}` equals the span
/// of all words of length `<= L`.
#[derive(Clone, Debug)]
pub struct WordBasis {
    pub words: Vec<Word>,
    /// Number of words enumerated before the span filter.
    pub enumerated: usize,
}

impl WordBasis {
    pub fn build(view: &UnitalView<'_>, gens: &[(String, Element)], max_len: usize, exec: Exec) -> WordBasis {
        let alg = view.algebra();
        let letters: Vec<(String, Element)> = gens.iter().map(|(l, x)| (l.clone(), view.embed(x))).collect();
        let mut span = Subspace::zero(alg.field(), alg.dim());
        let mut words = Vec::new();
        let mut frontier = Vec::new();
        let mut enumerated = 0;
        for (l, x) in &letters {
            enumerated += 1;
            if span.push(x.coords()) {
                frontier.push(words.len());
                words.push(Word {
                    label: l.clone(),
                    len: 1,
                    value: x.clone(),
                });
            }
        }
        for len in 2..=max_len {
            if frontier.is_empty() {
                break;
            }
            let tasks: Vec<(usize, usize)> = frontier
                .iter()
                .flat_map(|&w| (0..letters.len()).map(move |g| (w, g)))
                .collect();
            enumerated += tasks.len();
            let products = exec.map(&tasks, |&(w, g)| alg.mul(&words[w].value, &letters[g].1));
            let mut next = Vec::new();
            for (&(w, g), x) in tasks.iter().zip(products) {
                if span.push(x.coords()) {
                    next.push(words.len());
                    words.push(Word {
                        label: format!("{}*{}", words[w].label, letters[g].0),
                        len,
                        value: x,
                    });
                }
            }
            frontier = next;
        }
        WordBasis { words, enumerated }
    }

    pub fn up_to(&self, len: usize) -> impl Iterator<Item = &Word> {
        self.words.iter().filter(move |w| w.len <= len)
    }
}

/// `target = Σ coeff * left * x * right`, with `None` for the empty word.
#[derive(Clone, Debug)]
pub(crate) struct RawWitness {
    pub length: usize,
    pub terms: Vec<(Scalar, Option<usize>, Option<usize>)>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessTerm {
    pub coeff: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub generator: String,
    pub idempotent: String,
    /// Longest word used; minimal over all decompositions.
    pub length: usize,
    pub terms: Vec<WitnessTerm>,
}

fn word_len(words: &WordBasis, w: Option<usize>) -> usize {
    w.map_or(0, |i| words.words[i].len)
}

/// Minimal-length decomposition of `target` as a combination of `u x v`,
/// searching word lengths `0..=cap`. Everything is in view coordinates.
pub(crate) fn find_witness(
    view: &UnitalView<'_>,
    words: &WordBasis,
    x: &Element,
    target: &Element,
    cap: usize,
    exec: Exec,
) -> Option<RawWitness> {
    let alg = view.algebra();
    let slots: Vec<Option<usize>> = std::iter::once(None).chain((0..words.words.len()).map(Some)).collect();
    let value = |w: Option<usize>| w.map_or_else(|| view.one(), |i| words.words[i].value.clone());
    let mut span = Subspace::zero(alg.field(), alg.dim());
    let mut columns: Vec<Vector> = Vec::new();
    let mut tags = Vec::new();
    for len in 0..=cap {
        let pairs: Vec<(Option<usize>, Option<usize>)> = slots
            .iter()
            .flat_map(|&u| slots.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| word_len(words, u).max(word_len(words, v)) == len)
            .collect();
        let values = exec.map(&pairs, |&(u, v)| alg.mul3(&value(u), x, &value(v)));
        for (tag, c) in pairs.into_iter().zip(values) {
            if span.push(c.coords()) {
                columns.push(c.into_coords());
                tags.push(tag);
            }
        }
        if span.holds(target.coords()) {
            let coeffs = solve_combination(alg.field(), &columns, target.coords()).expect("target lies in the span");
            let terms = coeffs
                .into_iter()
                .zip(&tags)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, &(u, v))| (c, u, v))
                .collect();
            return Some(RawWitness { length: len, terms });
        }
    }
    None
}

pub(crate) fn witness_json(words: &WordBasis, generator: &str, idempotent: &str, w: &RawWitness) -> Witness {
    let name = |s: Option<usize>| s.map_or_else(|| "1".to_string(), |i| words.words[i].label.clone());
    Witness {
        generator: generator.to_string(),
        idempotent: idempotent.to_string(),
        length: w.length,
        terms: w
            .terms
            .iter()
            .map(|(c, u, v)| WitnessTerm {
                coeff: c.to_string(),
                left: name(*u),
                right: name(*v),
            })
            .collect(),
    }
}

/// Witnesses for every declared generator against the idempotent `x`.
pub(crate) fn witnesses_for(
    view: &UnitalView<'_>,
    words: &WordBasis,
    gens: &[(String, Element)],
    x: &Element,
    x_name: &str,
    cap: usize,
    exec: Exec,
) -> Result<Vec<RawWitness>> {
    gens.iter()
        .map(|(label, a)| {
            find_witness(view, words, x, &view.embed(a), cap, exec).ok_or_else(|| Error::CapExceeded {
                what: format!("decomposition of `{label}` through {x_name}"),
                cap,
            })
        })
        .collect()
}

/// The generating set of the pair `(eRf, fRe)` built from words of length
/// at most `3d + 1`.
#[derive(Clone, Debug)]
pub struct PairGenerators {
    /// Associative-pair generators: `e u f` on the minus side, `f u e` on the plus side.
    pub generators: GeneratorSet,
    pub d: usize,
    pub max_word_len: usize,
    pub witnesses: Vec<Witness>,
    pub words_enumerated: usize,
    /// `(eRf, fRe)` in the algebra's coordinates.
    pub components: (Subspace, Subspace),
}

impl PairGenerators {
    pub fn minus(&self) -> Vec<Element> {
        self.generators.side(Side::Minus)
    }

    pub fn plus(&self) -> Vec<Element> {
        self.generators.side(Side::Plus)
    }
}

/// Builds `{e u f, f u e : |u| <= 3d + 1}` where `d` is the longest word in
/// the minimal decompositions of the generators through `e` and `f`.
/// `f = None` means `1 - e`. Returns the failed hypotheses instead when
/// `ReR = R`, `RfR = R`, or generation of `R` by its generators fails.
pub fn lemma2_generating_set(
    p: &AlgebraPresentation,
    e: &Element,
    f: Option<&Element>,
    opts: &CertOptions,
) -> Result<std::result::Result<PairGenerators, Vec<String>>> {
    let exec = opts.exec;
    p.check_element(e)?;
    if let Some(f) = f {
        p.check_element(f)?;
    }
    let view = UnitalView::new(p);
    let ev = view.embed(e);
    let fv = match f {
        Some(f) => view.embed(f),
        None => view.complement(&ev),
    };
    let f_name = if f.is_some() { "f" } else { "(1-e)" };
    let alg = view.algebra();

    let mut h = Hypotheses::default();
    h.require(p.is_idempotent(e), hyp::IDEMPOTENT);
    if f.is_some() {
        h.require(alg.is_idempotent(&fv), "f^2 = f");
    }
    if !h.ok() {
        return Ok(Err(h.into_failed()));
    }
    h.require(crate::algebra::sandwich_span(&view, &ev, exec).is_full(), hyp::RER);
    let f_hyp = if f.is_some() { hyp::RFR } else { hyp::COMPLEMENT };
    h.require(crate::algebra::sandwich_span(&view, &fv, exec).is_full(), f_hyp);
    h.require(generators_generate(p, exec)?, hyp::GENERATES);
    if !h.ok() {
        return Ok(Err(h.into_failed()));
    }

    let gens = p.generators_or_basis();
    let words = WordBasis::build(&view, &gens, 3 * opts.cap + 1, exec);
    let mut witnesses = Vec::new();
    let mut d = 0;
    for (x, name) in [(&ev, "e"), (&fv, f_name)] {
        let raw = witnesses_for(&view, &words, &gens, x, name, opts.cap, exec)?;
        for ((label, _), w) in gens.iter().zip(&raw) {
            d = d.max(w.length);
            witnesses.push(witness_json(&words, label, name, w));
        }
    }
    let max_word_len = 3 * d + 1;
    let used: Vec<&Word> = words.up_to(max_word_len).collect();
    let minus_raw = exec.map(&used, |w| (w.label.clone(), view.restrict(&alg.mul3(&ev, &w.value, &fv))));
    let plus_raw = exec.map(&used, |w| (w.label.clone(), view.restrict(&alg.mul3(&fv, &w.value, &ev))));

    let mut set = GeneratorSet::new(Structure::AssocPair);
    for (side, raw, (l, r)) in [
        (Side::Minus, minus_raw, ("e", f_name)),
        (Side::Plus, plus_raw, (f_name, "e")),
    ] {
        let mut span = Subspace::zero(p.field(), p.dim());
        for (label, x) in raw {
            if span.push(x.coords()) {
                set.push(format!("{l}({label}){r}"), x, "peirce pair word", Some(side))?;
            }
        }
    }
    let components = (
        sandwich_component(&view, &[(&ev, &fv)], exec),
        sandwich_component(&view, &[(&fv, &ev)], exec),
    );
    Ok(Ok(PairGenerators {
        generators: set,
        d,
        max_word_len,
        witnesses,
        words_enumerated: words.enumerated,
        components,
    }))
}

/// Alternating products `x_1 y_1 x_2 ... x_k` with `x` from `xs`, `y` from
/// `ys` and `1 <= k <= max_factors`, deduplicated by span at each step.
pub(crate) fn alternating_products(
    p: &AlgebraPresentation,
    xs: &[Element],
    ys: &[Element],
    max_factors: usize,
    budget: usize,
) -> Result<Vec<Element>> {
    let mut out = independent(p, xs.iter().cloned());
    let mut frontier = out.clone();
    let mut span = super::span_of(p, &out);
    let mut count = xs.len();
    for _ in 2..=max_factors {
        let mut next = Vec::new();
        count += frontier.len() * ys.len() * xs.len();
        if count > budget {
            return Err(Error::BudgetExceeded { cap: budget });
        }
        for w in &frontier {
            for y in ys {
                let wy = p.mul(w, y);
                for x in xs {
                    let v = p.mul(&wy, x);
                    if span.push(v.coords()) {
                        next.push(v);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}
