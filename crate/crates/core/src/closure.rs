//! Sub-structures generated by finite sets: Lie subalgebras, associative
//! subalgebras, and associative or Jordan sub-pairs, by round-based
//! saturation. `word_oracle` recomputes the same spans by naive word
//! enumeration for cross-checking.

use std::collections::HashSet;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{AlgebraPresentation, Element};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    Lie,
    Associative,
    AssocPair,
    JordanPair,
}

impl Structure {
    pub fn is_pair(self) -> bool {
        matches!(self, Structure::AssocPair | Structure::JordanPair)
    }
}

impl std::str::FromStr for Structure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" => Ok(Structure::Lie),
            "associative" | "assoc" => Ok(Structure::Associative),
            "assoc-pair" => Ok(Structure::AssocPair),
            "jordan-pair" => Ok(Structure::JordanPair),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Minus => "-",
            Side::Plus => "+",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub element: Element,
    pub provenance: String,
    pub side: Option<Side>,
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("label", &self.label)?;
        m.serialize_entry("provenance", &self.provenance)?;
        if let Some(side) = self.side {
            m.serialize_entry("side", &side)?;
        }
        m.serialize_entry("coords", &self.element.to_strings())?;
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub structure: Structure,
    pub elements: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(structure: Structure) -> Self {
        GeneratorSet {
            structure,
            elements: Vec::new(),
        }
    }

    /// Unlabelled elements of a non-pair structure, labelled `{prefix}{i}`.
    pub fn from_elements(structure: Structure, prefix: &str, provenance: &str, elems: &[Element]) -> Result<Self> {
        let mut s = GeneratorSet::new(structure);
        for (i, x) in elems.iter().enumerate() {
            s.push(format!("{prefix}{i}"), x.clone(), provenance, None)?;
        }
        Ok(s)
    }

    /// A pair structure from its two sides, labelled `m{i}` and `p{i}`.
    pub fn pair(structure: Structure, provenance: &str, minus: &[Element], plus: &[Element]) -> Result<Self> {
        let mut s = GeneratorSet::new(structure);
        for (i, x) in minus.iter().enumerate() {
            s.push(format!("m{i}"), x.clone(), provenance, Some(Side::Minus))?;
        }
        for (i, x) in plus.iter().enumerate() {
            s.push(format!("p{i}"), x.clone(), provenance, Some(Side::Plus))?;
        }
        Ok(s)
    }

    pub fn push(&mut self, label: impl Into<String>, element: Element, provenance: &str, side: Option<Side>) -> Result<()> {
        let label = label.into();
        if self.elements.iter().any(|g| g.label == label) {
            return Err(Error::DuplicateLabel(label));
        }
        if self.structure.is_pair() != side.is_some() {
            return Err(Error::StructureMismatch(format!(
                "generator `{label}`: pair structures need a side on every element, other structures none"
            )));
        }
        self.elements.push(Generator {
            label,
            element,
            provenance: provenance.to_string(),
            side,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> Vec<Element> {
        self.elements.iter().map(|g| g.element.clone()).collect()
    }

    pub fn side(&self, side: Side) -> Vec<Element> {
        self.elements
            .iter()
            .filter(|g| g.side == Some(side))
            .map(|g| g.element.clone())
            .collect()
    }

    /// The same set under another structure; sides are dropped or kept to match.
    pub fn with_structure(&self, structure: Structure) -> Result<Self> {
        if self.structure.is_pair() != structure.is_pair() {
            return Err(Error::StructureMismatch(format!(
                "cannot reinterpret {:?} generators as {structure:?}",
                self.structure
            )));
        }
        Ok(GeneratorSet {
            structure,
            elements: self.elements.clone(),
        })
    }

    fn check(&self, p: &AlgebraPresentation, want_pair: bool) -> Result<()> {
        if self.structure.is_pair() != want_pair {
            return Err(Error::StructureMismatch(format!("unexpected structure {:?}", self.structure)));
        }
        for g in &self.elements {
            p.check_element(&g.element)?;
        }
        Ok(())
    }
}

/// Final span of a closure: one subspace, or the two sides of a pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Span {
    Single(Subspace),
    Pair { minus: Subspace, plus: Subspace },
}

impl Span {
    pub fn rank(&self) -> usize {
        match self {
            Span::Single(s) => s.rank(),
            Span::Pair { minus, plus } => minus.rank() + plus.rank(),
        }
    }

    pub fn single(&self) -> Option<&Subspace> {
        match self {
            Span::Single(s) => Some(s),
            Span::Pair { .. } => None,
        }
    }

    pub fn pair(&self) -> Option<(&Subspace, &Subspace)> {
        match self {
            Span::Single(_) => None,
            Span::Pair { minus, plus } => Some((minus, plus)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Round {
    pub round: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureTrace {
    /// Round 1 is the span of the generators themselves.
    pub rounds: Vec<Round>,
    pub final_span: Span,
    /// First round that added nothing.
    pub stagnated_at: usize,
}

impl ClosureTrace {
    pub fn final_rank(&self) -> usize {
        self.final_span.rank()
    }

    pub fn single(&self) -> &Subspace {
        self.final_span.single().expect("single-space closure")
    }

    pub fn pair(&self) -> (&Subspace, &Subspace) {
        self.final_span.pair().expect("pair closure")
    }
}

impl Serialize for ClosureTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("rounds", &self.rounds)?;
        m.serialize_entry("final_rank", &self.final_rank())?;
        if let Span::Pair { minus, plus } = &self.final_span {
            m.serialize_entry("final_ranks", &serde_json::json!({"minus": minus.rank(), "plus": plus.rank()}))?;
        }
        m.serialize_entry("stagnated_at", &self.stagnated_at)?;
        m.end()
    }
}

fn binary(p: &AlgebraPresentation, structure: Structure, a: &Element, b: &Element) -> Element {
    match structure {
        Structure::Lie => p.bracket(a, b),
        _ => p.mul(a, b),
    }
}

fn ternary(p: &AlgebraPresentation, structure: Structure, a: &Element, b: &Element, c: &Element) -> Element {
    match structure {
        Structure::JordanPair => p.jtriple(a, b, c),
        _ => p.mul3(a, b, c),
    }
}

pub fn lie_closure(p: &AlgebraPresentation, s: &GeneratorSet) -> Result<ClosureTrace> {
    lie_closure_with(p, s, Exec::default())
}

pub fn lie_closure_with(p: &AlgebraPresentation, s: &GeneratorSet, exec: Exec) -> Result<ClosureTrace> {
    if s.structure != Structure::Lie {
        return Err(Error::StructureMismatch(format!("lie_closure given {:?} generators", s.structure)));
    }
    s.check(p, false)?;
    close_single(p, Structure::Lie, &s.elements(), exec)
}

pub fn assoc_closure(p: &AlgebraPresentation, s: &GeneratorSet) -> Result<ClosureTrace> {
    assoc_closure_with(p, s, Exec::default())
}

pub fn assoc_closure_with(p: &AlgebraPresentation, s: &GeneratorSet, exec: Exec) -> Result<ClosureTrace> {
    if s.structure != Structure::Associative {
        return Err(Error::StructureMismatch(format!("assoc_closure given {:?} generators", s.structure)));
    }
    s.check(p, false)?;
    close_single(p, Structure::Associative, &s.elements(), exec)
}

/// Closure of a pair structure. When `components = (A-, A+)` is given, every
/// generator must lie in its side's component.
pub fn pair_closure(p: &AlgebraPresentation, s: &GeneratorSet, components: Option<(&Subspace, &Subspace)>) -> Result<ClosureTrace> {
    pair_closure_with(p, s, components, Exec::default())
}

pub fn pair_closure_with(
    p: &AlgebraPresentation,
    s: &GeneratorSet,
    components: Option<(&Subspace, &Subspace)>,
    exec: Exec,
) -> Result<ClosureTrace> {
    s.check(p, true)?;
    if let Some((minus, plus)) = components {
        for g in &s.elements {
            let side = g.side.expect("pair generators carry sides");
            let comp = if side == Side::Minus { minus } else { plus };
            if !comp.contains(g.element.coords())? {
                return Err(Error::GeneratorOutsideComponent {
                    label: g.label.clone(),
                    side: side.to_string(),
                });
            }
        }
    }
    close_pair(p, s.structure, &s.side(Side::Minus), &s.side(Side::Plus), exec)
}

/// Dispatches on the generator set's structure.
pub fn closure(p: &AlgebraPresentation, s: &GeneratorSet, exec: Exec) -> Result<ClosureTrace> {
    match s.structure {
        Structure::Lie => lie_closure_with(p, s, exec),
        Structure::Associative => assoc_closure_with(p, s, exec),
        Structure::AssocPair | Structure::JordanPair => pair_closure_with(p, s, None, exec),
    }
}

/// Lie closure of plain elements.
pub fn lie_span(p: &AlgebraPresentation, elems: &[Element], exec: Exec) -> Result<ClosureTrace> {
    for x in elems {
        p.check_element(x)?;
    }
    close_single(p, Structure::Lie, elems, exec)
}

/// Associative closure of plain elements.
pub fn assoc_span(p: &AlgebraPresentation, elems: &[Element], exec: Exec) -> Result<ClosureTrace> {
    for x in elems {
        p.check_element(x)?;
    }
    close_single(p, Structure::Associative, elems, exec)
}

/// Pair closure of plain elements, sides given separately.
pub fn pair_span(p: &AlgebraPresentation, structure: Structure, minus: &[Element], plus: &[Element], exec: Exec) -> Result<ClosureTrace> {
    for x in minus.iter().chain(plus) {
        p.check_element(x)?;
    }
    close_pair(p, structure, minus, plus, exec)
}

fn close_single(p: &AlgebraPresentation, structure: Structure, seeds: &[Element], exec: Exec) -> Result<ClosureTrace> {
    let mut span = Subspace::zero(p.field(), p.dim());
    let mut accepted: Vec<Element> = Vec::new();
    for x in seeds {
        if span.push(x.coords()) {
            accepted.push(x.clone());
        }
    }
    let mut rounds = vec![Round { round: 1, rank: span.rank() }];
    let mut done = 0;
    let stagnated_at = loop {
        let round = rounds.len() + 1;
        if span.is_full() || done == accepted.len() {
            rounds.push(Round { round, rank: span.rank() });
            break round;
        }
        let n = accepted.len();
        let tasks: Vec<(usize, usize)> = match structure {
            // antisymmetric: unordered pairs with at least one new factor
            Structure::Lie => (done..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect(),
            _ => (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i.max(j) >= done)
                .collect(),
        };
        let products = exec.map(&tasks, |&(i, j)| binary(p, structure, &accepted[i], &accepted[j]));
        done = n;
        for x in products {
            if span.push(x.coords()) {
                accepted.push(x);
            }
        }
        rounds.push(Round { round, rank: span.rank() });
        if accepted.len() == n {
            break round;
        }
    };
    check_single_closed(p, structure, &span, exec)?;
    Ok(ClosureTrace {
        rounds,
        final_span: Span::Single(span),
        stagnated_at,
    })
}

fn close_pair(p: &AlgebraPresentation, structure: Structure, minus: &[Element], plus: &[Element], exec: Exec) -> Result<ClosureTrace> {
    if !structure.is_pair() {
        return Err(Error::StructureMismatch(format!("{structure:?} is not a pair structure")));
    }
    let zero = Subspace::zero(p.field(), p.dim());
    let mut spans = [zero.clone(), zero];
    let mut accepted: [Vec<Element>; 2] = [Vec::new(), Vec::new()];
    for (side, seeds) in [minus, plus].into_iter().enumerate() {
        for x in seeds {
            if spans[side].push(x.coords()) {
                accepted[side].push(x.clone());
            }
        }
    }
    let rank = |spans: &[Subspace; 2]| spans[0].rank() + spans[1].rank();
    let mut rounds = vec![Round { round: 1, rank: rank(&spans) }];
    let mut done = [0usize, 0usize];
    let stagnated_at = loop {
        let round = rounds.len() + 1;
        if done[0] == accepted[0].len() && done[1] == accepted[1].len() {
            rounds.push(Round { round, rank: rank(&spans) });
            break round;
        }
        let lens = [accepted[0].len(), accepted[1].len()];
        // (output side, i, j, k): x_i y_j z_k with x, z on the output side
        let mut tasks = Vec::new();
        for out in 0..2 {
            let other = 1 - out;
            for i in 0..lens[out] {
                for j in 0..lens[other] {
                    for k in 0..lens[out] {
                        if i >= done[out] || j >= done[other] || k >= done[out] {
                            tasks.push((out, i, j, k));
                        }
                    }
                }
            }
        }
        let products = exec.map(&tasks, |&(out, i, j, k)| {
            ternary(p, structure, &accepted[out][i], &accepted[1 - out][j], &accepted[out][k])
        });
        done = lens;
        for (&(out, ..), x) in tasks.iter().zip(products) {
            if spans[out].push(x.coords()) {
                accepted[out].push(x);
            }
        }
        rounds.push(Round { round, rank: rank(&spans) });
        if accepted[0].len() == lens[0] && accepted[1].len() == lens[1] {
            break round;
        }
    };
    let [minus, plus] = spans;
    check_pair_closed(p, structure, &minus, &plus, exec)?;
    Ok(ClosureTrace {
        rounds,
        final_span: Span::Pair { minus, plus },
        stagnated_at,
    })
}

fn check_single_closed(p: &AlgebraPresentation, structure: Structure, span: &Subspace, exec: Exec) -> Result<()> {
    if span.is_full() {
        return Ok(());
    }
    let basis: Vec<Element> = span.basis().iter().map(|v| Element::new(v.clone())).collect();
    let n = basis.len();
    let escaped = exec.map_range(n, |i| {
        (0..n).find(|&j| !span.holds(binary(p, structure, &basis[i], &basis[j]).coords()))
    });
    match escaped.iter().enumerate().find_map(|(i, j)| j.map(|j| (i, j))) {
        Some((i, j)) => Err(Error::NotClosed(format!("{structure:?} product of basis vectors {i} and {j} escapes"))),
        None => Ok(()),
    }
}

fn check_pair_closed(p: &AlgebraPresentation, structure: Structure, minus: &Subspace, plus: &Subspace, exec: Exec) -> Result<()> {
    let to_elems = |s: &Subspace| s.basis().iter().map(|v| Element::new(v.clone())).collect::<Vec<_>>();
    let sides = [to_elems(minus), to_elems(plus)];
    let spans = [minus, plus];
    for out in 0..2 {
        let other = 1 - out;
        let bad = exec.map(&sides[out], |x| {
            sides[other].iter().any(|y| {
                sides[out]
                    .iter()
                    .any(|z| !spans[out].holds(ternary(p, structure, x, y, z).coords()))
            })
        });
        if bad.into_iter().any(|b| b) {
            let side = if out == 0 { Side::Minus } else { Side::Plus };
            return Err(Error::NotClosed(format!("{structure:?} triple escapes the {side} side")));
        }
    }
    Ok(())
}

pub const DEFAULT_WORD_BUDGET: usize = 1_000_000;

/// The enumeration budget: `ALGCERT_MAX_WORDS` when set, otherwise the default.
pub fn word_budget() -> usize {
    std::env::var("ALGCERT_MAX_WORDS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_WORD_BUDGET)
}

/// Span of all structure words over `S` of length at most `max_len`.
pub fn word_oracle(p: &AlgebraPresentation, s: &GeneratorSet, max_len: usize) -> Result<Span> {
    Ok(word_oracle_levels(p, s, max_len, word_budget())?
        .pop()
        .expect("at least one level"))
}

/// Cumulative spans of words of length `<= L` for `L = 1..=max_len`.
///
/// Lie words are all bracketings `[u, v]` with `|u| + |v| = L`; associative
/// words are left products; pair words are all triple nestings `(u v w)`
/// with alternating sides and `|u| + |v| + |w| = L`. Only exact duplicates
/// and zero vectors are dropped.
pub fn word_oracle_levels(p: &AlgebraPresentation, s: &GeneratorSet, max_len: usize, budget: usize) -> Result<Vec<Span>> {
    if max_len == 0 {
        return Err(Error::InvalidInstance("max_len must be at least 1".into()));
    }
    s.check(p, s.structure.is_pair())?;
    let mut count = 0usize;
    let mut tick = |n: usize| -> Result<()> {
        count += n;
        if count > budget {
            Err(Error::BudgetExceeded { cap: budget })
        } else {
            Ok(())
        }
    };
    let dedup = |words: Vec<Element>| -> Vec<Element> {
        let mut seen = HashSet::new();
        words
            .into_iter()
            .filter(|w| !w.is_zero() && seen.insert(w.clone()))
            .collect()
    };
    let field = p.field();
    let dim = p.dim();
    let mut out = Vec::with_capacity(max_len);
    if !s.structure.is_pair() {
        let mut levels: Vec<Vec<Element>> = vec![Vec::new(), dedup(s.elements())];
        let mut span = Subspace::zero(field, dim);
        for len in 1..=max_len {
            if len >= 2 {
                let mut words = Vec::new();
                match s.structure {
                    Structure::Lie => {
                        for i in 1..len {
                            tick(levels[i].len() * levels[len - i].len())?;
                            for u in &levels[i] {
                                for v in &levels[len - i] {
                                    words.push(p.bracket(u, v));
                                }
                            }
                        }
                    }
                    _ => {
                        tick(levels[len - 1].len() * levels[1].len())?;
                        for u in &levels[len - 1] {
                            for g in &levels[1] {
                                words.push(p.mul(u, g));
                            }
                        }
                    }
                }
                levels.push(dedup(words));
            }
            for w in &levels[len] {
                span.push(w.coords());
            }
            out.push(Span::Single(span.clone()));
        }
    } else {
        // levels[side][len]
        let mut levels: [Vec<Vec<Element>>; 2] = [
            vec![Vec::new(), dedup(s.side(Side::Minus))],
            vec![Vec::new(), dedup(s.side(Side::Plus))],
        ];
        let mut spans = [Subspace::zero(field, dim), Subspace::zero(field, dim)];
        for len in 1..=max_len {
            if len >= 2 {
                for side in 0..2 {
                    let other = 1 - side;
                    let mut words = Vec::new();
                    for a in 1..len {
                        for b in 1..len - a {
                            let c = len - a - b;
                            tick(levels[side][a].len() * levels[other][b].len() * levels[side][c].len())?;
                            for x in &levels[side][a] {
                                for y in &levels[other][b] {
                                    for z in &levels[side][c] {
                                        words.push(ternary(p, s.structure, x, y, z));
                                    }
                                }
                            }
                        }
                    }
                    levels[side].push(dedup(words));
                }
            }
            for side in 0..2 {
                for w in &levels[side][len] {
                    spans[side].push(w.coords());
                }
            }
            out.push(Span::Pair {
                minus: spans[0].clone(),
                plus: spans[1].clone(),
            });
        }
    }
    Ok(out)
}

/// Runs the oracle with growing `max_len` until two consecutive lengths give
/// the same span (two lengths for pairs, whose word lengths are odd).
/// Returns the stable span and the length at which it was first reached.
pub fn stable_word_span(p: &AlgebraPresentation, s: &GeneratorSet, limit: usize) -> Result<(Span, usize)> {
    let step = if s.structure.is_pair() { 2 } else { 1 };
    let levels = word_oracle_levels(p, s, limit, word_budget())?;
    for len in 1..=levels.len().saturating_sub(step) {
        if levels[len - 1] == levels[len - 1 + step] {
            return Ok((levels[len - 1].clone(), len));
        }
    }
    Err(Error::CapExceeded {
        what: "word oracle did not stabilise".into(),
        cap: limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;
    use crate::instances::{build_example1, build_matrix_algebra, build_truncated_polynomial, MatrixInvolution};

    const Q: FieldKind = FieldKind::Rational;

    fn unit(p: &AlgebraPresentation, label: &str) -> Element {
        p.basis_element(p.labels().iter().position(|l| l == label).unwrap())
    }

    fn lie_set(p: &AlgebraPresentation, labels: &[&str]) -> GeneratorSet {
        let elems: Vec<Element> = labels.iter().map(|l| unit(p, l)).collect();
        GeneratorSet::from_elements(Structure::Lie, "g", "test", &elems).unwrap()
    }

    #[test]
    fn lie_closure_examples() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        let t = lie_closure(&m2, &lie_set(&m2, &["E12", "E21"])).unwrap();
        assert_eq!(t.final_rank(), 3);
        assert_eq!(t.rounds.iter().map(|r| r.rank).collect::<Vec<_>>(), vec![2, 3, 3]);
        assert_eq!(t.stagnated_at, 3);

        let t = lie_closure(&m2, &lie_set(&m2, &["E11"])).unwrap();
        assert_eq!(t.final_rank(), 1);

        let ex1 = build_example1(8, Q).unwrap();
        let upper: Vec<Element> = (8..16).step_by(3).map(|i| ex1.basis_element(i)).collect();
        let s = GeneratorSet::from_elements(Structure::Lie, "u", "test", &upper).unwrap();
        let t = lie_closure(&ex1, &s).unwrap();
        assert_eq!(t.final_rank(), upper.len());
    }

    #[test]
    fn assoc_closure_examples() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        let s = lie_set(&m2, &["E12", "E21"]).with_structure(Structure::Associative).unwrap();
        assert_eq!(assoc_closure(&m2, &s).unwrap().final_rank(), 4);
        let s = lie_set(&m2, &["E11"]).with_structure(Structure::Associative).unwrap();
        assert_eq!(assoc_closure(&m2, &s).unwrap().final_rank(), 1);

        let poly = build_truncated_polynomial(4, Q).unwrap();
        let s = GeneratorSet::from_elements(Structure::Associative, "x", "test", &[poly.basis_element(1)]).unwrap();
        let t = assoc_closure(&poly, &s).unwrap();
        assert_eq!(t.final_rank(), 3);
        assert!(!t.single().contains(poly.basis_element(0).coords()).unwrap());
    }

    #[test]
    fn pair_closure_examples() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        for kind in [Structure::AssocPair, Structure::JordanPair] {
            let s = GeneratorSet::pair(kind, "test", &[unit(&m2, "E21")], &[unit(&m2, "E12")]).unwrap();
            let t = pair_closure(&m2, &s, None).unwrap();
            let (minus, plus) = t.pair();
            assert_eq!((minus.rank(), plus.rank()), (1, 1));
            assert!(minus.contains(unit(&m2, "E21").coords()).unwrap());
        }

        let m3 = build_matrix_algebra(3, Q, MatrixInvolution::Flip).unwrap();
        let s = GeneratorSet::pair(Structure::AssocPair, "test", &[unit(&m3, "E31")], &[unit(&m3, "E13")]).unwrap();
        let t = pair_closure(&m3, &s, None).unwrap();
        assert_eq!(t.final_rank(), 2);
    }

    #[test]
    fn pair_generator_outside_component() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        let comp = |l: &str| crate::linalg::echelonize(Q, 4, &[unit(&m2, l).coords().to_vec()]).unwrap();
        let (minus, plus) = (comp("E21"), comp("E12"));
        let s = GeneratorSet::pair(Structure::AssocPair, "test", &[unit(&m2, "E12")], &[unit(&m2, "E12")]).unwrap();
        assert!(matches!(
            pair_closure(&m2, &s, Some((&minus, &plus))),
            Err(Error::GeneratorOutsideComponent { .. })
        ));
    }

    #[test]
    fn generator_set_contracts() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        let mut s = GeneratorSet::new(Structure::Lie);
        s.push("a", unit(&m2, "E12"), "t", None).unwrap();
        assert!(matches!(s.push("a", unit(&m2, "E21"), "t", None), Err(Error::DuplicateLabel(_))));
        assert!(s.push("b", unit(&m2, "E21"), "t", Some(Side::Plus)).is_err());
        let bad = GeneratorSet::from_elements(Structure::Lie, "g", "t", &[Element::zero(Q, 3)]).unwrap();
        assert!(matches!(lie_closure(&m2, &bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn oracle_examples() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        let s = lie_set(&m2, &["E12", "E21"]);
        assert_eq!(word_oracle(&m2, &s, 3).unwrap().rank(), 3);
        assert_eq!(word_oracle(&m2, &s, 1).unwrap().rank(), 2);
        let a = s.with_structure(Structure::Associative).unwrap();
        assert_eq!(word_oracle(&m2, &a, 2).unwrap().rank(), 4);
        let e = word_oracle_levels(&m2, &s, 12, 10);
        assert!(matches!(e, Err(Error::BudgetExceeded { cap: 10 })));
    }

    #[test]
    fn modes_agree() {
        let m3 = build_matrix_algebra(3, Q, MatrixInvolution::None).unwrap();
        let s = lie_set(&m3, &["E12", "E23", "E31"]);
        let a = lie_closure_with(&m3, &s, Exec::Parallel).unwrap();
        let b = lie_closure_with(&m3, &s, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.single(), stable_word_span(&m3, &s, 8).unwrap().0.single().unwrap());
    }

    #[test]
    fn trace_json_shape() {
        let m2 = build_matrix_algebra(2, Q, MatrixInvolution::None).unwrap();
        let t = lie_closure(&m2, &lie_set(&m2, &["E12", "E21"])).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"rounds":[{"round":1,"rank":2},{"round":2,"rank":3},{"round":3,"rank":3}],"final_rank":3,"stagnated_at":3})
        );
    }
}
