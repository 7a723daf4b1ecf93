//! Finite-dimensional associative algebras given by structure constants.

use std::borrow::Cow;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{FieldKind, Scalar};
use crate::linalg::{is_zero_vector, zero_vector, Subspace, Vector};

/// A coordinate vector over the basis of some presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vector,
}

impl Element {
    pub fn new(coords: Vector) -> Self {
        Element { coords }
    }

    pub fn zero(field: FieldKind, dim: usize) -> Self {
        Element::new(zero_vector(field, dim))
    }

    pub fn basis(field: FieldKind, dim: usize, i: usize) -> Self {
        let mut v = zero_vector(field, dim);
        v[i] = field.one();
        Element::new(v)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coords)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element::new(self.coords.iter().map(|x| x * c).collect())
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &Scalar, other: &Element) -> Element {
        let mut out = self.coords.clone();
        for (o, x) in out.iter_mut().zip(&other.coords) {
            if !x.is_zero() {
                o.add_mul_assign(c, x);
            }
        }
        Element::new(out)
    }

    /// Nonzero entries as `(index, coefficient)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(ToString::to_string).collect()
    }
}

impl From<Vector> for Element {
    fn from(v: Vector) -> Self {
        Element::new(v)
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        Element::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        Element::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        Element::new(self.coords.iter().map(|a| -a).collect())
    }
}

/// Sparse linear combination of basis vectors.
pub type Terms = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraPresentation {
    name: String,
    field: FieldKind,
    labels: Vec<String>,
    /// `table[i * dim + j]` holds `b_i b_j`; missing terms are zero.
    table: Vec<Terms>,
    /// Row `i` is the image of `b_i`.
    involution: Option<Vec<Terms>>,
    idempotents: Vec<(String, Element)>,
    generators: Vec<(String, Element)>,
    unit: Option<Element>,
}

impl AlgebraPresentation {
    /// An algebra with the given basis labels and zero multiplication.
    pub fn new(name: impl Into<String>, field: FieldKind, labels: Vec<String>) -> Self {
        let dim = labels.len();
        AlgebraPresentation {
            name: name.into(),
            field,
            labels,
            table: vec![Vec::new(); dim * dim],
            involution: None,
            idempotents: Vec::new(),
            generators: Vec::new(),
            unit: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_involution(&self) -> bool {
        self.involution.is_some()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn unit(&self) -> Option<&Element> {
        self.unit.as_ref()
    }

    pub fn idempotents(&self) -> &[(String, Element)] {
        &self.idempotents
    }

    pub fn generators(&self) -> &[(String, Element)] {
        &self.generators
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Terms {
        &self.table[i * self.dim() + j]
    }

    pub fn involution_rows(&self) -> Option<&[Terms]> {
        self.involution.as_deref()
    }

    /// Adds `c * b_k` to the product `b_i b_j`.
    pub fn add_product_term(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let n = self.dim();
        let cell = &mut self.table[i * n + j];
        match cell.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, v)) => *v = &*v + &c,
            None => cell.push((k, c)),
        }
        cell.retain(|(_, v)| !v.is_zero());
        cell.sort_by_key(|(kk, _)| *kk);
    }

    pub fn set_involution(&mut self, rows: Vec<Terms>) {
        assert_eq!(rows.len(), self.dim());
        self.involution = Some(
            rows.into_iter()
                .map(|mut r| {
                    r.retain(|(_, v)| !v.is_zero());
                    r.sort_by_key(|(k, _)| *k);
                    r
                })
                .collect(),
        );
    }

    pub fn clear_involution(&mut self) {
        self.involution = None;
    }

    pub fn set_unit(&mut self, unit: Element) {
        self.unit = Some(unit);
    }

    pub fn add_idempotent(&mut self, name: impl Into<String>, e: Element) {
        self.idempotents.push((name.into(), e));
    }

    pub fn add_generator(&mut self, name: impl Into<String>, a: Element) {
        self.generators.push((name.into(), a));
    }

    pub fn set_generators(&mut self, gens: Vec<(String, Element)>) {
        self.generators = gens;
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.field, self.dim())
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(self.field, self.dim(), i)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    /// Generators declared in the presentation, or the basis when none are.
    pub fn generators_or_basis(&self) -> Vec<(String, Element)> {
        if self.generators.is_empty() {
            self.labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), self.basis_element(i)))
                .collect()
        } else {
            self.generators.clone()
        }
    }

    /// Looks up a named idempotent first, then a named generator.
    pub fn named(&self, name: &str) -> Result<&Element> {
        self.idempotents
            .iter()
            .chain(&self.generators)
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn check_element(&self, a: &Element) -> Result<()> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        Ok(())
    }

    fn require_involution(&self) -> Result<&[Terms]> {
        self.involution
            .as_deref()
            .ok_or_else(|| Error::MissingInvolution(self.name.clone()))
    }

    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        let n = self.dim();
        let mut out = zero_vector(self.field, n);
        let right: Vec<(usize, &Scalar)> = b.support().collect();
        if right.is_empty() {
            return Element::new(out);
        }
        for (i, ai) in a.support() {
            let row = &self.table[i * n..(i + 1) * n];
            for &(j, bj) in &right {
                let cell = &row[j];
                if cell.is_empty() {
                    continue;
                }
                let coef = ai * bj;
                for (k, c) in cell {
                    out[*k].add_mul_assign(&coef, c);
                }
            }
        }
        Element::new(out)
    }

    pub(crate) fn mul3(&self, a: &Element, b: &Element, c: &Element) -> Element {
        self.mul(&self.mul(a, b), c)
    }

    pub(crate) fn star(&self, a: &Element) -> Element {
        let rows = self.involution.as_ref().expect("involution present");
        let mut out = zero_vector(self.field, self.dim());
        for (i, ai) in a.support() {
            for (k, c) in &rows[i] {
                out[*k].add_mul_assign(ai, c);
            }
        }
        Element::new(out)
    }

    pub(crate) fn bracket(&self, a: &Element, b: &Element) -> Element {
        &self.mul(a, b) - &self.mul(b, a)
    }

    pub(crate) fn jordan(&self, a: &Element, b: &Element) -> Element {
        (&self.mul(a, b) + &self.mul(b, a)).scale(&self.field.half())
    }

    /// `{a, b, c} = abc + cba`
    pub(crate) fn jtriple(&self, a: &Element, b: &Element, c: &Element) -> Element {
        &self.mul3(a, b, c) + &self.mul3(c, b, a)
    }

    /// `{a} = a - a*`
    pub(crate) fn brace_of(&self, a: &Element) -> Element {
        a - &self.star(a)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub fn involve(&self, a: &Element) -> Result<Element> {
        self.require_involution()?;
        self.check_element(a)?;
        Ok(self.star(a))
    }

    /// `[a, b] = ab - ba`
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.bracket(a, b))
    }

    /// `a ∘ b = (ab + ba) / 2`
    pub fn circle(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.jordan(a, b))
    }

    /// Associative triple product `(a, b, c) = abc`.
    pub fn triple_assoc(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        for x in [a, b, c] {
            self.check_element(x)?;
        }
        Ok(self.mul3(a, b, c))
    }

    /// Jordan triple product `{a, b, c} = abc + cba`.
    pub fn triple_jordan(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        for x in [a, b, c] {
            self.check_element(x)?;
        }
        Ok(self.jtriple(a, b, c))
    }

    pub fn brace(&self, a: &Element) -> Result<Element> {
        self.require_involution()?;
        self.check_element(a)?;
        Ok(self.brace_of(a))
    }

    /// Human-readable linear combination, e.g. `E12 - E23` or `1/2*E11 + 1/2*E22`.
    pub fn display(&self, a: &Element) -> String {
        let mut out = String::new();
        for (i, c) in a.support() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&self.labels[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn is_idempotent(&self, e: &Element) -> bool {
        e.dim() == self.dim() && self.mul(e, e) == *e
    }

    /// Adjoins a unit as a new last basis vector named `1`.
    ///
    /// The involution, if present, fixes the new unit; idempotents and
    /// generators are carried over through the embedding.
    pub fn unital_hull(&self) -> Result<AlgebraPresentation> {
        if self.is_unital() {
            return Err(Error::AlreadyUnital);
        }
        let n = self.dim();
        let f = self.field;
        let mut labels = self.labels.clone();
        labels.push("1".to_string());
        let mut h = AlgebraPresentation::new(format!("{}+1", self.name), f, labels);
        for i in 0..n {
            for j in 0..n {
                h.table[i * (n + 1) + j] = self.table[i * n + j].clone();
            }
            h.table[i * (n + 1) + n] = vec![(i, f.one())];
            h.table[n * (n + 1) + i] = vec![(i, f.one())];
        }
        h.table[n * (n + 1) + n] = vec![(n, f.one())];
        if let Some(rows) = &self.involution {
            let mut rows = rows.clone();
            rows.push(vec![(n, f.one())]);
            h.involution = Some(rows);
        }
        let embed = |e: &Element| {
            let mut v = e.coords.clone();
            v.push(f.zero());
            Element::new(v)
        };
        h.idempotents = self.idempotents.iter().map(|(s, e)| (s.clone(), embed(e))).collect();
        h.generators = self.generators.iter().map(|(s, e)| (s.clone(), embed(e))).collect();
        h.unit = Some(Element::basis(f, n + 1, n));
        Ok(h)
    }

    /// Checks the presentation's axioms and reports the generation hypotheses
    /// of every declared idempotent.
    pub fn validate(&self) -> ValidationReport {
        validate_presentation(self)
    }
}

fn terms_to_element(field: FieldKind, dim: usize, terms: &Terms) -> Element {
    let mut v = zero_vector(field, dim);
    for (k, c) in terms {
        v[*k] = c.clone();
    }
    Element::new(v)
}

/// An algebra together with a unit: the algebra itself when unital, its
/// unital hull otherwise. Elements of the original algebra are embedded by
/// appending a zero coordinate for the adjoined unit.
#[derive(Clone, Debug)]
pub struct UnitalView<'a> {
    algebra: Cow<'a, AlgebraPresentation>,
    base_dim: usize,
}

impl<'a> UnitalView<'a> {
    pub fn new(p: &'a AlgebraPresentation) -> Self {
        let algebra = if p.is_unital() {
            Cow::Borrowed(p)
        } else {
            Cow::Owned(p.unital_hull().expect("non-unital algebra has a hull"))
        };
        UnitalView {
            algebra,
            base_dim: p.dim(),
        }
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    pub fn is_hull(&self) -> bool {
        self.algebra.dim() != self.base_dim
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn one(&self) -> Element {
        self.algebra.unit.clone().expect("view is unital")
    }

    pub fn embed(&self, x: &Element) -> Element {
        if !self.is_hull() {
            return x.clone();
        }
        let mut v = x.coords.clone();
        v.push(self.algebra.field.zero());
        Element::new(v)
    }

    /// Drops the adjoined-unit coordinate; `x` must lie in the original algebra.
    pub fn restrict(&self, x: &Element) -> Element {
        if !self.is_hull() {
            return x.clone();
        }
        debug_assert!(x.coords[self.base_dim].is_zero(), "element leaves the original algebra");
        Element::new(x.coords[..self.base_dim].to_vec())
    }

    pub fn base_basis(&self) -> Vec<Element> {
        (0..self.base_dim).map(|i| self.algebra.basis_element(i)).collect()
    }

    /// `1 - x` for `x` in view coordinates.
    pub fn complement(&self, x: &Element) -> Element {
        &self.one() - x
    }
}

/// Span of `b_i x b_j` over the basis of the original algebra, returned in
/// original coordinates. This is the two-sided ideal `R x R`.
pub fn sandwich_span(view: &UnitalView<'_>, x: &Element, exec: Exec) -> Subspace {
    let alg = view.algebra();
    let basis = view.base_basis();
    let right: Vec<Element> = basis.iter().map(|b| alg.mul(x, b)).collect();
    let cols: Vec<Vec<Element>> = exec.map(&basis, |bi| right.iter().map(|xr| view.restrict(&alg.mul(bi, xr))).collect());
    let mut s = Subspace::zero(alg.field(), view.base_dim());
    for col in cols {
        for v in col {
            s.push(v.coords());
            if s.is_full() {
                return s;
            }
        }
    }
    s
}

/// Smallest two-sided ideal containing `seeds`, by saturation under left and
/// right multiplication with basis vectors.
pub fn ideal_closure(p: &AlgebraPresentation, seeds: &[Element]) -> Subspace {
    let mut s = Subspace::zero(p.field(), p.dim());
    let mut frontier: Vec<Element> = Vec::new();
    for x in seeds {
        if s.push(x.coords()) {
            frontier.push(x.clone());
        }
    }
    let basis = p.basis_elements();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for b in &basis {
                for y in [p.mul(b, x), p.mul(x, b)] {
                    if s.push(y.coords()) {
                        next.push(y);
                    }
                }
            }
        }
        frontier = next;
    }
    s
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub indices: Vec<usize>,
    pub detail: String,
}

/// Generation hypotheses attached to one declared idempotent `e`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HypothesisReport {
    pub idempotent: String,
    pub is_idempotent: bool,
    /// `ReR = R`
    pub rer_full: bool,
    /// `R(1-e)R = R`
    pub complement_ideal_full: bool,
    /// `ee* = e*e = 0`, when an involution is present.
    pub orthogonal_to_involute: Option<bool>,
    /// `R(1-e-e*)R = R`, when an involution is present.
    pub s_ideal_full: Option<bool>,
}

impl HypothesisReport {
    /// Hypotheses for `[R,R]` generation: `ReR = R(1-e)R = R`.
    pub fn commutator_hypotheses_hold(&self) -> bool {
        self.is_idempotent && self.rer_full && self.complement_ideal_full
    }

    /// Hypotheses for `[K,K]` generation: `ee* = e*e = 0`, `ReR = R(1-e-e*)R = R`.
    pub fn skew_hypotheses_hold(&self) -> bool {
        self.is_idempotent
            && self.rer_full
            && self.orthogonal_to_involute == Some(true)
            && self.s_ideal_full == Some(true)
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub hypotheses: Vec<HypothesisReport>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_REPORTED: usize = 256;

/// Axiom checks on all basis triples and pairs, plus ideal hypotheses for
/// each declared idempotent. Violations are data; this never fails.
pub fn validate_presentation(p: &AlgebraPresentation) -> ValidationReport {
    let n = p.dim();
    let f = p.field();
    let basis = p.basis_elements();
    let exec = Exec::default();
    let mut violations = Vec::new();

    for (what, e) in p.idempotents.iter().chain(&p.generators).map(|(s, e)| (s, e)) {
        if e.dim() != n {
            violations.push(Violation {
                axiom: "vector length".into(),
                indices: vec![],
                detail: format!("`{what}` has length {} but dim is {n}", e.dim()),
            });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations, hypotheses: vec![] };
    }

    let products: Vec<Vec<Element>> = exec.map(&basis, |bi| basis.iter().map(|bj| p.mul(bi, bj)).collect());
    let assoc: Vec<Vec<Violation>> = exec.map_range(n, |i| {
        let mut out = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let left = p.mul(&products[i][j], &basis[k]);
                let right = p.mul(&basis[i], &products[j][k]);
                if left != right {
                    out.push(Violation {
                        axiom: "associativity".into(),
                        indices: vec![i, j, k],
                        detail: format!("(b{i} b{j}) b{k} != b{i} (b{j} b{k})"),
                    });
                }
            }
        }
        out
    });
    violations.extend(assoc.into_iter().flatten().take(MAX_REPORTED));

    if let Some(rows) = &p.involution {
        let stars: Vec<Element> = rows.iter().map(|r| terms_to_element(f, n, r)).collect();
        for i in 0..n {
            if p.star(&stars[i]) != basis[i] {
                violations.push(Violation {
                    axiom: "involution order 2".into(),
                    indices: vec![i],
                    detail: format!("b{i}** != b{i}"),
                });
            }
        }
        let anti: Vec<Vec<Violation>> = exec.map_range(n, |i| {
            (0..n)
                .filter(|&j| p.star(&products[i][j]) != p.mul(&stars[j], &stars[i]))
                .map(|j| Violation {
                    axiom: "involution anti-multiplicative".into(),
                    indices: vec![i, j],
                    detail: format!("(b{i} b{j})* != b{j}* b{i}*"),
                })
                .collect()
        });
        violations.extend(anti.into_iter().flatten().take(MAX_REPORTED));
    }

    if let Some(u) = &p.unit {
        for (i, b) in basis.iter().enumerate() {
            if p.mul(u, b) != *b || p.mul(b, u) != *b {
                violations.push(Violation {
                    axiom: "unit".into(),
                    indices: vec![i],
                    detail: format!("1 b{i} != b{i} or b{i} 1 != b{i}"),
                });
            }
        }
    }

    for (name, e) in &p.idempotents {
        if !p.is_idempotent(e) {
            violations.push(Violation {
                axiom: "idempotent".into(),
                indices: vec![],
                detail: format!("{name}^2 != {name}"),
            });
        }
    }

    let hypotheses = if violations.is_empty() {
        p.idempotents
            .iter()
            .map(|(name, e)| hypothesis_report(p, name, e))
            .collect()
    } else {
        Vec::new()
    };
    ValidationReport { violations, hypotheses }
}

/// Ideal hypotheses for one idempotent, computed as sandwich spans.
pub fn hypothesis_report(p: &AlgebraPresentation, name: &str, e: &Element) -> HypothesisReport {
    let exec = Exec::default();
    let view = UnitalView::new(p);
    let is_idem = p.is_idempotent(e);
    let ev = view.embed(e);
    let rer_full = sandwich_span(&view, &ev, exec).is_full();
    let complement_ideal_full = sandwich_span(&view, &view.complement(&ev), exec).is_full();
    let (orthogonal_to_involute, s_ideal_full) = if p.has_involution() {
        let es = p.star(e);
        let orth = p.mul(e, &es).is_zero() && p.mul(&es, e).is_zero();
        let s = &view.complement(&ev) - &view.embed(&es);
        (Some(orth), Some(sandwich_span(&view, &s, exec).is_full()))
    } else {
        (None, None)
    };
    HypothesisReport {
        idempotent: name.to_string(),
        is_idempotent: is_idem,
        rer_full,
        complement_ideal_full,
        orthogonal_to_involute,
        s_ideal_full,
    }
}
