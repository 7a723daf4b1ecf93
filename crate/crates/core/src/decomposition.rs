//! Peirce decomposition, the five-part grading by `e, e*, s = 1 - e - e*`,
//! and the skew/symmetric split.
//!
//! Components are computed by sandwiching every basis vector between the
//! relevant idempotents and echelonizing the results. For a non-unital
//! algebra, `1 - e` and `s` live in the unital hull; every sandwich of an
//! element of `R` lands back in `R`, so components are reported in the
//! original coordinates.

use serde::Serialize;

use crate::algebra::{AlgebraPresentation, Element, UnitalView};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::Subspace;

pub const PEIRCE_NAMES: [&str; 4] = ["eRe", "eR(1-e)", "(1-e)Re", "(1-e)R(1-e)"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeirceDecomposition {
    /// `eRe, eR(1-e), (1-e)Re, (1-e)R(1-e)` in that order.
    pub components: [Subspace; 4],
}

impl PeirceDecomposition {
    pub fn dims(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|i| self.components[i].rank())
    }

    pub fn e_r_f(&self) -> &Subspace {
        &self.components[1]
    }

    pub fn f_r_e(&self) -> &Subspace {
        &self.components[2]
    }

    pub fn is_direct_sum(&self) -> bool {
        is_direct(&self.components)
    }
}

fn is_direct(parts: &[Subspace]) -> bool {
    let Some(first) = parts.first() else { return true };
    let total: usize = parts.iter().map(Subspace::rank).sum();
    if total != first.ambient_dim() {
        return false;
    }
    let mut acc = Subspace::zero(first.field(), first.ambient_dim());
    for p in parts {
        acc = acc.sum(p).expect("same ambient space");
    }
    acc.is_full()
}

/// Span of `x b y` over the basis `b` of the original algebra, for each
/// `(x, y)` pair; all elements in view coordinates.
pub(crate) fn sandwich_component(view: &UnitalView<'_>, pairs: &[(&Element, &Element)], exec: Exec) -> Subspace {
    let alg = view.algebra();
    let basis = view.base_basis();
    let images: Vec<Vec<Element>> = exec.map(&basis, |b| {
        pairs
            .iter()
            .map(|(x, y)| view.restrict(&alg.mul3(x, b, y)))
            .collect()
    });
    let mut s = Subspace::zero(alg.field(), view.base_dim());
    for v in images.iter().flatten() {
        s.push(v.coords());
    }
    s
}

pub fn peirce_decompose(p: &AlgebraPresentation, e: &Element) -> Result<PeirceDecomposition> {
    p.check_element(e)?;
    if !p.is_idempotent(e) {
        return Err(Error::NotIdempotent(p.display(e)));
    }
    let exec = Exec::default();
    let view = UnitalView::new(p);
    let ev = view.embed(e);
    let fv = view.complement(&ev);
    let components = [(&ev, &ev), (&ev, &fv), (&fv, &ev), (&fv, &fv)]
        .map(|pair| sandwich_component(&view, &[pair], exec));
    Ok(PeirceDecomposition { components })
}

/// One product of grading basis vectors that left its predicted component.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GradingViolation {
    pub left_degree: i32,
    pub right_degree: i32,
    pub left_index: usize,
    pub right_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZGrading {
    /// `R_{-2}, R_{-1}, R_0, R_1, R_2`
    pub components: [Subspace; 5],
    pub e: Element,
    pub e_star: Element,
    /// Whether `s = 1 - e - e*` vanishes.
    pub s_is_zero: bool,
    pub violations: Vec<GradingViolation>,
    pub checked_products: usize,
}

impl ZGrading {
    pub fn component(&self, degree: i32) -> &Subspace {
        assert!((-2..=2).contains(&degree), "degree {degree} out of range");
        &self.components[(degree + 2) as usize]
    }

    pub fn dims(&self) -> [usize; 5] {
        [0, 1, 2, 3, 4].map(|i| self.components[i].rank())
    }

    pub fn is_direct_sum(&self) -> bool {
        is_direct(&self.components)
    }

    pub fn is_multiplicative(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn z_grading(p: &AlgebraPresentation, e: &Element) -> Result<ZGrading> {
    z_grading_with(p, e, Exec::default())
}

pub fn z_grading_with(p: &AlgebraPresentation, e: &Element, exec: Exec) -> Result<ZGrading> {
    if !p.has_involution() {
        return Err(Error::MissingInvolution(p.name().to_string()));
    }
    p.check_element(e)?;
    if !p.is_idempotent(e) {
        return Err(Error::NotIdempotent(p.display(e)));
    }
    let e_star = p.star(e);
    if !p.mul(e, &e_star).is_zero() || !p.mul(&e_star, e).is_zero() {
        return Err(Error::IdempotentConditions("ee* = e*e = 0 fails".into()));
    }
    let view = UnitalView::new(p);
    let ev = view.embed(e);
    let esv = view.embed(&e_star);
    let sv = &view.complement(&ev) - &esv;
    let s_is_zero = sv.is_zero();
    let components = [
        vec![(&ev, &esv)],
        vec![(&ev, &sv), (&sv, &esv)],
        vec![(&ev, &ev), (&esv, &esv), (&sv, &sv)],
        vec![(&esv, &sv), (&sv, &ev)],
        vec![(&esv, &ev)],
    ]
    .map(|pairs| sandwich_component(&view, &pairs, exec));
    let mut g = ZGrading {
        components,
        e: e.clone(),
        e_star,
        s_is_zero,
        violations: Vec::new(),
        checked_products: 0,
    };
    let (violations, checked) = grading_violations(p, &g.components, exec);
    g.violations = violations;
    g.checked_products = checked;
    Ok(g)
}

/// Exhaustive check that `R_i R_j ⊆ R_{i+j}`, with `R_i R_j = 0` when
/// `|i + j| > 2`, over all pairs of component basis vectors.
pub fn grading_violations(p: &AlgebraPresentation, components: &[Subspace; 5], exec: Exec) -> (Vec<GradingViolation>, usize) {
    let pairs: Vec<(i32, i32)> = (-2..=2).flat_map(|i| (-2..=2).map(move |j| (i, j))).collect();
    let comp = |d: i32| &components[(d + 2) as usize];
    let found: Vec<(Vec<GradingViolation>, usize)> = exec.map(&pairs, |&(i, j)| {
        let mut out = Vec::new();
        let mut count = 0;
        for (a, u) in comp(i).basis().iter().enumerate() {
            let u = Element::new(u.clone());
            for (b, v) in comp(j).basis().iter().enumerate() {
                count += 1;
                let prod = p.mul(&u, &Element::new(v.clone()));
                let ok = if (i + j).abs() > 2 {
                    prod.is_zero()
                } else {
                    comp(i + j).holds(prod.coords())
                };
                if !ok {
                    out.push(GradingViolation {
                        left_degree: i,
                        right_degree: j,
                        left_index: a,
                        right_index: b,
                    });
                }
            }
        }
        (out, count)
    });
    let checked = found.iter().map(|(_, c)| c).sum();
    (found.into_iter().flat_map(|(v, _)| v).collect(), checked)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KHSplit {
    /// Skew elements, `a* = -a`.
    pub k: Subspace,
    /// Symmetric elements, `a* = a`.
    pub h: Subspace,
    /// `(K_i, H_i)` for degrees `-2..=2`, when a grading was supplied.
    pub graded: Option<[(Subspace, Subspace); 5]>,
}

impl KHSplit {
    pub fn k_deg(&self, degree: i32) -> &Subspace {
        &self.graded.as_ref().expect("graded split")[(degree + 2) as usize].0
    }

    pub fn h_deg(&self, degree: i32) -> &Subspace {
        &self.graded.as_ref().expect("graded split")[(degree + 2) as usize].1
    }
}

/// `K = span{b - b*}` and `H = span{b + b*}`; in characteristic not 2 these
/// are exactly the `-1` and `+1` eigenspaces of the involution.
pub fn kh_split(p: &AlgebraPresentation, grading: Option<&ZGrading>) -> Result<KHSplit> {
    if !p.has_involution() {
        return Err(Error::MissingInvolution(p.name().to_string()));
    }
    let mut k = Subspace::zero(p.field(), p.dim());
    let mut h = Subspace::zero(p.field(), p.dim());
    for b in p.basis_elements() {
        let s = p.star(&b);
        k.push((&b - &s).coords());
        h.push((&b + &s).coords());
    }
    let graded = match grading {
        Some(g) => {
            let mut parts = Vec::with_capacity(5);
            for c in &g.components {
                parts.push((k.intersect(c)?, h.intersect(c)?));
            }
            Some(parts.try_into().expect("five components"))
        }
        None => None,
    };
    Ok(KHSplit { k, h, graded })
}

/// `{a} = a - a*`
pub fn brace(p: &AlgebraPresentation, a: &Element) -> Result<Element> {
    p.brace(a)
}
