//! Concrete algebras: full matrix algebras with the standard involutions and
//! the two truncated counterexample families.
//!
//! Polynomial coefficients are truncated at degree `D` (`x^D = 0` or
//! `y^D = 0`), which keeps every instance finite-dimensional.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, Element, Terms};
use crate::error::{Error, Result};
use crate::field::FieldKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixInvolution {
    None,
    /// `E_ij -> E_ji`
    Transpose,
    /// `(X*)_ij = X_{n+1-j, n+1-i}`
    Flip,
    /// `(a b; c d) -> (d -b; -c a)`, only for `n = 2`.
    Symplectic,
}

fn unit_label(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

/// `M_n(F)` on the matrix-unit basis `E_ij` (row-major), with every matrix
/// unit declared as a generator and `e = E11` as the idempotent.
pub fn build_matrix_algebra(n: usize, field: FieldKind, involution: MatrixInvolution) -> Result<AlgebraPresentation> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!("matrix size must be at least 2, got {n}")));
    }
    if involution == MatrixInvolution::Symplectic && n != 2 {
        return Err(Error::InvalidInstance("the symplectic involution is only defined here for n = 2".into()));
    }
    let idx = |i: usize, j: usize| i * n + j;
    let labels = (0..n)
        .flat_map(|i| (0..n).map(move |j| unit_label(n, i, j)))
        .collect();
    let suffix = match involution {
        MatrixInvolution::None => "",
        MatrixInvolution::Transpose => "_transpose",
        MatrixInvolution::Flip => "_flip",
        MatrixInvolution::Symplectic => "_symplectic",
    };
    let mut p = AlgebraPresentation::new(format!("M{n}{suffix}"), field, labels);
    let one = field.one();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                p.add_product_term(idx(i, j), idx(j, l), idx(i, l), one.clone());
            }
        }
    }
    let dim = n * n;
    let rows: Option<Vec<Terms>> = match involution {
        MatrixInvolution::None => None,
        MatrixInvolution::Transpose => Some(
            (0..dim)
                .map(|k| vec![(idx(k % n, k / n), one.clone())])
                .collect(),
        ),
        MatrixInvolution::Flip => Some(
            (0..dim)
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    vec![(idx(n - 1 - j, n - 1 - i), one.clone())]
                })
                .collect(),
        ),
        MatrixInvolution::Symplectic => {
            let m1 = field.from_i64(-1);
            Some(vec![
                vec![(idx(1, 1), one.clone())],
                vec![(idx(0, 1), m1.clone())],
                vec![(idx(1, 0), m1)],
                vec![(idx(0, 0), one.clone())],
            ])
        }
    };
    if let Some(rows) = rows {
        p.set_involution(rows);
    }
    let mut unit = Element::zero(field, dim);
    for i in 0..n {
        unit = &unit + &p.basis_element(idx(i, i));
    }
    p.set_unit(unit);
    p.add_idempotent("e", p.basis_element(idx(0, 0)));
    if involution == MatrixInvolution::Flip && n >= 5 {
        p.add_idempotent("e2", &p.basis_element(idx(0, 0)) + &p.basis_element(idx(1, 1)));
    }
    for k in 0..dim {
        let label = p.labels()[k].clone();
        p.add_generator(label, p.basis_element(k));
    }
    Ok(p)
}

fn monomial(x_power: usize, y_power: usize) -> String {
    let part = |v: &str, k: usize| match k {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{k}"),
    };
    let parts: Vec<String> = [part("x", x_power), part("y", y_power)]
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    parts.join("*")
}

fn coeff_label(mono: &str, unit: &str) -> String {
    if mono.is_empty() {
        unit.to_string()
    } else {
        format!("{mono}*{unit}")
    }
}

/// Upper-triangular 2x2 matrices over `F[x]/(x^D)`.
///
/// Basis `x^a E11, x^a E12, x^a E22` for `0 <= a < D`, grouped by matrix unit.
/// Generators are `E11, E22, E12` and `x = x E11 + x E22`; no involution.
pub fn build_example1(truncation: usize, field: FieldKind) -> Result<AlgebraPresentation> {
    let d = truncation;
    if d < 1 {
        return Err(Error::InvalidInstance("truncation degree must be at least 1".into()));
    }
    let units = [("E11", 0usize, 0usize), ("E12", 0, 1), ("E22", 1, 1)];
    let idx = |u: usize, a: usize| u * d + a;
    let labels = units
        .iter()
        .flat_map(|(name, _, _)| (0..d).map(move |a| coeff_label(&monomial(a, 0), name)))
        .collect();
    let mut p = AlgebraPresentation::new(format!("example1_D{d}"), field, labels);
    let one = field.one();
    for (u, &(_, i, j)) in units.iter().enumerate() {
        for (v, &(_, k, l)) in units.iter().enumerate() {
            if j != k {
                continue;
            }
            let w = units.iter().position(|&(_, r, c)| r == i && c == l).expect("triangular closure");
            for a in 0..d {
                for b in 0..d - a {
                    p.add_product_term(idx(u, a), idx(v, b), idx(w, a + b), one.clone());
                }
            }
        }
    }
    let e11 = p.basis_element(idx(0, 0));
    let e12 = p.basis_element(idx(1, 0));
    let e22 = p.basis_element(idx(2, 0));
    p.set_unit(&e11 + &e22);
    p.add_idempotent("e", e11.clone());
    p.add_generator("E11", e11);
    p.add_generator("E22", e22);
    p.add_generator("E12", e12);
    if d >= 2 {
        p.add_generator("x", &p.basis_element(idx(0, 1)) + &p.basis_element(idx(2, 1)));
    }
    Ok(p)
}

/// `M_2(A)` with `A = F[x, y]/(x^2, y^D)` and the involution
/// `(a b; c d) -> (d^φ b^φ; c^φ a^φ)`, where `φ(x) = -x`, `φ(y) = y`.
///
/// Basis `x^ε y^b E_ij`, grouped by coefficient monomial then matrix unit.
pub fn build_example2(truncation: usize, field: FieldKind) -> Result<AlgebraPresentation> {
    let d = truncation;
    if d < 1 {
        return Err(Error::InvalidInstance("truncation degree must be at least 1".into()));
    }
    let monos: Vec<(usize, usize)> = (0..2).flat_map(|eps| (0..d).map(move |b| (eps, b))).collect();
    let mono_idx = |eps: usize, b: usize| eps * d + b;
    let idx = |m: usize, i: usize, j: usize| m * 4 + i * 2 + j;
    let labels = monos
        .iter()
        .flat_map(|&(eps, b)| {
            (0..2).flat_map(move |i| (0..2).map(move |j| coeff_label(&monomial(eps, b), &unit_label(2, i, j))))
        })
        .collect();
    let mut p = AlgebraPresentation::new(format!("example2_D{d}"), field, labels);
    let one = field.one();
    for (m1, &(e1, b1)) in monos.iter().enumerate() {
        for (m2, &(e2, b2)) in monos.iter().enumerate() {
            if e1 + e2 > 1 || b1 + b2 >= d {
                continue;
            }
            let m = mono_idx(e1 + e2, b1 + b2);
            for i in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        p.add_product_term(idx(m1, i, j), idx(m2, j, l), idx(m, i, l), one.clone());
                    }
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(p.dim());
    for &(eps, _) in &monos {
        let sign = if eps == 1 { field.from_i64(-1) } else { one.clone() };
        for i in 0..2 {
            for j in 0..2 {
                // E11 <-> E22 swap, E12 and E21 stay; every coefficient twisted by φ.
                let (ti, tj) = match (i, j) {
                    (0, 0) => (1, 1),
                    (1, 1) => (0, 0),
                    other => other,
                };
                let m = rows.len() / 4;
                rows.push(vec![(idx(m, ti, tj), sign.clone())]);
            }
        }
    }
    p.set_involution(rows);
    let unit = &p.basis_element(idx(0, 0, 0)) + &p.basis_element(idx(0, 1, 1));
    p.set_unit(unit);
    p.add_idempotent("e", p.basis_element(idx(0, 0, 0)));
    for i in 0..2 {
        for j in 0..2 {
            p.add_generator(unit_label(2, i, j), p.basis_element(idx(0, i, j)));
        }
    }
    let scalar = |p: &AlgebraPresentation, m: usize| &p.basis_element(idx(m, 0, 0)) + &p.basis_element(idx(m, 1, 1));
    let x = scalar(&p, mono_idx(1, 0));
    p.add_generator("x", x);
    if d >= 2 {
        let y = scalar(&p, mono_idx(0, 1));
        p.add_generator("y", y);
    }
    Ok(p)
}

/// `F[x]/(x^D)` on the monomial basis `1, x, ..., x^(D-1)`; generator `x`.
pub fn build_truncated_polynomial(truncation: usize, field: FieldKind) -> Result<AlgebraPresentation> {
    let d = truncation;
    if d < 1 {
        return Err(Error::InvalidInstance("truncation degree must be at least 1".into()));
    }
    let labels = (0..d)
        .map(|a| match monomial(a, 0) {
            m if m.is_empty() => "1".to_string(),
            m => m,
        })
        .collect();
    let mut p = AlgebraPresentation::new(format!("poly_D{d}"), field, labels);
    for a in 0..d {
        for b in 0..d - a {
            p.add_product_term(a, b, a + b, field.one());
        }
    }
    p.set_unit(p.basis_element(0));
    if d >= 2 {
        p.add_generator("x", p.basis_element(1));
    }
    Ok(p)
}

/// Indices of m2_example2 basis vectors with an `x` factor.
pub fn example2_x_component(truncation: usize) -> std::ops::Range<usize> {
    4 * truncation..8 * truncation
}

/// Indices of triangular_example1 basis vectors `x^a E12`.
pub fn example1_upper_component(truncation: usize) -> std::ops::Range<usize> {
    truncation..2 * truncation
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    MatrixN,
    TriangularExample1,
    M2Example2,
    FlipMatrixN,
    SymplecticM2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub truncation: usize,
    pub field: FieldKind,
    /// Only used by `MatrixN`.
    pub involution: MatrixInvolution,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<AlgebraPresentation> {
        match self.kind {
            InstanceKind::MatrixN => build_matrix_algebra(self.n, self.field, self.involution),
            InstanceKind::FlipMatrixN => build_matrix_algebra(self.n, self.field, MatrixInvolution::Flip),
            InstanceKind::SymplecticM2 => build_matrix_algebra(2, self.field, MatrixInvolution::Symplectic),
            InstanceKind::TriangularExample1 => build_example1(self.truncation, self.field),
            InstanceKind::M2Example2 => build_example2(self.truncation, self.field),
        }
    }
}
