//! Canonical subspaces over an exact field.
//!
//! A [`Subspace`] is kept in reduced row-echelon form at all times: pivot
//! entries are 1, pivot columns are zero in every other row, and rows are
//! sorted by pivot column. RREF is unique for a given span, so two subspaces
//! are equal exactly when their stored bases are equal.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: FieldKind, dim: usize) -> Vector {
    vec![field.zero(); dim]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldKind,
    ambient_dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldKind, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldKind, ambient_dim: usize) -> Self {
        let rows = (0..ambient_dim)
            .map(|i| {
                let mut v = zero_vector(field, ambient_dim);
                v[i] = field.one();
                v
            })
            .collect();
        Subspace {
            field,
            ambient_dim,
            rows,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Residual of `v` after clearing every pivot column of this subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (o, r) in out.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    o.sub_mul_assign(&factor, r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.check_len(v)?;
        Ok(self.holds(v))
    }

    /// Membership without the length check; callers guarantee the length.
    pub(crate) fn holds(&self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.ambient_dim);
        is_zero_vector(&self.reduce(v))
    }

    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        self.check_len(v)?;
        Ok(self.push(v))
    }

    /// Adds `v` to the span, keeping RREF. Returns whether the rank grew.
    pub(crate) fn push(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(q) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[q].inv().expect("nonzero pivot");
        for x in r.iter_mut().skip(q) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in &mut self.rows {
            if row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for (x, y) in row.iter_mut().zip(&r).skip(q) {
                if !y.is_zero() {
                    x.sub_mul_assign(&factor, y);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < q);
        self.rows.insert(at, r);
        self.pivots.insert(at, q);
        true
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let (mut big, small) = if self.rank() >= other.rank() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for row in &small.rows {
            big.push(row);
        }
        Ok(big)
    }

    /// Intersection via the Zassenhaus construction on `(a | a)`, `(b | 0)`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim;
        let mut z = Subspace::zero(self.field, 2 * n);
        for a in &self.rows {
            let mut v = a.clone();
            v.extend(a.iter().cloned());
            z.push(&v);
        }
        for b in &other.rows {
            let mut v = b.clone();
            v.extend(zero_vector(self.field, n));
            z.push(&v);
        }
        let mut out = Subspace::zero(self.field, n);
        for (row, &p) in z.rows.iter().zip(&z.pivots) {
            if p >= n {
                out.push(&row[n..]);
            }
        }
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.rows.iter().all(|r| other.holds(r))
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let basis: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let mut st = serializer.serialize_struct("Subspace", 4)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("rank", &self.rank())?;
        st.serialize_field("pivots", &self.pivots)?;
        st.serialize_field("basis", &basis)?;
        st.end()
    }
}

/// Canonical reduced-echelon basis of the span of `vectors`.
pub fn echelonize<V: AsRef<[Scalar]>>(field: FieldKind, ambient_dim: usize, vectors: &[V]) -> Result<Subspace> {
    let mut s = Subspace::zero(field, ambient_dim);
    for v in vectors {
        s.insert(v.as_ref())?;
    }
    Ok(s)
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

/// Finds coefficients `c` with `sum_j c[j] * columns[j] == target`.
///
/// Free variables are set to zero, so the answer is deterministic.
pub fn solve_combination(field: FieldKind, columns: &[Vector], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = target.len();
    let cols = columns.len();
    // Augmented matrix, one row per coordinate.
    let mut m: Vec<Vector> = (0..rows)
        .map(|i| {
            let mut r: Vector = columns.iter().map(|c| c[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut prow = 0;
    for c in 0..cols {
        if prow == rows {
            break;
        }
        let Some(found) = (prow..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(prow, found);
        let inv = m[prow][c].inv().expect("nonzero pivot");
        for x in m[prow].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let pivot_row = m[prow].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == prow || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    x.sub_mul_assign(&f, y);
                }
            }
        }
        pivot_cols.push(c);
        prow += 1;
    }
    if m[prow..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![field.zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        sol[c] = m[r][cols].clone();
    }
    Some(sol)
}
