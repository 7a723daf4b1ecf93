//! The algebra JSON file format.
//!
//! ```json
//! {
//!   "name": "M2", "field": "Q", "dim": 4,
//!   "basis": ["E11", "E12", "E21", "E22"],
//!   "mul": [[0, 0, 0, "1"], [0, 1, 1, "1"]],
//!   "involution": [[1, 2, "1"]],
//!   "idempotents": {"e": ["1", "0", "0", "0"]},
//!   "generators": {"E12": ["0", "1", "0", "0"]},
//!   "unital": true,
//!   "unit": ["1", "0", "0", "1"]
//! }
//! ```
//!
//! `mul` entries `[i, j, k, c]` mean `b_i b_j` has coefficient `c` on `b_k`.
//! `involution` entries `[i, j, c]` mean `b_i*` has coefficient `c` on `b_j`.
//! Indices are 0-based. Unknown fields are rejected. The canonical form has
//! sorted keys, sorted entries, no zero coefficients and scalars as strings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraPresentation, Element, Terms};
use crate::error::{Error, Result};
use crate::field::FieldKind;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    field: String,
    dim: usize,
    basis: Vec<String>,
    mul: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    involution: Option<Vec<(usize, usize, String)>>,
    #[serde(default)]
    idempotents: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    generators: BTreeMap<String, Vec<String>>,
    unital: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<Vec<String>>,
}

fn perr(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        use serde_path_to_error::Segment;
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{key}")),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        "/".into()
    } else {
        out
    }
}

fn parse_vector(field: FieldKind, dim: usize, v: &[String], pointer: &str) -> Result<Element> {
    if v.len() != dim {
        return Err(perr(pointer, format!("vector has length {} but dim is {dim}", v.len())));
    }
    let coords = v
        .iter()
        .enumerate()
        .map(|(i, s)| {
            field.parse_scalar(s).map_err(|e| match e {
                Error::Parse { message, .. } => perr(format!("{pointer}/{i}"), message),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Element::new(coords))
}

/// Parses an algebra file. Errors carry a JSON pointer to the offending value.
pub fn parse_algebra(text: &str) -> Result<AlgebraPresentation> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: AlgebraFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = json_pointer(e.path());
        perr(pointer, e.into_inner().to_string())
    })?;
    from_file(file)
}

fn from_file(file: AlgebraFile) -> Result<AlgebraPresentation> {
    let field: FieldKind = file.field.parse().map_err(|e: Error| perr("/field", e.to_string()))?;
    let dim = file.dim;
    if dim == 0 {
        return Err(perr("/dim", "dim must be positive"));
    }
    if file.basis.len() != dim {
        return Err(perr("/basis", format!("{} labels for dim {dim}", file.basis.len())));
    }
    let mut p = AlgebraPresentation::new(file.name, field, file.basis);
    let mut seen = BTreeSet::new();
    for (n, (i, j, k, c)) in file.mul.iter().enumerate() {
        let ptr = format!("/mul/{n}");
        for (slot, x) in [(0, i), (1, j), (2, k)] {
            if *x >= dim {
                return Err(perr(format!("{ptr}/{slot}"), format!("index {x} out of range for dim {dim}")));
            }
        }
        if !seen.insert((*i, *j, *k)) {
            return Err(perr(ptr, format!("duplicate entry for ({i}, {j}, {k})")));
        }
        let c = field.parse_scalar(c).map_err(|e| perr(format!("{ptr}/3"), e.to_string()))?;
        p.add_product_term(*i, *j, *k, c);
    }
    if let Some(entries) = &file.involution {
        let mut rows: Vec<Terms> = vec![Vec::new(); dim];
        let mut seen = BTreeSet::new();
        for (n, (i, j, c)) in entries.iter().enumerate() {
            let ptr = format!("/involution/{n}");
            for (slot, x) in [(0, i), (1, j)] {
                if *x >= dim {
                    return Err(perr(format!("{ptr}/{slot}"), format!("index {x} out of range for dim {dim}")));
                }
            }
            if !seen.insert((*i, *j)) {
                return Err(perr(ptr, format!("duplicate entry for ({i}, {j})")));
            }
            let c = field.parse_scalar(c).map_err(|e| perr(format!("{ptr}/2"), e.to_string()))?;
            rows[*i].push((*j, c));
        }
        p.set_involution(rows);
    }
    for (name, v) in &file.idempotents {
        let e = parse_vector(field, dim, v, &format!("/idempotents/{name}"))?;
        p.add_idempotent(name.clone(), e);
    }
    for (name, v) in &file.generators {
        let a = parse_vector(field, dim, v, &format!("/generators/{name}"))?;
        p.add_generator(name.clone(), a);
    }
    match (file.unital, &file.unit) {
        (true, Some(u)) => p.set_unit(parse_vector(field, dim, u, "/unit")?),
        (true, None) => return Err(perr("/unit", "unit is required when unital is true")),
        (false, Some(_)) => return Err(perr("/unit", "unit given but unital is false")),
        (false, None) => {}
    }
    Ok(p)
}

fn to_file(p: &AlgebraPresentation) -> AlgebraFile {
    let dim = p.dim();
    let mut mul = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            for (k, c) in p.basis_product(i, j) {
                mul.push((i, j, *k, c.to_string()));
            }
        }
    }
    let involution = p.involution_rows().map(|rows| {
        rows.iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, c)| (i, *j, c.to_string())))
            .collect()
    });
    let vecs = |xs: &[(String, Element)]| -> BTreeMap<String, Vec<String>> {
        xs.iter().map(|(n, e)| (n.clone(), e.to_strings())).collect()
    };
    AlgebraFile {
        name: p.name().to_string(),
        field: p.field().to_string(),
        dim,
        basis: p.labels().to_vec(),
        mul,
        involution,
        idempotents: vecs(p.idempotents()),
        generators: vecs(p.generators()),
        unital: p.is_unital(),
        unit: p.unit().map(Element::to_strings),
    }
}

/// Canonical compact JSON; keys sorted, entries in index order.
pub fn to_canonical_json(p: &AlgebraPresentation) -> String {
    let value = serde_json::to_value(to_file(p)).expect("algebra serializes");
    serde_json::to_string(&value).expect("value serializes")
}

/// Hex SHA-256 of the canonical JSON.
pub fn input_hash(p: &AlgebraPresentation) -> String {
    hex::encode(Sha256::digest(to_canonical_json(p).as_bytes()))
}

pub fn read_algebra(path: &std::path::Path) -> Result<AlgebraPresentation> {
    let text = std::fs::read_to_string(path)?;
    parse_algebra(&text)
}
