//! Canonical codes for rotation systems of complete graphs, used to group
//! embeddings into isomorphism classes.
//!
//! For every anchor directed edge `(u, v)` the vertices are relabeled by a
//! breadth-first walk that starts at `u` and reads each rotation from the
//! vertex it was reached from (`v` for the anchor). The relabeled rows, each
//! started at its smallest label, are concatenated; the code is the least
//! such sequence over all anchors. Two systems get the same code iff an
//! orientation-preserving relabeling maps one onto the other. With
//! reflection allowed, the mirror system's anchors are included too.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facetrace::{trace_faces, FaceSet};
use crate::rotation::{DirectedEdge, RotationSystem, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("cannot classify systems with different vertex counts ({0} and {1})")]
    MixedN(usize, usize),
    #[error("expected exactly one hexagon with distinct vertices and triangles elsewhere")]
    NotHexagonTriangulation,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode {
    pub code: Vec<u8>,
    /// The minimum came from the mirrored system.
    pub reflected: bool,
}

/// Relabeled, row-normalized code of `rs` seen from the anchor `(u, v)`.
fn code_from_anchor(rs: &RotationSystem, u: Vertex, v: Vertex) -> Vec<u8> {
    let n = rs.n();
    let mut label = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    label[u.index()] = 1;
    order.push(u);
    queue.push_back((u, v));
    while let Some((x, partner)) = queue.pop_front() {
        let nb = rs.row(x).neighbors();
        let start = nb.iter().position(|&y| y == partner).unwrap_or(0);
        for k in 0..nb.len() {
            let y = nb[(start + k) % nb.len()];
            if label[y.index()] == 0 {
                order.push(y);
                label[y.index()] = order.len() as u8;
                queue.push_back((y, x));
            }
        }
    }
    let mut code = Vec::with_capacity(n * (n - 1));
    for x in order {
        let row: Vec<u8> = rs
            .row(x)
            .neighbors()
            .iter()
            .map(|y| label[y.index()])
            .collect();
        let start = row
            .iter()
            .enumerate()
            .min_by_key(|(_, l)| **l)
            .map_or(0, |(k, _)| k);
        code.extend(row[start..].iter().chain(&row[..start]));
    }
    code
}

fn min_code(rs: &RotationSystem) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for row in rs.rows() {
        for &v in row.neighbors() {
            let code = code_from_anchor(rs, row.vertex(), v);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

pub fn canonical_form(rs: &RotationSystem, allow_reflection: bool) -> CanonicalCode {
    let direct = min_code(rs);
    if allow_reflection {
        let mirrored = min_code(&rs.mirror());
        if mirrored < direct {
            return CanonicalCode {
                code: mirrored,
                reflected: true,
            };
        }
    }
    CanonicalCode {
        code: direct,
        reflected: false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClass {
    pub representative_code: CanonicalCode,
    /// Indices into the classified list, ascending.
    pub members: Vec<usize>,
    pub size: usize,
}

/// Partitions systems by canonical code; classes come out sorted by code.
pub fn classify(
    systems: &[RotationSystem],
    allow_reflection: bool,
) -> Result<Vec<IsoClass>, CanonError> {
    if let Some(first) = systems.first() {
        if let Some(other) = systems.iter().find(|s| s.n() != first.n()) {
            return Err(CanonError::MixedN(first.n(), other.n()));
        }
    }
    let mut groups: BTreeMap<Vec<u8>, (CanonicalCode, Vec<usize>)> = BTreeMap::new();
    for (i, rs) in systems.iter().enumerate() {
        let c = canonical_form(rs, allow_reflection);
        groups
            .entry(c.code.clone())
            .or_insert_with(|| (c, Vec::new()))
            .1
            .push(i);
    }
    Ok(groups
        .into_values()
        .map(|(representative_code, members)| IsoClass {
            size: members.len(),
            representative_code,
            members,
        })
        .collect())
}

/// Locates the distinct-vertex hexagon of a hexagon-plus-triangles embedding.
fn hexagon_face(fs: &FaceSet) -> Result<usize, CanonError> {
    let mut hexagon = None;
    for (k, f) in fs.faces().iter().enumerate() {
        match f.size() {
            3 => {}
            6 if hexagon.is_none() && f.has_distinct_vertices() => hexagon = Some(k),
            _ => return Err(CanonError::NotHexagonTriangulation),
        }
    }
    hexagon.ok_or(CanonError::NotHexagonTriangulation)
}

/// Whether every triangle glued to the hexagon through a hexagon edge and
/// carrying an off-hexagon vertex `r` also borders, along one of its other
/// two edges, a triangle carrying a different off-hexagon vertex.
///
/// Relabeling and reflection leave the answer unchanged.
pub fn distinguishing_invariant(rs: &RotationSystem) -> Result<bool, CanonError> {
    let fs = trace_faces(rs);
    let hex = hexagon_face(&fs)?;
    let on_hexagon: Vec<Vertex> = fs.faces()[hex].vertices();
    let residual = |x: Vertex| !on_hexagon.contains(&x);
    let third = |face: usize, a: Vertex, b: Vertex| {
        fs.faces()[face]
            .vertices()
            .into_iter()
            .find(|&x| x != a && x != b)
            .expect("triangle has a third vertex")
    };
    let mut any = false;
    for &e in fs.faces()[hex].boundary() {
        let across = fs.face_of(e.reversed());
        let r = third(across, e.from, e.to);
        if !residual(r) {
            continue;
        }
        any = true;
        let touches_other = [e.from, e.to].into_iter().any(|h| {
            let side = DirectedEdge::new(h, r);
            [side, side.reversed()].into_iter().any(|d| {
                let f = fs.face_of(d);
                f != across && {
                    let x = third(f, h, r);
                    residual(x) && x != r
                }
            })
        });
        if !touches_other {
            return Ok(false);
        }
    }
    Ok(any)
}
