//! Rotation systems of complete graphs.
//!
//! A rotation system lists, for every vertex, the cyclic order in which its
//! neighbors are met. Vertex labels are 1-based everywhere in the public
//! surface, including the text and JSON encodings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of vertices on the fixed hexagon face used by the search.
pub const HEXAGON_LEN: u8 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RotationError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("a rotation system needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate row for vertex {0}")]
    DuplicateRow(u8),
    #[error("missing row for vertex {0}")]
    MissingRow(u8),
    #[error("row {0} lists the vertex itself")]
    SelfLoop(u8),
    #[error("row {vertex} is not a permutation of the remaining {expected} vertices")]
    NotPermutation { vertex: u8, expected: usize },
    #[error("vertex {a} lists {b} but row {b} does not list {a}")]
    Asymmetric { a: u8, b: u8 },
    #[error("row {row} must start with {first} and end with {last}")]
    Endpoint { row: u8, first: u8, last: u8 },
    #[error("partial rotation must hold rows 1..=k for some k <= 6, found rows {0:?}")]
    PartialShape(Vec<u8>),
    #[error("invalid JSON rotation: {0}")]
    Json(String),
}

/// A vertex label in `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(u8);

impl Vertex {
    /// Panics on label 0; labels are 1-based.
    pub fn new(id: u8) -> Self {
        assert!(id > 0, "vertex labels are 1-based");
        Vertex(id)
    }

    #[inline]
    pub fn id(self) -> u8 {
        self.0
    }

    /// Zero-based index for array storage.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Previous vertex on the hexagon cycle `1 2 3 4 5 6`, so `1 -> 6`.
pub fn hex_prev(i: u8) -> u8 {
    if i == 1 {
        HEXAGON_LEN
    } else {
        i - 1
    }
}

/// Next vertex on the hexagon cycle, so `6 -> 1`.
pub fn hex_next(i: u8) -> u8 {
    if i == HEXAGON_LEN {
        1
    } else {
        i + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub from: Vertex,
    pub to: Vertex,
}

impl DirectedEdge {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        debug_assert_ne!(from, to);
        DirectedEdge { from, to }
    }

    pub fn reversed(self) -> Self {
        DirectedEdge {
            from: self.to,
            to: self.from,
        }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// The clockwise neighbor sequence of one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationRow {
    vertex: Vertex,
    neighbors: Vec<Vertex>,
}

impl RotationRow {
    /// Checks that `neighbors` is a permutation of `{1..=n} \ {vertex}`.
    pub fn new(vertex: u8, neighbors: &[u8], n: usize) -> Result<Self, RotationError> {
        if vertex == 0 || vertex as usize > n {
            return Err(RotationError::VertexOutOfRange {
                vertex: vertex as usize,
                n,
            });
        }
        let mut seen = vec![false; n + 1];
        for &x in neighbors {
            if x == vertex {
                return Err(RotationError::SelfLoop(vertex));
            }
            if x == 0 || x as usize > n {
                return Err(RotationError::VertexOutOfRange {
                    vertex: x as usize,
                    n,
                });
            }
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(RotationError::NotPermutation {
                    vertex,
                    expected: n - 1,
                });
            }
        }
        if neighbors.len() != n - 1 {
            return Err(RotationError::NotPermutation {
                vertex,
                expected: n - 1,
            });
        }
        Ok(RotationRow {
            vertex: Vertex(vertex),
            neighbors: neighbors.iter().map(|&x| Vertex(x)).collect(),
        })
    }

    pub fn vertex(&self) -> Vertex {
        self.vertex
    }

    pub fn neighbors(&self) -> &[Vertex] {
        &self.neighbors
    }

    pub fn ids(&self) -> Vec<u8> {
        self.neighbors.iter().map(|v| v.id()).collect()
    }

    /// Adjacent ordered pairs of the cyclic sequence, wrap pair last.
    pub fn cyclic_pairs(&self) -> Vec<(Vertex, Vertex)> {
        cyclic_pairs(&self.neighbors)
    }

    /// Cyclic successor of `u` in this row.
    pub fn successor(&self, u: Vertex) -> Option<Vertex> {
        let k = self.neighbors.iter().position(|&x| x == u)?;
        Some(self.neighbors[(k + 1) % self.neighbors.len()])
    }

    /// Cyclic predecessor of `u` in this row.
    pub fn predecessor(&self, u: Vertex) -> Option<Vertex> {
        let len = self.neighbors.len();
        let k = self.neighbors.iter().position(|&x| x == u)?;
        Some(self.neighbors[(k + len - 1) % len])
    }
}

/// The `len` ordered adjacent pairs of a cyclic sequence, including the wrap
/// pair `(last, first)`.
pub fn cyclic_pairs<T: Copy>(seq: &[T]) -> Vec<(T, T)> {
    let len = seq.len();
    (0..len).map(|k| (seq[k], seq[(k + 1) % len])).collect()
}

/// A complete rotation system of `K_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationSystem {
    rows: Vec<RotationRow>,
}

impl RotationSystem {
    /// Builds and validates a rotation system from `(vertex, neighbors)` rows
    /// given in any order.
    pub fn build<I, R>(rows: I) -> Result<Self, RotationError>
    where
        I: IntoIterator<Item = (u8, R)>,
        R: AsRef<[u8]>,
    {
        let rows: Vec<(u8, R)> = rows.into_iter().collect();
        let n = rows.len();
        if n < 3 {
            return Err(RotationError::TooFewVertices(n));
        }
        let mut slots: Vec<Option<RotationRow>> = vec![None; n];
        for (v, neighbors) in &rows {
            let row = RotationRow::new(*v, neighbors.as_ref(), n)?;
            let slot = &mut slots[row.vertex.index()];
            if slot.is_some() {
                return Err(RotationError::DuplicateRow(*v));
            }
            *slot = Some(row);
        }
        let rows = slots
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or(RotationError::MissingRow(i as u8 + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let rs = RotationSystem { rows };
        rs.check_symmetric()?;
        Ok(rs)
    }

    /// Builds from rows listed in vertex order `1..=n`.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self, RotationError> {
        Self::build(
            rows.iter()
                .enumerate()
                .map(|(i, r)| (i as u8 + 1, r.as_slice())),
        )
    }

    #[allow(clippy::needless_range_loop)]
    fn check_symmetric(&self) -> Result<(), RotationError> {
        let n = self.n();
        let mut adj = vec![vec![false; n]; n];
        for row in &self.rows {
            for &u in &row.neighbors {
                adj[row.vertex.index()][u.index()] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if adj[a][b] && !adj[b][a] {
                    return Err(RotationError::Asymmetric {
                        a: a as u8 + 1,
                        b: b as u8 + 1,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.n() * (self.n() - 1) / 2
    }

    pub fn rows(&self) -> &[RotationRow] {
        &self.rows
    }

    pub fn row(&self, v: Vertex) -> &RotationRow {
        &self.rows[v.index()]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.rows.iter().map(|r| r.vertex)
    }

    /// Rows as plain label vectors, in vertex order.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(RotationRow::ids).collect()
    }

    /// Every row reversed: the same embedding seen from the other side.
    pub fn mirror(&self) -> Self {
        RotationSystem {
            rows: self
                .rows
                .iter()
                .map(|r| RotationRow {
                    vertex: r.vertex,
                    neighbors: r.neighbors.iter().rev().copied().collect(),
                })
                .collect(),
        }
    }

    /// Renames vertex `v` to `perm[v - 1]`; `perm` is a permutation of `1..=n`.
    pub fn relabel(&self, perm: &[u8]) -> Result<Self, RotationError> {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let rows: Vec<(u8, Vec<u8>)> = self
            .rows
            .iter()
            .map(|r| {
                (
                    perm[r.vertex.index()],
                    r.neighbors.iter().map(|u| perm[u.index()]).collect(),
                )
            })
            .collect();
        Self::build(rows)
    }

    /// Every row rotated so that it starts at its smallest neighbor.
    pub fn normalized(&self) -> Self {
        RotationSystem {
            rows: self
                .rows
                .iter()
                .map(|r| {
                    let start = r
                        .neighbors
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, v)| **v)
                        .map(|(k, _)| k)
                        .unwrap_or(0);
                    let mut neighbors = r.neighbors.clone();
                    neighbors.rotate_left(start);
                    RotationRow {
                        vertex: r.vertex,
                        neighbors,
                    }
                })
                .collect(),
        }
    }

    /// Same cyclic orders in every row, ignoring where each row starts.
    pub fn same_rotation(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn to_text(&self) -> String {
        rows_to_text(&self.rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RotationJson {
            n: self.n(),
            rows: self.to_rows(),
        })
        .expect("rotation JSON is always serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, RotationError> {
        let json: RotationJson =
            serde_json::from_str(s).map_err(|e| RotationError::Json(e.to_string()))?;
        if json.rows.len() != json.n {
            return Err(RotationError::Json(format!(
                "n = {} but {} rows given",
                json.n,
                json.rows.len()
            )));
        }
        Self::from_rows(&json.rows)
    }
}

impl fmt::Display for RotationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for RotationSystem {
    type Err = RotationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_rotation_text(s)? {
            RotationFile::Full(rs) => Ok(rs),
            RotationFile::Partial(p) => Err(RotationError::MissingRow(p.rows().len() as u8 + 1)),
        }
    }
}

/// Rows `1..=k` (`k <= 6`) of a rotation system whose hexagon rows follow the
/// endpoint convention: row `i` starts with `hex_prev(i)` and ends with
/// `hex_next(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialRotation {
    n: usize,
    rows: Vec<RotationRow>,
}

impl PartialRotation {
    pub fn new(n: usize, rows: &[Vec<u8>]) -> Result<Self, RotationError> {
        if n < HEXAGON_LEN as usize {
            return Err(RotationError::TooFewVertices(n));
        }
        if rows.len() > HEXAGON_LEN as usize {
            return Err(RotationError::PartialShape(
                (1..=rows.len() as u8).collect(),
            ));
        }
        let rows = rows
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let v = k as u8 + 1;
                let row = RotationRow::new(v, r, n)?;
                let (first, last) = (hex_prev(v), hex_next(v));
                if r.first() != Some(&first) || r.last() != Some(&last) {
                    return Err(RotationError::Endpoint {
                        row: v,
                        first,
                        last,
                    });
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PartialRotation { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[RotationRow] {
        &self.rows
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(RotationRow::ids).collect()
    }

    pub fn to_text(&self) -> String {
        rows_to_text(&self.rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RotationJson {
            n: self.n,
            rows: self.to_rows(),
        })
        .expect("rotation JSON is always serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct RotationJson {
    n: usize,
    rows: Vec<Vec<u8>>,
}

fn rows_to_text(rows: &[RotationRow]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&r.vertex.to_string());
        out.push(':');
        for v in &r.neighbors {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// A parsed rotation file: either every row of `K_n`, or hexagon rows `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationFile {
    Full(RotationSystem),
    Partial(PartialRotation),
}

impl RotationFile {
    pub fn n(&self) -> usize {
        match self {
            RotationFile::Full(rs) => rs.n(),
            RotationFile::Partial(p) => p.n(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            RotationFile::Full(rs) => rs.to_text(),
            RotationFile::Partial(p) => p.to_text(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            RotationFile::Full(rs) => rs.to_json(),
            RotationFile::Partial(p) => p.to_json(),
        }
    }
}

/// Parses the text format: one row per line as `i: v1 v2 ...`, `#` starts a
/// comment, blank lines are ignored. `n` is one more than the row length.
pub fn parse_rotation_text(text: &str) -> Result<RotationFile, RotationError> {
    let mut rows: Vec<(u8, Vec<u8>, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let parse_err = |column: usize, message: String| RotationError::Parse {
            line: line_no,
            column,
            message,
        };
        let colon = content
            .find(':')
            .ok_or_else(|| parse_err(1, "expected `vertex:` prefix".into()))?;
        let head = content[..colon].trim();
        let head_col = content.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
        let vertex: u8 = head
            .parse()
            .map_err(|_| parse_err(head_col, format!("invalid vertex label `{head}`")))?;
        let mut neighbors = Vec::new();
        let mut offset = colon + 1;
        for token in content[colon + 1..].split_whitespace() {
            let start = content[offset..]
                .find(token)
                .map(|k| k + offset)
                .unwrap_or(offset);
            offset = start + token.len();
            let v: u8 = token
                .parse()
                .map_err(|_| parse_err(start + 1, format!("invalid vertex label `{token}`")))?;
            neighbors.push(v);
        }
        if neighbors.is_empty() {
            return Err(parse_err(colon + 2, "empty row".into()));
        }
        rows.push((vertex, neighbors, line_no));
    }
    let Some((_, first, _)) = rows.first() else {
        return Err(RotationError::Parse {
            line: 1,
            column: 1,
            message: "no rows".into(),
        });
    };
    let n = first.len() + 1;
    for (v, r, line) in &rows {
        if r.len() != n - 1 {
            return Err(RotationError::Parse {
                line: *line,
                column: 1,
                message: format!(
                    "row {v} has {} entries, expected {} (from the first row)",
                    r.len(),
                    n - 1
                ),
            });
        }
    }
    if rows.len() == n {
        return RotationSystem::build(rows.into_iter().map(|(v, r, _)| (v, r)))
            .map(RotationFile::Full);
    }
    let labels: Vec<u8> = rows.iter().map(|(v, _, _)| *v).collect();
    let prefix = labels.iter().enumerate().all(|(k, &v)| v as usize == k + 1);
    if !prefix || labels.len() > HEXAGON_LEN as usize {
        return Err(RotationError::PartialShape(labels));
    }
    let rows: Vec<Vec<u8>> = rows.into_iter().map(|(_, r, _)| r).collect();
    PartialRotation::new(n, &rows).map(RotationFile::Partial)
}

/// Parses either the JSON encoding or the text format.
pub fn parse_rotation(input: &str) -> Result<RotationFile, RotationError> {
    if input.trim_start().starts_with('{') {
        let json: RotationJson =
            serde_json::from_str(input).map_err(|e| RotationError::Json(e.to_string()))?;
        if json.rows.len() == json.n {
            RotationSystem::from_rows(&json.rows).map(RotationFile::Full)
        } else {
            PartialRotation::new(json.n, &json.rows).map(RotationFile::Partial)
        }
    } else {
        parse_rotation_text(input)
    }
}
