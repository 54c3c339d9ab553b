//! Incremental bookkeeping for rows `1..=6` of a candidate rotation system.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rotation::{hex_next, hex_prev, PartialRotation, HEXAGON_LEN};

use super::{SearchConfig, StageCounters};

/// Array dimension for 1-based vertex storage; supports `n <= 15`.
pub(crate) const DIM: usize = 16;
pub const MAX_SEARCH_N: usize = DIM - 1;
/// Owner tag for the six directed hexagon edges `i -> i+1`.
pub(crate) const HEX_OWNER: u8 = u8::MAX;

/// The check that rejected a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// An ordered pair already appears in another row (or is a hexagon edge).
    Opposite,
    /// More triangles mentioned than the target profile allows.
    Faces,
    /// An undirected edge lies on more than two faces.
    Edges,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Opposite => "edges opposite",
            Check::Faces => "number of faces",
            Check::Edges => "each edge in at most two faces",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("ordered pair ({}, {}) already used by {}", pair.0, pair.1, owner_name(*owner))]
    DuplicatePair { pair: (u8, u8), owner: u8 },
    #[error("{count} triangles mentioned, at most {max} allowed")]
    TooManyTriangles { count: usize, max: usize },
    #[error("edge {{{}, {}}} lies on {faces} faces", edge.0, edge.1)]
    EdgeOverloaded { edge: (u8, u8), faces: u8 },
    #[error("row {row}: {message}")]
    Precondition { row: u8, message: String },
}

fn owner_name(owner: u8) -> String {
    if owner == HEX_OWNER {
        "the hexagon".to_string()
    } else {
        format!("row {owner}")
    }
}

impl Rejection {
    pub fn check(&self) -> Option<Check> {
        match self {
            Rejection::DuplicatePair { .. } => Some(Check::Opposite),
            Rejection::TooManyTriangles { .. } => Some(Check::Faces),
            Rejection::EdgeOverloaded { .. } => Some(Check::Edges),
            Rejection::Precondition { .. } => None,
        }
    }
}

/// Canonical index of the oriented triangle face `a -> b -> c -> a`.
#[inline]
fn tri_key(a: u8, b: u8, c: u8) -> usize {
    let (a, b, c) = if a < b && a < c {
        (a, b, c)
    } else if b < c {
        (b, c, a)
    } else {
        (c, a, b)
    };
    (a as usize * DIM + b as usize) * DIM + c as usize
}

fn tri_from_key(key: usize) -> [u8; 3] {
    [
        (key / (DIM * DIM)) as u8,
        ((key / DIM) % DIM) as u8,
        (key % DIM) as u8,
    ]
}

/// Rows `1..=k` of a candidate plus the pair, triangle and edge bookkeeping
/// used by the three pruning checks.
///
/// Every adjacent pair `(x, y)` of row `v` (except the wrap pair, which is the
/// hexagon corner) asserts the triangle face `y -> v -> x`. Ownership of the
/// ordered pair `(x, y)` records that the directed edge `x -> y` is taken.
#[derive(Clone)]
pub struct PartialState {
    pub(crate) n: u8,
    pub(crate) max_triangles: usize,
    pub(crate) filled: u8,
    pub(crate) rows: [[u8; DIM]; HEXAGON_LEN as usize + 1],
    pair_owner: [[u8; DIM]; DIM],
    tri_refs: Box<[u8]>,
    triangles: usize,
    edge_faces: [[u8; DIM]; DIM],
    overloaded: usize,
    pub(crate) counters: StageCounters,
}

impl PartialState {
    /// Empty state with the hexagon `1 -> 2 -> ... -> 6 -> 1` registered.
    pub fn new(cfg: &SearchConfig) -> Self {
        let mut s = PartialState {
            n: cfg.n as u8,
            max_triangles: cfg.max_triangles(),
            filled: 0,
            rows: [[0; DIM]; HEXAGON_LEN as usize + 1],
            pair_owner: [[0; DIM]; DIM],
            tri_refs: vec![0u8; DIM * DIM * DIM].into_boxed_slice(),
            triangles: 0,
            edge_faces: [[0; DIM]; DIM],
            overloaded: 0,
            counters: StageCounters::new(),
        };
        for i in 1..=HEXAGON_LEN {
            let j = hex_next(i);
            s.pair_owner[i as usize][j as usize] = HEX_OWNER;
            s.edge_faces[i as usize][j as usize] = 1;
            s.edge_faces[j as usize][i as usize] = 1;
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn filled_rows(&self) -> usize {
        self.filled as usize
    }

    /// Number of distinct oriented triangles mentioned so far.
    pub fn triangle_count(&self) -> usize {
        self.triangles
    }

    pub fn max_triangles(&self) -> usize {
        self.max_triangles
    }

    pub fn counters(&self) -> &StageCounters {
        &self.counters
    }

    pub fn row(&self, v: u8) -> &[u8] {
        &self.rows[v as usize][..self.n as usize - 1]
    }

    /// Mentioned triangles as oriented faces `[a, b, c]` (`a -> b -> c`),
    /// smallest vertex first.
    pub fn triangles(&self) -> Vec<[u8; 3]> {
        self.tri_refs
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0)
            .map(|(k, _)| tri_from_key(k))
            .collect()
    }

    pub fn is_triangle_registered(&self, face: [u8; 3]) -> bool {
        self.tri_refs[tri_key(face[0], face[1], face[2])] > 0
    }

    /// Owner of the directed edge `x -> y`: 0 if free.
    pub(crate) fn pair_owner(&self, x: u8, y: u8) -> u8 {
        self.pair_owner[x as usize][y as usize]
    }

    pub fn partial(&self) -> PartialRotation {
        let rows: Vec<Vec<u8>> = (1..=self.filled).map(|v| self.row(v).to_vec()).collect();
        PartialRotation::new(self.n as usize, &rows)
            .expect("state rows follow the hexagon convention")
    }

    /// Records that `x` is immediately followed by `y` in row `v`.
    #[inline]
    pub(crate) fn push_pair(&mut self, v: u8, x: u8, y: u8) -> bool {
        let owner = &mut self.pair_owner[x as usize][y as usize];
        if *owner != 0 {
            return false;
        }
        *owner = v;
        let key = tri_key(y, v, x);
        let refs = &mut self.tri_refs[key];
        *refs += 1;
        if *refs == 1 {
            self.triangles += 1;
            self.bump_edge(v, x);
            self.bump_edge(x, y);
            self.bump_edge(y, v);
        }
        true
    }

    /// Undoes a successful [`push_pair`](Self::push_pair).
    #[inline]
    pub(crate) fn pop_pair(&mut self, v: u8, x: u8, y: u8) {
        debug_assert_eq!(self.pair_owner[x as usize][y as usize], v);
        self.pair_owner[x as usize][y as usize] = 0;
        let key = tri_key(y, v, x);
        let refs = &mut self.tri_refs[key];
        *refs -= 1;
        if *refs == 0 {
            self.triangles -= 1;
            self.drop_edge(v, x);
            self.drop_edge(x, y);
            self.drop_edge(y, v);
        }
    }

    #[inline]
    fn bump_edge(&mut self, a: u8, b: u8) {
        let c = &mut self.edge_faces[a as usize][b as usize];
        *c += 1;
        let c = *c;
        self.edge_faces[b as usize][a as usize] = c;
        if c == 3 {
            self.overloaded += 1;
        }
    }

    #[inline]
    fn drop_edge(&mut self, a: u8, b: u8) {
        let c = &mut self.edge_faces[a as usize][b as usize];
        if *c == 3 {
            self.overloaded -= 1;
        }
        *c -= 1;
        let c = *c;
        self.edge_faces[b as usize][a as usize] = c;
    }

    /// Checks 2 and 3 on the current totals, counting passes for `row`.
    #[inline]
    pub(crate) fn row_checks(&mut self, row: u8) -> Option<Check> {
        let c = &mut self.counters.rows[row as usize - 1];
        c.opposite += 1;
        if self.triangles > self.max_triangles {
            return Some(Check::Faces);
        }
        c.faces += 1;
        if self.overloaded > 0 {
            return Some(Check::Edges);
        }
        c.edges += 1;
        None
    }

    fn overloaded_edge(&self) -> (u8, u8, u8) {
        for a in 1..=self.n {
            for b in a + 1..=self.n {
                let c = self.edge_faces[a as usize][b as usize];
                if c > 2 {
                    return (a, b, c);
                }
            }
        }
        unreachable!("overloaded counter out of sync")
    }

    /// Appends the next hexagon row, given in full (`n - 1` entries starting
    /// with `hex_prev(i)` and ending with `hex_next(i)`).
    ///
    /// On rejection the state is left unchanged; the stage counters record how
    /// far the row got.
    pub fn extend_row(&mut self, row: &[u8]) -> Result<(), Rejection> {
        let v = self.filled + 1;
        let precondition = |message: String| Rejection::Precondition { row: v, message };
        if v > HEXAGON_LEN {
            return Err(precondition(
                "all six hexagon rows are already filled".into(),
            ));
        }
        let n = self.n as usize;
        if row.len() != n - 1 {
            return Err(precondition(format!("expected {} entries", n - 1)));
        }
        let mut seen = [false; DIM];
        for &x in row {
            if x == 0 || x as usize > n || x == v || std::mem::replace(&mut seen[x as usize], true)
            {
                return Err(precondition(
                    "not a permutation of the other vertices".into(),
                ));
            }
        }
        if row[0] != hex_prev(v) || row[n - 2] != hex_next(v) {
            return Err(precondition(format!(
                "must start with {} and end with {}",
                hex_prev(v),
                hex_next(v)
            )));
        }
        for k in 1..n - 1 {
            if !self.push_pair(v, row[k - 1], row[k]) {
                let owner = self.pair_owner(row[k - 1], row[k]);
                for j in (1..k).rev() {
                    self.pop_pair(v, row[j - 1], row[j]);
                }
                return Err(Rejection::DuplicatePair {
                    pair: (row[k - 1], row[k]),
                    owner,
                });
            }
        }
        let failed = self.row_checks(v);
        let rejection = match failed {
            None => None,
            Some(Check::Faces) => Some(Rejection::TooManyTriangles {
                count: self.triangles,
                max: self.max_triangles,
            }),
            Some(_) => {
                let (a, b, faces) = self.overloaded_edge();
                Some(Rejection::EdgeOverloaded {
                    edge: (a, b),
                    faces,
                })
            }
        };
        if let Some(r) = rejection {
            for k in (1..n - 1).rev() {
                self.pop_pair(v, row[k - 1], row[k]);
            }
            return Err(r);
        }
        self.rows[v as usize][..n - 1].copy_from_slice(row);
        self.filled = v;
        Ok(())
    }

    /// Removes the last filled row.
    pub fn pop_row(&mut self) {
        assert!(self.filled > 0, "no row to remove");
        let v = self.filled;
        let n = self.n as usize;
        let row = self.rows[v as usize];
        for k in (1..n - 1).rev() {
            self.pop_pair(v, row[k - 1], row[k]);
        }
        self.filled -= 1;
    }
}

impl fmt::Debug for PartialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialState")
            .field("n", &self.n)
            .field("filled", &self.filled)
            .field(
                "rows",
                &(1..=self.filled)
                    .map(|v| self.row(v).to_vec())
                    .collect::<Vec<_>>(),
            )
            .field("triangles", &self.triangles)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_key_is_rotation_invariant() {
        assert_eq!(tri_key(3, 1, 2), tri_key(1, 2, 3));
        assert_eq!(tri_key(2, 3, 1), tri_key(1, 2, 3));
        assert_ne!(tri_key(1, 3, 2), tri_key(1, 2, 3));
        assert_eq!(tri_from_key(tri_key(9, 4, 7)), [4, 7, 9]);
    }
}
