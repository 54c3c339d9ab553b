//! Face tracing of the embedding determined by a rotation system.
//!
//! Orientation convention: the boundary walk continues from the directed edge
//! `(u, v)` to `(v, w)`, where `w` is the cyclic *predecessor* of `u` in the
//! rotation at `v`. With this rule a row `(i-1, ..., i+1)` at every hexagon
//! vertex `i` makes `1 -> 2 -> 3 -> 4 -> 5 -> 6 -> 1` a face.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rotation::{DirectedEdge, RotationSystem, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceTraceError {
    #[error("odd Euler characteristic {0}: corrupted rotation system")]
    OddEuler(i64),
    #[error("invalid face profile `{0}`; expected `size:count,...`")]
    BadProfile(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("vertex {vertex} lies on a face of size {size}")]
    NonTriangularFace { vertex: u8, size: usize },
    #[error("vertex {vertex}: neighbor {at} has conflicting link successors")]
    Branching { vertex: u8, at: u8 },
    #[error("vertex {vertex}: link is an open chain ending at {at}")]
    OpenChain { vertex: u8, at: u8 },
    #[error("vertex {vertex}: link splits into {} cycles of lengths {lengths:?}", lengths.len())]
    MultipleCycles { vertex: u8, lengths: Vec<usize> },
    #[error("vertex {vertex}: link is a single cycle of length {len}, expected {expected}")]
    ShortCycle {
        vertex: u8,
        len: usize,
        expected: usize,
    },
}

/// Multiset of face sizes, `size -> count`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceProfile(pub BTreeMap<usize, usize>);

impl FaceProfile {
    /// `triangles` triangles plus one hexagon.
    pub fn hexagon_and_triangles(triangles: usize) -> Self {
        FaceProfile(BTreeMap::from([(3, triangles), (6, 1)]))
    }

    pub fn count(&self, size: usize) -> usize {
        self.0.get(&size).copied().unwrap_or(0)
    }

    pub fn faces(&self) -> usize {
        self.0.values().sum()
    }
}

impl fmt::Display for FaceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(s, c)| format!("{s}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromStr for FaceProfile {
    type Err = FaceTraceError;

    /// Accepts `3:22,6:1`, optionally wrapped in braces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FaceTraceError::BadProfile(s.to_string());
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut map = BTreeMap::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (size, count) = part.split_once(':').ok_or_else(bad)?;
            let size: usize = size.trim().parse().map_err(|_| bad())?;
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            *map.entry(size).or_insert(0) += count;
        }
        if map.is_empty() {
            return Err(bad());
        }
        Ok(FaceProfile(map))
    }
}

/// A closed boundary walk.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceWalk {
    boundary: Vec<DirectedEdge>,
}

impl FaceWalk {
    pub fn new(boundary: Vec<DirectedEdge>) -> Self {
        FaceWalk { boundary }
    }

    pub fn size(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary(&self) -> &[DirectedEdge] {
        &self.boundary
    }

    /// Tail vertices of the walk, in order. Repeats are kept.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.boundary.iter().map(|e| e.from).collect()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.boundary.iter().any(|e| e.from == v)
    }

    pub fn has_distinct_vertices(&self) -> bool {
        let mut vs = self.vertices();
        vs.sort_unstable();
        vs.windows(2).all(|w| w[0] != w[1])
    }

    /// Same face regardless of which directed edge the walk starts from.
    pub fn same_face(&self, other: &FaceWalk) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let Some(k) = other.boundary.iter().position(|e| *e == self.boundary[0]) else {
            return false;
        };
        let len = self.size();
        (0..len).all(|i| self.boundary[i] == other.boundary[(i + k) % len])
    }
}

impl fmt::Display for FaceWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", vs.join(" "))
    }
}

/// All faces of an embedding, each starting at its lexicographically smallest
/// directed edge, ordered by that edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    n: usize,
    faces: Vec<FaceWalk>,
    /// Face index of each directed edge, indexed `[from][to]` zero-based.
    face_of: Vec<Vec<usize>>,
}

impl FaceSet {
    pub fn faces(&self) -> &[FaceWalk] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> FaceProfile {
        let mut map = BTreeMap::new();
        for f in &self.faces {
            *map.entry(f.size()).or_insert(0) += 1;
        }
        FaceProfile(map)
    }

    /// Index of the face containing the directed edge.
    pub fn face_of(&self, e: DirectedEdge) -> usize {
        self.face_of[e.from.index()][e.to.index()]
    }

    pub fn position(&self, face: &FaceWalk) -> Option<usize> {
        let first = *face.boundary.first()?;
        if first.from.index() >= self.n || first.to.index() >= self.n || first.from == first.to {
            return None;
        }
        let idx = self.face_of(first);
        self.faces[idx].same_face(face).then_some(idx)
    }
}

/// Traces every face of the embedding.
pub fn trace_faces(rs: &RotationSystem) -> FaceSet {
    let n = rs.n();
    // pred[v][u]: predecessor of u in the rotation at v.
    let mut pred = vec![vec![usize::MAX; n]; n];
    for row in rs.rows() {
        let nb = row.neighbors();
        let len = nb.len();
        for k in 0..len {
            pred[row.vertex().index()][nb[k].index()] = nb[(k + len - 1) % len].index();
        }
    }
    let mut face_of = vec![vec![usize::MAX; n]; n];
    let mut faces = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || face_of[a][b] != usize::MAX {
                continue;
            }
            let idx = faces.len();
            let mut boundary = Vec::new();
            let (mut u, mut v) = (a, b);
            loop {
                face_of[u][v] = idx;
                boundary.push(DirectedEdge::new(
                    Vertex::new(u as u8 + 1),
                    Vertex::new(v as u8 + 1),
                ));
                let w = pred[v][u];
                (u, v) = (v, w);
                if (u, v) == (a, b) {
                    break;
                }
            }
            faces.push(FaceWalk { boundary });
        }
    }
    FaceSet { n, faces, face_of }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub v: i64,
    pub e: i64,
    pub f: i64,
    pub euler: i64,
    pub genus: i64,
}

impl SurfaceInvariants {
    pub fn from_counts(v: i64, e: i64, f: i64) -> Result<Self, FaceTraceError> {
        let euler = v - e + f;
        if euler % 2 != 0 {
            return Err(FaceTraceError::OddEuler(euler));
        }
        Ok(SurfaceInvariants {
            v,
            e,
            f,
            euler,
            genus: (2 - euler) / 2,
        })
    }
}

pub fn surface_invariants(rs: &RotationSystem) -> Result<SurfaceInvariants, FaceTraceError> {
    let fs = trace_faces(rs);
    SurfaceInvariants::from_counts(rs.n() as i64, rs.edge_count() as i64, fs.len() as i64)
}

/// Chains link corners `(pred, succ)` around `vertex` into its link cycle.
///
/// Each corner says that `pred` is immediately followed by `succ` in the
/// rotation at `vertex`. Succeeds iff the corners form exactly one cycle
/// through `expected` neighbors; the cycle starts at its smallest vertex.
pub fn chain_link(
    vertex: u8,
    corners: impl IntoIterator<Item = (u8, u8)>,
    expected: usize,
) -> Result<Vec<u8>, LinkError> {
    let mut succ: BTreeMap<u8, u8> = BTreeMap::new();
    let mut has_pred: BTreeMap<u8, u8> = BTreeMap::new();
    for (a, b) in corners {
        if let Some(&old) = succ.get(&a) {
            if old != b {
                return Err(LinkError::Branching { vertex, at: a });
            }
            continue;
        }
        if let Some(&old) = has_pred.get(&b) {
            if old != a {
                return Err(LinkError::Branching { vertex, at: b });
            }
        }
        succ.insert(a, b);
        has_pred.insert(b, a);
    }
    // A chain end has a successor that never becomes a predecessor.
    if let Some((_, &end)) = succ.iter().find(|(_, b)| !succ.contains_key(b)) {
        return Err(LinkError::OpenChain { vertex, at: end });
    }
    let mut lengths = Vec::new();
    let mut seen = BTreeMap::new();
    let mut cycle = Vec::new();
    for &start in succ.keys() {
        if seen.contains_key(&start) {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        loop {
            seen.insert(x, ());
            if lengths.is_empty() {
                cycle.push(x);
            }
            len += 1;
            x = succ[&x];
            if x == start {
                break;
            }
        }
        lengths.push(len);
    }
    match lengths.as_slice() {
        [len] if *len == expected => Ok(cycle),
        [len] => Err(LinkError::ShortCycle {
            vertex,
            len: *len,
            expected,
        }),
        [] => Err(LinkError::ShortCycle {
            vertex,
            len: 0,
            expected,
        }),
        _ => Err(LinkError::MultipleCycles { vertex, lengths }),
    }
}

/// The link of `v`: opposite edges of the triangles around `v`, glued into a
/// cycle that follows the rotation at `v`.
pub fn vertex_link(fs: &FaceSet, v: Vertex) -> Result<Vec<Vertex>, LinkError> {
    let mut corners = Vec::new();
    for face in fs.faces() {
        let b = face.boundary();
        for (k, e) in b.iter().enumerate() {
            if e.to != v {
                continue;
            }
            if face.size() != 3 {
                return Err(LinkError::NonTriangularFace {
                    vertex: v.id(),
                    size: face.size(),
                });
            }
            // Face a -> v -> w: w precedes a in the rotation at v.
            let a = e.from;
            let w = b[(k + 1) % b.len()].to;
            corners.push((w.id(), a.id()));
        }
    }
    chain_link(v.id(), corners, fs.n() - 1).map(|c| c.into_iter().map(Vertex::new).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    #[serde(flatten)]
    pub invariants: SurfaceInvariants,
    pub profile: FaceProfile,
    pub hexagon_distinct: bool,
    pub link_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_genus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_profile: Option<FaceProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<u8>>>,
}

impl EmbeddingReport {
    pub fn genus_ok(&self) -> bool {
        self.expected_genus
            .is_none_or(|g| g == self.invariants.genus)
    }

    pub fn profile_ok(&self) -> bool {
        self.expected_profile
            .as_ref()
            .is_none_or(|p| *p == self.profile)
    }

    pub fn expectations_met(&self) -> bool {
        self.genus_ok() && self.profile_ok()
    }

    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(g) = self.expected_genus.filter(|_| !self.genus_ok()) {
            out.push(format!("genus {} != expected {g}", self.invariants.genus));
        }
        if let Some(p) = self
            .expected_profile
            .as_ref()
            .filter(|_| !self.profile_ok())
        {
            out.push(format!("profile {} != expected {p}", self.profile));
        }
        out
    }
}

/// Full diagnostic evaluation of a rotation system. Expectation mismatches
/// are recorded in the report, never raised.
pub fn verify_embedding(
    rs: &RotationSystem,
    expected_genus: Option<i64>,
    expected_profile: Option<&FaceProfile>,
) -> EmbeddingReport {
    let fs = trace_faces(rs);
    let v = rs.n() as i64;
    let e = rs.edge_count() as i64;
    let f = fs.len() as i64;
    // Parity always holds for a face set traced from a rotation system; keep
    // the raw numbers if it ever does not.
    let invariants = SurfaceInvariants::from_counts(v, e, f).unwrap_or(SurfaceInvariants {
        v,
        e,
        f,
        euler: v - e + f,
        genus: (2 - (v - e + f)) / 2,
    });
    let hexagon_distinct = fs
        .faces()
        .iter()
        .any(|face| face.size() == 6 && face.has_distinct_vertices());
    let link_ok = rs.vertices().all(|x| match vertex_link(&fs, x) {
        Ok(_) | Err(LinkError::NonTriangularFace { .. }) => true,
        Err(_) => false,
    });
    EmbeddingReport {
        invariants,
        profile: fs.profile(),
        hexagon_distinct,
        link_ok,
        expected_genus,
        expected_profile: expected_profile.cloned(),
        faces: None,
    }
}

/// Faces as vertex lists, for JSON output.
pub fn faces_as_vertex_lists(fs: &FaceSet) -> Vec<Vec<u8>> {
    fs.faces()
        .iter()
        .map(|f| f.vertices().iter().map(|v| v.id()).collect())
        .collect()
}
