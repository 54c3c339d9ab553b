//! Adding one vertex inside a face of an embedding of `K_{n-1}` and joining
//! it to every other vertex, which gives a drawing of `K_n` on the same
//! surface.
//!
//! Edges to the face's own vertices stay inside the face. Any other vertex
//! `u` is reached by crossing into a neighboring face, one crossing per
//! embedded edge passed. Only routes of length at most one are certified:
//! each costly vertex gets its own boundary edge of the face, the face
//! across that edge contains `u`, and no two routes enter the same face.
//! Under those conditions the routes lie in disjoint sectors of the face and
//! in distinct neighboring faces, so they cannot cross each other.

use std::collections::{BTreeMap, VecDeque};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::facetrace::{trace_faces, FaceSet, FaceWalk};
use crate::rotation::{DirectedEdge, RotationSystem, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InsertionError {
    #[error("face {0} is not a face of this embedding")]
    FaceNotFound(String),
    #[error("embedding has no faces")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DualArc {
    pub a: usize,
    pub b: usize,
    /// The undirected edge both sides lie on, smaller endpoint first.
    pub edge: (Vertex, Vertex),
}

/// Faces as nodes, one arc per undirected edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    nodes: usize,
    arcs: Vec<DualArc>,
    adjacency: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[DualArc] {
        &self.arcs
    }

    /// Neighboring faces, with multiplicity; a self-loop lists the face once.
    pub fn neighbors(&self, face: usize) -> &[usize] {
        &self.adjacency[face]
    }

    pub fn degree(&self, face: usize) -> usize {
        self.adjacency[face].len()
    }

    /// Breadth-first distance from `face` to every face.
    pub fn distances(&self, face: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes];
        let mut queue = VecDeque::from([face]);
        dist[face] = 0;
        while let Some(f) = queue.pop_front() {
            for &g in &self.adjacency[f] {
                if dist[g] == usize::MAX {
                    dist[g] = dist[f] + 1;
                    queue.push_back(g);
                }
            }
        }
        dist
    }
}

pub fn build_dual(fs: &FaceSet) -> DualGraph {
    let n = fs.n();
    let mut arcs = Vec::new();
    let mut adjacency = vec![Vec::new(); fs.len()];
    for u in 1..=n as u8 {
        for v in u + 1..=n as u8 {
            let e = DirectedEdge::new(Vertex::new(u), Vertex::new(v));
            let (a, b) = (fs.face_of(e), fs.face_of(e.reversed()));
            arcs.push(DualArc {
                a,
                b,
                edge: (e.from, e.to),
            });
            adjacency[a].push(b);
            if a != b {
                adjacency[b].push(a);
            }
        }
    }
    DualGraph {
        nodes: fs.len(),
        arcs,
        adjacency,
    }
}

fn face_vertices<S: Serializer>(face: &FaceWalk, s: S) -> Result<S::Ok, S::Error> {
    face.vertices().serialize(s)
}

fn edge_pairs<S: Serializer>(
    assignment: &BTreeMap<Vertex, DirectedEdge>,
    s: S,
) -> Result<S::Ok, S::Error> {
    assignment
        .iter()
        .map(|(v, e)| (*v, [e.from, e.to]))
        .collect::<BTreeMap<_, _>>()
        .serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionPlan {
    #[serde(serialize_with = "face_vertices")]
    pub face: FaceWalk,
    /// Crossings needed to reach each vertex; 0 on the face.
    pub costs: BTreeMap<Vertex, usize>,
    /// Boundary edge of the face crossed by each route of cost 1.
    #[serde(serialize_with = "edge_pairs")]
    pub assignment: BTreeMap<Vertex, DirectedEdge>,
    pub certified: bool,
    pub upper_bound: usize,
    /// Why certification failed, when it did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InsertionPlan {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

/// Routes for `costly` (all at distance 1 from `face`), each through its own
/// boundary edge into its own neighboring face. First match in vertex and
/// boundary order.
pub fn certify_assignment(
    fs: &FaceSet,
    face: usize,
    costly: &[Vertex],
) -> Option<BTreeMap<Vertex, DirectedEdge>> {
    let boundary = fs.faces()[face].boundary();
    // Options per vertex: boundary positions whose opposite face holds it.
    let options: Vec<Vec<(usize, usize)>> = costly
        .iter()
        .map(|&u| {
            boundary
                .iter()
                .enumerate()
                .filter_map(|(k, &e)| {
                    let across = fs.face_of(e.reversed());
                    (across != face && fs.faces()[across].contains_vertex(u)).then_some((k, across))
                })
                .collect()
        })
        .collect();
    let mut used_edges = vec![false; boundary.len()];
    let mut used_faces = Vec::new();
    let mut chosen = Vec::with_capacity(costly.len());
    fn go(
        i: usize,
        options: &[Vec<(usize, usize)>],
        used_edges: &mut [bool],
        used_faces: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if i == options.len() {
            return true;
        }
        for &(k, across) in &options[i] {
            if used_edges[k] || used_faces.contains(&across) {
                continue;
            }
            used_edges[k] = true;
            used_faces.push(across);
            chosen.push(k);
            if go(i + 1, options, used_edges, used_faces, chosen) {
                return true;
            }
            chosen.pop();
            used_faces.pop();
            used_edges[k] = false;
        }
        false
    }
    go(0, &options, &mut used_edges, &mut used_faces, &mut chosen).then(|| {
        costly
            .iter()
            .zip(chosen)
            .map(|(&u, k)| (u, boundary[k]))
            .collect()
    })
}

fn plan_for(fs: &FaceSet, dual: &DualGraph, face: usize) -> InsertionPlan {
    let walk = fs.faces()[face].clone();
    let dist = dual.distances(face);
    let mut costs = BTreeMap::new();
    for v in 1..=fs.n() as u8 {
        let v = Vertex::new(v);
        let cost = fs
            .faces()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains_vertex(v))
            .map(|(k, _)| dist[k])
            .min()
            .unwrap_or(usize::MAX);
        costs.insert(v, cost);
    }
    let upper_bound = costs.values().sum();
    let far: Vec<Vertex> = costs
        .iter()
        .filter(|(_, &c)| c > 1)
        .map(|(&v, _)| v)
        .collect();
    let costly: Vec<Vertex> = costs
        .iter()
        .filter(|(_, &c)| c == 1)
        .map(|(&v, _)| v)
        .collect();
    let mut plan = InsertionPlan {
        face: walk,
        costs,
        assignment: BTreeMap::new(),
        certified: false,
        upper_bound,
        note: None,
    };
    if !plan.face.has_distinct_vertices() {
        plan.note = Some("face repeats a vertex".into());
    } else if let Some(&v) = far.first() {
        plan.note = Some(format!("vertex {v} is more than one crossing away"));
    } else if let Some(a) = certify_assignment(fs, face, &costly) {
        plan.assignment = a;
        plan.certified = true;
    } else {
        plan.note = Some("no non-interfering assignment of boundary edges".into());
    }
    plan
}

pub fn plan_insertion(
    rs: &RotationSystem,
    face: &FaceWalk,
) -> Result<InsertionPlan, InsertionError> {
    let fs = trace_faces(rs);
    let idx = fs
        .position(face)
        .ok_or_else(|| InsertionError::FaceNotFound(face.to_string()))?;
    Ok(plan_for(&fs, &build_dual(&fs), idx))
}

/// Smallest certified bound over all faces, earliest face on ties; without
/// any certified face, the smallest uncertified one.
pub fn best_insertion(rs: &RotationSystem) -> Result<InsertionPlan, InsertionError> {
    let fs = trace_faces(rs);
    let dual = build_dual(&fs);
    let mut best: Option<InsertionPlan> = None;
    for face in 0..fs.len() {
        let plan = plan_for(&fs, &dual, face);
        let better = match &best {
            None => true,
            Some(b) => (!plan.certified, plan.upper_bound) < (!b.certified, b.upper_bound),
        };
        if better {
            best = Some(plan);
        }
    }
    best.ok_or(InsertionError::Empty)
}
