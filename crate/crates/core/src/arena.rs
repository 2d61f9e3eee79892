//! Weighted, colored two-player arenas.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, ViolationKind};
use crate::graph::{Adjacency, GameGraph, Player};

/// A vertex color, i.e. a letter of the DFA alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Color(pub String);

impl Color {
    pub fn new(s: impl Into<String>) -> Self {
        Color(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Color {
    fn from(s: &str) -> Self {
        Color(s.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub owner: Player,
    pub color: Color,
}

impl Vertex {
    pub fn new(id: impl Into<String>, owner: Player, color: impl Into<String>) -> Self {
        Vertex {
            id: id.into(),
            owner,
            color: Color(color.into()),
        }
    }
}

/// An edge as given in the input. Weights are signed here so that negative
/// weights can be reported instead of silently failing to parse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: i64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: i64) -> Self {
        Edge { src, dst, weight }
    }
}

/// A validated arena. Vertex indices follow declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adjacency: Adjacency,
    index: HashMap<String, usize>,
}

/// Checks every arena invariant and reports all violations.
pub fn validate_arena(vertices: &[Vertex], edges: &[Edge]) -> ValidationReport {
    let label = |i: usize| vertices.get(i).map_or_else(|| format!("#{i}"), |v| v.id.clone());
    validate_arena_at(
        vertices,
        edges,
        |v| format!("vertex {}", vertices[v].id),
        |i| format!("edge #{i} ({} -> {})", label(edges[i].src), label(edges[i].dst)),
    )
}

/// [`validate_arena`] with caller-chosen locations for vertices and edges.
pub(crate) fn validate_arena_at(
    vertices: &[Vertex],
    edges: &[Edge],
    vertex_loc: impl Fn(usize) -> String,
    edge_loc: impl Fn(usize) -> String,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    if vertices.is_empty() {
        report.push("arena", ViolationKind::NoVertices);
        return report;
    }
    let mut seen = HashSet::new();
    for (i, v) in vertices.iter().enumerate() {
        if !seen.insert(v.id.as_str()) {
            report.push(vertex_loc(i), ViolationKind::DuplicateId);
        }
        if v.color.0.is_empty() {
            report.push(vertex_loc(i), ViolationKind::EmptyColor);
        }
    }
    let n = vertices.len();
    let mut out_degree = vec![0usize; n];
    let mut pairs = HashSet::new();
    for (i, e) in edges.iter().enumerate() {
        let loc = edge_loc(i);
        if e.src >= n || e.dst >= n {
            report.push(loc, ViolationKind::DanglingEdge);
            continue;
        }
        if e.weight < 0 {
            report.push(loc.clone(), ViolationKind::NegativeWeight(e.weight));
        }
        if !pairs.insert((e.src, e.dst)) {
            report.push(loc, ViolationKind::DuplicateEdge);
        }
        out_degree[e.src] += 1;
    }
    for (v, &d) in out_degree.iter().enumerate() {
        if d == 0 {
            report.push(vertex_loc(v), ViolationKind::NoOutgoingEdge);
        }
    }
    report
}

impl Arena {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        validate_arena(&vertices, &edges).into_result()?;
        let mut lists = vec![Vec::new(); vertices.len()];
        for e in &edges {
            lists[e.src].push((e.dst, e.weight as u64));
        }
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        Ok(Arena {
            vertices,
            edges,
            adjacency: Adjacency::from_lists(lists),
            index,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn color(&self, v: usize) -> &Color {
        &self.vertices[v].color
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require_index(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownVertex(id.to_owned()))
    }

    /// The set of colors used by some vertex.
    pub fn colors(&self) -> BTreeSet<Color> {
        self.vertices.iter().map(|v| v.color.clone()).collect()
    }

    /// Resolves a list of vertex ids into indices.
    pub fn resolve_ids<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter().map(|s| self.require_index(s.as_ref())).collect()
    }

    /// Total weight of a path, or an error naming the first missing edge.
    pub fn path_weight(&self, path: &[usize]) -> Result<u64> {
        let mut total = 0u64;
        for (i, pair) in path.windows(2).enumerate() {
            let w = self.edge_weight(pair[0], pair[1]).ok_or_else(|| Error::NotAPath {
                position: i,
                from: self.vertices[pair[0]].id.clone(),
                to: self.vertices[pair[1]].id.clone(),
            })?;
            total += w;
        }
        Ok(total)
    }
}

impl GameGraph for Arena {
    fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    fn owner(&self, v: usize) -> Player {
        self.vertices[v].owner
    }

    fn successors(&self, v: usize) -> &[(usize, u64)] {
        self.adjacency.get(v)
    }

    fn vertex_label(&self, v: usize) -> String {
        self.vertices[v].id.clone()
    }
}
