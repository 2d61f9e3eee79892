//! Shared graph vocabulary: players, the read-only game-graph view, vertex
//! sets and lassos.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Zero,
    One,
}

impl Player {
    pub fn index(self) -> u8 {
        match self {
            Player::Zero => 0,
            Player::One => 1,
        }
    }

    pub fn from_index(i: u8) -> Option<Player> {
        match i {
            0 => Some(Player::Zero),
            1 => Some(Player::One),
            _ => None,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Zero => Player::One,
            Player::One => Player::Zero,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Read-only view of a weighted two-player graph with dense vertex indices.
///
/// Successor lists are sorted by target index and contain no duplicates.
pub trait GameGraph {
    fn num_vertices(&self) -> usize;

    fn owner(&self, v: usize) -> Player;

    /// `(target, weight)` pairs, sorted by target.
    fn successors(&self, v: usize) -> &[(usize, u64)];

    fn vertex_label(&self, v: usize) -> String;

    fn edge_weight(&self, from: usize, to: usize) -> Option<u64> {
        let succ = self.successors(from);
        succ.binary_search_by_key(&to, |&(t, _)| t)
            .ok()
            .map(|i| succ[i].1)
    }

    fn max_weight(&self) -> u64 {
        (0..self.num_vertices())
            .flat_map(|v| self.successors(v).iter().map(|&(_, w)| w))
            .max()
            .unwrap_or(0)
    }
}

/// Compressed adjacency used by both base and product arenas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<(usize, u64)>,
}

impl Adjacency {
    /// Builds from per-vertex lists; each list is sorted and deduplicated by target.
    pub(crate) fn from_lists(lists: Vec<Vec<(usize, u64)>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable();
            list.dedup_by_key(|&mut (t, _)| t);
            targets.extend(list);
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    pub(crate) fn get(&self, v: usize) -> &[(usize, u64)] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub(crate) fn num_edges(&self) -> usize {
        self.targets.len()
    }
}

/// A subset of the dense vertex indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            members: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            members: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn from_mask(members: Vec<bool>) -> Self {
        VertexSet { members }
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members[v]
    }

    pub fn insert(&mut self, v: usize) -> bool {
        !std::mem::replace(&mut self.members[v], true)
    }

    pub fn remove(&mut self, v: usize) -> bool {
        std::mem::replace(&mut self.members[v], false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members
            .iter()
            .zip(&other.members)
            .all(|(&a, &b)| !a || b)
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }
}

/// A finite representation of the ultimately periodic play `stem · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    pub fn new(stem: Vec<usize>, cycle: Vec<usize>) -> Self {
        Lasso { stem, cycle }
    }

    /// The vertex at `position` of the infinite play.
    pub fn at(&self, position: usize) -> usize {
        if position < self.stem.len() {
            self.stem[position]
        } else {
            self.cycle[(position - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The first `len` vertices of the play.
    pub fn unroll(&self, len: usize) -> Vec<usize> {
        (0..len).map(|i| self.at(i)).collect()
    }

    /// The shortest stem and period describing the same infinite play.
    pub fn normalized(mut self) -> Lasso {
        if self.cycle.is_empty() {
            return self;
        }
        while let Some(&last) = self.stem.last() {
            if last != *self.cycle.last().unwrap() {
                break;
            }
            self.stem.pop();
            self.cycle.rotate_right(1);
        }
        let len = self.cycle.len();
        if let Some(period) = (1..len).find(|&d| len % d == 0 && (d..len).all(|i| self.cycle[i] == self.cycle[i - d])) {
            self.cycle.truncate(period);
        }
        self
    }

    /// Checks that the lasso is a path in `graph`, including the closing edge
    /// from the end of the cycle back to its start.
    pub fn validate<G: GameGraph + ?Sized>(&self, graph: &G) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::MalformedLasso("empty cycle".into()));
        }
        let n = graph.num_vertices();
        if let Some(&bad) = self.stem.iter().chain(&self.cycle).find(|&&v| v >= n) {
            return Err(Error::MalformedLasso(format!("vertex index {bad} out of range")));
        }
        let len = self.stem.len() + self.cycle.len();
        for i in 0..len {
            let (from, to) = (self.at(i), self.at(i + 1));
            if graph.edge_weight(from, to).is_none() {
                return Err(Error::MalformedLasso(format!(
                    "no edge from {} to {} at position {i}",
                    graph.vertex_label(from),
                    graph.vertex_label(to)
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_set_basics() {
        let mut s = VertexSet::from_indices(5, [1, 3]);
        assert_eq!(s.len(), 2);
        assert!(s.insert(4));
        assert!(!s.insert(4));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 4]);
        assert!(VertexSet::from_indices(5, [1]).is_subset(&s));
        assert!(!VertexSet::from_indices(5, [0]).is_subset(&s));
        assert!(VertexSet::empty(3).is_empty());
    }

    #[test]
    fn lasso_positions() {
        let l = Lasso::new(vec![7], vec![1, 2]);
        assert_eq!(l.unroll(6), vec![7, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn lasso_normalization() {
        let l = Lasso::new(vec![0, 1], vec![2, 0, 1, 2, 0, 1]).normalized();
        assert_eq!(l, Lasso::new(vec![], vec![0, 1, 2]));
        let l = Lasso::new(vec![5], vec![4, 4]).normalized();
        assert_eq!(l, Lasso::new(vec![5], vec![4]));
        for l in [Lasso::new(vec![3, 1], vec![2, 1, 2, 1]), Lasso::new(vec![], vec![9])] {
            assert_eq!(l.clone().normalized().unroll(30), l.unroll(30));
        }
    }

    #[test]
    fn adjacency_sorts_and_dedups() {
        let adj = Adjacency::from_lists(vec![vec![(2, 5), (0, 1), (2, 5)], vec![]]);
        assert_eq!(adj.get(0), &[(0, 1), (2, 5)]);
        assert!(adj.get(1).is_empty());
        assert_eq!(adj.num_edges(), 2);
    }
}
