//! Memory structures and finite-state strategies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GameGraph, Player};

/// `(M, init, upd)` for a host graph with `num_vertices` vertices.
/// Memory states are `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryStructure {
    size: usize,
    num_vertices: usize,
    init: Vec<usize>,
    /// Row-major `size x num_vertices` table: `upd[m * n + v]`.
    upd: Vec<usize>,
}

impl MemoryStructure {
    pub fn new(size: usize, init: Vec<usize>, upd: Vec<usize>) -> Result<Self> {
        let num_vertices = init.len();
        if size == 0 {
            return Err(Error::InternalInvariant("memory structure needs at least one state".into()));
        }
        if upd.len() != size * num_vertices {
            return Err(Error::InternalInvariant(format!(
                "update table has {} entries, expected {}",
                upd.len(),
                size * num_vertices
            )));
        }
        if init.iter().chain(&upd).any(|&m| m >= size) {
            return Err(Error::InternalInvariant("memory state out of range".into()));
        }
        Ok(MemoryStructure {
            size,
            num_vertices,
            init,
            upd,
        })
    }

    /// The one-state memory of a positional strategy.
    pub fn trivial(num_vertices: usize) -> Self {
        MemoryStructure {
            size: 1,
            num_vertices,
            init: vec![0; num_vertices],
            upd: vec![0; num_vertices],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn init(&self, v: usize) -> usize {
        self.init[v]
    }

    pub fn update(&self, m: usize, v: usize) -> usize {
        self.upd[m * self.num_vertices + v]
    }

    pub fn init_table(&self) -> &[usize] {
        &self.init
    }

    pub fn update_table(&self) -> &[usize] {
        &self.upd
    }

    /// `upd*` on a nonempty prefix.
    pub fn run(&self, prefix: &[usize]) -> Option<usize> {
        let (&first, rest) = prefix.split_first()?;
        Some(rest.iter().fold(self.init(first), |m, &v| self.update(m, v)))
    }
}

/// A strategy given by a memory structure and a next-move table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteStateStrategy {
    player: Player,
    memory: MemoryStructure,
    /// `nxt[v * |M| + m]`, defined exactly on the player's vertices.
    nxt: Vec<Option<usize>>,
}

impl FiniteStateStrategy {
    pub fn new(player: Player, memory: MemoryStructure, nxt: Vec<Option<usize>>) -> Result<Self> {
        if nxt.len() != memory.num_vertices() * memory.size() {
            return Err(Error::InternalInvariant("next-move table has the wrong size".into()));
        }
        Ok(FiniteStateStrategy { player, memory, nxt })
    }

    /// A positional strategy from a per-vertex choice.
    pub fn positional(player: Player, choice: Vec<Option<usize>>) -> Self {
        let memory = MemoryStructure::trivial(choice.len());
        FiniteStateStrategy {
            player,
            memory,
            nxt: choice,
        }
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn memory(&self) -> &MemoryStructure {
        &self.memory
    }

    pub fn memory_size(&self) -> usize {
        self.memory.size()
    }

    pub fn next_move_opt(&self, v: usize, m: usize) -> Option<usize> {
        self.nxt[v * self.memory.size() + m]
    }

    /// `Nxt(v, m)`. Panics if `v` is not owned by the strategy's player.
    pub fn next_move(&self, v: usize, m: usize) -> usize {
        self.next_move_opt(v, m)
            .expect("next move queried at a vertex the strategy does not own")
    }

    /// Entries `(v, m, Nxt(v, m))` in index order.
    pub fn moves(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let size = self.memory.size();
        self.nxt
            .iter()
            .enumerate()
            .filter_map(move |(k, t)| t.map(|t| (k / size, k % size, t)))
    }

    /// Checks that the next-move table is total over owned vertices and
    /// only proposes successors.
    pub fn validate<G: GameGraph + ?Sized>(&self, graph: &G) -> Result<()> {
        if self.memory.num_vertices() != graph.num_vertices() {
            return Err(Error::InternalInvariant(
                "strategy and host graph disagree on the vertex count".into(),
            ));
        }
        for v in 0..graph.num_vertices() {
            let owned = graph.owner(v) == self.player;
            for m in 0..self.memory.size() {
                match (owned, self.next_move_opt(v, m)) {
                    (true, None) => {
                        return Err(Error::InternalInvariant(format!(
                            "no move at {} with memory {m}",
                            graph.vertex_label(v)
                        )))
                    }
                    (true, Some(t)) if graph.edge_weight(v, t).is_none() => {
                        return Err(Error::InternalInvariant(format!(
                            "move from {} is not a successor",
                            graph.vertex_label(v)
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(Error::InternalInvariant(format!(
                            "move defined at {}, which belongs to the opponent",
                            graph.vertex_label(v)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Whether a finite play prefix is consistent with this strategy.
    pub fn is_consistent<G: GameGraph + ?Sized>(&self, graph: &G, prefix: &[usize]) -> bool {
        let Some(&first) = prefix.first() else {
            return true;
        };
        let mut m = self.memory.init(first);
        for pair in prefix.windows(2) {
            let (v, next) = (pair[0], pair[1]);
            if graph.owner(v) == self.player && self.next_move(v, m) != next {
                return false;
            }
            m = self.memory.update(m, next);
        }
        true
    }
}
