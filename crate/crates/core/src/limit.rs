//! Weighted limit games: the rank hierarchy, the operator `ℓ_L`, its greatest
//! fixed point with full iteration history, and the optimal finite-state
//! strategies of both players.
//!
//! Level indices are 0-based throughout: level `h` here is level `h + 1` in
//! the usual mathematical presentation.

use rayon::prelude::*;

use crate::arena::{Arena, Edge, Vertex};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::graph::{GameGraph, Player, VertexSet};
use crate::product::{build_product, ProductArena};
use crate::rank::{Rank, Ranking};
use crate::reach::{complete_ranking, optimal_successor, reach_fixpoint, ReachSolution};
use crate::strategy::{FiniteStateStrategy, MemoryStructure};

/// The goal vertices of a ranking stratified by rank, with one reachability
/// solution per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankHierarchy {
    /// Distinct ranks of goal vertices, strictly increasing.
    pub thresholds: Vec<Rank>,
    /// `levels[h]`: goal vertices of rank at most `thresholds[h]`.
    pub levels: Vec<VertexSet>,
    /// Least fixed point of `ℓ_{levels[h]}`.
    pub inner: Vec<ReachSolution>,
    /// `cmplt_{levels[h]}(inner[h].ranks)`.
    pub completed: Vec<Ranking>,
}

impl RankHierarchy {
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// `max{r(v), r''_h(v), 𝔯_h}`.
    fn level_value(&self, h: usize, v: usize, current: Rank) -> Rank {
        current.max(self.completed[h][v]).max(self.thresholds[h])
    }
}

pub fn build_hierarchy(p: &ProductArena, r: &[Rank]) -> RankHierarchy {
    let mut thresholds: Vec<Rank> = p.goal().iter().map(|v| r[v]).collect();
    thresholds.sort_unstable();
    thresholds.dedup();
    let levels: Vec<VertexSet> = thresholds
        .iter()
        .map(|&t| VertexSet::from_indices(p.num_vertices(), p.goal().iter().filter(|&v| r[v] <= t)))
        .collect();
    let solve = |level: &VertexSet| {
        let sol = reach_fixpoint(p, level);
        let completed = complete_ranking(p, level, &sol.ranks);
        (sol, completed)
    };
    let solved: Vec<(ReachSolution, Ranking)> = if levels.len() > 1 && p.num_vertices() >= 256 {
        levels.par_iter().map(solve).collect()
    } else {
        levels.iter().map(solve).collect()
    };
    let (inner, completed) = solved.into_iter().unzip();
    RankHierarchy {
        thresholds,
        levels,
        inner,
        completed,
    }
}

/// One application of `ℓ_L`; also returns the hierarchy built for `r`.
pub fn limit_step(p: &ProductArena, r: &[Rank]) -> (Ranking, RankHierarchy) {
    let hierarchy = build_hierarchy(p, r);
    let next = (0..p.num_vertices())
        .map(|v| {
            (0..hierarchy.len())
                .map(|h| hierarchy.level_value(h, v, r[v]))
                .min()
                .unwrap_or(Rank::Infinity)
        })
        .collect();
    (next, hierarchy)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSolution {
    pub ranks: Ranking,
    /// First iteration index at which each vertex attains its final rank.
    pub settling: Vec<usize>,
    /// `history[j] = (r_j, hierarchy built for r_j)`, for `j = 0..=iterations`.
    pub history: Vec<(Ranking, RankHierarchy)>,
    /// `h(v)`: smallest level attaining the minimum at the fixed point.
    pub h_of: Vec<usize>,
    /// The minimal `n` with `r_n = r_{n+1}`.
    pub iterations: usize,
}

impl LimitSolution {
    /// The hierarchy computed for the fixed point itself.
    pub fn final_hierarchy(&self) -> &RankHierarchy {
        &self.history.last().expect("history is never empty").1
    }
}

/// Iterates [`limit_step`] from the all-zero ranking until it stabilises.
pub fn limit_fixpoint(p: &ProductArena) -> LimitSolution {
    let n = p.num_vertices();
    let mut ranks = vec![Rank::ZERO; n];
    let mut settling = vec![0; n];
    let mut history = Vec::new();
    loop {
        let (next, hierarchy) = limit_step(p, &ranks);
        let j = history.len();
        let mut changed = false;
        for v in 0..n {
            if next[v] != ranks[v] {
                settling[v] = j + 1;
                changed = true;
            }
        }
        history.push((ranks.clone(), hierarchy));
        if !changed {
            break;
        }
        ranks = next;
    }
    let iterations = history.len() - 1;
    debug_assert!(iterations <= p.goal().len() + 1);

    let hierarchy = &history[iterations].1;
    let h_of = (0..n)
        .map(|v| {
            (0..hierarchy.len())
                .find(|&h| hierarchy.level_value(h, v, ranks[v]) == ranks[v])
                .unwrap_or(0)
        })
        .collect();
    LimitSolution {
        ranks,
        settling,
        history,
        h_of,
        iterations,
    }
}

/// Player 0's strategy `σ'` over the product, with memory `{0..k}`.
pub fn extract_limit_strategy_p0(p: &ProductArena, sol: &LimitSolution) -> Result<FiniteStateStrategy> {
    let n = p.num_vertices();
    let hierarchy = sol.final_hierarchy();
    let k = hierarchy.len().max(1);

    let init = sol.h_of.clone();
    let mut upd = vec![0; k * n];
    for h in 0..k {
        for v in 0..n {
            let reset = hierarchy.levels.get(h).is_some_and(|level| level.contains(v));
            upd[h * n + v] = if reset { sol.h_of[v] } else { h };
        }
    }

    let mut nxt = vec![None; n * k];
    for v in (0..n).filter(|&v| p.owner(v) == Player::Zero) {
        for h in 0..k {
            let choice = if hierarchy.is_empty() {
                p.successors(v)[0].0
            } else {
                let inner = &hierarchy.inner[h];
                if hierarchy.levels[h].contains(v) {
                    let expected = hierarchy.completed[h][v];
                    optimal_successor(p, v, &inner.ranks, expected, false, None)?
                } else if inner.ranks[v].is_infinite() {
                    p.successors(v)[0].0
                } else {
                    optimal_successor(p, v, &inner.ranks, inner.ranks[v], false, Some(&inner.settling))?
                }
            };
            nxt[v * k + h] = Some(choice);
        }
    }
    FiniteStateStrategy::new(Player::Zero, MemoryStructure::new(k, init, upd)?, nxt)
}

/// Classification of a product vertex used by Player 1's strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexType {
    /// `r*(v) = 0`.
    Zero,
    /// Largest level `h` with `r*(v) = r''_h(v)`.
    One(usize),
    /// Unique level `h` with `r*(v) = 𝔯_h`. Also used, at level 0, when the
    /// consulted hierarchy is empty (no goal vertices at all).
    Two(usize),
}

/// Classifies `v` against the hierarchy built at iteration `t_s(v) - 1`.
pub fn classify_p1(v: usize, sol: &LimitSolution) -> Result<VertexType> {
    let rank = sol.ranks[v];
    if rank == Rank::ZERO {
        return Ok(VertexType::Zero);
    }
    let t = sol.settling[v];
    if t == 0 {
        return Err(Error::InternalInvariant(format!(
            "vertex {v} has positive rank but settling time 0"
        )));
    }
    let hierarchy = &sol.history[t - 1].1;
    if hierarchy.is_empty() {
        return Ok(VertexType::Two(0));
    }
    if let Some(h) = (0..hierarchy.len()).rev().find(|&h| hierarchy.completed[h][v] == rank) {
        return Ok(VertexType::One(h));
    }
    if let Some(h) = hierarchy.thresholds.iter().position(|&th| th == rank) {
        return Ok(VertexType::Two(h));
    }
    Err(Error::InternalInvariant(format!(
        "vertex {v} with rank {rank} matches no level of the hierarchy at iteration {}",
        t - 1
    )))
}

/// Player 1's strategy `τ'` over the product. Its memory is the product
/// vertex where the play started or most recently visited the goal set.
pub fn extract_limit_strategy_p1(p: &ProductArena, sol: &LimitSolution) -> Result<FiniteStateStrategy> {
    let n = p.num_vertices();
    let init: Vec<usize> = (0..n).collect();
    let mut upd = vec![0; n * n];
    for m in 0..n {
        for v in 0..n {
            upd[m * n + v] = if p.is_goal(v) { v } else { m };
        }
    }

    let owned: Vec<usize> = (0..n).filter(|&v| p.owner(v) == Player::One).collect();
    let mut nxt = vec![None; n * n];
    for m in 0..n {
        let guide = match classify_p1(m, sol)? {
            VertexType::Zero | VertexType::Two(0) => None,
            VertexType::One(h) => Some(h),
            VertexType::Two(h) => Some(h - 1),
        };
        for &v in &owned {
            let choice = match guide {
                None => p.successors(v)[0].0,
                Some(h) => {
                    let hierarchy = &sol.history[sol.settling[m] - 1].1;
                    let expected = hierarchy.completed[h][v];
                    optimal_successor(p, v, &hierarchy.inner[h].ranks, expected, true, None)?
                }
            };
            nxt[v * n + m] = Some(choice);
        }
    }
    FiniteStateStrategy::new(Player::One, MemoryStructure::new(n, init, upd)?, nxt)
}

/// Winning regions `(W0, W1)` over base vertices: `v ∈ W0` iff its value is finite.
pub fn winning_regions(p: &ProductArena, sol: &LimitSolution) -> (Vec<usize>, Vec<usize>) {
    (0..p.base().num_vertices()).partition(|&v| sol.ranks[p.entry(v)].is_finite())
}

/// Value of a fixed finite-state strategy from every base vertex.
///
/// For a Player-0 strategy this is the adversarial value `sup_ρ val(ρ)` over
/// consistent plays; for a Player-1 strategy it is the best value Player 0
/// can obtain against it.
pub fn strategy_value(a: &Arena, d: &Dfa, s: &FiniteStateStrategy) -> Result<Vec<Rank>> {
    s.validate(a)?;
    let restricted = restrict_arena(a, s)?;
    let p = build_product(&restricted, d)?;
    let sol = limit_fixpoint(&p);
    let mem = s.memory();
    Ok((0..a.num_vertices())
        .map(|v| sol.ranks[p.entry(v * mem.size() + mem.init(v))])
        .collect())
}

/// `A × M` with the strategy owner's choices fixed to the strategy's moves.
/// Vertex `(v, m)` has index `v * |M| + m`.
fn restrict_arena(a: &Arena, s: &FiniteStateStrategy) -> Result<Arena> {
    let mem = s.memory();
    let k = mem.size();
    let mut vertices = Vec::with_capacity(a.num_vertices() * k);
    let mut edges = Vec::new();
    for v in 0..a.num_vertices() {
        let base = a.vertex(v);
        for m in 0..k {
            let src = v * k + m;
            vertices.push(Vertex {
                id: format!("{}#{m}", base.id),
                owner: base.owner,
                color: base.color.clone(),
            });
            if base.owner == s.player() {
                let t = s.next_move(v, m);
                let w = a.edge_weight(v, t).expect("validated strategy moves along edges");
                edges.push(Edge::new(src, t * k + mem.update(m, t), w as i64));
            } else {
                for &(t, w) in a.successors(v) {
                    edges.push(Edge::new(src, t * k + mem.update(m, t), w as i64));
                }
            }
        }
    }
    Arena::new(vertices, edges)
}
