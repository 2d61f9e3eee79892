//! Exact evaluation of ultimately periodic plays, strategy duels, and
//! independent oracles for both game values.
//!
//! The oracles never look at rankings. Whether Player 0 can keep every gap
//! between accepted prefixes at most `k` is a qualitative Büchi game on a
//! graph that tracks the running gap, so the value is the least `k` for which
//! that game is won. Winning is monotone in `k`, which makes bisection sound.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{GameGraph, Lasso, Player, VertexSet};
use crate::product::ProductArena;
use crate::rank::{Rank, Ranking};
use crate::strategy::FiniteStateStrategy;

/// Plays two finite-state strategies against each other from `start` until
/// the joint state repeats. The result is the normalized vertex projection.
pub fn simulate_duel<G: GameGraph + ?Sized>(
    g: &G,
    s0: &FiniteStateStrategy,
    s1: &FiniteStateStrategy,
    start: usize,
) -> Lasso {
    let (m0, m1) = (s0.memory(), s1.memory());
    let mut state = (start, m0.init(start), m1.init(start));
    let mut seen = HashMap::new();
    let mut trace = Vec::new();
    loop {
        if let Some(&first) = seen.get(&state) {
            let cycle = trace.split_off(first);
            return Lasso::new(trace, cycle).normalized();
        }
        seen.insert(state, trace.len());
        let (v, a, b) = state;
        trace.push(v);
        let next = match g.owner(v) {
            Player::Zero => s0.next_move(v, a),
            Player::One => s1.next_move(v, b),
        };
        state = (next, m0.update(a, next), m1.update(b, next));
    }
}

/// Weights of the first `len` edges of the play.
fn edge_weights<G: GameGraph + ?Sized>(g: &G, lasso: &Lasso, len: usize) -> Vec<u64> {
    (0..len)
        .map(|i| g.edge_weight(lasso.at(i), lasso.at(i + 1)).expect("validated lasso"))
        .collect()
}

/// `val_G` of the play `stem · cycle^ω`.
///
/// The supremum over `j` of the weight to the next accepted position is
/// attained at `j = 0` or at an accepted position, so it suffices to take the
/// weight to the first accepted position after 0 and every gap between
/// consecutive accepted positions. Those gaps all occur within the stem plus
/// two unrolled periods.
pub fn eval_limit_value(p: &ProductArena, lasso: &Lasso) -> Result<Rank> {
    lasso.validate(p)?;
    if !lasso.cycle.iter().any(|&v| p.is_goal(v)) {
        return Ok(Rank::Infinity);
    }
    let horizon = lasso.stem.len() + 2 * lasso.cycle.len();
    let weights = edge_weights(p, lasso, horizon);
    let mut prefix = vec![0u64; horizon + 1];
    for i in 0..horizon {
        prefix[i + 1] = prefix[i] + weights[i];
    }
    let accepted: Vec<usize> = (1..=horizon).filter(|&i| p.is_goal(lasso.at(i))).collect();
    let mut value = prefix[accepted[0]];
    for pair in accepted.windows(2) {
        value = value.max(prefix[pair[1]] - prefix[pair[0]]);
    }
    Ok(Rank::Finite(value))
}

/// `val^R_G`: weight of the shortest accepted prefix, where position 0 counts.
pub fn eval_reach_value(p: &ProductArena, lasso: &Lasso) -> Result<Rank> {
    eval_reach_value_to(p, p.goal(), lasso)
}

pub fn eval_reach_value_to<G: GameGraph + ?Sized>(g: &G, goal: &VertexSet, lasso: &Lasso) -> Result<Rank> {
    lasso.validate(g)?;
    let horizon = lasso.stem.len() + lasso.cycle.len();
    let mut total = 0u64;
    for i in 0..horizon {
        let v = lasso.at(i);
        if goal.contains(v) {
            return Ok(Rank::Finite(total));
        }
        total += g.edge_weight(v, lasso.at(i + 1)).expect("validated lasso");
    }
    Ok(Rank::Infinity)
}

/// Unweighted two-player graph used by the qualitative solvers.
#[derive(Clone, Debug)]
pub struct QualGame {
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl QualGame {
    pub fn new(owner: Vec<Player>, succ: Vec<Vec<usize>>) -> Self {
        let mut pred = vec![Vec::new(); owner.len()];
        for (v, list) in succ.iter().enumerate() {
            for &t in list {
                pred[t].push(v);
            }
        }
        QualGame { owner, succ, pred }
    }

    pub fn from_graph<G: GameGraph + ?Sized>(g: &G) -> Self {
        let n = g.num_vertices();
        Self::new(
            (0..n).map(|v| g.owner(v)).collect(),
            (0..n).map(|v| g.successors(v).iter().map(|&(t, _)| t).collect()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Attractor of `target` for `player` within the subgame `arena`.
    pub fn attractor(&self, player: Player, arena: &[bool], target: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut attr = vec![false; n];
        let mut remaining: Vec<usize> = (0..n)
            .map(|v| self.succ[v].iter().filter(|&&t| arena[t]).count())
            .collect();
        let mut queue = Vec::new();
        for v in 0..n {
            if arena[v] && target[v] {
                attr[v] = true;
                queue.push(v);
            }
        }
        while let Some(t) = queue.pop() {
            for &v in &self.pred[t] {
                if !arena[v] || attr[v] {
                    continue;
                }
                let pulled = if self.owner[v] == player {
                    true
                } else {
                    remaining[v] -= 1;
                    remaining[v] == 0
                };
                if pulled {
                    attr[v] = true;
                    queue.push(v);
                }
            }
        }
        attr
    }

    /// Player 0's winning region for "visit `target` infinitely often".
    pub fn buchi(&self, target: &[bool]) -> Vec<bool> {
        let n = self.len();
        let mut arena = vec![true; n];
        loop {
            let goal: Vec<bool> = (0..n).map(|v| arena[v] && target[v]).collect();
            let recur = self.attractor(Player::Zero, &arena, &goal);
            let losing: Vec<bool> = (0..n).map(|v| arena[v] && !recur[v]).collect();
            if !losing.iter().any(|&b| b) {
                return arena;
            }
            let trap = self.attractor(Player::One, &arena, &losing);
            for v in 0..n {
                if trap[v] {
                    arena[v] = false;
                }
            }
        }
    }
}

/// Classical Büchi solver, weights ignored.
pub fn buchi_solve<G: GameGraph + ?Sized>(g: &G, target: &VertexSet) -> VertexSet {
    VertexSet::from_mask(QualGame::from_graph(g).buchi(target.mask()))
}

/// Gap-counter game for threshold `k`: state `(u, g)` has index `u * (k + 1) + g`,
/// followed by one losing sink. Returns the game and its reset states.
fn counter_game<G: GameGraph + ?Sized>(g: &G, goal: &VertexSet, k: u64, reset_on_goal: bool) -> (QualGame, Vec<bool>) {
    let width = k as usize + 1;
    let n = g.num_vertices();
    let sink = n * width;
    let mut owner = Vec::with_capacity(sink + 1);
    let mut succ = Vec::with_capacity(sink + 1);
    let mut targets = vec![false; sink + 1];
    for u in 0..n {
        for gap in 0..width as u64 {
            owner.push(g.owner(u));
            succ.push(
                g.successors(u)
                    .iter()
                    .map(|&(t, w)| match gap.checked_add(w) {
                        Some(next) if next <= k => {
                            if reset_on_goal && goal.contains(t) {
                                t * width
                            } else {
                                t * width + next as usize
                            }
                        }
                        _ => sink,
                    })
                    .collect(),
            );
            targets[u * width + gap as usize] = goal.contains(u) && (gap == 0 || !reset_on_goal);
        }
    }
    owner.push(Player::Zero);
    succ.push(vec![sink]);
    (QualGame::new(owner, succ), targets)
}

/// Product vertices from which Player 0 can keep every gap between accepted
/// positions at most `k` while visiting accepted positions infinitely often.
pub fn threshold_buchi_wins(p: &ProductArena, k: u64) -> VertexSet {
    let (game, targets) = counter_game(p, p.goal(), k, true);
    let win = game.buchi(&targets);
    let width = k as usize + 1;
    VertexSet::from_mask((0..p.num_vertices()).map(|u| win[u * width]).collect())
}

/// Vertices from which Player 0 can reach `goal` with total weight at most `k`.
pub fn threshold_reach_wins<G: GameGraph + ?Sized>(g: &G, goal: &VertexSet, k: u64) -> VertexSet {
    let (game, targets) = counter_game(g, goal, k, false);
    let arena = vec![true; game.len()];
    let win = game.attractor(Player::Zero, &arena, &targets);
    let width = k as usize + 1;
    VertexSet::from_mask((0..g.num_vertices()).map(|u| win[u * width]).collect())
}

/// Per-vertex least `k ∈ [0, bound]` with `wins(k)` containing the vertex,
/// found by bisection; winning sets are cached per threshold.
fn bisect_values(n: usize, bound: u64, mut wins: impl FnMut(u64) -> VertexSet) -> Ranking {
    let mut cache: HashMap<u64, VertexSet> = HashMap::new();
    let mut query = |k: u64| cache.entry(k).or_insert_with(|| wins(k)).clone();
    let top = query(bound);
    (0..n)
        .map(|v| {
            if !top.contains(v) {
                return Rank::Infinity;
            }
            let (mut lo, mut hi) = (0u64, bound);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if query(mid).contains(v) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Rank::Finite(lo)
        })
        .collect()
}

/// Limit-game values by threshold search over `[0, (|V|·|Q| + 1)·W]`.
pub fn oracle_limit_value(p: &ProductArena) -> Ranking {
    bisect_values(p.num_vertices(), p.limit_value_bound(), |k| threshold_buchi_wins(p, k))
}

/// Reachability values by threshold search over `[0, |V|·|Q|·W]`.
pub fn oracle_reach_value<G: GameGraph + ?Sized>(g: &G, goal: &VertexSet) -> Ranking {
    let bound = g.num_vertices() as u64 * g.max_weight();
    bisect_values(g.num_vertices(), bound, |k| threshold_reach_wins(g, goal, k))
}

/// Checks a lasso against a product and reports the first problem.
pub fn check_lasso(p: &ProductArena, lasso: &Lasso) -> Result<()> {
    lasso.validate(p).map_err(|e| match e {
        Error::MalformedLasso(_) => e,
        other => Error::MalformedLasso(other.to_string()),
    })
}
