//! Weighted reachability: the ranking operator `ℓ_F'`, its least fixed point
//! with settling times, the completion operator and positional optimal
//! strategies for both players.

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GameGraph, Player, VertexSet};
use crate::rank::{Rank, Ranking};
use crate::strategy::FiniteStateStrategy;

/// Graphs at least this large are swept in parallel.
const PARALLEL_SWEEP_THRESHOLD: usize = 4096;

/// Least fixed point of `ℓ_goal` reached from the all-infinity ranking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachSolution {
    pub goal: VertexSet,
    pub ranks: Ranking,
    /// `t_s(v)`: first index `j` of the iteration sequence with `r_j(v) = r*(v)`.
    pub settling: Vec<usize>,
    /// The minimal `n` with `r_n = r_{n+1}`.
    pub iterations: usize,
}

/// `min` (Player 0) or `max` (Player 1) over `w(v, v') + r(v')`.
fn best_continuation<G: GameGraph + ?Sized>(g: &G, v: usize, r: &[Rank], maximize: bool) -> Rank {
    let sums = g.successors(v).iter().map(|&(t, w)| r[t].add_weight(w));
    let best = if maximize { sums.max() } else { sums.min() };
    best.expect("every vertex has a successor")
}

fn step_vertex<G: GameGraph + ?Sized>(g: &G, goal: &VertexSet, r: &[Rank], v: usize) -> Rank {
    if goal.contains(v) {
        return Rank::ZERO;
    }
    let maximize = g.owner(v) == Player::One;
    r[v].min(best_continuation(g, v, r, maximize))
}

/// One application of `ℓ_goal`.
pub fn reach_step<G: GameGraph + Sync + ?Sized>(g: &G, goal: &VertexSet, r: &[Rank]) -> Ranking {
    let n = g.num_vertices();
    if n >= PARALLEL_SWEEP_THRESHOLD {
        (0..n).into_par_iter().map(|v| step_vertex(g, goal, r, v)).collect()
    } else {
        (0..n).map(|v| step_vertex(g, goal, r, v)).collect()
    }
}

/// Iterates [`reach_step`] from the all-infinity ranking until it stabilises.
pub fn reach_fixpoint<G: GameGraph + Sync + ?Sized>(g: &G, goal: &VertexSet) -> ReachSolution {
    let n = g.num_vertices();
    let mut ranks = vec![Rank::Infinity; n];
    let mut settling = vec![0; n];
    let mut j = 0;
    loop {
        let next = reach_step(g, goal, &ranks);
        let mut changed = false;
        // Ranks only decrease, so the last change is the settling time.
        for v in 0..n {
            if next[v] != ranks[v] {
                settling[v] = j + 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        ranks = next;
        j += 1;
    }
    debug_assert!(j <= n + 1, "reachability iteration exceeded |V| + 1 steps");
    ReachSolution {
        goal: goal.clone(),
        ranks,
        settling,
        iterations: j,
    }
}

/// `cmplt_goal(r)`: re-scores goal vertices by the cost of reaching the goal
/// once more. Other vertices keep their rank.
pub fn complete_ranking<G: GameGraph + ?Sized>(g: &G, goal: &VertexSet, r: &[Rank]) -> Ranking {
    (0..g.num_vertices())
        .map(|v| {
            if goal.contains(v) {
                best_continuation(g, v, r, g.owner(v) == Player::One)
            } else {
                r[v]
            }
        })
        .collect()
}

/// The lowest-index successor `v̄` with `expected = w(v, v̄) + target(v̄)`.
///
/// With `settling` supplied, a finite `expected` and `maximize == false`,
/// successors additionally satisfying `t_s(v) = t_s(v̄) + 1` are preferred.
pub fn optimal_successor<G: GameGraph + ?Sized>(
    g: &G,
    v: usize,
    target: &[Rank],
    expected: Rank,
    maximize: bool,
    settling: Option<&[usize]>,
) -> Result<usize> {
    let mut candidates = g
        .successors(v)
        .iter()
        .filter(|&&(t, w)| target[t].add_weight(w) == expected)
        .map(|&(t, _)| t)
        .peekable();
    let Some(&first) = candidates.peek() else {
        return Err(Error::InternalInvariant(format!(
            "no successor of {} realises rank {expected}",
            g.vertex_label(v)
        )));
    };
    match settling {
        Some(ts) if expected.is_finite() && !maximize => {
            if let Some(t) = candidates.find(|&t| ts[v] == ts[t] + 1) {
                Ok(t)
            } else {
                warn!(
                    "no optimal successor of {} decreases the settling time; using rank-only choice",
                    g.vertex_label(v)
                );
                Ok(first)
            }
        }
        _ => Ok(first),
    }
}

fn lowest_successor<G: GameGraph + ?Sized>(g: &G, v: usize) -> usize {
    g.successors(v)[0].0
}

/// Positional optimal strategies `(σ', τ')` for the reachability game.
pub fn extract_reach_strategies<G: GameGraph + ?Sized>(
    g: &G,
    sol: &ReachSolution,
) -> Result<(FiniteStateStrategy, FiniteStateStrategy)> {
    let n = g.num_vertices();
    let mut sigma = vec![None; n];
    let mut tau = vec![None; n];
    for v in 0..n {
        let rank = sol.ranks[v];
        match g.owner(v) {
            Player::Zero => {
                sigma[v] = Some(if sol.goal.contains(v) || rank.is_infinite() {
                    lowest_successor(g, v)
                } else {
                    optimal_successor(g, v, &sol.ranks, rank, false, Some(&sol.settling))?
                });
            }
            Player::One => {
                tau[v] = Some(if sol.goal.contains(v) {
                    lowest_successor(g, v)
                } else {
                    optimal_successor(g, v, &sol.ranks, rank, true, None)?
                });
            }
        }
    }
    Ok((
        FiniteStateStrategy::positional(Player::Zero, sigma),
        FiniteStateStrategy::positional(Player::One, tau),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::build_product;
    use crate::samples::{d_b, g1, g2, g_inf};
    use Rank::{Finite as F, Infinity as INF};

    #[test]
    fn first_step_only_touches_goal() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let goal = VertexSet::from_indices(4, [3]);
        let r1 = reach_step(&p, &goal, &[INF; 4]);
        assert_eq!(r1, vec![INF, INF, INF, F(0)]);
        let r2 = reach_step(&p, &goal, &r1);
        assert_eq!(r2, vec![F(2), F(2), INF, F(0)]);
    }

    #[test]
    fn player_one_takes_the_max() {
        let p = build_product(&g2(), &d_b()).unwrap();
        // (v0,q0)=0 (v0,qb)=1 (v1,q0)=2 (v1,qb)=3 (v2,q0)=4 (v2,qb)=5
        let r: Ranking = (0..6).map(|i| if p.is_goal(i) { F(0) } else { INF }).collect();
        let next = reach_step(&p, p.goal(), &r);
        assert_eq!(next[0], F(4));
    }

    #[test]
    fn g1_fixpoint() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, &VertexSet::from_indices(4, [3]));
        assert_eq!(sol.ranks, vec![F(2), F(2), F(5), F(0)]);
        assert_eq!(sol.settling, vec![2, 2, 3, 1]);
        assert_eq!(sol.iterations, 3);

        let sol = reach_fixpoint(&p, p.goal());
        assert_eq!(sol.ranks, vec![F(2), F(0), F(5), F(0)]);
        assert_eq!(sol.settling, vec![2, 1, 3, 1]);
    }

    #[test]
    fn g_inf_fixpoint_keeps_goal_at_zero() {
        let p = build_product(&g_inf(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        assert_eq!(sol.ranks, vec![INF, F(0)]);
        assert_eq!(sol.settling, vec![0, 1]);
    }

    #[test]
    fn empty_goal_is_all_infinite() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, &VertexSet::empty(4));
        assert!(sol.ranks.iter().all(|r| r.is_infinite()));
        assert!(sol.settling.iter().all(|&t| t == 0));
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn completion_examples() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        assert_eq!(
            complete_ranking(&p, p.goal(), &sol.ranks),
            vec![F(2), F(2), F(5), F(5)]
        );
        assert_eq!(complete_ranking(&p, &VertexSet::empty(4), &sol.ranks), sol.ranks);

        let p = build_product(&g2(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        let c = complete_ranking(&p, p.goal(), &sol.ranks);
        assert_eq!((c[3], c[5]), (F(4), F(4)));
    }

    #[test]
    fn optimal_successor_examples() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        assert_eq!(optimal_successor(&p, 0, &sol.ranks, F(2), false, Some(&sol.settling)).unwrap(), 3);
        assert!(optimal_successor(&p, 0, &sol.ranks, F(7), false, None)
            .unwrap_err()
            .is_internal());

        let p = build_product(&g2(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        assert_eq!(optimal_successor(&p, 0, &sol.ranks, F(4), true, None).unwrap(), 5);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        use crate::arena::{Arena, Edge, Vertex};
        let a = Arena::new(
            vec![
                Vertex::new("s", Player::Zero, "a"),
                Vertex::new("x", Player::Zero, "b"),
                Vertex::new("y", Player::Zero, "b"),
            ],
            vec![Edge::new(0, 2, 1), Edge::new(0, 1, 1), Edge::new(1, 1, 0), Edge::new(2, 2, 0)],
        )
        .unwrap();
        let p = build_product(&a, &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        let s = p.entry(0);
        let chosen = optimal_successor(&p, s, &sol.ranks, F(1), false, Some(&sol.settling)).unwrap();
        assert_eq!(chosen, p.index(1, 1));
    }

    #[test]
    fn strategies_on_samples() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        let (sigma, tau) = extract_reach_strategies(&p, &sol).unwrap();
        assert_eq!(sigma.next_move(0, 0), 3);
        assert_eq!(sigma.next_move(3, 0), 0);
        assert_eq!(tau.moves().count(), 0);
        sigma.validate(&p).unwrap();
        tau.validate(&p).unwrap();

        let p = build_product(&g2(), &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        let (_, tau) = extract_reach_strategies(&p, &sol).unwrap();
        assert_eq!(tau.next_move(0, 0), 5);
    }

    #[test]
    fn goal_as_only_successor() {
        use crate::arena::{Arena, Edge, Vertex};
        let a = Arena::new(
            vec![Vertex::new("s", Player::Zero, "a"), Vertex::new("t", Player::Zero, "b")],
            vec![Edge::new(0, 1, 7), Edge::new(1, 1, 0)],
        )
        .unwrap();
        let p = build_product(&a, &d_b()).unwrap();
        let sol = reach_fixpoint(&p, p.goal());
        let (sigma, _) = extract_reach_strategies(&p, &sol).unwrap();
        let s = p.entry(0);
        assert_eq!(sol.ranks[s], F(7));
        assert!(p.is_goal(sigma.next_move(s, 0)));
    }
}
