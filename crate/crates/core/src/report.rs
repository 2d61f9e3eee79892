//! End-to-end solving with structured results for the command line.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arena::Arena;
use crate::dfa::Dfa;
use crate::error::Result;
use crate::graph::{GameGraph, Player};
use crate::limit::{extract_limit_strategy_p0, extract_limit_strategy_p1, limit_fixpoint, LimitSolution};
use crate::product::{build_product, compose_strategy, ProductArena};
use crate::rank::Rank;
use crate::reach::{extract_reach_strategies, reach_fixpoint};
use crate::strategy::FiniteStateStrategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    W0,
    W1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub vertex: String,
    pub value: Rank,
    pub region: Region,
}

/// A strategy over the base arena written out as tables. Vertices are named
/// by id; `upd[m][v]` and `nxt[v][m]` follow the arena's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTable {
    pub vertices: Vec<String>,
    pub memory_states: usize,
    pub init: Vec<usize>,
    pub upd: Vec<Vec<usize>>,
    pub nxt: Vec<Vec<Option<String>>>,
}

impl StrategyTable {
    pub fn new(a: &Arena, s: &FiniteStateStrategy) -> Self {
        let mem = s.memory();
        let n = a.num_vertices();
        StrategyTable {
            vertices: a.vertices().iter().map(|v| v.id.clone()).collect(),
            memory_states: mem.size(),
            init: mem.init_table().to_vec(),
            upd: (0..mem.size()).map(|m| (0..n).map(|v| mem.update(m, v)).collect()).collect(),
            nxt: (0..n)
                .map(|v| {
                    (0..mem.size())
                        .map(|m| s.next_move_opt(v, m).map(|t| a.vertex(t).id.clone()))
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategies {
    pub player0: StrategyTable,
    pub player1: StrategyTable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub product_vertices: usize,
    pub product_edges: usize,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub values: Vec<VertexRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategies: Option<Strategies>,
    pub diagnostics: Diagnostics,
}

/// Everything computed by [`solve`], for callers that need more than the report.
pub struct LimitOutcome {
    pub product: ProductArena,
    pub solution: LimitSolution,
    pub sigma: FiniteStateStrategy,
    pub tau: FiniteStateStrategy,
    pub report: SolveReport,
}

fn records(a: &Arena, values: impl Iterator<Item = Rank>) -> Vec<VertexRecord> {
    a.vertices()
        .iter()
        .zip(values)
        .map(|(v, value)| VertexRecord {
            vertex: v.id.clone(),
            value,
            region: if value.is_finite() { Region::W0 } else { Region::W1 },
        })
        .collect()
}

/// Solves the limit game and flattens both optimal strategies onto `a`.
pub fn solve(a: &Arena, d: &Dfa, with_strategies: bool) -> Result<LimitOutcome> {
    let start = Instant::now();
    let product = build_product(a, d)?;
    let solution = limit_fixpoint(&product);
    let sigma = extract_limit_strategy_p0(&product, &solution)?;
    let tau = extract_limit_strategy_p1(&product, &solution)?;
    let strategies = if with_strategies {
        let flat0 = compose_strategy(product.dfa_memory(), &sigma)?;
        let flat1 = compose_strategy(product.dfa_memory(), &tau)?;
        Some(Strategies {
            player0: StrategyTable::new(a, &flat0),
            player1: StrategyTable::new(a, &flat1),
        })
    } else {
        None
    };
    let report = SolveReport {
        values: records(a, (0..a.num_vertices()).map(|v| solution.ranks[product.entry(v)])),
        strategies,
        diagnostics: Diagnostics {
            iterations: solution.iterations,
            product_vertices: product.num_vertices(),
            product_edges: product.num_edges(),
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    Ok(LimitOutcome {
        product,
        solution,
        sigma,
        tau,
        report,
    })
}

/// Solves the reachability game `val^R` with positional product strategies.
pub fn solve_reach(a: &Arena, d: &Dfa) -> Result<SolveReport> {
    let start = Instant::now();
    let p = build_product(a, d)?;
    let sol = reach_fixpoint(&p, p.goal());
    let (sigma, tau) = extract_reach_strategies(&p, &sol)?;
    let flat0 = compose_strategy(p.dfa_memory(), &sigma)?;
    let flat1 = compose_strategy(p.dfa_memory(), &tau)?;
    Ok(SolveReport {
        values: records(a, (0..a.num_vertices()).map(|v| sol.ranks[p.entry(v)])),
        strategies: Some(Strategies {
            player0: StrategyTable::new(a, &flat0),
            player1: StrategyTable::new(a, &flat1),
        }),
        diagnostics: Diagnostics {
            iterations: sol.iterations,
            product_vertices: p.num_vertices(),
            product_edges: p.num_edges(),
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn value_of(&self, id: &str) -> Option<Rank> {
        self.values.iter().find(|r| r.vertex == id).map(|r| r.value)
    }
}

fn write_table(f: &mut fmt::Formatter<'_>, player: Player, t: &StrategyTable) -> fmt::Result {
    writeln!(f, "strategy for player {player} ({} memory states)", t.memory_states)?;
    for (v, row) in t.vertices.iter().zip(&t.nxt) {
        for (m, next) in row.iter().enumerate() {
            if let Some(next) = next {
                writeln!(f, "  at {v} with memory {m}: move to {next}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.values.iter().map(|r| r.vertex.len()).max().unwrap_or(0).max(6);
        writeln!(f, "{:<width$}  {:>8}  region", "vertex", "value")?;
        for r in &self.values {
            let region = match r.region {
                Region::W0 => "W0",
                Region::W1 => "W1",
            };
            writeln!(f, "{:<width$}  {:>8}  {region}", r.vertex, r.value.to_string())?;
        }
        if let Some(s) = &self.strategies {
            write_table(f, Player::Zero, &s.player0)?;
            write_table(f, Player::One, &s.player1)?;
        }
        let d = &self.diagnostics;
        writeln!(
            f,
            "{} iterations, product {} vertices / {} edges, {:.2} ms",
            d.iterations, d.product_vertices, d.product_edges, d.wall_time_ms
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{d_b, g1, g2, g_inf};

    #[test]
    fn g1_report() {
        let out = solve(&g1(), &d_b(), true).unwrap();
        let r = &out.report;
        assert_eq!(r.value_of("v0"), Some(Rank::Finite(5)));
        assert_eq!(r.value_of("v1"), Some(Rank::Finite(5)));
        assert!(r.values.iter().all(|x| x.region == Region::W0));
        let s = r.strategies.as_ref().unwrap();
        assert_eq!(s.player0.nxt[0][0].as_deref(), Some("v1"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["values"][0]["value"], 5);
        assert_eq!(json["diagnostics"]["iterations"], 2);
        assert!(r.to_string().contains("v0"));
    }

    #[test]
    fn regions_follow_values() {
        for a in [g1(), g2(), g_inf()] {
            let r = solve(&a, &d_b(), false).unwrap().report;
            assert!(r.strategies.is_none());
            for x in &r.values {
                assert_eq!(x.region == Region::W0, x.value.is_finite());
            }
        }
        let r = solve(&g_inf(), &d_b(), false).unwrap().report;
        assert_eq!(serde_json::to_value(&r).unwrap()["values"][0]["value"], "inf");
    }

    #[test]
    fn json_round_trips() {
        let r = solve(&g2(), &d_b(), true).unwrap().report;
        let back: SolveReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn reach_report() {
        let r = solve_reach(&g1(), &d_b()).unwrap();
        assert_eq!(r.value_of("v0"), Some(Rank::Finite(2)));
        assert_eq!(r.value_of("v1"), Some(Rank::Finite(0)));
    }
}
