//! Exact solver for weighted limit games whose winning condition is given by
//! a deterministic finite automaton over vertex colors.
//!
//! The pipeline: build an [`Arena`] and a [`Dfa`], form the product with
//! [`build_product`], then compute values and strategies with
//! [`limit_fixpoint`] or [`reach_fixpoint`]. The [`oracle`] module holds
//! independent solvers used to cross-check results.

pub mod arena;
pub mod dfa;
pub mod dot;
pub mod error;
pub mod gen;
pub mod graph;
pub mod limit;
pub mod oracle;
pub mod product;
pub mod rank;
pub mod reach;
pub mod report;
pub mod samples;
pub mod strategy;
pub mod text;
pub mod verify;

pub use arena::{validate_arena, Arena, Color, Edge, Vertex};
pub use dfa::{dfa_run, validate_dfa, Dfa};
pub use error::{Error, Result, ValidationReport, Violation, ViolationKind};
pub use graph::{GameGraph, Lasso, Player, VertexSet};
pub use limit::{
    extract_limit_strategy_p0, extract_limit_strategy_p1, limit_fixpoint, strategy_value, winning_regions,
    LimitSolution, RankHierarchy,
};
pub use product::{build_product, compose_strategy, extend_play, memory_from_dfa, ProductArena};
pub use rank::{rank_add, Rank, Ranking};
pub use reach::{extract_reach_strategies, reach_fixpoint, ReachSolution};
pub use strategy::{FiniteStateStrategy, MemoryStructure};
pub use dot::{export_dot, export_product_dot};
pub use gen::{gen_random_instance, gen_sized_instance, random_strategy, GenParams};
pub use oracle::{
    buchi_solve, eval_limit_value, eval_reach_value, oracle_limit_value, oracle_reach_value, simulate_duel,
    threshold_buchi_wins,
};
pub use report::{solve, solve_reach, SolveReport};
pub use text::{parse_arena, parse_dfa, parse_strategy, write_arena, write_dfa, write_strategy};
