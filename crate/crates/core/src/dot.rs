//! Graphviz export. Player-0 vertices are ellipses, Player-1 vertices boxes,
//! goal vertices get a double border and edges are labelled with weights.

use std::fmt::Write as _;

use crate::graph::{GameGraph, Player, VertexSet};
use crate::product::ProductArena;
use crate::strategy::FiniteStateStrategy;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for `g`, optionally marking `goal` and overlaying `strategy`.
///
/// The overlay adds one bold edge per owned vertex and memory state,
/// labelled with the memory state.
pub fn export_dot<G: GameGraph + ?Sized>(
    g: &G,
    goal: Option<&VertexSet>,
    strategy: Option<&FiniteStateStrategy>,
) -> String {
    let mut out = String::from("digraph game {\n");
    for v in 0..g.num_vertices() {
        let shape = match g.owner(v) {
            Player::Zero => "ellipse",
            Player::One => "box",
        };
        let peripheries = if goal.is_some_and(|s| s.contains(v)) { 2 } else { 1 };
        writeln!(
            out,
            "  n{v} [label={}, shape={shape}, peripheries={peripheries}];",
            quote(&g.vertex_label(v))
        )
        .unwrap();
    }
    for v in 0..g.num_vertices() {
        for &(t, w) in g.successors(v) {
            writeln!(out, "  n{v} -> n{t} [label=\"{w}\"];").unwrap();
        }
    }
    if let Some(s) = strategy {
        for (v, m, t) in s.moves() {
            writeln!(out, "  n{v} -> n{t} [label=\"m{m}\", color=red, penwidth=2, style=bold];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// A product with its goal set marked.
pub fn export_product_dot(p: &ProductArena, strategy: Option<&FiniteStateStrategy>) -> String {
    export_dot(p, Some(p.goal()), strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::{extract_limit_strategy_p0, limit_fixpoint};
    use crate::product::build_product;
    use crate::samples::{d_b, g1, g2};

    fn count(text: &str, pat: &str) -> usize {
        text.matches(pat).count()
    }

    #[test]
    fn g1_arena() {
        let dot = export_dot(&g1(), None, None);
        assert_eq!(count(&dot, "shape="), 2);
        assert_eq!(count(&dot, " -> "), 2);
        assert!(dot.contains("n0 -> n1 [label=\"2\"]"));
        assert!(dot.contains("n1 -> n0 [label=\"3\"]"));
    }

    #[test]
    fn product_goal_is_double_bordered() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let dot = export_product_dot(&p, None);
        assert_eq!(count(&dot, "shape="), 4);
        assert_eq!(count(&dot, "peripheries=2"), p.goal().len());
    }

    #[test]
    fn player_one_is_a_box() {
        let dot = export_dot(&g2(), None, None);
        assert!(dot.contains("n0 [label=\"v0\", shape=box"));
        assert_eq!(count(&dot, "shape=ellipse"), 2);
    }

    #[test]
    fn strategy_overlay() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let sigma = extract_limit_strategy_p0(&p, &limit_fixpoint(&p)).unwrap();
        let dot = export_product_dot(&p, Some(&sigma));
        let owned = (0..p.num_vertices()).filter(|&v| p.owner(v) == Player::Zero).count();
        assert_eq!(count(&dot, "color=red"), owned * sigma.memory_size());
        for v in 0..p.num_vertices() {
            assert_eq!(count(&dot, &format!("n{v} -> n{} [label=\"m0\", color=red", sigma.next_move(v, 0))), 1);
        }
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
