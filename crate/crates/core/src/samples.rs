//! Small worked instances with hand-checked values.
//!
//! | arena | DFA   | value from `v0` |
//! |-------|-------|-----------------|
//! | G1    | D_b   | 5               |
//! | G2    | D_b   | 4               |
//! | G∞    | D_b   | ∞               |

use crate::arena::{Arena, Edge, Vertex};
use crate::dfa::Dfa;
use crate::graph::Player;

/// Accepts exactly the nonempty words that end in `b`.
pub fn d_b() -> Dfa {
    let mut d = Dfa::new(
        vec!["q0".into(), "qb".into()],
        vec!["a".into(), "b".into()],
        0,
        [1],
    );
    d.set_transition(0, 0, 0);
    d.set_transition(0, 1, 1);
    d.set_transition(1, 0, 0);
    d.set_transition(1, 1, 1);
    d
}

/// Two Player-0 vertices in a cycle: `v0 (a) -2-> v1 (b) -3-> v0`.
pub fn g1() -> Arena {
    Arena::new(
        vec![
            Vertex::new("v0", Player::Zero, "a"),
            Vertex::new("v1", Player::Zero, "b"),
        ],
        vec![Edge::new(0, 1, 2), Edge::new(1, 0, 3)],
    )
    .expect("G1 is valid")
}

/// Player 1 at `v0 (a)` chooses between `v1 (b)` at weight 1 and `v2 (b)` at
/// weight 4; both return to `v0` at weight 0.
pub fn g2() -> Arena {
    Arena::new(
        vec![
            Vertex::new("v0", Player::One, "a"),
            Vertex::new("v1", Player::Zero, "b"),
            Vertex::new("v2", Player::Zero, "b"),
        ],
        vec![
            Edge::new(0, 1, 1),
            Edge::new(0, 2, 4),
            Edge::new(1, 0, 0),
            Edge::new(2, 0, 0),
        ],
    )
    .expect("G2 is valid")
}

/// A single `a`-colored vertex with a self-loop: no prefix is ever accepted.
pub fn g_inf() -> Arena {
    Arena::new(
        vec![Vertex::new("v0", Player::Zero, "a")],
        vec![Edge::new(0, 0, 1)],
    )
    .expect("G-inf is valid")
}
