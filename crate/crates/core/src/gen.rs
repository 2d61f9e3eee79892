//! Seeded random instances and random finite-state behaviors.
//!
//! All randomness comes from `ChaCha8Rng` seeded with the caller's 64-bit
//! seed, so a seed reproduces an instance exactly.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arena::{Arena, Color, Edge, Vertex};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::graph::{GameGraph, Player};
use crate::strategy::{FiniteStateStrategy, MemoryStructure};

const COLORS: [&str; 3] = ["a", "b", "c"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub max_vertices: usize,
    pub max_dfa_states: usize,
    pub max_out_degree: usize,
    pub max_weight: u64,
    pub accepting_fraction: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_vertices: 6,
            max_dfa_states: 4,
            max_out_degree: 3,
            max_weight: 5,
            accepting_fraction: 0.5,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        GenParams { seed, ..self.clone() }
    }

    pub fn check(&self) -> Result<()> {
        let bounds = [self.max_vertices, self.max_dfa_states, self.max_out_degree];
        if bounds.contains(&0) || self.max_weight == 0 {
            return Err(Error::InvalidParams("generation bounds must be at least 1".into()));
        }
        if !(self.accepting_fraction > 0.0 && self.accepting_fraction <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "accepting fraction {} is outside (0, 1]",
                self.accepting_fraction
            )));
        }
        Ok(())
    }
}

fn random_player(rng: &mut ChaCha8Rng) -> Player {
    if rng.gen_bool(0.5) {
        Player::Zero
    } else {
        Player::One
    }
}

/// A random arena and a random total DFA over its colors.
pub fn gen_random_instance(params: &GenParams) -> Result<(Arena, Dfa)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let sigma = rng.gen_range(1..=COLORS.len());
    let n = rng.gen_range(1..=params.max_vertices);
    let s = rng.gen_range(1..=params.max_dfa_states);
    build_instance(&mut rng, params, n, s, sigma)
}

/// Like [`gen_random_instance`] but with exactly `vertices` vertices,
/// `max_dfa_states` states and all three colors.
pub fn gen_sized_instance(params: &GenParams, vertices: usize) -> Result<(Arena, Dfa)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    build_instance(&mut rng, params, vertices.max(1), params.max_dfa_states, COLORS.len())
}

fn build_instance(rng: &mut ChaCha8Rng, params: &GenParams, n: usize, s: usize, sigma: usize) -> Result<(Arena, Dfa)> {
    let vertices: Vec<Vertex> = (0..n)
        .map(|v| {
            let owner = random_player(rng);
            Vertex::new(format!("v{v}"), owner, COLORS[rng.gen_range(0..sigma)])
        })
        .collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let degree = rng.gen_range(1..=params.max_out_degree.min(n));
        let mut targets = sample(rng, n, degree).into_vec();
        targets.sort_unstable();
        for t in targets {
            edges.push(Edge::new(v, t, rng.gen_range(0..=params.max_weight) as i64));
        }
    }
    let arena = Arena::new(vertices, edges)?;

    let accepting: Vec<usize> = (1..s).filter(|_| rng.gen_bool(params.accepting_fraction)).collect();
    let mut dfa = Dfa::new(
        (0..s).map(|q| format!("q{q}")).collect(),
        COLORS[..sigma].iter().map(|&c| Color::new(c)).collect(),
        0,
        accepting,
    );
    for q in 0..s {
        for c in 0..sigma {
            dfa.set_transition(q, c, rng.gen_range(0..s));
        }
    }
    Ok((arena, dfa))
}

/// A random strategy for `player` on `g` with between one and `max_memory`
/// memory states.
pub fn random_strategy<G: GameGraph + ?Sized>(
    g: &G,
    player: Player,
    max_memory: usize,
    rng: &mut impl Rng,
) -> FiniteStateStrategy {
    let n = g.num_vertices();
    let k = rng.gen_range(1..=max_memory.max(1));
    let init = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let upd = (0..n * k).map(|_| rng.gen_range(0..k)).collect();
    let memory = MemoryStructure::new(k, init, upd).expect("tables sized for k states");
    let mut nxt = vec![None; n * k];
    for v in (0..n).filter(|&v| g.owner(v) == player) {
        let succ = g.successors(v);
        for m in 0..k {
            nxt[v * k + m] = Some(succ[rng.gen_range(0..succ.len())].0);
        }
    }
    FiniteStateStrategy::new(player, memory, nxt).expect("table sized for the memory")
}
