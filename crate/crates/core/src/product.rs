//! The DFA-induced memory structure, the product arena, and flattening of
//! strategies over a product back onto the base arena.

use std::collections::HashMap;

use crate::arena::Arena;
use crate::dfa::{validate_dfa, Dfa};
use crate::error::{Error, Result};
use crate::graph::{Adjacency, GameGraph, Lasso, Player, VertexSet};
use crate::strategy::{FiniteStateStrategy, MemoryStructure};

/// `M_𝔄 = (Q, init, upd)` with `init(v) = δ(q_I, c(v))` and `upd(q, v) = δ(q, c(v))`.
pub fn memory_from_dfa(d: &Dfa, a: &Arena) -> Result<MemoryStructure> {
    validate_dfa(d, a.colors().iter()).into_result()?;
    let colors = dfa_colors(d, a);
    let init = colors.iter().map(|&c| d.step(d.initial(), c)).collect();
    let upd = (0..d.num_states())
        .flat_map(|q| colors.iter().map(move |&c| d.step(q, c)))
        .collect();
    MemoryStructure::new(d.num_states(), init, upd)
}

fn dfa_colors(d: &Dfa, a: &Arena) -> Vec<usize> {
    a.vertices()
        .iter()
        .map(|v| d.color_index(&v.color).expect("arena colors validated against alphabet"))
        .collect()
}

/// The arena `A × M_𝔄` together with the goal set `F = V × F_𝔄`.
///
/// Product vertex `(v, q)` has index `v * |Q| + q`.
#[derive(Clone, Debug)]
pub struct ProductArena {
    base: Arena,
    dfa: Dfa,
    memory: MemoryStructure,
    adjacency: Adjacency,
    goal: VertexSet,
}

/// Builds the full product over all of `V × Q`.
///
/// Rejects inputs whose largest possible finite value, `(|V|·|Q| + 1)·W`,
/// would not fit comfortably in a `u64`.
pub fn build_product(a: &Arena, d: &Dfa) -> Result<ProductArena> {
    let memory = memory_from_dfa(d, a)?;
    let s = d.num_states();
    let n = a.num_vertices();
    let size = n.checked_mul(s).ok_or(Error::ValueRangeOverflow)?;
    (size as u64)
        .checked_add(2)
        .and_then(|x| x.checked_mul(a.max_weight()))
        .ok_or(Error::ValueRangeOverflow)?;

    let mut lists = Vec::with_capacity(size);
    for v in 0..n {
        for q in 0..s {
            lists.push(
                a.successors(v)
                    .iter()
                    .map(|&(t, w)| (t * s + memory.update(q, t), w))
                    .collect(),
            );
        }
    }
    let goal = VertexSet::from_mask(
        (0..size).map(|i| d.is_accepting(i % s)).collect(),
    );
    Ok(ProductArena {
        base: a.clone(),
        dfa: d.clone(),
        memory,
        adjacency: Adjacency::from_lists(lists),
        goal,
    })
}

impl ProductArena {
    pub fn base(&self) -> &Arena {
        &self.base
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// The memory structure `M_𝔄` this product was built from.
    pub fn dfa_memory(&self) -> &MemoryStructure {
        &self.memory
    }

    pub fn num_states(&self) -> usize {
        self.dfa.num_states()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.num_edges()
    }

    pub fn index(&self, v: usize, q: usize) -> usize {
        v * self.num_states() + q
    }

    /// `(base vertex, DFA state)` of a product vertex.
    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.num_states(), p % self.num_states())
    }

    /// `(v, init_𝔄(v))`.
    pub fn entry(&self, v: usize) -> usize {
        self.index(v, self.memory.init(v))
    }

    /// The product-sense accepting set `F`.
    pub fn goal(&self) -> &VertexSet {
        &self.goal
    }

    pub fn is_goal(&self, p: usize) -> bool {
        self.goal.contains(p)
    }

    /// Upper bound on every finite limit-game value: `(|V|·|Q| + 1)·W`.
    pub fn limit_value_bound(&self) -> u64 {
        (self.num_vertices() as u64 + 1) * self.max_weight()
    }

    /// Upper bound on every finite reachability value: `|V|·|Q|·W`.
    pub fn reach_value_bound(&self) -> u64 {
        self.num_vertices() as u64 * self.max_weight()
    }

    /// Lifts a lasso over base vertices to the corresponding lasso over
    /// product vertices, starting at the entry point of its first vertex.
    pub fn lift_lasso(&self, base: &Lasso) -> Result<Lasso> {
        base.validate(&self.base)?;
        let mut seq = Vec::new();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let first = base.at(0);
        let mut q = self.memory.init(first);
        let mut pos = 0usize;
        loop {
            let v = base.at(pos);
            if pos > 0 {
                q = self.memory.update(q, v);
            }
            if pos >= base.stem.len() {
                let phase = (pos - base.stem.len()) % base.cycle.len();
                if let Some(&start) = seen.get(&(phase, q)) {
                    let cycle = seq.split_off(start);
                    return Ok(Lasso::new(seq, cycle));
                }
                seen.insert((phase, q), pos);
            }
            seq.push(self.index(v, q));
            pos += 1;
        }
    }
}

impl GameGraph for ProductArena {
    fn num_vertices(&self) -> usize {
        self.base.num_vertices() * self.num_states()
    }

    fn owner(&self, p: usize) -> Player {
        self.base.owner(p / self.num_states())
    }

    fn successors(&self, p: usize) -> &[(usize, u64)] {
        self.adjacency.get(p)
    }

    fn vertex_label(&self, p: usize) -> String {
        let (v, q) = self.split(p);
        format!("({},{})", self.base.vertex(v).id, self.dfa.state_name(q))
    }

    fn max_weight(&self) -> u64 {
        self.base.max_weight()
    }
}

/// `ext(π)`: pairs each vertex of a base path with its memory state.
pub fn extend_play(a: &Arena, m: &MemoryStructure, prefix: &[usize]) -> Result<Vec<(usize, usize)>> {
    a.path_weight(prefix)?;
    let Some(&first) = prefix.first() else {
        return Ok(Vec::new());
    };
    let mut mem = m.init(first);
    let mut out = vec![(first, mem)];
    for &v in &prefix[1..] {
        mem = m.update(mem, v);
        out.push((v, mem));
    }
    Ok(out)
}

/// Flattens a strategy over `A × M` (indexed `v * |M| + m`) into a strategy
/// over `A` with memory `M × M'`, indexed `m * |M'| + m'`.
pub fn compose_strategy(m: &MemoryStructure, inner: &FiniteStateStrategy) -> Result<FiniteStateStrategy> {
    let n = m.num_vertices();
    let outer = m.size();
    let inner_mem = inner.memory();
    let k = inner_mem.size();
    if inner_mem.num_vertices() != n * outer {
        return Err(Error::InternalInvariant(
            "inner strategy is not hosted by the product with this memory".into(),
        ));
    }
    let size = outer * k;
    let pack = |a: usize, b: usize| a * k + b;

    let init = (0..n)
        .map(|v| {
            let mv = m.init(v);
            pack(mv, inner_mem.init(v * outer + mv))
        })
        .collect();
    let mut upd = vec![0; size * n];
    for a in 0..outer {
        for b in 0..k {
            for v in 0..n {
                let a2 = m.update(a, v);
                let b2 = inner_mem.update(b, v * outer + a2);
                upd[pack(a, b) * n + v] = pack(a2, b2);
            }
        }
    }
    let mut nxt = vec![None; n * size];
    for v in 0..n {
        for a in 0..outer {
            for b in 0..k {
                nxt[v * size + pack(a, b)] = inner.next_move_opt(v * outer + a, b).map(|t| t / outer);
            }
        }
    }
    FiniteStateStrategy::new(inner.player(), MemoryStructure::new(size, init, upd)?, nxt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{d_b, g1, g_inf};

    #[test]
    fn dfa_memory_on_g1() {
        let m = memory_from_dfa(&d_b(), &g1()).unwrap();
        assert_eq!(m.init(0), 0);
        assert_eq!(m.init(1), 1);
        assert_eq!(m.update(1, 0), 0);
        assert_eq!(m.run(&[0, 1]), Some(1));
        let word = ["a".into(), "b".into()];
        assert_eq!(m.run(&[0, 1]).unwrap(), d_b().run(&word).unwrap());
    }

    /// Enumeration oracle: every (v, q) against the edge rule.
    fn enumerate_edges(a: &Arena, d: &Dfa) -> Vec<(usize, usize, u64)> {
        let s = d.num_states();
        let mut out = Vec::new();
        for v in 0..a.num_vertices() {
            for q in 0..s {
                for v2 in 0..a.num_vertices() {
                    let Some(w) = a.edge_weight(v, v2) else { continue };
                    for q2 in 0..s {
                        let c = d.color_index(a.color(v2)).unwrap();
                        if d.step(q, c) == q2 {
                            out.push((v * s + q, v2 * s + q2, w));
                        }
                    }
                }
            }
        }
        out
    }

    fn product_edges(p: &ProductArena) -> Vec<(usize, usize, u64)> {
        (0..p.num_vertices())
            .flat_map(|u| p.successors(u).iter().map(move |&(t, w)| (u, t, w)))
            .collect()
    }

    #[test]
    fn g1_product() {
        let p = build_product(&g1(), &d_b()).unwrap();
        assert_eq!(p.num_vertices(), 4);
        // (v0,q0)=0 (v0,qb)=1 (v1,q0)=2 (v1,qb)=3
        assert_eq!(product_edges(&p), vec![(0, 3, 2), (1, 3, 2), (2, 0, 3), (3, 0, 3)]);
        assert_eq!(product_edges(&p), enumerate_edges(&g1(), &d_b()));
        assert_eq!(p.goal().iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(p.entry(0), 0);
        assert_eq!(p.entry(1), 3);
    }

    #[test]
    fn g_inf_product() {
        let p = build_product(&g_inf(), &d_b()).unwrap();
        assert_eq!(product_edges(&p), vec![(0, 0, 1), (1, 0, 1)]);
        assert_eq!(product_edges(&p), enumerate_edges(&g_inf(), &d_b()));
        assert_eq!(p.goal().iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(p.entry(0), 0);
    }

    #[test]
    fn single_state_dfa_has_no_goal() {
        let mut d = Dfa::new(vec!["q".into()], vec!["a".into(), "b".into()], 0, []);
        d.set_transition(0, 0, 0);
        d.set_transition(0, 1, 0);
        let p = build_product(&g1(), &d).unwrap();
        assert!(p.goal().is_empty());
    }

    #[test]
    fn extend_play_examples() {
        let a = g1();
        let m = memory_from_dfa(&d_b(), &a).unwrap();
        assert_eq!(extend_play(&a, &m, &[0, 1]).unwrap(), vec![(0, 0), (1, 1)]);
        assert_eq!(extend_play(&a, &m, &[1]).unwrap(), vec![(1, 1)]);
        assert_eq!(extend_play(&a, &m, &[0, 1, 0]).unwrap(), vec![(0, 0), (1, 1), (0, 0)]);
        assert!(matches!(
            extend_play(&a, &m, &[0, 0]),
            Err(Error::NotAPath { position: 0, .. })
        ));
    }

    #[test]
    fn compose_positional_g1() {
        let a = g1();
        let p = build_product(&a, &d_b()).unwrap();
        // Positional inner strategy: (v0,q0) -> (v1,qb), (v1,qb) -> (v0,q0), etc.
        let inner = FiniteStateStrategy::positional(Player::Zero, vec![Some(3), Some(3), Some(0), Some(0)]);
        inner.validate(&p).unwrap();
        let outer = compose_strategy(p.dfa_memory(), &inner).unwrap();
        assert_eq!(outer.memory_size(), 2);
        outer.validate(&a).unwrap();
        assert_eq!(outer.next_move(0, 0), 1);
        assert_eq!(outer.next_move(1, 1), 0);
    }

    #[test]
    fn compose_memory_is_a_product() {
        let a = g1();
        let p = build_product(&a, &d_b()).unwrap();
        let n = p.num_vertices();
        let k = 3;
        let mem = MemoryStructure::new(k, vec![0; n], (0..k * n).map(|i| (i + 1) % k).collect()).unwrap();
        let nxt = (0..n * k).map(|i| Some(p.successors(i / k)[0].0)).collect();
        let inner = FiniteStateStrategy::new(Player::Zero, mem, nxt).unwrap();
        let outer = compose_strategy(p.dfa_memory(), &inner).unwrap();
        assert_eq!(outer.memory_size(), 2 * k);
    }

    #[test]
    fn lift_g1_cycle() {
        let p = build_product(&g1(), &d_b()).unwrap();
        let lifted = p.lift_lasso(&Lasso::new(vec![], vec![0, 1])).unwrap();
        assert_eq!(lifted, Lasso::new(vec![], vec![0, 3]));
        let lifted = p.lift_lasso(&Lasso::new(vec![1], vec![0, 1])).unwrap();
        assert_eq!(lifted, Lasso::new(vec![3], vec![0, 3]));
        assert!(p.lift_lasso(&Lasso::new(vec![], vec![0])).is_err());
    }

    #[test]
    fn overflowing_weights_rejected() {
        use crate::arena::{Edge, Vertex};
        let a = Arena::new(
            vec![Vertex::new("v", Player::Zero, "a")],
            vec![Edge::new(0, 0, i64::MAX)],
        )
        .unwrap();
        assert!(matches!(build_product(&a, &d_b()), Err(Error::ValueRangeOverflow)));
    }
}
