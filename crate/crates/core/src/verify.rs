//! Cross-checks of the solver against the oracles and the proven bounds.
//!
//! Each check returns human-readable findings; an empty list means the check
//! passed. The CLI `verify` command and the acceptance suite both run these.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arena::Arena;
use crate::dfa::Dfa;
use crate::error::Result;
use crate::gen::{gen_random_instance, random_strategy, GenParams};
use crate::graph::{GameGraph, Lasso, Player, VertexSet};
use crate::limit::{
    extract_limit_strategy_p0, extract_limit_strategy_p1, limit_fixpoint, winning_regions, LimitSolution,
};
use crate::oracle::{buchi_solve, eval_limit_value, oracle_limit_value, oracle_reach_value, simulate_duel};
use crate::product::{build_product, compose_strategy, ProductArena};
use crate::rank::Rank;
use crate::reach::{reach_fixpoint, reach_step, ReachSolution};
use crate::samples;

/// Random opponents per side in the optimality sandwich.
pub const SANDWICH_OPPONENTS: usize = 50;
const OPPONENT_MEMORY: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    LimitOracle,
    ReachOracle,
    Sandwich,
    IterationBounds,
    ValueBound,
    MemoryBound,
    Regions,
    Monotonicity,
    WorkedExamples,
    PostFixpointAudit,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::LimitOracle,
        Criterion::ReachOracle,
        Criterion::Sandwich,
        Criterion::IterationBounds,
        Criterion::ValueBound,
        Criterion::MemoryBound,
        Criterion::Regions,
        Criterion::Monotonicity,
        Criterion::WorkedExamples,
        Criterion::PostFixpointAudit,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn title(self) -> &'static str {
        match self {
            Criterion::LimitOracle => "limit values equal the threshold oracle",
            Criterion::ReachOracle => "reachability values equal the threshold oracle",
            Criterion::Sandwich => "optimality sandwich",
            Criterion::IterationBounds => "iteration bounds",
            Criterion::ValueBound => "value bound",
            Criterion::MemoryBound => "memory bound",
            Criterion::Regions => "winning regions equal the Buchi solver",
            Criterion::Monotonicity => "monotonicity of ranking sequences",
            Criterion::WorkedExamples => "worked examples",
            Criterion::PostFixpointAudit => "post-fixpoint rank and settling audit",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>2}. {}", self.number(), self.title())
    }
}

/// One failed assertion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub criterion: Criterion,
    pub detail: String,
}

#[derive(Default)]
struct Findings(Vec<Finding>);

impl Findings {
    fn fail(&mut self, criterion: Criterion, detail: impl Into<String>) {
        self.0.push(Finding {
            criterion,
            detail: detail.into(),
        });
    }

    fn check(&mut self, criterion: Criterion, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(criterion, detail());
        }
    }
}

/// Everything the per-instance checks need, computed once.
pub struct Solved {
    pub product: ProductArena,
    pub limit: LimitSolution,
    pub reach: ReachSolution,
}

impl Solved {
    pub fn new(a: &Arena, d: &Dfa) -> Result<Self> {
        let product = build_product(a, d)?;
        let limit = limit_fixpoint(&product);
        let reach = reach_fixpoint(&product, product.goal());
        Ok(Solved { product, limit, reach })
    }
}

fn label(p: &ProductArena, v: usize) -> String {
    p.vertex_label(v)
}

pub fn check_limit_oracle(s: &Solved) -> Vec<String> {
    let p = &s.product;
    let oracle = oracle_limit_value(p);
    (0..p.base().num_vertices())
        .map(|v| p.entry(v))
        .filter(|&e| s.limit.ranks[e] != oracle[e])
        .map(|e| format!("{}: solver {} oracle {}", label(p, e), s.limit.ranks[e], oracle[e]))
        .collect()
}

pub fn check_reach_oracle(s: &Solved) -> Vec<String> {
    let p = &s.product;
    let oracle = oracle_reach_value(p, p.goal());
    (0..p.num_vertices())
        .filter(|&v| s.reach.ranks[v] != oracle[v])
        .map(|v| format!("{}: solver {} oracle {}", label(p, v), s.reach.ranks[v], oracle[v]))
        .collect()
}

/// The duel of the extracted strategies realises `r*` exactly, and neither
/// strategy can be beaten by seeded random opponents.
pub fn check_sandwich(s: &Solved, seed: u64) -> Result<Vec<String>> {
    let p = &s.product;
    let sigma = extract_limit_strategy_p0(p, &s.limit)?;
    let tau = extract_limit_strategy_p1(p, &s.limit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for v in 0..p.base().num_vertices() {
        let e = p.entry(v);
        let target = s.limit.ranks[e];
        let duel = simulate_duel(p, &sigma, &tau, e);
        let value = eval_limit_value(p, &duel)?;
        if value != target {
            out.push(format!("{}: duel value {value}, expected {target}", label(p, e)));
        }
        for _ in 0..SANDWICH_OPPONENTS {
            let opp = random_strategy(p, Player::One, OPPONENT_MEMORY, &mut rng);
            let value = eval_limit_value(p, &simulate_duel(p, &sigma, &opp, e))?;
            if value > target {
                out.push(format!("{}: sigma conceded {value} > {target}", label(p, e)));
            }
            let opp = random_strategy(p, Player::Zero, OPPONENT_MEMORY, &mut rng);
            let value = eval_limit_value(p, &simulate_duel(p, &opp, &tau, e))?;
            if value < target {
                out.push(format!("{}: tau allowed {value} < {target}", label(p, e)));
            }
        }
    }
    Ok(out)
}

pub fn check_iteration_bounds(s: &Solved) -> Vec<String> {
    let p = &s.product;
    let reach_bound = p.num_vertices() + 1;
    let limit_bound = p.goal().len() + 1;
    let mut out = Vec::new();
    let inner = s.limit.history.iter().flat_map(|(_, h)| h.inner.iter());
    for sol in std::iter::once(&s.reach).chain(inner) {
        if sol.iterations > reach_bound {
            out.push(format!("reachability took {} > {reach_bound} applications", sol.iterations));
        }
    }
    if s.limit.iterations > limit_bound {
        out.push(format!("limit took {} > {limit_bound} applications", s.limit.iterations));
    }
    out
}

pub fn check_value_bound(s: &Solved) -> Vec<String> {
    let p = &s.product;
    let limit_bound = Rank::Finite(p.limit_value_bound());
    let reach_bound = Rank::Finite(p.reach_value_bound());
    let mut out = Vec::new();
    for (j, (r, _)) in s.limit.history.iter().enumerate() {
        for (v, &x) in r.iter().enumerate() {
            if x.is_finite() && x > limit_bound {
                out.push(format!("r_{j}({}) = {x} exceeds {limit_bound}", label(p, v)));
            }
        }
    }
    for (v, &x) in s.reach.ranks.iter().enumerate() {
        if x.is_finite() && x > reach_bound {
            out.push(format!("reach rank of {} = {x} exceeds {reach_bound}", label(p, v)));
        }
    }
    out
}

/// The flattened Player-0 strategy uses at most `n·s·f` memory states. With
/// no accepting state that product is 0 while every memory structure has a
/// state, so the bound is taken with `f` at least 1.
pub fn check_memory_bound(s: &Solved) -> Result<Vec<String>> {
    let p = &s.product;
    let sigma = extract_limit_strategy_p0(p, &s.limit)?;
    let flat = compose_strategy(p.dfa_memory(), &sigma)?;
    let n = p.base().num_vertices();
    let states = p.num_states();
    let f = p.dfa().accepting().len().max(1);
    let bound = n * states * f;
    Ok(if flat.memory_size() > bound {
        vec![format!("flattened memory {} exceeds {n}*{states}*{f} = {bound}", flat.memory_size())]
    } else {
        vec![]
    })
}

pub fn check_regions(s: &Solved) -> Vec<String> {
    let p = &s.product;
    let (w0, _) = winning_regions(p, &s.limit);
    let buchi = buchi_solve(p, p.goal());
    let expected: Vec<usize> = (0..p.base().num_vertices())
        .filter(|&v| buchi.contains(p.entry(v)))
        .collect();
    if w0 == expected {
        vec![]
    } else {
        vec![format!("W0 {w0:?}, Buchi solver {expected:?}")]
    }
}

/// Reach rankings never get worse, limit rankings never get better, and a
/// larger goal set never yields larger reach ranks.
pub fn check_monotonicity(s: &Solved, seed: u64) -> Vec<String> {
    let p = &s.product;
    let mut out = Vec::new();
    let n = p.num_vertices();

    let mut r = vec![Rank::Infinity; n];
    for j in 0..=n + 1 {
        let next = reach_step(p, p.goal(), &r);
        if let Some(v) = (0..n).find(|&v| next[v] > r[v]) {
            out.push(format!("reach r_{}({}) rose above r_{j}", j + 1, label(p, v)));
        }
        r = next;
    }
    for (j, pair) in s.limit.history.windows(2).enumerate() {
        let (prev, next) = (&pair[0].0, &pair[1].0);
        if let Some(v) = (0..n).find(|&v| next[v] < prev[v]) {
            out.push(format!("limit r_{}({}) fell below r_{j}", j + 1, label(p, v)));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain: Vec<VertexSet> = vec![VertexSet::empty(n)];
    let mut random = VertexSet::empty(n);
    for v in p.goal().iter().filter(|_| rng.gen_bool(0.5)) {
        random.insert(v);
    }
    chain.push(random);
    chain.extend(s.limit.final_hierarchy().levels.iter().cloned());
    chain.push(p.goal().clone());
    chain.push(VertexSet::full(n));
    let solved: Vec<_> = chain.iter().map(|g| reach_fixpoint(p, g).ranks).collect();
    for i in 0..chain.len() {
        for k in 0..chain.len() {
            if chain[i].is_subset(&chain[k]) {
                if let Some(v) = (0..n).find(|&v| solved[i][v] < solved[k][v]) {
                    out.push(format!("goal monotonicity fails at {}", label(p, v)));
                }
            }
        }
    }
    out
}

/// The five post-fixpoint properties of `(r*, t_s)` for a reachability goal.
pub fn audit_reach_solution<G: GameGraph + ?Sized>(g: &G, sol: &ReachSolution) -> Vec<String> {
    let mut out = Vec::new();
    let (r, ts) = (&sol.ranks, &sol.settling);
    for v in 0..g.num_vertices() {
        let name = g.vertex_label(v);
        if r[v].is_infinite() != (ts[v] == 0) {
            out.push(format!("{name}: rank {} with settling time {}", r[v], ts[v]));
        }
        if sol.goal.contains(v) {
            if r[v] != Rank::ZERO || ts[v] != 1 {
                out.push(format!("{name}: goal vertex has rank {} and settling time {}", r[v], ts[v]));
            }
            continue;
        }
        let succ = g.successors(v);
        let via = |t: usize, w: u64| r[t].add_weight(w);
        let exists_optimal = succ.iter().any(|&(t, w)| via(t, w) == r[v]);
        if !exists_optimal {
            out.push(format!("{name}: no optimal successor"));
        }
        match g.owner(v) {
            Player::Zero => {
                if succ.iter().any(|&(t, w)| r[v] > via(t, w)) {
                    out.push(format!("{name}: a successor undercuts the rank"));
                }
                if r[v].is_finite() && !succ.iter().any(|&(t, w)| via(t, w) == r[v] && ts[v] == ts[t] + 1) {
                    out.push(format!("{name}: no optimal successor settles one step earlier"));
                }
            }
            Player::One => {
                if succ.iter().any(|&(t, w)| r[v] < via(t, w)) {
                    out.push(format!("{name}: a successor exceeds the rank"));
                }
                if succ.iter().any(|&(t, _)| r[v] == r[t] && r[v].is_finite() && ts[v] <= ts[t]) {
                    out.push(format!("{name}: a same-rank successor does not settle earlier"));
                }
            }
        }
    }
    out
}

/// Audits the reachability solution for `F_prod` and every inner solution of
/// the final hierarchy.
pub fn check_post_fixpoint(s: &Solved) -> Vec<String> {
    let p = &s.product;
    std::iter::once(&s.reach)
        .chain(&s.limit.final_hierarchy().inner)
        .flat_map(|sol| audit_reach_solution(p, sol))
        .collect()
}

/// Runs every per-instance check. Worked examples are checked separately.
pub fn check_instance(a: &Arena, d: &Dfa, seed: u64) -> Result<Vec<Finding>> {
    let s = Solved::new(a, d)?;
    let mut f = Findings::default();
    let mut all = |c: Criterion, details: Vec<String>| {
        for detail in details {
            f.fail(c, detail);
        }
    };
    all(Criterion::LimitOracle, check_limit_oracle(&s));
    all(Criterion::ReachOracle, check_reach_oracle(&s));
    all(Criterion::Sandwich, check_sandwich(&s, seed)?);
    all(Criterion::IterationBounds, check_iteration_bounds(&s));
    all(Criterion::ValueBound, check_value_bound(&s));
    all(Criterion::MemoryBound, check_memory_bound(&s)?);
    all(Criterion::Regions, check_regions(&s));
    all(Criterion::Monotonicity, check_monotonicity(&s, seed));
    all(Criterion::PostFixpointAudit, check_post_fixpoint(&s));
    Ok(f.0)
}

/// Values and iteration counts of the shipped examples.
pub fn check_worked_examples() -> Result<Vec<Finding>> {
    use Rank::{Finite, Infinity};
    let c = Criterion::WorkedExamples;
    let mut f = Findings::default();
    let db = samples::d_b();
    let cases: [(&str, Arena, Rank, usize); 3] = [
        ("G1", samples::g1(), Finite(5), 2),
        ("G2", samples::g2(), Finite(4), 1),
        ("G-inf", samples::g_inf(), Infinity, 1),
    ];
    for (name, a, value, iterations) in cases {
        let s = Solved::new(&a, &db)?;
        let got = s.limit.ranks[s.product.entry(0)];
        f.check(c, got == value, || format!("{name}: value {got}, expected {value}"));
        f.check(c, s.limit.iterations == iterations, || {
            format!("{name}: {} limit iterations, expected {iterations}", s.limit.iterations)
        });
    }

    let s = Solved::new(&samples::g1(), &db)?;
    f.check(c, s.limit.ranks[s.product.entry(1)] == Finite(5), || "G1: value at v1 is not 5".into());
    let goal = VertexSet::from_indices(4, [s.product.index(1, 1)]);
    let reach = reach_fixpoint(&s.product, &goal);
    let expected = vec![Finite(2), Finite(2), Finite(5), Finite(0)];
    f.check(c, reach.ranks == expected && reach.iterations == 3, || {
        format!("G1 reach: ranks {:?} after {} iterations", reach.ranks, reach.iterations)
    });
    let sigma = extract_limit_strategy_p0(&s.product, &s.limit)?;
    let tau = extract_limit_strategy_p1(&s.product, &s.limit)?;
    let duel = simulate_duel(&s.product, &sigma, &tau, s.product.entry(0));
    f.check(c, duel == Lasso::new(vec![], vec![0, 3]), || format!("G1 duel lasso {duel:?}"));
    let value = eval_limit_value(&s.product, &duel)?;
    f.check(c, value == Finite(5), || format!("G1 duel lasso evaluates to {value}"));
    Ok(f.0)
}

/// Outcome of a randomized verification run.
#[derive(Clone, Debug, Default)]
pub struct SuiteSummary {
    pub instances: usize,
    /// Instances on which every check passed.
    pub matched: usize,
    pub findings: BTreeMap<Criterion, Vec<String>>,
}

impl SuiteSummary {
    pub fn passed(&self, c: Criterion) -> bool {
        !self.findings.contains_key(&c)
    }

    pub fn all_passed(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Per-instance seeds drawn from one generator seeded with `seed`.
pub fn instance_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.gen()).collect()
}

/// Generates `trials` instances and runs [`check_instance`] on each. The
/// worked examples are checked once and do not count as instances.
pub fn run_suite(params: &GenParams, trials: usize) -> Result<SuiteSummary> {
    params.check()?;
    let results: Vec<Result<Vec<Finding>>> = instance_seeds(params.seed, trials)
        .into_par_iter()
        .enumerate()
        .map(|(i, seed)| {
            let (a, d) = gen_random_instance(&params.with_seed(seed))?;
            let found = check_instance(&a, &d, seed)?;
            Ok(found
                .into_iter()
                .map(|x| Finding {
                    detail: format!("instance {i} (seed {seed}): {}", x.detail),
                    ..x
                })
                .collect())
        })
        .collect();
    let mut summary = SuiteSummary {
        instances: trials,
        ..SuiteSummary::default()
    };
    for found in results {
        let found = found?;
        if found.is_empty() {
            summary.matched += 1;
        }
        for x in found {
            summary.findings.entry(x.criterion).or_default().push(x.detail);
        }
    }
    for x in check_worked_examples()? {
        summary.findings.entry(x.criterion).or_default().push(x.detail);
    }
    Ok(summary)
}
