//! Lasso evaluation against a brute-force reading of the value definitions
//! over a long finite unrolling.

use limitgame::gen::{gen_random_instance, random_strategy, GenParams};
use limitgame::limit::{extract_limit_strategy_p0, extract_limit_strategy_p1, limit_fixpoint};
use limitgame::oracle::{eval_limit_value, eval_reach_value, simulate_duel};
use limitgame::product::build_product;
use limitgame::samples::{d_b, g1, g2, g_inf};
use limitgame::verify::instance_seeds;
use limitgame::{GameGraph, Lasso, Player, ProductArena, Rank};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const HORIZON: usize = 1000;

/// `sup_j min_{j' > j accepted} w(j..j')`, with `j` ranging over the first
/// half of the unrolling so every `j` still sees two full periods ahead.
fn unrolled_limit_value(p: &ProductArena, l: &Lasso) -> Rank {
    let play = l.unroll(HORIZON + 1);
    let mut prefix = vec![0u64; HORIZON + 1];
    for i in 0..HORIZON {
        prefix[i + 1] = prefix[i] + p.edge_weight(play[i], play[i + 1]).unwrap();
    }
    let mut sup = Rank::Finite(0);
    for j in 0..HORIZON / 2 {
        let next = (j + 1..=HORIZON).find(|&k| p.is_goal(play[k]));
        let gap = next.map_or(Rank::Infinity, |k| Rank::Finite(prefix[k] - prefix[j]));
        sup = sup.max(gap);
    }
    sup
}

fn unrolled_reach_value(p: &ProductArena, l: &Lasso) -> Rank {
    let play = l.unroll(HORIZON + 1);
    let mut total = 0;
    for i in 0..=HORIZON {
        if p.is_goal(play[i]) {
            return Rank::Finite(total);
        }
        if i < HORIZON {
            total += p.edge_weight(play[i], play[i + 1]).unwrap();
        }
    }
    Rank::Infinity
}

fn fits(l: &Lasso) -> bool {
    l.stem.len() + 2 * l.cycle.len() <= HORIZON / 2
}

#[test]
fn documented_lassos() {
    let p = build_product(&g1(), &d_b()).unwrap();
    let l = Lasso::new(vec![], vec![0, 3]);
    assert_eq!(unrolled_limit_value(&p, &l), Rank::Finite(5));
    assert_eq!(eval_limit_value(&p, &l).unwrap(), Rank::Finite(5));
    assert_eq!(unrolled_reach_value(&p, &l), Rank::Finite(2));
    assert_eq!(eval_reach_value(&p, &l).unwrap(), Rank::Finite(2));
    let l = Lasso::new(vec![], vec![3, 0]);
    assert_eq!(eval_reach_value(&p, &l).unwrap(), Rank::Finite(0));

    let p = build_product(&g2(), &d_b()).unwrap();
    let l = Lasso::new(vec![], vec![0, 5]);
    assert_eq!(unrolled_limit_value(&p, &l), Rank::Finite(4));
    assert_eq!(eval_limit_value(&p, &l).unwrap(), Rank::Finite(4));

    let p = build_product(&g_inf(), &d_b()).unwrap();
    let l = Lasso::new(vec![], vec![0]);
    assert_eq!(eval_limit_value(&p, &l).unwrap(), Rank::Infinity);
    assert_eq!(eval_reach_value(&p, &l).unwrap(), Rank::Infinity);
    // The goal vertex is visited once and never again.
    let l = Lasso::new(vec![1], vec![0]);
    assert_eq!(eval_limit_value(&p, &l).unwrap(), Rank::Infinity);
    assert_eq!(eval_reach_value(&p, &l).unwrap(), Rank::Finite(0));
    assert_eq!(unrolled_limit_value(&p, &l), Rank::Infinity);
}

#[test]
fn generated_lassos_match_the_unrolling() {
    let params = GenParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut checked, mut skipped, mut finite) = (0, 0, 0);
    for seed in instance_seeds(31, 150) {
        let (a, d) = gen_random_instance(&params.with_seed(seed)).unwrap();
        let p = build_product(&a, &d).unwrap();
        let sol = limit_fixpoint(&p);
        let sigma = extract_limit_strategy_p0(&p, &sol).unwrap();
        let tau = extract_limit_strategy_p1(&p, &sol).unwrap();
        for start in 0..p.num_vertices() {
            let mut lassos = vec![simulate_duel(&p, &sigma, &tau, start)];
            for _ in 0..3 {
                let s0 = random_strategy(&p, Player::Zero, 3, &mut rng);
                let s1 = random_strategy(&p, Player::One, 3, &mut rng);
                lassos.push(simulate_duel(&p, &s0, &s1, start));
            }
            for l in lassos {
                if !fits(&l) {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                let value = eval_limit_value(&p, &l).unwrap();
                finite += value.is_finite() as usize;
                assert_eq!(value, unrolled_limit_value(&p, &l), "{l:?}");
                assert_eq!(eval_reach_value(&p, &l).unwrap(), unrolled_reach_value(&p, &l), "{l:?}");
            }
        }
    }
    assert!(skipped * 100 <= checked, "{skipped} skipped vs {checked} checked");
    assert!(finite * 5 >= checked, "only {finite} of {checked} lassos had finite value");
}

#[test]
fn duels_terminate_within_the_joint_state_bound() {
    let params = GenParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for seed in instance_seeds(4, 100) {
        let (a, d) = gen_random_instance(&params.with_seed(seed)).unwrap();
        let p = build_product(&a, &d).unwrap();
        let s0 = random_strategy(&p, Player::Zero, 3, &mut rng);
        let s1 = random_strategy(&p, Player::One, 3, &mut rng);
        let bound = p.num_vertices() * s0.memory_size() * s1.memory_size() + 1;
        for start in 0..p.num_vertices() {
            let l = simulate_duel(&p, &s0, &s1, start);
            l.validate(&p).unwrap();
            assert!(l.stem.len() + l.cycle.len() <= bound);
            assert_eq!(l.at(0), start);
        }
    }
}
