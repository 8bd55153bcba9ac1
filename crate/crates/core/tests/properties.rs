use std::collections::HashMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sop_search::oracle::{enumerate, CompletionOracle};
use sop_search::strategies::{new_database, solve_with};
use sop_search::{
    greedy_descent, solve, BoundEvaluator, BoundKind, Cost, EquivalenceDatabase, EquivalenceKey,
    Instance, Node, Probe, SearchConfig, SearchTree, Strategy, VertexSet,
};

const DENSITIES: [f64; 4] = [0.0, 0.15, 0.3, 0.6];

fn density() -> impl proptest::strategy::Strategy<Value = f64> {
    prop::sample::select(DENSITIES.to_vec())
}

fn walk(tree: &mut SearchTree<'_>, node: &Node, visit: &mut dyn FnMut(&Node)) {
    visit(node);
    for child in tree.children(node) {
        walk(tree, &child, visit);
    }
}

/// Cheapest cost of any feasible prefix ending in `last` with exactly the
/// vertices of `mask`, by forward relaxation over increasing masks.
fn prefix_minima(inst: &Instance) -> HashMap<(u32, usize), Cost> {
    let n = inst.len();
    let mut best: HashMap<(u32, usize), Cost> = HashMap::new();
    best.insert((1 << inst.start(), inst.start()), 0);
    for mask in 1u32..(1 << n) {
        for last in 0..n {
            let Some(&g) = best.get(&(mask, last)) else {
                continue;
            };
            let depth = mask.count_ones() as usize;
            for v in 0..n {
                if mask & (1 << v) != 0 || (v == inst.end() && depth + 1 != n) {
                    continue;
                }
                if inst.preds(v).iter().any(|p| mask & (1 << p) == 0) {
                    continue;
                }
                if let Some(w) = inst.arc(last, v) {
                    let e = best.entry((mask | (1 << v), v)).or_insert(Cost::MAX);
                    *e = (*e).min(g + w);
                }
            }
        }
    }
    best
}

fn mask_of(set: &VertexSet) -> u32 {
    set.iter().fold(0, |m, v| m | (1 << v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_estimate_is_admissible(n in 3usize..=9, d in density(), seed in any::<u64>()) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let mut oracle = CompletionOracle::new(&inst).unwrap();
        for kind in [BoundKind::Prefix, BoundKind::InOut, BoundKind::Mst] {
            let mut tree = SearchTree::new(&inst, kind);
            let root = tree.root();
            let mut bad = vec![];
            walk(&mut tree, &root, &mut |node| {
                let exact = oracle.best_completion(node.visited().iter(), node.last());
                if let Some(c) = exact {
                    if node.f() - node.g() > c {
                        bad.push((node.prefix_order(), node.f() - node.g(), c));
                    }
                }
            });
            prop_assert!(bad.is_empty(), "{kind:?} overestimates: {bad:?}");
        }
    }

    #[test]
    fn incremental_inout_matches_recomputation(n in 2usize..=200, d in density(), seed in any::<u64>()) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let mut tree = SearchTree::new(&inst, BoundKind::InOut);
        let eval = BoundEvaluator::new(&inst, BoundKind::InOut);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut node = tree.root();
        loop {
            let h = node.f() - node.g();
            prop_assert_eq!(h, eval.inout_from_scratch(&inst, node.visited(), node.last()));
            let children = tree.children(&node);
            match children.choose(&mut rng) {
                Some(c) => node = c.clone(),
                None => break,
            }
        }
        prop_assert_eq!(node.depth(), n);
    }

    #[test]
    fn optimum_is_the_same_for_every_configuration(n in 2usize..=9, d in density(), seed in any::<u64>()) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let exact = enumerate(&inst).unwrap();
        for config in SearchConfig::all_combinations() {
            let report = solve(&inst, &config);
            prop_assert!(report.optimal_proven, "{} did not prove", config.descriptor());
            prop_assert_eq!(report.best_value, Some(exact.optimum), "{}", config.descriptor());
            let perm = report.best_permutation.unwrap();
            prop_assert_eq!(inst.evaluate_permutation(&perm).unwrap(), exact.optimum);
        }
    }

    #[test]
    fn table_holds_prefix_minima_after_a_full_walk(n in 2usize..=12, d in density(), seed in any::<u64>()) {
        let inst = Instance::generate_random(n, 100, d, seed);
        if n >= 11 && d < 0.3 {
            return Ok(());
        }
        let minima = prefix_minima(&inst);
        let mut db = EquivalenceDatabase::new();
        let mut tree = SearchTree::new(&inst, BoundKind::Prefix);
        let root = tree.root();
        walk(&mut tree, &root, &mut |node| {
            db.probe_node(node);
        });
        prop_assert_eq!(db.len(), minima.len());
        for (key, g) in db.iter() {
            prop_assert_eq!(Some(&g), minima.get(&(mask_of(&key.visited), key.last)));
        }
    }

    #[test]
    fn table_never_undercuts_a_reachable_prefix(n in 2usize..=12, d in density(), seed in any::<u64>(), strategy in 0usize..3) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let minima = prefix_minima(&inst);
        let strategy = [Strategy::Dfs, Strategy::Lds, Strategy::BeamSearch][strategy];
        let config = SearchConfig::new(strategy, BoundKind::InOut, true);
        let mut db = new_database(&config);
        let report = solve_with(&inst, &config, &mut db, &mut |_, _| {});
        prop_assert!(report.optimal_proven);
        for (key, g) in db.iter() {
            let m = minima[&(mask_of(&key.visited), key.last)];
            prop_assert!(g >= m, "stored {g} below reachable minimum {m}");
        }
    }

    #[test]
    fn stored_values_only_decrease(ops in prop::collection::vec((0u32..16, 0usize..4, 0i64..50), 1..200)) {
        let mut db = EquivalenceDatabase::new();
        for (mask, last, g) in ops {
            let mask = mask | (1 << last);
            let key = EquivalenceKey::new(VertexSet::from_iter_with_capacity(4, (0..4).filter(|v| mask & (1 << v) != 0)), last);
            let before = db.get(&key);
            let probe = db.probe(key.clone(), g);
            let after = db.get(&key).unwrap();
            match before {
                None => prop_assert_eq!((probe, after), (Probe::Keep, g)),
                Some(b) if b < g => prop_assert_eq!((probe, after), (Probe::Cut, b)),
                Some(b) => prop_assert_eq!((probe, after), (Probe::Keep, g.min(b))),
            }
        }
    }

    #[test]
    fn runs_are_deterministic(n in 5usize..=40, d in density(), seed in any::<u64>(), c in 0usize..18) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let config = SearchConfig::all_combinations()[c].clone().with_node_limit(3000);
        let a = solve(&inst, &config);
        let b = solve(&inst, &config);
        prop_assert_eq!(&a.counters, &b.counters);
        prop_assert_eq!(&a.best_permutation, &b.best_permutation);
        prop_assert_eq!(&a.iterations, &b.iterations);
        let values = |r: &sop_search::SearchReport| r.trace.iter().map(|p| p.value).collect::<Vec<_>>();
        prop_assert_eq!(values(&a), values(&b));
    }

    #[test]
    fn reset_table_reproduces_the_run(n in 5usize..=30, d in density(), seed in any::<u64>()) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let config = SearchConfig::new(Strategy::BeamSearch, BoundKind::Prefix, true).with_node_limit(5000);
        let mut db = new_database(&config);
        let first = solve_with(&inst, &config, &mut db, &mut |_, _| {});
        db.reset();
        prop_assert!(db.is_empty());
        let second = solve_with(&inst, &config, &mut db, &mut |_, _| {});
        prop_assert_eq!(first.counters, second.counters);
        prop_assert_eq!(first.best_value, second.best_value);
    }

    #[test]
    fn trace_is_strictly_improving(n in 5usize..=60, d in density(), seed in any::<u64>(), c in 0usize..18) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let config = SearchConfig::all_combinations()[c].clone().with_node_limit(4000);
        let report = solve(&inst, &config);
        for w in report.trace.windows(2) {
            prop_assert!(w[1].value < w[0].value);
            prop_assert!(w[1].elapsed >= w[0].elapsed);
        }
        prop_assert_eq!(report.trace.last().map(|p| p.value), report.best_value);
        if let Some(p) = &report.best_permutation {
            prop_assert_eq!(inst.evaluate_permutation(p).ok(), report.best_value);
        }
    }

    #[test]
    fn first_pass_is_the_greedy_dive(n in 2usize..=40, d in density(), seed in any::<u64>(), b in 0usize..3) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let bound = [BoundKind::Prefix, BoundKind::InOut, BoundKind::Mst][b];
        let greedy = greedy_descent(&inst, bound).map(|(p, v)| (p.into_vec(), v));
        for strategy in [Strategy::BeamSearch, Strategy::Lds] {
            let config = SearchConfig::new(strategy, bound, true).with_iteration_limit(1);
            let report = solve(&inst, &config);
            let got = report.best_permutation.map(|p| p.into_vec()).zip(report.best_value);
            prop_assert_eq!(&got, &greedy, "{}", config.descriptor());
        }
    }

    #[test]
    fn dfs_without_limits_always_proves(n in 2usize..=14, d in density(), seed in any::<u64>(), pe in any::<bool>()) {
        let inst = Instance::generate_random(n, 1000, d, seed);
        let report = solve(&inst, &SearchConfig::new(Strategy::Dfs, BoundKind::InOut, pe));
        prop_assert!(report.optimal_proven || report.infeasible);
        prop_assert!(report.stop_reason.is_none());
    }
}
