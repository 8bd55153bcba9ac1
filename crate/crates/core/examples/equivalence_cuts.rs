// Depth-first search with and without the prefix equivalence table. Both
// prove the same optimum; the table removes prefixes that reach the same
// (visited set, last vertex) state at a higher cost.

use anyhow::Result;
use sop_search::{solve, BoundKind, Instance, SearchConfig, Strategy};

pub fn run() -> Result<()> {
    println!(
        "{:<22} {:>8} {:>12} {:>12} {:>10}",
        "instance", "optimum", "nodes no PE", "nodes PE", "PE cuts"
    );
    for seed in 0..4 {
        let inst = Instance::generate_random(11, 100, 0.15, seed);
        let plain = solve(
            &inst,
            &SearchConfig::new(Strategy::Dfs, BoundKind::Prefix, false),
        );
        let pe = solve(
            &inst,
            &SearchConfig::new(Strategy::Dfs, BoundKind::Prefix, true),
        );
        assert!(plain.optimal_proven && pe.optimal_proven);
        assert_eq!(plain.best_value, pe.best_value);
        println!(
            "{:<22} {:>8} {:>12} {:>12} {:>10}",
            inst.name(),
            pe.best_value.unwrap(),
            plain.counters.nodes_opened,
            pe.counters.nodes_opened,
            pe.counters.nodes_cut_equivalence
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
