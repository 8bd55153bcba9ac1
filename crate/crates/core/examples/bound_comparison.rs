// Node counts of a complete depth-first search under the three suffix
// estimates. Neither of the two non-trivial estimates dominates the other.

use std::time::Instant;

use anyhow::Result;
use sop_search::{solve, BoundKind, Instance, SearchConfig, Strategy};

pub fn run() -> Result<()> {
    let inst = Instance::generate_random(13, 1000, 0.15, 11);
    println!("{}", inst.name());
    let mut optimum = None;
    for bound in [BoundKind::Prefix, BoundKind::InOut, BoundKind::Mst] {
        let start = Instant::now();
        let report = solve(&inst, &SearchConfig::new(Strategy::Dfs, bound, true));
        println!(
            "  {:<4} value {:?} opened {:>8} bound cuts {:>8} in {:.3}s",
            bound.tag(),
            report.best_value,
            report.counters.nodes_opened,
            report.counters.nodes_cut_bound,
            start.elapsed().as_secs_f64()
        );
        assert!(report.optimal_proven);
        assert!(optimum.is_none() || optimum == report.best_value);
        optimum = report.best_value;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
