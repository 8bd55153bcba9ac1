// Iterative limited discrepancy search: pass `d` follows the child ordering
// with at most `d - 1` deviations, so pass 1 is the greedy dive.

use std::time::Duration;

use anyhow::Result;
use sop_search::{greedy_descent, solve, BoundKind, Instance, SearchConfig, Strategy};

pub fn run() -> Result<()> {
    let inst = Instance::generate_random(14, 100, 0.15, 3);
    let (_, greedy) =
        greedy_descent(&inst, BoundKind::Prefix).expect("no dead end at this density");
    let config = SearchConfig::new(Strategy::Lds, BoundKind::Prefix, true)
        .with_time_limit(Duration::from_secs(10));
    let report = solve(&inst, &config);
    println!("greedy dive: {greedy}");
    println!("{:>4} {:>10} {:>6}", "d", "nodes", "exact");
    for it in &report.iterations {
        println!("{:>4} {:>10} {:>6}", it.parameter, it.nodes, it.exact);
    }
    println!(
        "best {:?}, proven {}",
        report.best_value, report.optimal_proven
    );
    assert_eq!(report.trace.first().map(|p| p.value), Some(greedy));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
