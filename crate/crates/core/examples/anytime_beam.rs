// Iterative beam search on a random instance: every pass doubles the beam
// width and the incumbent only improves.
//
// ```text
// cargo run --release --example anytime_beam -- 80 0.3
// ```

use std::time::Duration;

use anyhow::Result;
use sop_search::strategies::{new_database, solve_with};
use sop_search::{BoundKind, Instance, SearchConfig, Strategy};

pub fn run_with(n: usize, density: f64, limit: Duration) -> Result<()> {
    let inst = Instance::generate_random(n, 1000, density, 7);
    let config =
        SearchConfig::new(Strategy::BeamSearch, BoundKind::Prefix, true).with_time_limit(limit);
    let mut db = new_database(&config);
    let report = solve_with(&inst, &config, &mut db, &mut |point, _| {
        println!("{:>9.4}s  {}", point.elapsed, point.value);
    });
    println!("{:>6} {:>10} {:>6}", "width", "nodes", "exact");
    for it in &report.iterations {
        println!("{:>6} {:>10} {:>6}", it.parameter, it.nodes, it.exact);
    }
    println!(
        "{}: best {:?}, proven {}, {} table entries, stop {:?}",
        inst.name(),
        report.best_value,
        report.optimal_proven,
        report.database_entries,
        report.stop_reason
    );
    assert!(report.trace.windows(2).all(|w| w[1].value < w[0].value));
    Ok(())
}

pub fn run() -> Result<()> {
    run_with(40, 0.3, Duration::from_secs(2))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map(|s| s.parse()).transpose()?.unwrap_or(80);
    let density = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(0.3);
    run_with(n, density, Duration::from_secs(10))
}
