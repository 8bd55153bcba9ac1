// The five-vertex example: three feasible orderings, one optimum.
//
// ```text
// cargo run --example fig1_walkthrough
// ```

use anyhow::Result;
use sop_search::oracle::enumerate;
use sop_search::{solve, BoundKind, Instance, SearchConfig, Strategy};

const LABELS: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

fn label(order: &[usize]) -> String {
    order.iter().map(|&v| LABELS[v]).collect()
}

pub fn run() -> Result<()> {
    let inst = Instance::from_file(concat!(env!("CARGO_MANIFEST_DIR"), "/data/fig1.sop"))?;
    println!(
        "{} vertices, {} precedence constraints",
        inst.len(),
        inst.precedence_count()
    );

    for order in [[0, 3, 2, 1, 4], [0, 1, 3, 2, 4], [0, 3, 1, 2, 4]] {
        println!(
            "  {} costs {}",
            label(&order),
            inst.evaluate_permutation(&order)?
        );
    }
    let bad = [0, 2, 3, 1, 4];
    println!(
        "  {} is rejected: {}",
        label(&bad),
        inst.violation(&bad).expect("c before d")
    );

    let exact = enumerate(&inst)?;
    println!(
        "enumeration: {} feasible, optimum {} ({})",
        exact.feasible_count,
        exact.optimum,
        label(&exact.permutation)
    );

    for strategy in [Strategy::Dfs, Strategy::Lds, Strategy::BeamSearch] {
        let report = solve(&inst, &SearchConfig::new(strategy, BoundKind::Prefix, true));
        let best = report.best_permutation.as_ref().expect("feasible");
        println!(
            "{:<10} {} = {} proven={} opened={}",
            report.config,
            label(best),
            report.best_value.unwrap(),
            report.optimal_proven,
            report.counters.nodes_opened
        );
        assert_eq!(report.best_value, Some(exact.optimum));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
