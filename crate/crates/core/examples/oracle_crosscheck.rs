// Cross-checks every strategy, estimate and equivalence setting against
// the exhaustive and dynamic programming reference solvers.

use anyhow::{ensure, Result};
use sop_search::oracle::{enumerate, solve_dp};
use sop_search::{solve, Instance, SearchConfig};

pub fn run() -> Result<()> {
    let configs = SearchConfig::all_combinations();
    let mut checked = 0;
    for seed in 0..10 {
        for density in [0.0, 0.15, 0.3, 0.6] {
            let inst = Instance::generate_random(8, 1000, density, seed);
            let exact = enumerate(&inst)?;
            ensure!(
                solve_dp(&inst)? == exact.optimum,
                "dp disagrees on {}",
                inst.name()
            );
            for config in &configs {
                let report = solve(&inst, config);
                ensure!(
                    report.optimal_proven && report.best_value == Some(exact.optimum),
                    "{} on {}: {:?} vs {}",
                    config.descriptor(),
                    inst.name(),
                    report.best_value,
                    exact.optimum
                );
                checked += 1;
            }
        }
    }
    println!("{checked} runs agree with the reference optimum");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
