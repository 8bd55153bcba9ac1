// A small strategy x estimate x equivalence matrix written as JSON lines
// and a summary CSV, the same outputs `sop bench` produces.
//
// ```text
// cargo run --release --example benchmark_matrix -- /tmp/sop-bench
// ```

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Duration;

use anyhow::Result;
use sop_search::harness::{write_jsonl, write_summary_csv, RunRecord};
use sop_search::{run_matrix, Instance, SearchConfig};

pub fn run_in(out_dir: &Path) -> Result<()> {
    let instances: Vec<Instance> = [(12, 0.15), (12, 0.3), (30, 0.3), (30, 0.6)]
        .into_iter()
        .enumerate()
        .map(|(seed, (n, density))| Instance::generate_random(n, 1000, density, seed as u64))
        .collect();
    let configs = [
        "BS,PE,P",
        "BS,PE,IO",
        "BS,PE,MST",
        "BS,P",
        "DFS,PE,P",
        "LDS,PE,P",
    ]
    .into_iter()
    .map(SearchConfig::from_descriptor)
    .collect::<Result<Vec<_>, _>>()?;
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let matrix = run_matrix(&instances, &configs, Some(Duration::from_millis(500)), jobs);
    print!("{matrix}");

    std::fs::create_dir_all(out_dir)?;
    let records: Vec<RunRecord> = matrix
        .cells
        .iter()
        .map(|c| RunRecord::from_report(&c.report, None))
        .collect();
    write_jsonl(
        BufWriter::new(File::create(out_dir.join("records.jsonl"))?),
        &records,
    )?;
    write_summary_csv(File::create(out_dir.join("summary.csv"))?, &matrix, None)?;
    println!("wrote {} records to {}", records.len(), out_dir.display());
    Ok(())
}

pub fn run() -> Result<()> {
    run_in(&std::env::temp_dir().join("sop-benchmark-matrix"))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    match std::env::args().nth(1) {
        Some(dir) => run_in(Path::new(&dir)),
        None => run(),
    }
}
