use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use super::{solve, SearchConfig, SearchReport};
use crate::instance::Instance;

#[derive(Debug, Clone)]
pub struct MatrixCell {
    pub instance: String,
    pub config: String,
    pub report: SearchReport,
}

impl MatrixCell {
    /// Table entry: the value, or `-` when nothing was found.
    pub fn value_label(&self) -> String {
        self.report
            .best_value
            .map_or_else(|| "-".to_string(), |v| v.to_string())
    }
}

/// One row per instance, one column per configuration.
#[derive(Debug, Clone)]
pub struct MatrixResult {
    pub instances: Vec<String>,
    pub configs: Vec<String>,
    /// Row-major: `cells[i * configs.len() + c]`.
    pub cells: Vec<MatrixCell>,
}

impl MatrixResult {
    pub fn cell(&self, instance: usize, config: usize) -> &MatrixCell {
        &self.cells[instance * self.configs.len() + config]
    }

    /// Number of proven-optimal cells per configuration column.
    pub fn closed_counts(&self) -> Vec<usize> {
        (0..self.configs.len())
            .map(|c| {
                (0..self.instances.len())
                    .filter(|&i| self.cell(i, c).report.optimal_proven)
                    .count()
            })
            .collect()
    }
}

impl fmt::Display for MatrixResult {
    /// Proven values are starred.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name_w = self
            .instances
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(8)
            .max(9);
        let col_w = self
            .configs
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(8)
            .max(10);
        write!(f, "{:<name_w$}", "instance")?;
        for c in &self.configs {
            write!(f, " {c:>col_w$}")?;
        }
        writeln!(f)?;
        for (i, name) in self.instances.iter().enumerate() {
            write!(f, "{name:<name_w$}")?;
            for c in 0..self.configs.len() {
                let cell = self.cell(i, c);
                let mark = if cell.report.optimal_proven { "*" } else { " " };
                write!(f, " {:>w$}{mark}", cell.value_label(), w = col_w - 1)?;
            }
            writeln!(f)?;
        }
        write!(f, "{:<name_w$}", "nb closed")?;
        for count in self.closed_counts() {
            write!(f, " {count:>w$} ", w = col_w - 1)?;
        }
        writeln!(f)
    }
}

/// Solves every (instance, configuration) pair, each cell limited to
/// `time_limit`, using up to `jobs` worker threads. Cells are independent
/// sequential searches.
pub fn run_matrix(
    instances: &[Instance],
    configs: &[SearchConfig],
    time_limit: Option<Duration>,
    jobs: usize,
) -> MatrixResult {
    let nb_configs = configs.len();
    let total = instances.len() * nb_configs;
    let slots: Vec<Mutex<Option<MatrixCell>>> = (0..total).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let k = next.fetch_add(1, Ordering::Relaxed);
        if k >= total {
            break;
        }
        let inst = &instances[k / nb_configs];
        let mut config = configs[k % nb_configs].clone();
        if time_limit.is_some() {
            config.time_limit = time_limit;
        }
        let report = solve(inst, &config);
        *slots[k].lock().unwrap() = Some(MatrixCell {
            instance: inst.name().to_string(),
            config: config.descriptor(),
            report,
        });
    };
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(worker);
        }
    });
    MatrixResult {
        instances: instances.iter().map(|i| i.name().to_string()).collect(),
        configs: configs.iter().map(SearchConfig::descriptor).collect(),
        cells: slots
            .into_iter()
            .map(|m| m.into_inner().unwrap().expect("every cell is solved"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundKind;
    use crate::strategies::Strategy;

    #[test]
    fn matrix_shape_and_closed_counts() {
        let instances: Vec<Instance> = (0..3)
            .map(|s| Instance::generate_random(8, 100, 0.3, s))
            .collect();
        let configs = vec![
            SearchConfig::new(Strategy::BeamSearch, BoundKind::Prefix, true),
            SearchConfig::new(Strategy::Dfs, BoundKind::Prefix, true).with_node_limit(1),
        ];
        let m = run_matrix(&instances, &configs, None, 2);
        assert_eq!(m.cells.len(), 6);
        assert_eq!(m.closed_counts(), vec![3, 0]);
        assert_eq!(m.cell(1, 0).instance, instances[1].name());
        assert_eq!(m.cell(1, 1).config, "DFS,PE,P");
        assert_eq!(m.cell(2, 1).value_label(), "-");
        let table = m.to_string();
        assert!(table.contains("nb closed"));
        assert!(table.contains("BS,PE,P"));
    }
}
