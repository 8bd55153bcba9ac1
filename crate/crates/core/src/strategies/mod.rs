//! Search strategies over the implicit tree, all sharing one anytime
//! controller: incumbent bookkeeping, bound and equivalence cuts, limits and
//! counters.
//!
//! * [`solve_dfs`]: depth-first, best child first. Exhaustive unless stopped.
//! * [`solve_lds`]: iterative limited discrepancy search, `d = 1, 2, 3, ...`.
//!   An iteration with parameter `d` allows `d - 1` discrepancies per path, so
//!   `d = 1` is a greedy descent.
//! * [`solve_beam`]: iterative beam search with widths `D, D*k, D*k^2, ...`.
//!
//! Iterations that made no heuristic cut are exact; finishing one proves the
//! incumbent optimal (or the instance infeasible when there is none).

mod beam;
mod dfs;
mod lds;
mod matrix;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundKind, INFINITE_COST};
use crate::equivalence::{EquivalenceDatabase, Probe};
use crate::instance::{Cost, Instance, Permutation};
use crate::tree::{Node, SearchTree};

pub use matrix::{run_matrix, MatrixCell, MatrixResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Dfs,
    Lds,
    #[serde(rename = "beam")]
    BeamSearch,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Dfs, Strategy::Lds, Strategy::BeamSearch];

    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Dfs => "DFS",
            Strategy::Lds => "LDS",
            Strategy::BeamSearch => "BS",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Dfs => "dfs",
            Strategy::Lds => "lds",
            Strategy::BeamSearch => "beam",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "dfs" => Ok(Strategy::Dfs),
            "lds" => Ok(Strategy::Lds),
            "bs" | "beam" => Ok(Strategy::BeamSearch),
            other => Err(format!(
                "unknown strategy {other:?} (expected dfs, lds or beam)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("beam_init must be at least 1")]
    BeamInit,
    #[error("beam_growth must be at least 2")]
    BeamGrowth,
    #[error("lds_init must be at least 1")]
    LdsInit,
    #[error("invalid configuration descriptor {0:?}")]
    Descriptor(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub strategy: Strategy,
    pub bound: BoundKind,
    pub use_equivalence: bool,
    /// Wall-clock budget, checked between node expansions.
    pub time_limit: Option<Duration>,
    /// Budget on opened nodes.
    pub node_limit: Option<u64>,
    pub beam_init: u64,
    pub beam_growth: u64,
    pub lds_init: u64,
    /// Stop after this many LDS or beam iterations.
    pub iteration_limit: Option<usize>,
    /// Entry cap for the equivalence table.
    pub db_capacity: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::BeamSearch,
            bound: BoundKind::Prefix,
            use_equivalence: true,
            time_limit: None,
            node_limit: None,
            beam_init: 1,
            beam_growth: 2,
            lds_init: 1,
            iteration_limit: None,
            db_capacity: None,
        }
    }
}

impl SearchConfig {
    pub fn new(strategy: Strategy, bound: BoundKind, use_equivalence: bool) -> Self {
        Self {
            strategy,
            bound,
            use_equivalence,
            ..Self::default()
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    pub fn with_iteration_limit(mut self, limit: usize) -> Self {
        self.iteration_limit = Some(limit);
        self
    }

    /// Every strategy × bound × equivalence combination (18 configurations).
    pub fn all_combinations() -> Vec<SearchConfig> {
        let mut out = vec![];
        for strategy in Strategy::ALL {
            for bound in BoundKind::ALL {
                for pe in [true, false] {
                    out.push(SearchConfig::new(strategy, bound, pe));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.beam_init < 1 {
            return Err(ConfigError::BeamInit);
        }
        if self.beam_growth < 2 {
            return Err(ConfigError::BeamGrowth);
        }
        if self.lds_init < 1 {
            return Err(ConfigError::LdsInit);
        }
        Ok(())
    }

    /// Short name such as `BS,PE,P` or `DFS,MST`.
    pub fn descriptor(&self) -> String {
        if self.use_equivalence {
            format!("{},PE,{}", self.strategy.tag(), self.bound.tag())
        } else {
            format!("{},{}", self.strategy.tag(), self.bound.tag())
        }
    }

    /// Inverse of [`descriptor`](Self::descriptor); other fields keep their
    /// defaults.
    pub fn from_descriptor(s: &str) -> Result<Self, ConfigError> {
        let err = || ConfigError::Descriptor(s.to_string());
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let (strategy, pe, bound) = match parts.as_slice() {
            [st, pe, b] if pe.eq_ignore_ascii_case("PE") => (st, true, b),
            [st, b] => (st, false, b),
            _ => return Err(err()),
        };
        Ok(SearchConfig::new(
            strategy.parse().map_err(|_| err())?,
            bound.parse().map_err(|_| err())?,
            pe,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TimeLimit,
    NodeLimit,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub elapsed: f64,
    pub value: Cost,
}

/// One LDS or beam pass (`parameter` is `d` or `D`), or the single DFS pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationStat {
    pub parameter: u64,
    pub nodes: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub nodes_opened: u64,
    pub nodes_cut_bound: u64,
    pub nodes_cut_equivalence: u64,
    pub nodes_cut_heuristic: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub instance: String,
    pub config: String,
    pub best_value: Option<Cost>,
    pub best_permutation: Option<Permutation>,
    pub optimal_proven: bool,
    /// An exact pass finished without finding any solution.
    pub infeasible: bool,
    pub stop_reason: Option<StopReason>,
    #[serde(flatten)]
    pub counters: Counters,
    pub trace: Vec<TracePoint>,
    pub iterations: Vec<IterationStat>,
    pub database_entries: usize,
    pub database_saturated: bool,
    pub elapsed: f64,
    pub time_to_best: Option<f64>,
    pub time_to_proof: Option<f64>,
}

/// Called with every new incumbent.
pub type Observer<'o> = dyn FnMut(&TracePoint, &Permutation) + 'o;

/// Runs the configured strategy with a fresh equivalence table.
pub fn solve(inst: &Instance, config: &SearchConfig) -> SearchReport {
    let mut db = new_database(config);
    solve_with(inst, config, &mut db, &mut |_, _| {})
}

/// Runs the configured strategy against an existing table, reporting each
/// new incumbent to `observer`.
pub fn solve_with(
    inst: &Instance,
    config: &SearchConfig,
    db: &mut EquivalenceDatabase,
    observer: &mut Observer<'_>,
) -> SearchReport {
    let mut run = Run::new(inst, config, db, observer);
    match config.strategy {
        Strategy::Dfs => dfs::run(&mut run),
        Strategy::Lds => lds::run(&mut run),
        Strategy::BeamSearch => beam::run(&mut run),
    }
    run.into_report()
}

pub fn solve_dfs(inst: &Instance, config: &SearchConfig) -> SearchReport {
    solve(
        inst,
        &SearchConfig {
            strategy: Strategy::Dfs,
            ..config.clone()
        },
    )
}

pub fn solve_lds(inst: &Instance, config: &SearchConfig) -> SearchReport {
    solve(
        inst,
        &SearchConfig {
            strategy: Strategy::Lds,
            ..config.clone()
        },
    )
}

pub fn solve_beam(inst: &Instance, config: &SearchConfig) -> SearchReport {
    solve(
        inst,
        &SearchConfig {
            strategy: Strategy::BeamSearch,
            ..config.clone()
        },
    )
}

pub fn new_database(config: &SearchConfig) -> EquivalenceDatabase {
    match config.db_capacity {
        Some(cap) => EquivalenceDatabase::with_capacity_limit(cap),
        None => EquivalenceDatabase::new(),
    }
}

/// Follows the best child from the root down to a leaf. `None` on a dead end.
pub fn greedy_descent(inst: &Instance, bound: BoundKind) -> Option<(Permutation, Cost)> {
    let mut tree = SearchTree::new(inst, bound);
    let mut node = tree.root();
    while node.depth() < inst.len() {
        node = tree.children(&node).into_iter().next()?;
    }
    Some((node.to_permutation(), node.g()))
}

/// State shared by all strategies during one solve.
pub(crate) struct Run<'a, 'o> {
    inst: &'a Instance,
    config: &'a SearchConfig,
    tree: SearchTree<'a>,
    db: &'a mut EquivalenceDatabase,
    observer: &'a mut Observer<'o>,
    started: Instant,
    best: Option<(Cost, Permutation)>,
    counters: Counters,
    trace: Vec<TracePoint>,
    iterations: Vec<IterationStat>,
    stop: Option<StopReason>,
    proven: bool,
    infeasible: bool,
    time_to_proof: Option<f64>,
}

impl<'a, 'o> Run<'a, 'o> {
    fn new(
        inst: &'a Instance,
        config: &'a SearchConfig,
        db: &'a mut EquivalenceDatabase,
        observer: &'a mut Observer<'o>,
    ) -> Self {
        Self {
            inst,
            config,
            tree: SearchTree::new(inst, config.bound),
            db,
            observer,
            started: Instant::now(),
            best: None,
            counters: Counters::default(),
            trace: vec![],
            iterations: vec![],
            stop: None,
            proven: false,
            infeasible: false,
            time_to_proof: None,
        }
    }

    /// Checks the time and node budgets; once exhausted, stays exhausted.
    fn out_of_budget(&mut self) -> bool {
        if self.stop.is_some() {
            return true;
        }
        if self
            .config
            .node_limit
            .is_some_and(|l| self.counters.nodes_opened >= l)
        {
            self.stop = Some(StopReason::NodeLimit);
        } else if self
            .config
            .time_limit
            .is_some_and(|l| self.started.elapsed() >= l)
        {
            self.stop = Some(StopReason::TimeLimit);
        }
        self.stop.is_some()
    }

    fn iteration_budget_left(&mut self) -> bool {
        if self
            .config
            .iteration_limit
            .is_some_and(|l| self.iterations.len() >= l)
        {
            self.stop = Some(StopReason::IterationLimit);
            return false;
        }
        true
    }

    fn incumbent(&self) -> Cost {
        self.best.as_ref().map_or(INFINITE_COST, |(v, _)| *v)
    }

    /// `f >= incumbent`: the subtree cannot hold a strictly better solution.
    #[inline]
    fn bound_cut(&self, node: &Node) -> bool {
        node.f() >= self.incumbent() || node.f() >= INFINITE_COST
    }

    /// Equivalence probe when enabled; `true` when the node is dominated.
    fn equivalence_cut(&mut self, node: &Node) -> bool {
        self.config.use_equivalence && self.db.probe_node(node) == Probe::Cut
    }

    /// Applies the bound then the equivalence test, counting the cut kind.
    fn filter(&mut self, node: &Node) -> bool {
        if self.bound_cut(node) {
            self.counters.nodes_cut_bound += 1;
            false
        } else if self.equivalence_cut(node) {
            self.counters.nodes_cut_equivalence += 1;
            false
        } else {
            true
        }
    }

    /// Records a complete solution if it improves the incumbent.
    fn offer_leaf(&mut self, leaf: &Node) {
        debug_assert_eq!(leaf.depth(), self.inst.len());
        if leaf.g() >= self.incumbent() {
            self.counters.nodes_cut_bound += 1;
            return;
        }
        let perm = leaf.to_permutation();
        debug_assert_eq!(self.inst.evaluate_permutation(&perm).ok(), Some(leaf.g()));
        let point = TracePoint {
            elapsed: self.started.elapsed().as_secs_f64(),
            value: leaf.g(),
        };
        (self.observer)(&point, &perm);
        self.trace.push(point);
        self.best = Some((leaf.g(), perm));
    }

    /// Called when a pass finished without any heuristic cut.
    fn exhausted(&mut self) {
        if self.db.is_saturated() {
            return;
        }
        self.proven = self.best.is_some();
        self.infeasible = self.best.is_none();
        self.time_to_proof = Some(self.started.elapsed().as_secs_f64());
    }

    fn into_report(self) -> SearchReport {
        let (best_value, best_permutation) = match self.best {
            Some((v, p)) => (Some(v), Some(p)),
            None => (None, None),
        };
        SearchReport {
            instance: self.inst.name().to_string(),
            config: self.config.descriptor(),
            best_value,
            best_permutation,
            optimal_proven: self.proven,
            infeasible: self.infeasible,
            stop_reason: self.stop,
            counters: self.counters,
            time_to_best: self.trace.last().map(|p| p.elapsed),
            trace: self.trace,
            iterations: self.iterations,
            database_entries: self.db.len(),
            database_saturated: self.db.is_saturated(),
            elapsed: self.started.elapsed().as_secs_f64(),
            time_to_proof: self.time_to_proof,
        }
    }
}
