//! Anytime tree search for the Sequential Ordering Problem: find a cheapest
//! Hamiltonian path from a start to an end vertex of a complete asymmetric
//! graph that respects precedence constraints.
//!
//! The crate is organised around an implicit search tree ([`tree`]) whose
//! nodes are feasible prefixes, three suffix estimates ([`bounds`]), a prefix
//! equivalence table ([`equivalence`]) and three strategies ([`strategies`]):
//! depth-first search, iterative limited discrepancy search and iterative
//! beam search. [`oracle`] holds exact reference solvers for small instances
//! and [`harness`] the benchmark record formats.
//!
//! ```
//! use sop_search::{Instance, SearchConfig, solve};
//!
//! let inst = Instance::parse("3\n0 1 5\n-1 0 1\n-1 -1 0\n").unwrap();
//! let report = solve(&inst, &SearchConfig::default());
//! assert_eq!(report.best_value, Some(2));
//! assert!(report.optimal_proven);
//! ```

pub mod bitset;
pub mod bounds;
pub mod equivalence;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod strategies;
pub mod tree;

pub use bitset::VertexSet;
pub use bounds::{BoundEvaluator, BoundKind, INFINITE_COST};
pub use equivalence::{EquivalenceDatabase, EquivalenceKey, Probe};
pub use instance::{Cost, Instance, InstanceError, Permutation};
pub use strategies::{
    greedy_descent, run_matrix, solve, solve_beam, solve_dfs, solve_lds, solve_with, SearchConfig,
    SearchReport, StopReason, Strategy,
};
pub use tree::{Node, SearchTree};
