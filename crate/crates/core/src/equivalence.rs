//! Prefix equivalence table.
//!
//! Two prefixes covering the same vertex set and ending at the same vertex
//! have interchangeable completions, so the costlier one can be dropped. The
//! table remembers the cheapest prefix cost seen for every such state and
//! cuts a node only when a strictly cheaper equivalent was recorded, which
//! keeps optimality proofs valid when restarting searches revisit nodes.

use rustc_hash::FxHashMap;

use crate::bitset::VertexSet;
use crate::instance::Cost;
use crate::tree::Node;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivalenceKey {
    pub visited: VertexSet,
    pub last: usize,
}

impl EquivalenceKey {
    pub fn new(visited: VertexSet, last: usize) -> Self {
        debug_assert!(visited.contains(last));
        Self { visited, last }
    }

    pub fn of(node: &Node) -> Self {
        Self::new(node.visited().clone(), node.last())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Cut,
    Keep,
}

#[derive(Debug, Clone, Default)]
pub struct EquivalenceDatabase {
    table: FxHashMap<EquivalenceKey, Cost>,
    capacity_limit: Option<usize>,
    saturated: bool,
    cut_on_equal: bool,
}

impl EquivalenceDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table refusing new entries beyond `limit`.
    pub fn with_capacity_limit(limit: usize) -> Self {
        Self {
            capacity_limit: Some(limit),
            ..Self::default()
        }
    }

    /// Also cut nodes whose cost equals the recorded one. Only meant for
    /// node-count comparisons: it breaks proofs in restarting searches.
    pub fn with_cuts_on_equal_cost(mut self) -> Self {
        self.cut_on_equal = true;
        self
    }

    /// Checks `key` at cost `g` and records it when not dominated.
    pub fn probe(&mut self, key: EquivalenceKey, g: Cost) -> Probe {
        if let Some(stored) = self.table.get_mut(&key) {
            if *stored < g || (self.cut_on_equal && *stored == g) {
                return Probe::Cut;
            }
            *stored = g;
            return Probe::Keep;
        }
        if self
            .capacity_limit
            .is_some_and(|cap| self.table.len() >= cap)
        {
            self.saturated = true;
        } else {
            self.table.insert(key, g);
        }
        Probe::Keep
    }

    pub fn probe_node(&mut self, node: &Node) -> Probe {
        self.probe(EquivalenceKey::of(node), node.g())
    }

    pub fn get(&self, key: &EquivalenceKey) -> Option<Cost> {
        self.table.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `true` once an insertion was refused for capacity.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn reset(&mut self) {
        self.table.clear();
        self.saturated = false;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EquivalenceKey, Cost)> {
        self.table.iter().map(|(k, v)| (k, *v))
    }
}
