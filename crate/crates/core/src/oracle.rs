//! Exact reference solvers for small instances. They share nothing with the
//! tree search beyond the [`Instance`] accessors and are used to check it.

use rustc_hash::FxHashMap;

use crate::instance::{Cost, Instance, Permutation};

pub const ENUMERATE_MAX_VERTICES: usize = 12;
pub const DP_MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance has {n} vertices, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("instance has no feasible permutation")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub optimum: Cost,
    pub permutation: Permutation,
    pub feasible_count: u64,
}

/// Tries every ordering of the inner vertices, abandoning partial orders that
/// already break a precedence. Returns the cheapest feasible permutation
/// (first in lexicographic order among ties).
pub fn enumerate(inst: &Instance) -> Result<Enumeration, OracleError> {
    let n = inst.len();
    if n > ENUMERATE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            limit: ENUMERATE_MAX_VERTICES,
        });
    }
    let preds: Vec<u32> = (0..n).map(|v| mask_of(inst.preds(v).iter())).collect();
    let mut state = Enumerator {
        inst,
        preds,
        order: vec![inst.start()],
        best: None,
        count: 0,
    };
    state.extend(1 << inst.start(), 0);
    let count = state.count;
    match state.best {
        Some((optimum, order)) => Ok(Enumeration {
            optimum,
            permutation: Permutation::new(order),
            feasible_count: count,
        }),
        None => Err(OracleError::Infeasible),
    }
}

struct Enumerator<'a> {
    inst: &'a Instance,
    preds: Vec<u32>,
    order: Vec<usize>,
    best: Option<(Cost, Vec<usize>)>,
    count: u64,
}

impl Enumerator<'_> {
    fn extend(&mut self, visited: u32, cost: Cost) {
        let n = self.inst.len();
        let last = *self.order.last().unwrap();
        if self.order.len() == n {
            self.count += 1;
            if self.best.as_ref().is_none_or(|(b, _)| cost < *b) {
                self.best = Some((cost, self.order.clone()));
            }
            return;
        }
        for v in 0..n {
            let is_end = v == self.inst.end();
            if visited & (1 << v) != 0
                || (is_end && self.order.len() != n - 1)
                || (!is_end && self.order.len() == n - 1)
            {
                continue;
            }
            if self.preds[v] & !visited != 0 {
                continue;
            }
            self.order.push(v);
            self.extend(visited | (1 << v), cost + self.inst.entry(last, v));
            self.order.pop();
        }
    }
}

fn mask_of(vs: impl Iterator<Item = usize>) -> u32 {
    vs.fold(0, |m, v| m | (1 << v))
}

/// Summary of a dynamic-programming solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpSolution {
    pub optimum: Cost,
    /// Number of `(set, last)` states materialized.
    pub states: usize,
}

/// Held-Karp style DP over `(visited set, last vertex)` states, restricted to
/// precedence-feasible sets: `f(S + i, i) = min_j f(S, j) + w(j, i)` over
/// states `(S, j)` where all predecessors of `i` lie in `S`.
pub fn solve_dp(inst: &Instance) -> Result<Cost, OracleError> {
    dp_table(inst).map(|s| s.optimum)
}

pub fn dp_table(inst: &Instance) -> Result<DpSolution, OracleError> {
    let n = inst.len();
    if n > DP_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n,
            limit: DP_MAX_VERTICES,
        });
    }
    let preds: Vec<u32> = (0..n).map(|v| mask_of(inst.preds(v).iter())).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut layer: FxHashMap<(u32, usize), Cost> = FxHashMap::default();
    layer.insert((1 << inst.start(), inst.start()), 0);
    let mut states = 1;
    // one layer per popcount
    for size in 1..n {
        let mut next: FxHashMap<(u32, usize), Cost> = FxHashMap::default();
        for (&(set, j), &cost) in &layer {
            for i in 0..n {
                let is_end = i == inst.end();
                if set & (1 << i) != 0 || preds[i] & !set != 0 || (is_end != (size == n - 1)) {
                    continue;
                }
                let Some(arc) = inst.arc(j, i) else { continue };
                let entry = next.entry((set | (1 << i), i)).or_insert(Cost::MAX);
                *entry = (*entry).min(cost + arc);
            }
        }
        states += next.len();
        layer = next;
    }
    layer
        .get(&(full, inst.end()))
        .map(|&optimum| DpSolution { optimum, states })
        .ok_or(OracleError::Infeasible)
}

/// Cheapest completion from any partial state `(visited, last)`, by
/// memoized exhaustive search over the remaining vertices.
#[derive(Debug)]
pub struct CompletionOracle<'a> {
    inst: &'a Instance,
    preds: Vec<u32>,
    memo: FxHashMap<(u32, usize), Option<Cost>>,
}

impl<'a> CompletionOracle<'a> {
    pub fn new(inst: &'a Instance) -> Result<Self, OracleError> {
        let n = inst.len();
        if n > DP_MAX_VERTICES {
            return Err(OracleError::TooLarge {
                n,
                limit: DP_MAX_VERTICES,
            });
        }
        Ok(Self {
            inst,
            preds: (0..n).map(|v| mask_of(inst.preds(v).iter())).collect(),
            memo: FxHashMap::default(),
        })
    }

    /// Minimum cost of arcs still to be added to reach the end, `None` if
    /// no feasible completion exists.
    pub fn best_completion(
        &mut self,
        visited: impl IntoIterator<Item = usize>,
        last: usize,
    ) -> Option<Cost> {
        let set = mask_of(visited.into_iter());
        self.solve(set, last)
    }

    fn solve(&mut self, set: u32, last: usize) -> Option<Cost> {
        let n = self.inst.len();
        let size = set.count_ones() as usize;
        if size == n {
            return (last == self.inst.end()).then_some(0);
        }
        if let Some(&known) = self.memo.get(&(set, last)) {
            return known;
        }
        let mut best: Option<Cost> = None;
        for v in 0..n {
            let is_end = v == self.inst.end();
            if set & (1 << v) != 0 || self.preds[v] & !set != 0 || (is_end != (size == n - 1)) {
                continue;
            }
            let Some(arc) = self.inst.arc(last, v) else {
                continue;
            };
            if let Some(rest) = self.solve(set | (1 << v), v) {
                let total = arc + rest;
                best = Some(best.map_or(total, |b| b.min(total)));
            }
        }
        self.memo.insert((set, last), best);
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_oracles() {
        let inst = Instance::parse(include_str!("../data/fig1.sop")).unwrap();
        let e = enumerate(&inst).unwrap();
        assert_eq!(e.optimum, 6);
        assert_eq!(e.permutation.as_slice(), &[0, 1, 3, 2, 4]);
        assert_eq!(e.feasible_count, 3);
        assert_eq!(solve_dp(&inst), Ok(6));
        let mut c = CompletionOracle::new(&inst).unwrap();
        assert_eq!(c.best_completion([0], 0), Some(6));
        assert_eq!(c.best_completion([0, 3], 3), Some(3 + 3 + 2));
    }

    #[test]
    fn two_vertex_instance() {
        let inst = Instance::parse("2 0 9 -1 0").unwrap();
        let e = enumerate(&inst).unwrap();
        assert_eq!(
            (e.optimum, e.permutation.as_slice(), e.feasible_count),
            (9, &[0usize, 1][..], 1)
        );
        assert_eq!(solve_dp(&inst), Ok(9));
    }

    #[test]
    fn chain_has_single_tour() {
        let inst = Instance::generate_random(9, 1000, 1.0, 5);
        let e = enumerate(&inst).unwrap();
        assert_eq!(e.feasible_count, 1);
        assert_eq!(
            inst.evaluate_permutation(&e.permutation).unwrap(),
            e.optimum
        );
        assert_eq!(solve_dp(&inst), Ok(e.optimum));
        assert_eq!(dp_table(&inst).unwrap().states, 9);
    }

    #[test]
    fn size_guards() {
        let big = Instance::generate_random(13, 10, 0.0, 1);
        assert!(matches!(enumerate(&big), Err(OracleError::TooLarge { .. })));
        let huge = Instance::generate_random(25, 10, 0.0, 1);
        assert!(matches!(solve_dp(&huge), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn oracles_agree_on_random_instances() {
        for seed in 0..60u64 {
            for density in [0.0, 0.15, 0.3, 0.6, 1.0] {
                let n = 4 + (seed as usize % 7);
                let inst = Instance::generate_random(n, 1000, density, seed);
                let e = enumerate(&inst).unwrap();
                assert_eq!(
                    inst.evaluate_permutation(&e.permutation).unwrap(),
                    e.optimum
                );
                assert_eq!(
                    solve_dp(&inst),
                    Ok(e.optimum),
                    "n={n} density={density} seed={seed}"
                );
                let mut c = CompletionOracle::new(&inst).unwrap();
                assert_eq!(
                    c.best_completion([inst.start()], inst.start()),
                    Some(e.optimum)
                );
            }
        }
    }

    #[test]
    fn dp_state_count_shrinks_with_precedences() {
        let n = 10;
        let free = dp_table(&Instance::generate_random(n, 100, 0.0, 1))
            .unwrap()
            .states;
        let constrained = dp_table(&Instance::generate_random(n, 100, 0.3, 1))
            .unwrap()
            .states;
        assert!(free <= (1 << n) * n);
        assert!(constrained < free);
    }
}
