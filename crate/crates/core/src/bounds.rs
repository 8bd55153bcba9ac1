//! Suffix estimates `h(n)` for the lower bound `f(n) = g(n) + h(n)`.
//!
//! Three evaluators are provided:
//!
//! * [`BoundKind::Prefix`]: `h = 0`.
//! * [`BoundKind::InOut`]: the larger of the summed cheapest ingoing arcs of
//!   the unvisited vertices and the summed cheapest outgoing arcs of the
//!   unvisited vertices plus the last one (the end vertex excluded). Both sums
//!   are carried along a branch and updated in constant time.
//! * [`BoundKind::Mst`]: weight of a minimum spanning tree over the unvisited
//!   vertices, with arc costs symmetrized as `min(w(a,b), w(b,a))` and
//!   precedence-violating arcs treated as infinite. Recomputed with a dense
//!   Prim scan at every node.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::instance::{Cost, Instance};

/// Stands for `+inf`. Large enough to dominate any tour cost, small enough
/// that adding a prefix cost cannot overflow.
pub const INFINITE_COST: Cost = i64::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Prefix,
    #[serde(rename = "io")]
    InOut,
    Mst,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::Prefix, BoundKind::InOut, BoundKind::Mst];

    /// Short tag used in configuration descriptors (`P`, `IO`, `MST`).
    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::Prefix => "P",
            BoundKind::InOut => "IO",
            BoundKind::Mst => "MST",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Prefix => "prefix",
            BoundKind::InOut => "io",
            BoundKind::Mst => "mst",
        })
    }
}

impl FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "p" | "prefix" => Ok(BoundKind::Prefix),
            "io" | "inout" => Ok(BoundKind::InOut),
            "mst" => Ok(BoundKind::Mst),
            other => Err(format!(
                "unknown bound {other:?} (expected prefix, io or mst)"
            )),
        }
    }
}

/// Running sums of the ingoing/outgoing estimate along one branch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InOutSums {
    pub sum_in: Cost,
    pub sum_out: Cost,
}

impl InOutSums {
    #[inline]
    pub fn estimate(self) -> Cost {
        self.sum_in.max(self.sum_out)
    }
}

/// Computes `h(n)` for one search. Holds scratch buffers, so each search
/// owns its evaluator.
#[derive(Debug, Clone)]
pub struct BoundEvaluator {
    kind: BoundKind,
    min_in: Vec<Cost>,
    min_out: Vec<Cost>,
    root: InOutSums,
    scratch_vertices: Vec<usize>,
    scratch_dist: Vec<Cost>,
}

impl BoundEvaluator {
    pub fn new(inst: &Instance, kind: BoundKind) -> Self {
        let n = inst.len();
        let cheapest =
            |arcs: &mut dyn Iterator<Item = Option<Cost>>| arcs.flatten().min().unwrap_or(0);
        let min_in: Vec<Cost> = (0..n)
            .map(|v| cheapest(&mut (0..n).filter(|&u| u != v).map(|u| inst.arc(u, v))))
            .collect();
        let min_out: Vec<Cost> = (0..n)
            .map(|u| cheapest(&mut (0..n).filter(|&v| v != u).map(|v| inst.arc(u, v))))
            .collect();
        let root = InOutSums {
            sum_in: (0..n)
                .filter(|&v| v != inst.start())
                .map(|v| min_in[v])
                .sum(),
            sum_out: (0..n)
                .filter(|&u| u != inst.end())
                .map(|u| min_out[u])
                .sum(),
        };
        Self {
            kind,
            min_in,
            min_out,
            root,
            scratch_vertices: Vec::with_capacity(n),
            scratch_dist: Vec::with_capacity(n),
        }
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    /// Cheapest allowed arc entering `v`.
    pub fn min_in(&self, v: usize) -> Cost {
        self.min_in[v]
    }

    /// Cheapest allowed arc leaving `u`.
    pub fn min_out(&self, u: usize) -> Cost {
        self.min_out[u]
    }

    /// Sums at the root node (only the start vertex visited).
    pub fn root_sums(&self) -> InOutSums {
        self.root
    }

    /// Sums after appending `added` to a prefix ending at `last`.
    #[inline]
    pub fn extend(&self, sums: InOutSums, last: usize, added: usize) -> InOutSums {
        InOutSums {
            sum_in: sums.sum_in - self.min_in[added],
            sum_out: sums.sum_out - self.min_out[last],
        }
    }

    /// Inverse of [`extend`](Self::extend).
    #[inline]
    pub fn retract(&self, sums: InOutSums, last: usize, added: usize) -> InOutSums {
        InOutSums {
            sum_in: sums.sum_in + self.min_in[added],
            sum_out: sums.sum_out + self.min_out[last],
        }
    }

    /// Ingoing/outgoing estimate recomputed from the visited set.
    pub fn inout_from_scratch(&self, inst: &Instance, visited: &VertexSet, last: usize) -> Cost {
        let n = inst.len();
        let sum_in: Cost = (0..n)
            .filter(|&v| !visited.contains(v))
            .map(|v| self.min_in[v])
            .sum();
        let sum_out: Cost = (0..n)
            .filter(|&u| (!visited.contains(u) || u == last) && u != inst.end())
            .map(|u| self.min_out[u])
            .sum();
        sum_in.max(sum_out)
    }

    /// MST weight over the vertices outside `visited`; `INFINITE_COST` when
    /// they cannot be connected.
    pub fn mst(&mut self, inst: &Instance, visited: &VertexSet) -> Cost {
        let vertices = &mut self.scratch_vertices;
        vertices.clear();
        vertices.extend((0..inst.len()).filter(|&v| !visited.contains(v)));
        let k = vertices.len();
        if k <= 1 {
            return 0;
        }
        let dist = &mut self.scratch_dist;
        dist.clear();
        dist.resize(k, INFINITE_COST);
        // in-tree vertices are swapped to the front of `vertices`
        let mut total = 0;
        let mut tree_size = 1;
        let mut newest = vertices[0];
        loop {
            let mut best = tree_size;
            for i in tree_size..k {
                let d = symmetric_cost(inst, newest, vertices[i]);
                if d < dist[i] {
                    dist[i] = d;
                }
                if dist[i] < dist[best] {
                    best = i;
                }
            }
            if dist[best] >= INFINITE_COST {
                return INFINITE_COST;
            }
            total += dist[best];
            vertices.swap(tree_size, best);
            dist.swap(tree_size, best);
            newest = vertices[tree_size];
            tree_size += 1;
            if tree_size == k {
                return total;
            }
        }
    }

    /// Suffix estimate for a node given its visited set, last vertex and
    /// carried sums.
    #[inline]
    pub fn estimate(&mut self, inst: &Instance, visited: &VertexSet, sums: InOutSums) -> Cost {
        match self.kind {
            BoundKind::Prefix => 0,
            BoundKind::InOut => sums.estimate(),
            BoundKind::Mst => self.mst(inst, visited),
        }
    }
}

/// `min(w(a,b), w(b,a))` with forbidden arcs counted as infinite.
#[inline]
pub fn symmetric_cost(inst: &Instance, a: usize, b: usize) -> Cost {
    let ab = inst.arc(a, b).unwrap_or(INFINITE_COST);
    let ba = inst.arc(b, a).unwrap_or(INFINITE_COST);
    ab.min(ba)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Kruskal with a plain union-find over the same symmetrized edges.
    fn kruskal(inst: &Instance, vertices: &[usize]) -> Cost {
        let mut edges = vec![];
        for (i, &a) in vertices.iter().enumerate() {
            for &b in &vertices[i + 1..] {
                let w = symmetric_cost(inst, a, b);
                if w < INFINITE_COST {
                    edges.push((w, a, b));
                }
            }
        }
        edges.sort_unstable();
        let mut parent: Vec<usize> = (0..inst.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let (mut total, mut joined) = (0, 0);
        for (w, a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                total += w;
                joined += 1;
            }
        }
        if vertices.len() > 1 && joined + 1 < vertices.len() {
            INFINITE_COST
        } else {
            total
        }
    }

    #[test]
    fn chain_instance_estimates() {
        let inst = Instance::parse("3\n0 1 5\n-1 0 1\n-1 -1 0\n").unwrap();
        let eval = BoundEvaluator::new(&inst, BoundKind::InOut);
        assert_eq!((eval.min_in(1), eval.min_in(2)), (1, 1));
        assert_eq!((eval.min_out(0), eval.min_out(1)), (1, 1));
        assert_eq!(
            eval.root_sums(),
            InOutSums {
                sum_in: 2,
                sum_out: 2
            }
        );
        assert_eq!(eval.root_sums().estimate(), 2);
        let leaf = eval.extend(eval.extend(eval.root_sums(), 0, 1), 1, 2);
        assert_eq!(leaf.estimate(), 0);
    }

    #[test]
    fn mst_trivial_suffixes() {
        let inst = Instance::generate_random(6, 100, 0.3, 9);
        let mut eval = BoundEvaluator::new(&inst, BoundKind::Mst);
        assert_eq!(eval.mst(&inst, &VertexSet::full(6)), 0);
        let mut one_left = VertexSet::full(6);
        one_left.remove(5);
        assert_eq!(eval.mst(&inst, &one_left), 0);
    }

    #[test]
    fn mst_uses_cheaper_direction_and_skips_forbidden() {
        let inst = Instance::parse("4\n0 1 1 1\n-1 0 5 1\n-1 3 0 1\n-1 -1 -1 0").unwrap();
        assert_eq!(symmetric_cost(&inst, 1, 2), 3);
        assert_eq!(symmetric_cost(&inst, 3, 1), 1);
        let mut eval = BoundEvaluator::new(&inst, BoundKind::Mst);
        let visited = VertexSet::from_iter_with_capacity(4, [0]);
        assert_eq!(eval.mst(&inst, &visited), 2);
    }

    #[test]
    fn extend_then_retract_restores_root() {
        let inst = Instance::generate_random(40, 1000, 0.3, 5);
        let eval = BoundEvaluator::new(&inst, BoundKind::InOut);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut path = vec![0usize];
        let mut sums = vec![eval.root_sums()];
        let mut visited = VertexSet::from_iter_with_capacity(40, [0]);
        for _ in 0..38 {
            let open: Vec<usize> = (1..39)
                .filter(|&v| !visited.contains(v) && inst.preds(v).is_subset(&visited))
                .collect();
            let v = open[rng.gen_range(0..open.len())];
            let last = *path.last().unwrap();
            sums.push(eval.extend(*sums.last().unwrap(), last, v));
            visited.insert(v);
            path.push(v);
        }
        let mut cur = *sums.last().unwrap();
        while path.len() > 1 {
            let v = path.pop().unwrap();
            cur = eval.retract(cur, *path.last().unwrap(), v);
        }
        assert_eq!(cur, eval.root_sums());
    }

    proptest! {
        #[test]
        fn prim_matches_kruskal(n in 3usize..25, density in 0.0f64..0.8, seed in any::<u64>(), mask in any::<u64>()) {
            let inst = Instance::generate_random(n, 1000, density, seed);
            let mut eval = BoundEvaluator::new(&inst, BoundKind::Mst);
            let visited = VertexSet::from_iter_with_capacity(n, (0..n).filter(|v| mask & (1 << v) != 0));
            let suffix: Vec<usize> = (0..n).filter(|&v| !visited.contains(v)).collect();
            prop_assert_eq!(eval.mst(&inst, &visited), kruskal(&inst, &suffix));
        }
    }
}
