//! The implicit search tree: a node is a feasible prefix starting at the
//! start vertex, and its children append one vertex whose predecessors are
//! all in the prefix already.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::bitset::VertexSet;
use crate::bounds::{BoundEvaluator, BoundKind, InOutSums};
use crate::instance::{Cost, Instance, Permutation};

/// Persistent prefix list shared between a node and its descendants.
#[derive(Debug)]
struct TrailLink {
    vertex: usize,
    parent: Option<Arc<TrailLink>>,
}

/// A search-tree node.
#[derive(Debug, Clone)]
pub struct Node {
    visited: VertexSet,
    trail: Arc<TrailLink>,
    last: usize,
    g: Cost,
    f: Cost,
    depth: usize,
    /// Remaining discrepancy budget, only meaningful for LDS.
    pub discrepancies: usize,
    sums: InOutSums,
    seq: u64,
}

impl Node {
    pub fn visited(&self) -> &VertexSet {
        &self.visited
    }

    pub fn last(&self) -> usize {
        self.last
    }

    /// Prefix cost.
    pub fn g(&self) -> Cost {
        self.g
    }

    /// Lower bound `g + h`.
    pub fn f(&self) -> Cost {
        self.f
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Creation sequence number within its search.
    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn inout_sums(&self) -> InOutSums {
        self.sums
    }

    /// Visited vertices in visiting order.
    pub fn prefix_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.depth);
        let mut link = Some(&self.trail);
        while let Some(l) = link {
            order.push(l.vertex);
            link = l.parent.as_ref();
        }
        order.reverse();
        order
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::new(self.prefix_order())
    }

    /// Total order used for every best-node choice: ascending `f`, then last
    /// vertex, then creation order.
    pub fn rank_cmp(&self, other: &Node) -> Ordering {
        self.f
            .cmp(&other.f)
            .then(self.last.cmp(&other.last))
            .then(self.seq.cmp(&other.seq))
    }
}

/// Root and child generation for one instance and bound.
#[derive(Debug, Clone)]
pub struct SearchTree<'a> {
    inst: &'a Instance,
    bound: BoundEvaluator,
    next_seq: u64,
}

impl<'a> SearchTree<'a> {
    pub fn new(inst: &'a Instance, kind: BoundKind) -> Self {
        Self {
            inst,
            bound: BoundEvaluator::new(inst, kind),
            next_seq: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn bound(&self) -> &BoundEvaluator {
        &self.bound
    }

    pub fn bound_mut(&mut self) -> &mut BoundEvaluator {
        &mut self.bound
    }

    /// Node holding only the start vertex.
    pub fn root(&mut self) -> Node {
        let n = self.inst.len();
        let s = self.inst.start();
        let visited = VertexSet::from_iter_with_capacity(n, [s]);
        let sums = self.bound.root_sums();
        let h = self.bound.estimate(self.inst, &visited, sums);
        Node {
            visited,
            trail: Arc::new(TrailLink {
                vertex: s,
                parent: None,
            }),
            last: s,
            g: 0,
            f: h,
            depth: 1,
            discrepancies: 0,
            sums,
            seq: self.fresh_seq(),
        }
    }

    /// Whether `v` may be appended to `parent`.
    #[inline]
    pub fn can_extend(&self, parent: &Node, v: usize) -> bool {
        let inst = self.inst;
        !parent.visited.contains(v)
            && (v != inst.end() || parent.depth + 1 == inst.len())
            && inst.preds(v).is_subset(&parent.visited)
            && inst.arc(parent.last, v).is_some()
    }

    /// Child of `parent` appending `v`; the caller checks [`can_extend`](Self::can_extend).
    pub fn child(&mut self, parent: &Node, v: usize) -> Node {
        let arc = self
            .inst
            .arc(parent.last, v)
            .expect("child over a forbidden arc");
        let mut visited = parent.visited.clone();
        visited.insert(v);
        let sums = self.bound.extend(parent.sums, parent.last, v);
        let g = parent.g + arc;
        let h = self.bound.estimate(self.inst, &visited, sums);
        Node {
            visited,
            trail: Arc::new(TrailLink {
                vertex: v,
                parent: Some(Arc::clone(&parent.trail)),
            }),
            last: v,
            g,
            f: g + h,
            depth: parent.depth + 1,
            discrepancies: 0,
            sums,
            seq: self.fresh_seq(),
        }
    }

    /// All feasible extensions of `parent`, best first. Empty at full depth
    /// and at dead ends.
    pub fn children(&mut self, parent: &Node) -> Vec<Node> {
        let mut out = Vec::new();
        for v in 0..self.inst.len() {
            if self.can_extend(parent, v) {
                out.push(self.child(parent, v));
            }
        }
        out.sort_by(Node::rank_cmp);
        out
    }

    fn fresh_seq(&mut self) -> u64 {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn feasible_orders_by_brute_force(inst: &Instance) -> BTreeSet<Vec<usize>> {
        let n = inst.len();
        let inner: Vec<usize> = (1..n - 1).collect();
        let mut out = BTreeSet::new();
        fn heap_permute(
            k: usize,
            a: &mut Vec<usize>,
            inst: &Instance,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            if k <= 1 {
                let mut order = vec![inst.start()];
                order.extend_from_slice(a);
                order.push(inst.end());
                if inst.check_feasible(&order) {
                    out.insert(order);
                }
                return;
            }
            for i in 0..k {
                heap_permute(k - 1, a, inst, out);
                if k % 2 == 0 {
                    a.swap(i, k - 1);
                } else {
                    a.swap(0, k - 1);
                }
            }
        }
        let mut a = inner;
        let k = a.len();
        heap_permute(k, &mut a, inst, &mut out);
        out
    }

    fn leaves(tree: &mut SearchTree, node: &Node, out: &mut Vec<Node>) {
        let kids = tree.children(node);
        assert!(kids.len() <= tree.instance().len() - node.depth());
        if node.depth() == tree.instance().len() {
            out.push(node.clone());
        }
        for k in kids {
            leaves(tree, &k, out);
        }
    }

    #[test]
    fn fig1_root_and_children() {
        let inst = Instance::parse(include_str!("../data/fig1.sop")).unwrap();
        let mut tree = SearchTree::new(&inst, BoundKind::Prefix);
        let root = tree.root();
        assert_eq!(
            (root.last(), root.g(), root.f(), root.depth()),
            (0, 0, 0, 1)
        );
        let kids: Vec<usize> = tree.children(&root).iter().map(Node::last).collect();
        // b (arc 1) then d (arc 2); c needs d, e must come last
        assert_eq!(kids, vec![1, 3]);
    }

    #[test]
    fn two_vertex_instance_has_single_leaf() {
        let inst = Instance::parse("2 0 4 -1 0").unwrap();
        let mut tree = SearchTree::new(&inst, BoundKind::InOut);
        let root = tree.root();
        let kids = tree.children(&root);
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].prefix_order(), vec![0, 1]);
        assert_eq!(kids[0].g(), 4);
        assert!(tree.children(&kids[0]).is_empty());
    }

    #[test]
    fn penultimate_depth_completes_at_end() {
        let inst = Instance::generate_random(7, 100, 0.0, 3);
        let mut tree = SearchTree::new(&inst, BoundKind::Prefix);
        let mut node = tree.root();
        while node.depth() < 6 {
            let kids = tree.children(&node);
            assert!(kids.iter().all(|k| k.last() != inst.end()));
            node = kids.into_iter().next().unwrap();
        }
        let kids = tree.children(&node);
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0].last(), inst.end());
    }

    #[test]
    fn exhaustive_expansion_enumerates_feasible_permutations() {
        for (seed, density) in [(1, 0.0), (2, 0.15), (3, 0.3), (4, 0.6), (5, 1.0)] {
            let inst = Instance::generate_random(8, 100, density, seed);
            for kind in BoundKind::ALL {
                let mut tree = SearchTree::new(&inst, kind);
                let root = tree.root();
                let mut found = vec![];
                leaves(&mut tree, &root, &mut found);
                for leaf in &found {
                    assert_eq!(
                        leaf.g(),
                        inst.evaluate_permutation(&leaf.prefix_order()).unwrap()
                    );
                    assert_eq!(leaf.f(), leaf.g());
                }
                let orders: BTreeSet<Vec<usize>> = found.iter().map(Node::prefix_order).collect();
                assert_eq!(orders.len(), found.len());
                assert_eq!(orders, feasible_orders_by_brute_force(&inst));
            }
        }
    }

    #[test]
    fn children_sorted_with_tie_break_and_consistent_state() {
        let inst = Instance::generate_random(30, 5, 0.1, 11);
        let mut tree = SearchTree::new(&inst, BoundKind::InOut);
        let root = tree.root();
        let kids = tree.children(&root);
        for w in kids.windows(2) {
            assert_eq!(w[0].rank_cmp(&w[1]), Ordering::Less);
        }
        for k in &kids {
            assert_eq!(k.g(), root.g() + inst.entry(root.last(), k.last()));
            assert!(k.f() >= k.g());
            assert_eq!(k.depth(), k.prefix_order().len());
            assert!(k.visited().contains(inst.start()));
        }
    }
}
