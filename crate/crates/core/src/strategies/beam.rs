use super::{IterationStat, Run};
use crate::tree::Node;

/// Iterative beam search: level-synchronous passes keeping the best `D`
/// children per level, with `D` growing geometrically between passes.
pub(crate) fn run(run: &mut Run) {
    let n = run.inst.len();
    let mut width = run.config.beam_init.max(1);
    while run.iteration_budget_left() {
        let before = run.counters.nodes_opened;
        let mut exact = true;
        let keep = usize::try_from(width).unwrap_or(usize::MAX);
        let mut candidates: Vec<Node> = vec![run.tree.root()];
        'levels: while !candidates.is_empty() {
            let mut next = Vec::new();
            for node in candidates.drain(..) {
                if run.out_of_budget() {
                    exact = false;
                    break 'levels;
                }
                // the incumbent may have improved since this node was kept
                if run.bound_cut(&node) {
                    run.counters.nodes_cut_bound += 1;
                    continue;
                }
                run.counters.nodes_opened += 1;
                for child in run.tree.children(&node) {
                    if child.depth() == n {
                        run.offer_leaf(&child);
                    } else if run.filter(&child) {
                        next.push(child);
                    }
                }
            }
            if next.len() > keep {
                next.select_nth_unstable_by(keep - 1, Node::rank_cmp);
                run.counters.nodes_cut_heuristic += (next.len() - keep) as u64;
                next.truncate(keep);
                exact = false;
            }
            next.sort_unstable_by(Node::rank_cmp);
            candidates = next;
        }
        run.iterations.push(IterationStat {
            parameter: width,
            nodes: run.counters.nodes_opened - before,
            exact,
        });
        if run.stop.is_some() {
            return;
        }
        if exact {
            run.exhausted();
            return;
        }
        width = width.saturating_mul(run.config.beam_growth);
    }
}
