use super::{IterationStat, Run};

/// Iterative limited discrepancy search.
///
/// Each pass is a stack traversal where the i-th best child of a node with
/// budget `b` receives budget `b - i`; the child receiving budget 0 is the
/// last one pushed. A pass with parameter `d` starts the root at `d - 1`.
pub(crate) fn run(run: &mut Run) {
    let n = run.inst.len();
    let mut d = run.config.lds_init;
    while run.iteration_budget_left() {
        let before = run.counters.nodes_opened;
        let mut exact = true;
        let mut root = run.tree.root();
        root.discrepancies = (d - 1) as usize;
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if run.out_of_budget() {
                exact = false;
                break;
            }
            if !run.filter(&node) {
                continue;
            }
            run.counters.nodes_opened += 1;
            if node.depth() == n {
                run.offer_leaf(&node);
                continue;
            }
            let children = run.tree.children(&node);
            let mut pushed = Vec::with_capacity(children.len().min(node.discrepancies + 1));
            let mut rest = children.into_iter().enumerate();
            for (i, mut child) in rest.by_ref() {
                if run.bound_cut(&child) {
                    // sorted by f: every later sibling is cut as well
                    run.counters.nodes_cut_bound += 1;
                    break;
                }
                child.discrepancies = node.discrepancies - i;
                let last_allowed = child.discrepancies == 0;
                pushed.push(child);
                if last_allowed {
                    break;
                }
            }
            for (_, sibling) in rest {
                if run.bound_cut(&sibling) {
                    run.counters.nodes_cut_bound += 1;
                } else {
                    run.counters.nodes_cut_heuristic += 1;
                    exact = false;
                }
            }
            stack.extend(pushed.into_iter().rev());
        }
        run.iterations.push(IterationStat {
            parameter: d,
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
        d += 1;
    }
}
