use super::{IterationStat, Run};

/// Depth-first traversal, best child first. Stack memory stays within
/// `depth * branching`.
pub(crate) fn run(run: &mut Run) {
    let n = run.inst.len();
    let mut stack = vec![run.tree.root()];
    let before = run.counters.nodes_opened;
    while let Some(node) = stack.pop() {
        if run.out_of_budget() {
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
        stack.extend(children.into_iter().rev());
    }
    let exact = run.stop.is_none();
    run.iterations.push(IterationStat {
        parameter: 0,
        nodes: run.counters.nodes_opened - before,
        exact,
    });
    if exact {
        run.exhausted();
    }
}
