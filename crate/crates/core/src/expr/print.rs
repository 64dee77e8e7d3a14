use super::{CwExpr, Node, NodeKind};

enum Task<'a> {
    Open(&'a Node, usize),
    Close,
}

/// Canonical text: the `cw k=<k>` header, then one node per line with a
/// two-space indent per level and closing parentheses on the last line.
pub(crate) fn to_canonical(e: &CwExpr) -> String {
    let mut out = format!("cw k={}\n", e.palette());
    let mut first = true;
    let mut stack = vec![Task::Open(e.root(), 0)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Close => out.push(')'),
            Task::Open(node, depth) => {
                if !first {
                    out.push('\n');
                }
                first = false;
                out.push_str(&"  ".repeat(depth));
                match &node.kind {
                    NodeKind::Leaf { vertex, color } => {
                        out.push_str(&format!("(v {vertex} {color})"));
                    }
                    NodeKind::Union(l, r) => {
                        out.push_str("(union");
                        stack.push(Task::Close);
                        stack.push(Task::Open(r, depth + 1));
                        stack.push(Task::Open(l, depth + 1));
                    }
                    NodeKind::Recolor { from, to, child } => {
                        out.push_str(&format!("(recolor {from} {to}"));
                        stack.push(Task::Close);
                        stack.push(Task::Open(child, depth + 1));
                    }
                    NodeKind::Join { a, b, child } => {
                        out.push_str(&format!("(join {a} {b}"));
                        stack.push(Task::Close);
                        stack.push(Task::Open(child, depth + 1));
                    }
                }
            }
        }
    }
    out.push('\n');
    out
}
