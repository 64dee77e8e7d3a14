use super::{CwExpr, Node, NodeKind, Partial};
use crate::error::{Error, Result};

/// Rewrites an expression into strict form with the same coloured graph.
///
/// Joins that add no edge and recolours of an unused colour are dropped. A
/// recolour `i -> j` where `j` is unused is replaced by exchanging `i` and `j`
/// throughout its operand: that operand then produces `j` exactly where it
/// used to produce `i`, which is what the recolour did. Every rewrite is
/// therefore exact, not merely up to a permutation of colours.
pub fn normalize(e: &CwExpr) -> Result<CwExpr> {
    let k = e.palette();
    let (root, _) = e.root().fold(|node, path, mut kids: Vec<(Node, Partial)>| {
        Ok(match &node.kind {
            NodeKind::Leaf { vertex, color } => {
                (Node::leaf(vertex.clone(), *color), Partial::leaf(vertex, *color))
            }
            NodeKind::Union(..) => {
                let (rn, rp) = kids.pop().unwrap();
                let (ln, lp) = kids.pop().unwrap();
                let (p, dups) = lp.union(rp);
                if let Some(v) = dups.first() {
                    return Err(Error::Input(format!("duplicate vertex id `{v}` at {path}")));
                }
                (Node::union(ln, rn), p)
            }
            NodeKind::Recolor { from, to, .. } => {
                let (mut n, mut p) = kids.pop().unwrap();
                if !p.is_used(*from) {
                    (n, p)
                } else if !p.is_used(*to) {
                    n.swap_colors(*from, *to);
                    p.recolor(*from, *to);
                    (n, p)
                } else {
                    p.recolor(*from, *to);
                    (Node::recolor(*from, *to, n), p)
                }
            }
            NodeKind::Join { a, b, .. } => {
                let (n, mut p) = kids.pop().unwrap();
                if p.join_adds_edge(*a, *b) {
                    p.join(*a, *b);
                    (Node::join(*a, *b, n), p)
                } else {
                    (n, p)
                }
            }
        })
    })?;
    CwExpr::new(k, root)
}

impl CwExpr {
    pub fn normalize(&self) -> Result<CwExpr> {
        normalize(self)
    }
}
