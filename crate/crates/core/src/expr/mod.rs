//! Clique-width expressions.
//!
//! An expression is built from single coloured vertices by three operations:
//! disjoint union, recolouring every vertex of colour `i` to `j`, and joining
//! every vertex of colour `i` to every vertex of colour `j`. The strict form
//! additionally requires union operands to be nonempty, both recolour colours
//! to be in use, and every join to add at least one edge.

mod eval;
mod normalize;
mod parse;
mod print;
mod validate;

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Color;

pub use eval::evaluate;
pub(crate) use eval::Partial;
pub use normalize::normalize;
pub use parse::{parse, parse_expr};
pub use validate::{validate_strict, Rule, ValidationReport, Violation};

/// Line and column (both 1-based) of a node in its source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf { vertex: String, color: Color },
    Union(Box<Node>, Box<Node>),
    Recolor { from: Color, to: Color, child: Box<Node> },
    Join { a: Color, b: Color, child: Box<Node> },
}

/// An expression node. Equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    pub pos: Option<Pos>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Node) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Node {}

impl Drop for Node {
    // Detach children onto a heap stack so deep trees drop without recursion.
    fn drop(&mut self) {
        fn detach(kind: &mut NodeKind, stack: &mut Vec<Node>) {
            let hole = || Node::leaf(String::new(), 0);
            match kind {
                NodeKind::Leaf { .. } => {}
                NodeKind::Union(l, r) => {
                    stack.push(std::mem::replace(&mut **l, hole()));
                    stack.push(std::mem::replace(&mut **r, hole()));
                }
                NodeKind::Recolor { child, .. } | NodeKind::Join { child, .. } => {
                    stack.push(std::mem::replace(&mut **child, hole()));
                }
            }
        }
        let mut stack = Vec::new();
        detach(&mut self.kind, &mut stack);
        while let Some(mut n) = stack.pop() {
            detach(&mut n.kind, &mut stack);
        }
    }
}

impl Node {
    pub fn leaf(vertex: impl Into<String>, color: Color) -> Node {
        NodeKind::Leaf {
            vertex: vertex.into(),
            color,
        }
        .into()
    }

    pub fn union(left: Node, right: Node) -> Node {
        NodeKind::Union(Box::new(left), Box::new(right)).into()
    }

    pub fn recolor(from: Color, to: Color, child: Node) -> Node {
        NodeKind::Recolor {
            from,
            to,
            child: Box::new(child),
        }
        .into()
    }

    pub fn join(a: Color, b: Color, child: Node) -> Node {
        NodeKind::Join {
            a,
            b,
            child: Box::new(child),
        }
        .into()
    }

    /// Left-nested union of a nonempty sequence.
    pub fn union_all(nodes: impl IntoIterator<Item = Node>) -> Option<Node> {
        nodes.into_iter().reduce(Node::union)
    }

    pub fn children(&self) -> Vec<&Node> {
        match &self.kind {
            NodeKind::Leaf { .. } => Vec::new(),
            NodeKind::Union(l, r) => vec![l, r],
            NodeKind::Recolor { child, .. } | NodeKind::Join { child, .. } => vec![child],
        }
    }

    /// Nodes in post-order, children before parents, left before right.
    /// Iterative so that very deep expressions do not exhaust the stack.
    pub fn post_order(&self) -> Vec<(&Node, NodePath)> {
        let mut out = Vec::new();
        let mut stack = vec![(self, NodePath::default(), false)];
        while let Some((node, path, expanded)) = stack.pop() {
            if expanded {
                out.push((node, path));
                continue;
            }
            let children = node.children();
            stack.push((node, path.clone(), true));
            for (i, child) in children.into_iter().enumerate().rev() {
                stack.push((child, path.child(i), false));
            }
        }
        out
    }

    /// Bottom-up fold; `f` receives each node with its children's results in order.
    pub fn fold<T, F>(&self, mut f: F) -> Result<T>
    where
        F: FnMut(&Node, &NodePath, Vec<T>) -> Result<T>,
    {
        let mut values: Vec<T> = Vec::new();
        for (node, path) in self.post_order() {
            let arity = node.children().len();
            let args = values.split_off(values.len() - arity);
            values.push(f(node, &path, args)?);
        }
        Ok(values.pop().expect("fold over a nonempty tree"))
    }

    pub fn size(&self) -> usize {
        self.post_order().len()
    }

    /// Largest colour mentioned anywhere in the subtree.
    pub fn max_color(&self) -> Color {
        self.post_order()
            .into_iter()
            .map(|(n, _)| match &n.kind {
                NodeKind::Leaf { color, .. } => *color,
                NodeKind::Union(..) => 0,
                NodeKind::Recolor { from, to, .. } => (*from).max(*to),
                NodeKind::Join { a, b, .. } => (*a).max(*b),
            })
            .max()
            .unwrap_or(0)
    }

    /// Exchanges colours `x` and `y` throughout the subtree.
    pub fn swap_colors(&mut self, x: Color, y: Color) {
        let swap = |c: &mut Color| {
            if *c == x {
                *c = y;
            } else if *c == y {
                *c = x;
            }
        };
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match &mut node.kind {
                NodeKind::Leaf { color, .. } => swap(color),
                NodeKind::Union(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
                NodeKind::Recolor { from, to, child } => {
                    swap(from);
                    swap(to);
                    stack.push(child);
                }
                NodeKind::Join { a, b, child } => {
                    swap(a);
                    swap(b);
                    stack.push(child);
                }
            }
        }
    }
}

impl From<NodeKind> for Node {
    fn from(kind: NodeKind) -> Node {
        Node { kind, pos: None }
    }
}

/// Position of a node in the tree: child indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(Vec<u8>);

impl NodePath {
    pub fn child(&self, i: usize) -> NodePath {
        let mut steps = self.0.clone();
        steps.push(i as u8);
        NodePath(steps)
    }

    pub fn steps(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for s in &self.0 {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

/// A clique-width expression over the palette `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwExpr {
    palette: Color,
    root: Node,
}

impl CwExpr {
    /// Rejects a zero palette and recolours or joins with `i == j`.
    /// Colour ranges and the strict side conditions are left to
    /// [`validate_strict`].
    pub fn new(palette: Color, root: Node) -> Result<CwExpr> {
        if palette == 0 {
            return Err(Error::Input("palette size must be positive".into()));
        }
        for (node, path) in root.post_order() {
            match node.kind {
                NodeKind::Recolor { from, to, .. } if from == to => {
                    return Err(Error::Input(format!(
                        "recolor at {path}: i and j must differ (both {from})"
                    )))
                }
                NodeKind::Join { a, b, .. } if a == b => {
                    return Err(Error::Input(format!(
                        "join at {path}: i and j must differ (both {a})"
                    )))
                }
                _ => {}
            }
        }
        Ok(CwExpr { palette, root })
    }

    pub fn palette(&self) -> Color {
        self.palette
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    /// Leaf vertex ids in left-to-right order.
    pub fn leaves(&self) -> Vec<&str> {
        self.root
            .post_order()
            .into_iter()
            .filter_map(|(n, _)| match &n.kind {
                NodeKind::Leaf { vertex, .. } => Some(vertex.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Colours mentioned anywhere in the expression.
    pub fn colors_mentioned(&self) -> std::collections::BTreeSet<Color> {
        let mut out = std::collections::BTreeSet::new();
        for (n, _) in self.root.post_order() {
            match &n.kind {
                NodeKind::Leaf { color, .. } => {
                    out.insert(*color);
                }
                NodeKind::Union(..) => {}
                NodeKind::Recolor { from, to, .. } => {
                    out.extend([*from, *to]);
                }
                NodeKind::Join { a, b, .. } => {
                    out.extend([*a, *b]);
                }
            }
        }
        out
    }
}

impl fmt::Display for CwExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_canonical(self))
    }
}
