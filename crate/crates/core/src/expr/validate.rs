use serde::Serialize;

use super::{CwExpr, NodeKind, NodePath, Partial};
use crate::graph::Color;

/// Side conditions checked by [`validate_strict`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    DupVertex,
    ColorRange,
    Op2IUnused,
    Op2JUnused,
    Op3NoNewEdge,
    EmptyOperand,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::DupVertex => "DUP_VERTEX",
            Rule::ColorRange => "COLOR_RANGE",
            Rule::Op2IUnused => "OP2_I_UNUSED",
            Rule::Op2JUnused => "OP2_J_UNUSED",
            Rule::Op3NoNewEdge => "OP3_NO_NEW_EDGE",
            Rule::EmptyOperand => "EMPTY_OPERAND",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub rule: Rule,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub strict_valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Checks every node against the colouring its child evaluates to.
///
/// Violations are listed in post-order, so the first one is the deepest
/// offending node on the leftmost branch.
pub fn validate_strict(e: &CwExpr) -> ValidationReport {
    let k = e.palette();
    let mut violations = Vec::new();
    let mut push = |path: &NodePath, rule: Rule, message: String| {
        violations.push(Violation {
            path: path.to_string(),
            rule,
            message,
        })
    };
    let in_range = |c: Color| (1..=k).contains(&c);

    let result = e.root().fold(|node, path, mut kids: Vec<Partial>| {
        Ok(match &node.kind {
            NodeKind::Leaf { vertex, color } => {
                if !in_range(*color) {
                    push(path, Rule::ColorRange, format!("colour {color} outside 1..={k}"));
                }
                Partial::leaf(vertex, *color)
            }
            NodeKind::Union(..) => {
                let right = kids.pop().unwrap();
                let left = kids.pop().unwrap();
                for (side, p) in [("left", &left), ("right", &right)] {
                    if p.colors.is_empty() {
                        push(path, Rule::EmptyOperand, format!("{side} operand is empty"));
                    }
                }
                let (merged, dups) = left.union(right);
                for v in dups {
                    push(path, Rule::DupVertex, format!("vertex `{v}` appears on both sides"));
                }
                merged
            }
            NodeKind::Recolor { from, to, .. } => {
                let mut p = kids.pop().unwrap();
                for c in [*from, *to] {
                    if !in_range(c) {
                        push(path, Rule::ColorRange, format!("colour {c} outside 1..={k}"));
                    }
                }
                if !p.is_used(*from) {
                    push(path, Rule::Op2IUnused, format!("colour {from} is not used by the operand"));
                }
                if !p.is_used(*to) {
                    push(path, Rule::Op2JUnused, format!("colour {to} is not used by the operand"));
                }
                p.recolor(*from, *to);
                p
            }
            NodeKind::Join { a, b, .. } => {
                let mut p = kids.pop().unwrap();
                for c in [*a, *b] {
                    if !in_range(c) {
                        push(path, Rule::ColorRange, format!("colour {c} outside 1..={k}"));
                    }
                }
                if !p.join_adds_edge(*a, *b) {
                    push(
                        path,
                        Rule::Op3NoNewEdge,
                        format!("joining colours {a} and {b} adds no edge"),
                    );
                }
                p.join(*a, *b);
                p
            }
        })
    });
    debug_assert!(result.is_ok());
    ValidationReport {
        strict_valid: violations.is_empty(),
        violations,
    }
}

impl CwExpr {
    pub fn validate_strict(&self) -> ValidationReport {
        validate_strict(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Node;

    fn rules(e: &CwExpr) -> Vec<(String, Rule)> {
        validate_strict(e)
            .violations
            .into_iter()
            .map(|v| (v.path, v.rule))
            .collect()
    }

    #[test]
    fn recolor_to_unused_colour() {
        let e = CwExpr::new(3, Node::recolor(1, 2, Node::leaf("a", 1))).unwrap();
        assert_eq!(rules(&e), vec![("root".into(), Rule::Op2JUnused)]);
        let e = CwExpr::new(3, Node::recolor(2, 1, Node::leaf("a", 1))).unwrap();
        assert_eq!(rules(&e), vec![("root".into(), Rule::Op2IUnused)]);
    }

    #[test]
    fn repeated_join_adds_nothing() {
        let inner = Node::join(1, 2, Node::union(Node::leaf("a", 1), Node::leaf("b", 2)));
        let e = CwExpr::new(2, Node::join(1, 2, inner.clone())).unwrap();
        assert_eq!(rules(&e), vec![("root".into(), Rule::Op3NoNewEdge)]);
        assert!(validate_strict(&CwExpr::new(2, inner).unwrap()).strict_valid);
    }

    #[test]
    fn duplicates_and_ranges() {
        let e = CwExpr::new(2, Node::union(Node::leaf("a", 1), Node::leaf("a", 3))).unwrap();
        assert_eq!(
            rules(&e),
            vec![
                ("root.1".into(), Rule::ColorRange),
                ("root".into(), Rule::DupVertex)
            ]
        );
        assert!(!validate_strict(&e).strict_valid);
        assert_eq!(Rule::Op3NoNewEdge.id(), "OP3_NO_NEW_EDGE");
        assert_eq!(
            serde_json::to_string(&Rule::Op2IUnused).unwrap(),
            "\"OP2_I_UNUSED\""
        );
    }
}
