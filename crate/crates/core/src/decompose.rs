//! Dominated monochromatic partitions with a narrow decomposition of the quotient.
//!
//! [`decompose`] follows the expression bottom-up. Leaves start a singleton
//! part and a one-node tree. A union joins the two trees through a fresh node
//! whose bag holds one part per colour. A recolour only relabels parts. A
//! join merges every part of each joined colour into one part; all of those
//! parts are then adjacent to every vertex of the other colour, so the merged
//! part is dominated.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{CwExpr, NodeKind, Rule};
use crate::graph::{Color, ColoredGraph};
use crate::partition::{induced_coloring, quotient, Partition};
use crate::treedecomp::{validate_td, NodeId, Td1Failure, TreeDecomposition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionResult {
    #[serde(rename = "parts")]
    pub partition: Partition,
    pub part_colors: BTreeMap<String, Color>,
    /// Decomposition of the quotient; bags hold part ids.
    pub tree: TreeDecomposition,
    /// A node whose bag has a part of every used colour.
    pub rainbow_node: NodeId,
    /// Children `(q1, q2)` of the node created at each union.
    #[serde(skip)]
    pub union_children: BTreeMap<NodeId, (NodeId, NodeId)>,
}

/// Per-subexpression state. Node ids and merge numbers are global.
struct Piece {
    parts: BTreeMap<String, BTreeSet<String>>,
    colors: BTreeMap<String, Color>,
    bags: BTreeMap<NodeId, BTreeSet<String>>,
    edges: Vec<(NodeId, NodeId)>,
    rainbow: NodeId,
}

fn why(rule: Rule) -> &'static str {
    match rule {
        Rule::DupVertex => "the two sides of a union must be vertex-disjoint for their partitions to combine",
        Rule::ColorRange => "a colour outside the palette would let a rainbow bag exceed the width bound",
        Rule::Op2IUnused => "a recolour of an absent colour leaves no part to relabel",
        Rule::Op2JUnused => "a recolour into an absent colour is a renaming, outside the strict form the construction expects",
        Rule::Op3NoNewEdge => "the merged parts are only dominated when the join adds edges between both colour classes",
        Rule::EmptyOperand => "an empty operand has no rainbow node to attach",
    }
}

/// Builds the partition, quotient decomposition and rainbow node for a strict expression.
pub fn decompose(e: &CwExpr) -> Result<DecompositionResult> {
    let report = e.validate_strict();
    if let Some(v) = report.first() {
        return Err(Error::Contract(format!(
            "expression is not strict: {} at {}: {}; {}",
            v.rule.id(),
            v.path,
            v.message,
            why(v.rule)
        )));
    }

    let mut next_node: NodeId = 0;
    let mut next_merge: usize = 0;
    let mut union_children = BTreeMap::new();

    let piece = e.root().fold(|node, _path, mut kids: Vec<Piece>| {
        Ok(match &node.kind {
            NodeKind::Leaf { vertex, color } => {
                let t = next_node;
                next_node += 1;
                Piece {
                    parts: BTreeMap::from([(vertex.clone(), BTreeSet::from([vertex.clone()]))]),
                    colors: BTreeMap::from([(vertex.clone(), *color)]),
                    bags: BTreeMap::from([(t, BTreeSet::from([vertex.clone()]))]),
                    edges: Vec::new(),
                    rainbow: t,
                }
            }
            NodeKind::Union(..) => {
                let right = kids.pop().unwrap();
                let mut left = kids.pop().unwrap();
                let q = next_node;
                next_node += 1;
                let used: BTreeSet<Color> =
                    left.colors.values().chain(right.colors.values()).copied().collect();
                let pick = |bag: &BTreeSet<String>, colors: &BTreeMap<String, Color>, c: Color| {
                    bag.iter().find(|p| colors[*p] == c).cloned()
                };
                let mut bag = BTreeSet::new();
                for c in used {
                    let chosen = pick(&left.bags[&left.rainbow], &left.colors, c)
                        .or_else(|| pick(&right.bags[&right.rainbow], &right.colors, c))
                        .expect("each side's rainbow bag covers its colours");
                    bag.insert(chosen);
                }
                union_children.insert(q, (left.rainbow, right.rainbow));
                left.edges.push((q, left.rainbow));
                left.edges.push((q, right.rainbow));
                left.edges.extend(right.edges);
                left.parts.extend(right.parts);
                left.colors.extend(right.colors);
                left.bags.extend(right.bags);
                left.bags.insert(q, bag);
                left.rainbow = q;
                left
            }
            NodeKind::Recolor { from, to, .. } => {
                let mut p = kids.pop().unwrap();
                for c in p.colors.values_mut() {
                    if *c == *from {
                        *c = *to;
                    }
                }
                p
            }
            NodeKind::Join { a, b, .. } => {
                let mut p = kids.pop().unwrap();
                let mut rename: BTreeMap<String, String> = BTreeMap::new();
                let mut merged = Vec::new();
                for c in [*a, *b] {
                    let class: Vec<String> = p
                        .colors
                        .iter()
                        .filter(|(_, &pc)| pc == c)
                        .map(|(id, _)| id.clone())
                        .collect();
                    if class.len() == 1 {
                        merged.push(class[0].clone());
                        continue;
                    }
                    let id = format!("merge({c},{next_merge})");
                    next_merge += 1;
                    let mut members = BTreeSet::new();
                    for old in class {
                        members.extend(p.parts.remove(&old).unwrap());
                        p.colors.remove(&old);
                        rename.insert(old, id.clone());
                    }
                    p.parts.insert(id.clone(), members);
                    p.colors.insert(id.clone(), c);
                    merged.push(id);
                }
                if !rename.is_empty() {
                    for bag in p.bags.values_mut() {
                        *bag = std::mem::take(bag)
                            .into_iter()
                            .map(|id| rename.get(&id).cloned().unwrap_or(id))
                            .collect();
                    }
                }
                let host = &p.bags[&p.rainbow];
                assert!(
                    merged.iter().all(|id| host.contains(id)),
                    "rainbow bag must hold both merged parts"
                );
                p
            }
        })
    })?;

    Ok(DecompositionResult {
        partition: Partition::new(piece.parts)?,
        part_colors: piece.colors,
        tree: TreeDecomposition::new(piece.bags, piece.edges),
        rainbow_node: piece.rainbow,
        union_children,
    })
}

impl CwExpr {
    pub fn decompose(&self) -> Result<DecompositionResult> {
        decompose(self)
    }
}

/// One property checked by [`verify_result`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// A counterexample when the check fails.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> + '_ {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, witness: Option<String>) {
        self.checks.push(Check {
            name,
            passed: witness.is_none(),
            witness,
        });
    }
}

/// Names of the checks, in report order.
pub const VERIFY_CHECKS: [&str; 11] = [
    "partition",
    "dominated",
    "weak_diameter",
    "monochromatic",
    "part_colors",
    "tree",
    "td1",
    "td2",
    "width",
    "rainbow",
    "color_subtrees",
];

/// Re-checks a decomposition against the graph from scratch.
///
/// Only `cg` is trusted. Part colours are recomputed from it, and the
/// quotient is rebuilt from the partition. Checks that cannot run because an
/// earlier one failed are reported as failing with a note.
pub fn verify_result(cg: &ColoredGraph, r: &DecompositionResult) -> VerifyReport {
    let g = cg.graph();
    let mut report = VerifyReport::default();
    let skipped = |what: &str| Some(format!("not checked: {what} failed"));

    let covers = r.partition.check_covers(g).err().map(|e| e.to_string());
    let partition_ok = covers.is_none();
    report.push("partition", covers);

    if !partition_ok {
        for name in &VERIFY_CHECKS[1..] {
            report.push(name, skipped("partition"));
        }
        return report;
    }

    let mut undominated = None;
    let mut too_wide = None;
    for (id, members) in r.partition.parts() {
        let idx = g.indices_of(members.iter().map(String::as_str)).unwrap();
        if undominated.is_none() && g.dominating_vertex_idx(&idx).is_none() {
            undominated = Some(format!("part `{id}` has no dominating vertex"));
        }
        let d = g.weak_diameter_idx(&idx);
        if too_wide.is_none() && d.finite().is_none_or(|d| d > 2) {
            too_wide = Some(format!("part `{id}` has weak diameter {d}"));
        }
    }
    report.push("dominated", undominated);
    report.push("weak_diameter", too_wide);

    let truth: BTreeMap<String, Color> = match induced_coloring(cg, &r.partition) {
        Ok(c) => c,
        Err(e) => {
            report.push("monochromatic", Some(e.to_string()));
            for name in &VERIFY_CHECKS[4..] {
                report.push(name, skipped("monochromatic"));
            }
            return report;
        }
    };
    report.push("monochromatic", None);

    let color_mismatch = truth
        .iter()
        .find(|(id, c)| r.part_colors.get(*id) != Some(c))
        .map(|(id, c)| format!("part `{id}` has colour {c}, recorded {:?}", r.part_colors.get(id)))
        .or_else(|| {
            r.part_colors
                .keys()
                .find(|id| !truth.contains_key(*id))
                .map(|id| format!("colour recorded for unknown part `{id}`"))
        });
    report.push("part_colors", color_mismatch);

    let q = quotient(g, &r.partition).expect("partition covers the graph");
    match validate_td(&q.graph, &r.tree) {
        Err(e) => {
            report.push("tree", Some(e.to_string()));
            for name in ["td1", "td2"] {
                report.push(name, skipped("tree"));
            }
        }
        Ok(td) => {
            report.push("tree", None);
            report.push(
                "td1",
                td.td1.map(|f| match f {
                    Td1Failure::Missing { vertex } => format!("part `{vertex}` is in no bag"),
                    Td1Failure::Disconnected { vertex, nodes } => {
                        format!("bags holding part `{vertex}` are disconnected: nodes {nodes:?}")
                    }
                }),
            );
            report.push(
                "td2",
                td.td2
                    .map(|(u, v)| format!("quotient edge `{u}`-`{v}` is in no bag")),
            );
        }
    }

    let k = cg.palette() as usize;
    let width = r
        .tree
        .bags
        .iter()
        .max_by_key(|(_, b)| b.len())
        .and_then(|(t, b)| (b.len() > k).then(|| format!("node {t} has {} parts, more than {k}", b.len())));
    let width = if r.tree.bags.is_empty() {
        Some("decomposition has no nodes".to_owned())
    } else {
        width
    };
    report.push("width", width);

    let used = cg.used_colors();
    let rainbow = match r.tree.bag(r.rainbow_node) {
        None => Some(format!("rainbow node {} does not exist", r.rainbow_node)),
        Some(bag) => used
            .iter()
            .find(|c| !bag.iter().any(|p| truth.get(p) == Some(c)))
            .map(|c| format!("bag at node {} has no part of colour {c}", r.rainbow_node)),
    };
    report.push("rainbow", rainbow);

    let subtrees = if r.tree.tree_defect().is_some() {
        skipped("tree")
    } else {
        used.iter().find_map(|c| {
            let nodes: BTreeSet<NodeId> = r
                .tree
                .bags
                .iter()
                .filter(|(_, bag)| bag.iter().any(|p| truth.get(p) == Some(c)))
                .map(|(&t, _)| t)
                .collect();
            (!r.tree.is_subtree(&nodes))
                .then(|| format!("nodes with a colour-{c} part do not form a subtree: {nodes:?}"))
        })
    };
    report.push("color_subtrees", subtrees);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Node};
    use crate::treedecomp::{brute_treewidth, OracleCaps};

    fn k2() -> CwExpr {
        CwExpr::new(2, Node::join(1, 2, Node::union(Node::leaf("a", 1), Node::leaf("b", 2)))).unwrap()
    }

    #[test]
    fn leaf_is_a_single_part() {
        let e = CwExpr::new(1, Node::leaf("a", 1)).unwrap();
        let r = decompose(&e).unwrap();
        assert_eq!(r.partition.len(), 1);
        assert_eq!(r.tree.bags.len(), 1);
        assert_eq!(r.tree.width().unwrap(), 0);
        assert!(verify_result(&e.evaluate().unwrap(), &r).all_passed());
    }

    #[test]
    fn single_edge() {
        let e = k2();
        let r = decompose(&e).unwrap();
        assert_eq!(r.partition.ids().collect::<Vec<_>>(), ["a", "b"]);
        assert!(r.tree.bags.values().any(|b| b.len() == 2));
        assert!(r.tree.width().unwrap() <= 1);
        assert_eq!(r.union_children[&2], (0, 1));
        let report = verify_result(&e.evaluate().unwrap(), &r);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.checks.len(), VERIFY_CHECKS.len());
    }

    #[test]
    fn joins_merge_colour_classes() {
        // Star with centre c and leaves x, y: the leaves merge into one part.
        let e = parse("cw k=2\n(join 1 2 (union (v c 1) (union (v x 2) (v y 2))))").unwrap();
        let r = decompose(&e).unwrap();
        assert_eq!(r.partition.len(), 2);
        let merged = r.partition.part("merge(2,0)").unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!(r.part_colors["merge(2,0)"], 2);
        assert!(verify_result(&e.evaluate().unwrap(), &r).all_passed());
    }

    #[test]
    fn non_strict_input_is_refused_with_the_rule() {
        let inner = Node::join(1, 2, Node::union(Node::leaf("a", 1), Node::leaf("b", 2)));
        let e = CwExpr::new(2, Node::join(1, 2, inner)).unwrap();
        match decompose(&e) {
            Err(Error::Contract(msg)) => assert!(msg.contains("OP3_NO_NEW_EDGE"), "{msg}"),
            other => panic!("expected a contract error, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_output() {
        let text = "cw k=3\n(join 2 3 (union (join 1 2 (union (v a 1) (v b 2))) (union (v c 3) (v d 1))))";
        let e = parse(text).unwrap();
        let one = serde_json::to_string(&decompose(&e).unwrap()).unwrap();
        let two = serde_json::to_string(&decompose(&e).unwrap()).unwrap();
        assert_eq!(one, two);
        assert!(one.starts_with(r#"{"parts":"#));
    }

    #[test]
    fn mutations_are_caught() {
        let e = parse("cw k=2\n(join 1 2 (union (v a 1) (union (v b 2) (v c 1))))").unwrap();
        let cg = e.evaluate().unwrap();
        let r = decompose(&e).unwrap();
        assert!(verify_result(&cg, &r).all_passed());

        let edge = k2();
        let edge_cg = edge.evaluate().unwrap();
        let mut dropped = decompose(&edge).unwrap();
        let (&t, _) = dropped.tree.bags.iter().find(|(_, b)| b.len() == 2).unwrap();
        dropped.tree.bags.get_mut(&t).unwrap().remove("b");
        let report = verify_result(&edge_cg, &dropped);
        let td2 = report.get("td2").unwrap();
        assert!(!td2.passed);
        assert!(td2.witness.as_ref().unwrap().contains("`a`-`b`"));

        let mut ghost = r.clone();
        let t = ghost.rainbow_node;
        ghost.tree.bags.get_mut(&t).unwrap().insert("ghost".into());
        assert!(!verify_result(&cg, &ghost).get("tree").unwrap().passed);
    }

    #[test]
    fn oversized_bag_fails_width() {
        let e = parse(
            "cw k=2
(union (join 1 2 (union (v a 1) (v b 2))) (join 1 2 (union (v c 1) (v d 2))))",
        )
        .unwrap();
        let cg = e.evaluate().unwrap();
        let r = decompose(&e).unwrap();
        assert_eq!(r.partition.len(), 4);
        assert!(verify_result(&cg, &r).all_passed());
        let mut grown = r.clone();
        let t = grown.rainbow_node;
        let bag = grown.tree.bags.get_mut(&t).unwrap();
        let extra = ["a", "b", "c", "d"].into_iter().find(|p| !bag.contains(*p)).unwrap();
        bag.insert(extra.to_owned());
        assert_eq!(bag.len(), 3);
        let report = verify_result(&cg, &grown);
        assert!(!report.get("width").unwrap().passed);
        assert!(report.get("width").unwrap().witness.as_ref().unwrap().contains("more than 2"));
    }

    #[test]
    fn quotient_treewidth_within_palette() {
        let e = parse(
            "cw k=3\n\
             (recolor 3 1 (join 1 3 (union (recolor 2 1 (join 1 2 (union (v a 1) (v b 2)))) (v c 3))))",
        )
        .unwrap();
        let r = decompose(&e).unwrap();
        let q = quotient(e.evaluate().unwrap().graph(), &r.partition).unwrap();
        let tw = brute_treewidth(&q.graph, &OracleCaps::default()).unwrap();
        assert!(tw <= 2);
    }
}
