//! Graphviz output.

use std::fmt::Write;

use crate::graph::{ColoredGraph, Graph};
use crate::treedecomp::{NodeId, TreeDecomposition};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_dot(g: &Graph) -> String {
    render(g, |_| None)
}

/// Vertices are labelled `id:colour`.
pub fn colored_graph_dot(cg: &ColoredGraph) -> String {
    render(cg.graph(), |v| cg.color(v))
}

fn render(g: &Graph, color: impl Fn(&str) -> Option<u32>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        match color(v) {
            Some(c) => writeln!(out, "  {} [label={}];", quote(v), quote(&format!("{v}:{c}"))),
            None => writeln!(out, "  {};", quote(v)),
        }
        .unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  {} -- {};", quote(u), quote(v)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Tree nodes labelled with their bags; `highlight` is drawn as a double box.
pub fn tree_dot(td: &TreeDecomposition, highlight: Option<NodeId>) -> String {
    let mut out = String::from("graph T {\n  node [shape=box];\n");
    for (node, bag) in &td.bags {
        let items: Vec<&str> = bag.iter().map(String::as_str).collect();
        let label = format!("{node}: {{{}}}", items.join(", "));
        let extra = if highlight == Some(*node) { ", peripheries=2" } else { "" };
        writeln!(out, "  n{node} [label={}{extra}];", quote(&label)).unwrap();
    }
    for (a, b) in &td.edges {
        writeln!(out, "  n{a} -- n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn graph_output() {
        let g = Graph::from_edges([("a", "b\"x")]).unwrap();
        let dot = graph_dot(&g);
        assert!(dot.starts_with("graph G {"));
        assert!(dot.contains(r#""a" -- "b\"x";"#) || dot.contains(r#""b\"x" -- "a";"#));
        let cg = ColoredGraph::new(g, 2, [("a", 1), ("b\"x", 2)]).unwrap();
        assert!(colored_graph_dot(&cg).contains(r#"label="a:1""#));
    }

    #[test]
    fn tree_output() {
        let td = TreeDecomposition::new(
            BTreeMap::from([(0, BTreeSet::from(["p".to_owned(), "q".to_owned()])), (1, BTreeSet::new())]),
            vec![(0, 1)],
        );
        let dot = tree_dot(&td, Some(0));
        assert!(dot.contains(r#"n0 [label="0: {p, q}", peripheries=2];"#));
        assert!(dot.contains(r#"n1 [label="1: {}"];"#));
        assert!(dot.contains("n0 -- n1;"));
    }
}
