use std::collections::{BTreeMap, BTreeSet};

use super::{CwExpr, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Graph};

/// A coloured graph under construction: the value of one subexpression.
#[derive(Clone, Debug, Default)]
pub(crate) struct Partial {
    pub colors: BTreeMap<String, Color>,
    pub classes: BTreeMap<Color, BTreeSet<String>>,
    pub edges: BTreeSet<(String, String)>,
}

fn ordered(u: &str, v: &str) -> (String, String) {
    if u < v {
        (u.to_owned(), v.to_owned())
    } else {
        (v.to_owned(), u.to_owned())
    }
}

impl Partial {
    pub fn leaf(vertex: &str, color: Color) -> Partial {
        Partial {
            colors: BTreeMap::from([(vertex.to_owned(), color)]),
            classes: BTreeMap::from([(color, BTreeSet::from([vertex.to_owned()]))]),
            edges: BTreeSet::new(),
        }
    }

    pub fn is_used(&self, c: Color) -> bool {
        self.classes.contains_key(&c)
    }

    /// Disjoint union. Returns the vertex ids present on both sides; on
    /// overlap the left colour wins.
    pub fn union(mut self, mut other: Partial) -> (Partial, Vec<String>) {
        if self.colors.len() < other.colors.len() {
            std::mem::swap(&mut self, &mut other);
        }
        let mut dups = Vec::new();
        for (v, c) in other.colors {
            if self.colors.contains_key(&v) {
                dups.push(v);
                continue;
            }
            self.classes.entry(c).or_default().insert(v.clone());
            self.colors.insert(v, c);
        }
        self.edges.extend(other.edges);
        dups.sort();
        (self, dups)
    }

    pub fn recolor(&mut self, from: Color, to: Color) {
        if let Some(moved) = self.classes.remove(&from) {
            for v in &moved {
                self.colors.insert(v.clone(), to);
            }
            self.classes.entry(to).or_default().extend(moved);
        }
    }

    /// Whether joining `a` and `b` would add at least one edge.
    pub fn join_adds_edge(&self, a: Color, b: Color) -> bool {
        let (Some(xs), Some(ys)) = (self.classes.get(&a), self.classes.get(&b)) else {
            return false;
        };
        xs.iter()
            .any(|u| ys.iter().any(|v| u != v && !self.edges.contains(&ordered(u, v))))
    }

    pub fn join(&mut self, a: Color, b: Color) {
        let (Some(xs), Some(ys)) = (self.classes.get(&a), self.classes.get(&b)) else {
            return;
        };
        for u in xs {
            for v in ys {
                if u != v {
                    self.edges.insert(ordered(u, v));
                }
            }
        }
    }

    pub fn into_colored_graph(self, palette: Color) -> Result<ColoredGraph> {
        let graph = Graph::new(self.colors.keys().cloned(), self.edges)?;
        ColoredGraph::new(graph, palette, self.colors)
    }
}

/// Evaluates an expression to its coloured graph.
///
/// Errors on repeated leaf ids and on colours outside the palette.
pub fn evaluate(e: &CwExpr) -> Result<ColoredGraph> {
    let k = e.palette();
    let range = |c: Color, path: &dyn std::fmt::Display| {
        if (1..=k).contains(&c) {
            Ok(())
        } else {
            Err(Error::Input(format!("colour {c} at {path} outside 1..={k}")))
        }
    };
    let partial = e.root().fold(|node, path, mut kids: Vec<Partial>| match &node.kind {
        NodeKind::Leaf { vertex, color } => {
            range(*color, path)?;
            Ok(Partial::leaf(vertex, *color))
        }
        NodeKind::Union(..) => {
            let right = kids.pop().unwrap();
            let left = kids.pop().unwrap();
            let (merged, dups) = left.union(right);
            match dups.first() {
                Some(v) => Err(Error::Input(format!("duplicate vertex id `{v}` at {path}"))),
                None => Ok(merged),
            }
        }
        NodeKind::Recolor { from, to, .. } => {
            range(*from, path)?;
            range(*to, path)?;
            let mut p = kids.pop().unwrap();
            p.recolor(*from, *to);
            Ok(p)
        }
        NodeKind::Join { a, b, .. } => {
            range(*a, path)?;
            range(*b, path)?;
            let mut p = kids.pop().unwrap();
            p.join(*a, *b);
            Ok(p)
        }
    })?;
    partial.into_colored_graph(k)
}

impl CwExpr {
    pub fn evaluate(&self) -> Result<ColoredGraph> {
        evaluate(self)
    }
}
