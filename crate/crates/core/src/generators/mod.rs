//! Expression builders for paths, spiders and subdivided cliques, and the
//! subdivision utilities they are checked against.
//!
//! Subdivision vertices of an edge `uv` are named `"u-v.i"` with `u < v` by
//! string order and `i = 1, 2, ..` counted from `u`.
//!
//! The builders follow the inductive constructions step by step. A few of
//! those steps recolour into a colour that is not present yet (for instance
//! the interior colour of a path with no interior). Each builder therefore
//! finishes with [`normalize`](crate::expr::normalize), which turns such steps
//! into exact renamings, so the output is strict and evaluates to the same
//! coloured graph.

mod minor_model;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::expr::{CwExpr, Node};
use crate::graph::{Color, Graph};

pub use minor_model::{build_minor_model, BuiltModel, MinorModel, SeparationFacts};

/// Per-edge subdivision counts for a base graph. Keys are `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionSpec {
    base: Graph,
    times: BTreeMap<(String, String), usize>,
}

fn edge_key(u: &str, v: &str) -> (String, String) {
    if u < v {
        (u.to_owned(), v.to_owned())
    } else {
        (v.to_owned(), u.to_owned())
    }
}

impl SubdivisionSpec {
    /// Requires a count for every edge of `base` and for nothing else.
    pub fn new<I, A, B>(base: Graph, times: I) -> Result<SubdivisionSpec>
    where
        I: IntoIterator<Item = ((A, B), usize)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for ((u, v), n) in times {
            let (u, v) = (u.as_ref(), v.as_ref());
            if !base.has_edge(u, v) {
                return Err(Error::Input(format!("`{u}`-`{v}` is not an edge of the base graph")));
            }
            map.insert(edge_key(u, v), n);
        }
        if let Some((u, v)) = base.edges().into_iter().find(|(u, v)| !map.contains_key(&edge_key(u, v))) {
            return Err(Error::Input(format!("no subdivision count for edge `{u}`-`{v}`")));
        }
        Ok(SubdivisionSpec { base, times: map })
    }

    /// The same count on every edge.
    pub fn uniform(base: Graph, n: usize) -> SubdivisionSpec {
        let times = base.edges().into_iter().map(|(u, v)| (edge_key(u, v), n)).collect();
        SubdivisionSpec { base, times }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn count(&self, u: &str, v: &str) -> Option<usize> {
        self.times.get(&edge_key(u, v)).copied()
    }

    pub fn min_count(&self) -> Option<usize> {
        self.times.values().copied().min()
    }
}

/// The vertices of the path replacing `uv` when it is subdivided `count`
/// times, listed from `u` to `v` and including both.
pub fn subdivision_path(u: &str, v: &str, count: usize) -> Vec<String> {
    let (lo, hi) = if u < v { (u, v) } else { (v, u) };
    let mut path = Vec::with_capacity(count + 2);
    path.push(lo.to_owned());
    path.extend((1..=count).map(|i| format!("{lo}-{hi}.{i}")));
    path.push(hi.to_owned());
    if u > v {
        path.reverse();
    }
    path
}

/// Replaces every base edge by a path through fresh vertices.
pub fn subdivide(spec: &SubdivisionSpec) -> Result<Graph> {
    let mut vertices: BTreeSet<String> = spec.base.vertices().map(str::to_owned).collect();
    let mut edges = Vec::new();
    for ((u, v), &n) in &spec.times {
        let path = subdivision_path(u, v, n);
        vertices.extend(path[1..path.len() - 1].iter().cloned());
        edges.extend(path.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    }
    Graph::new(vertices, edges)
}

/// `K_n` on the vertices `"1"`..`"n"`.
pub fn complete_graph(n: u32) -> Graph {
    let ids: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for a in 0..ids.len() {
        for b in a + 1..ids.len() {
            edges.push((ids[a].clone(), ids[b].clone()));
        }
    }
    Graph::new(ids.iter().cloned(), edges).expect("complete graph is simple")
}

fn smallest_free(n: Color, taken: &[Color]) -> Option<Color> {
    (1..=n).find(|c| !taken.contains(c))
}

/// Raw expression for the path `vertices[0] .. vertices[m]` coloured
/// `start` at the first vertex, `end` at the last and `inner` elsewhere.
///
/// Grows the path one vertex at a time at the far end: the previous end
/// carries a spare colour, the new vertex is joined to it, and the spare
/// colour is then recoloured to `inner`.
fn path_node(vertices: &[String], n: Color, start: Color, end: Color, inner: Color) -> Node {
    let m = vertices.len() - 1;
    debug_assert!(m >= 1);
    // Colour carried by vertex p while it is the far end.
    let mut end_color = vec![0; m + 1];
    end_color[m] = end;
    for p in (1..m).rev() {
        end_color[p] = smallest_free(n, &[start, end_color[p + 1], inner]).expect("checked by caller");
    }
    let mut node = Node::join(
        start,
        end_color[1],
        Node::union(Node::leaf(&vertices[0], start), Node::leaf(&vertices[1], end_color[1])),
    );
    for p in 2..=m {
        let (e, spare) = (end_color[p], end_color[p - 1]);
        node = Node::recolor(
            spare,
            inner,
            Node::join(e, spare, Node::union(node, Node::leaf(&vertices[p], e))),
        );
    }
    node
}

fn check_path_colors(n: Color, i: Color, j: Color, k: Color) -> Result<()> {
    if n < 3 {
        return Err(Error::Input(format!("palette must be at least 3, got {n}")));
    }
    for (name, c) in [("i", i), ("j", j), ("k", k)] {
        if !(1..=n).contains(&c) {
            return Err(Error::Input(format!("colour {name}={c} is outside 1..={n}")));
        }
    }
    if j == i || j == k {
        return Err(Error::Input(format!("j must differ from i and k (i={i}, j={j}, k={k})")));
    }
    if smallest_free(n, &[i, j, k]).is_none() {
        return Err(Error::Input(format!("no colour in 1..={n} is outside {{i, j, k}} = {{{i}, {j}, {k}}}")));
    }
    Ok(())
}

fn finish(palette: Color, root: Node) -> Result<CwExpr> {
    let e = CwExpr::new(palette, root)?.normalize()?;
    debug_assert!(e.validate_strict().strict_valid);
    Ok(e)
}

/// A path of the given length from `x` to `y`, with `x` coloured `i`, `y`
/// coloured `j` and the interior coloured `k`. Interior vertices follow the
/// subdivision naming of the edge `xy`.
pub fn gen_path(x: &str, y: &str, length: usize, n: Color, i: Color, j: Color, k: Color) -> Result<CwExpr> {
    if length == 0 {
        return Err(Error::Input("path length must be at least 1".into()));
    }
    if x == y {
        return Err(Error::Input("path endpoints must differ".into()));
    }
    check_path_colors(n, i, j, k)?;
    let vertices = subdivision_path(x, y, length - 1);
    finish(n, path_node(&vertices, n, i, j, k))
}

/// Raw spider expression. `legs[l]` lists leg `l + 1` from its leaf up to the
/// vertex next to the centre; the leaf of leg `l + 1` gets colour `l + 1`.
fn spider_node(center: &str, legs: &[Vec<String>]) -> Node {
    let t = legs.len() as Color;
    let (inner, tip, hub) = (t + 1, t + 2, t + 3);
    let mut pieces = vec![Node::leaf(center, hub)];
    let mut short = Vec::new();
    let mut any_long = false;
    for (l, leg) in legs.iter().enumerate() {
        let leaf_color = l as Color + 1;
        if leg.len() == 1 {
            pieces.push(Node::leaf(&leg[0], leaf_color));
            short.push(leaf_color);
        } else {
            any_long = true;
            pieces.push(path_node(leg, t + 2, leaf_color, tip, inner));
        }
    }
    let mut node = Node::union_all(pieces).expect("centre is always present");
    if any_long {
        node = Node::join(hub, tip, node);
    }
    for c in short {
        node = Node::join(hub, c, node);
    }
    Node::recolor(tip, inner, Node::recolor(hub, inner, node))
}

/// The spider with centre `"0"`, leaves `"1"`..`"t"` and leg `l` of length
/// `leg_lengths[l - 1]`. Leaf `l` is coloured `l`, everything else `t + 1`.
pub fn gen_spider(t: usize, leg_lengths: &[usize]) -> Result<CwExpr> {
    if t < 3 {
        return Err(Error::Input(format!("a spider needs at least 3 legs, got {t}")));
    }
    if leg_lengths.len() != t {
        return Err(Error::Input(format!("expected {t} leg lengths, got {}", leg_lengths.len())));
    }
    if let Some(l) = leg_lengths.iter().position(|&len| len == 0) {
        return Err(Error::Input(format!("leg {} has length 0", l + 1)));
    }
    let legs: Vec<Vec<String>> = leg_lengths
        .iter()
        .enumerate()
        .map(|(l, &len)| {
            let mut path = subdivision_path(&(l + 1).to_string(), "0", len - 1);
            path.pop();
            path
        })
        .collect();
    finish(t as Color + 3, spider_node("0", &legs))
}

/// The spider graph [`gen_spider`] should evaluate to.
pub fn spider_graph(leg_lengths: &[usize]) -> Result<Graph> {
    let star = Graph::from_edges((1..=leg_lengths.len()).map(|l| ("0".to_owned(), l.to_string())))?;
    let times = leg_lengths
        .iter()
        .enumerate()
        .map(|(l, &len)| (("0".to_owned(), (l + 1).to_string()), len.saturating_sub(1)));
    subdivide(&SubdivisionSpec::new(star, times)?)
}

/// Counts keyed by `(i, j)` with `1 <= i < j <= n`, the same on every edge.
pub fn uniform_clique_counts(n: u32, times: usize) -> BTreeMap<(u32, u32), usize> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| ((i, j), times)))
        .collect()
}

/// The subdivision of `K_n` that [`gen_subdivided_clique`] builds.
pub fn clique_subdivision_spec(n: u32, times: &BTreeMap<(u32, u32), usize>) -> Result<SubdivisionSpec> {
    let mut counts = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let c = times
                .get(&(i, j))
                .or_else(|| times.get(&(j, i)))
                .ok_or_else(|| Error::Input(format!("no subdivision count for edge {i}-{j}")))?;
            counts.push(((i.to_string(), j.to_string()), *c));
        }
    }
    SubdivisionSpec::new(complete_graph(n), counts)
}

/// A subdivision of `K_n` on `"1"`..`"n"` over the palette `n + 2`.
///
/// First the spider formed by the paths from `n` to the other branch
/// vertices, then the path between each pair `i < j < n` in lexicographic
/// order, attached through the spare colours `n + 1` and `n + 2`.
pub fn gen_subdivided_clique(n: u32, times: &BTreeMap<(u32, u32), usize>) -> Result<CwExpr> {
    if n < 4 {
        return Err(Error::Input(format!("clique size must be at least 4, got {n}")));
    }
    let spec = clique_subdivision_spec(n, times)?;
    let name = |i: u32| i.to_string();
    let count = |i: u32, j: u32| spec.count(&name(i), &name(j)).expect("total by construction");

    let legs: Vec<Vec<String>> = (1..n)
        .map(|i| {
            let mut path = subdivision_path(&name(i), &name(n), count(i, n));
            path.pop();
            path
        })
        .collect();
    let mut node = spider_node(&name(n), &legs);

    let (inner, near, far) = (n, n + 1, n + 2);
    for i in 1..n {
        for j in i + 1..n {
            let path = subdivision_path(&name(i), &name(j), count(i, j));
            let interior = &path[1..path.len() - 1];
            node = match interior.len() {
                0 => Node::join(i, j, node),
                1 => Node::recolor(
                    near,
                    inner,
                    Node::join(
                        j,
                        near,
                        Node::join(i, near, Node::union(node, Node::leaf(&interior[0], near))),
                    ),
                ),
                _ => {
                    let piece = path_node(interior, n + 2, near, far, inner);
                    Node::recolor(
                        far,
                        inner,
                        Node::recolor(
                            near,
                            inner,
                            Node::join(j, far, Node::join(i, near, Node::union(node, piece))),
                        ),
                    )
                }
            };
        }
    }
    finish(n + 2, node)
}
