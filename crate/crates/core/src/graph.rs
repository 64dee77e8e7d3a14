//! Simple undirected graphs over string vertex ids, breadth-first distances
//! and colourings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type VertexSet = BTreeSet<String>;

/// Colours are `1..=k`.
pub type Color = u32;

/// Length of a shortest path, or `Infinite` when none exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    /// Sum with `Infinite` absorbing.
    pub fn plus(self, other: Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a + b),
            _ => Distance::Infinite,
        }
    }

    /// `self <= r` for a real radius; `Infinite` exceeds every radius.
    pub fn at_most<S: Scalar>(self, r: S) -> bool {
        match self {
            Distance::Finite(d) => S::from_count(d) <= r,
            Distance::Infinite => false,
        }
    }

    /// `self > r`; `Infinite` exceeds every radius.
    pub fn exceeds<S: Scalar>(self, r: S) -> bool {
        match self {
            Distance::Finite(d) => S::from_count(d) > r,
            Distance::Infinite => true,
        }
    }

    fn from_raw(raw: Option<u32>) -> Distance {
        raw.map_or(Distance::Infinite, |d| Distance::Finite(d as u64))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => serializer.serialize_u64(*d),
            Distance::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// A finite simple undirected graph.
///
/// Vertices are kept in lexicographic order and adjacency lists are sorted,
/// so every traversal below is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.ids)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Builds a graph; repeated vertices and repeated edges collapse, loops and
    /// dangling endpoints are rejected.
    pub fn new<V, E, A, B>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let set: BTreeSet<String> = vertices.into_iter().map(Into::into).collect();
        let ids: Vec<String> = set.into_iter().collect();
        let index: BTreeMap<String, usize> =
            ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at `{a}`")));
            }
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint `{a}` is not a vertex")))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::InvalidGraph(format!("edge endpoint `{b}` is not a vertex")))?;
            adj[ia].push(ib);
            adj[ib].push(ia);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            ids,
            index,
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Graph whose vertex set is exactly the endpoints of `edges`.
    pub fn from_edges<E, A, B>(edges: E) -> Result<Graph>
    where
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let edges: Vec<(String, String)> = edges
            .into_iter()
            .map(|(a, b)| (a.as_ref().to_owned(), b.as_ref().to_owned()))
            .collect();
        let vertices: Vec<String> = edges
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        Graph::new(vertices, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> + '_ {
        self.ids.iter().map(String::as_str)
    }

    pub fn vertex(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn contains(&self, v: &str) -> bool {
        self.index.contains_key(v)
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn require(&self, v: &str) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.to_owned()))
    }

    /// Resolves a set of vertex ids to sorted, deduplicated indices.
    pub fn indices_of<I>(&self, set: I) -> Result<Vec<usize>>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let mut out = set
            .into_iter()
            .map(|v| self.require(v.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbors(&self, v: &str) -> Result<impl Iterator<Item = &str> + '_> {
        let i = self.require(v)?;
        Ok(self.adj[i].iter().map(move |&j| self.ids[j].as_str()))
    }

    pub fn degree(&self, v: &str) -> Result<usize> {
        Ok(self.adj[self.require(v)?].len())
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.adj[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    pub(crate) fn has_edge_idx(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges with the smaller endpoint first, in lexicographic order.
    pub fn edges(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list.iter().filter(|&&j| j > i) {
                out.push((self.ids[i].as_str(), self.ids[j].as_str()));
            }
        }
        out
    }

    pub(crate) fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Breadth-first layering from several sources at once.
    pub fn bfs_indices(&self, sources: &[usize]) -> Vec<Distance> {
        Self::raw_to_distances(self.bfs_raw(sources))
    }

    fn raw_to_distances(raw: Vec<Option<u32>>) -> Vec<Distance> {
        raw.into_iter().map(Distance::from_raw).collect()
    }

    fn bfs_raw(&self, sources: &[usize]) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.ids.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn all_pairs(&self) -> DistanceMatrix {
        let n = self.ids.len();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(self.bfs_raw(&[s]));
        }
        DistanceMatrix { n, d }
    }

    pub fn distance(&self, u: &str, v: &str) -> Result<Distance> {
        let (a, b) = (self.require(u)?, self.require(v)?);
        Ok(self.bfs_indices(&[a])[b])
    }

    /// Minimum distance between a vertex of `s` and a vertex of `t`.
    pub fn set_distance<I, J>(&self, s: I, t: J) -> Result<Distance>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
        J: IntoIterator,
        J::Item: AsRef<str>,
    {
        let s = self.indices_of(s)?;
        let t = self.indices_of(t)?;
        if s.is_empty() || t.is_empty() {
            return Err(Error::EmptySet);
        }
        let dist = self.bfs_indices(&s);
        Ok(t.iter().map(|&j| dist[j]).min().unwrap())
    }

    /// Maximum distance in the whole graph between two members of `s`.
    pub fn weak_diameter<I>(&self, s: I) -> Result<Distance>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let s = self.indices_of(s)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.weak_diameter_idx(&s))
    }

    pub(crate) fn weak_diameter_idx(&self, s: &[usize]) -> Distance {
        let mut worst = Distance::Finite(0);
        for &a in s {
            let dist = self.bfs_raw(&[a]);
            for &b in s {
                worst = worst.max(Distance::from_raw(dist[b]));
            }
            if worst == Distance::Infinite {
                break;
            }
        }
        worst
    }

    /// Every vertex at distance at most `r` from `s`.
    pub fn closed_r_neighborhood<I, S>(&self, s: I, r: S) -> Result<VertexSet>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
        S: Scalar,
    {
        let s = self.indices_of(s)?;
        Ok(self
            .closed_r_neighborhood_idx(&s, r)
            .into_iter()
            .map(|i| self.ids[i].clone())
            .collect())
    }

    pub(crate) fn closed_r_neighborhood_idx<S: Scalar>(&self, s: &[usize], r: S) -> Vec<usize> {
        if s.is_empty() {
            return Vec::new();
        }
        self.bfs_indices(s)
            .into_iter()
            .enumerate()
            .filter(|(_, d)| d.at_most(r))
            .map(|(i, _)| i)
            .collect()
    }

    /// A vertex whose closed neighbourhood contains all of `s`, if any.
    /// The witness need not belong to `s`; the smallest id is returned.
    pub fn dominating_vertex<I>(&self, s: I) -> Result<Option<&str>>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let s = self.indices_of(s)?;
        Ok(self.dominating_vertex_idx(&s).map(|i| self.ids[i].as_str()))
    }

    pub fn is_dominated<I>(&self, s: I) -> Result<bool>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        Ok(self.dominating_vertex(s)?.is_some())
    }

    pub(crate) fn dominating_vertex_idx(&self, s: &[usize]) -> Option<usize> {
        (0..self.ids.len()).find(|&w| s.iter().all(|&v| v == w || self.has_edge_idx(v, w)))
    }

    /// Whether `g[s]` is connected. The empty set is not.
    pub(crate) fn is_connected_subset_idx(&self, s: &[usize]) -> bool {
        let Some(&start) = s.first() else {
            return false;
        };
        let inside: BTreeSet<usize> = s.iter().copied().collect();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if inside.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == inside.len()
    }

    pub fn is_connected_subset<I>(&self, s: I) -> Result<bool>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        Ok(self.is_connected_subset_idx(&self.indices_of(s)?))
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.components().len() == 1
    }

    /// Connected components, each as sorted vertex indices, ordered by their
    /// smallest vertex.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.ids.len()];
        let mut out = Vec::new();
        for s in 0..self.ids.len() {
            if seen[s] {
                continue;
            }
            let dist = self.bfs_raw(&[s]);
            let comp: Vec<usize> = (0..self.ids.len()).filter(|&i| dist[i].is_some()).collect();
            for &i in &comp {
                seen[i] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.component_indices()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.ids[i].clone()).collect())
            .collect()
    }

    /// Largest finite distance inside any component.
    pub fn max_component_diameter(&self) -> u64 {
        let apsp = self.all_pairs();
        (0..self.ids.len())
            .flat_map(|a| (0..self.ids.len()).map(move |b| (a, b)))
            .filter_map(|(a, b)| apsp.get(a, b).finite())
            .max()
            .unwrap_or(0)
    }
}

/// All-pairs BFS distances over vertex indices.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn get(&self, a: usize, b: usize) -> Distance {
        Distance::from_raw(self.d[a * self.n + b])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set_distance(&self, s: &[usize], t: &[usize]) -> Distance {
        s.iter()
            .flat_map(|&a| t.iter().map(move |&b| self.get(a, b)))
            .min()
            .unwrap_or(Distance::Infinite)
    }

    pub fn weak_diameter(&self, s: &[usize]) -> Distance {
        s.iter()
            .flat_map(|&a| s.iter().map(move |&b| self.get(a, b)))
            .max()
            .unwrap_or(Distance::Finite(0))
    }
}

/// A graph with a total colouring on `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    graph: Graph,
    k: Color,
    colors: Vec<Color>,
}

impl ColoredGraph {
    pub fn new<C, V>(graph: Graph, k: Color, colors: C) -> Result<ColoredGraph>
    where
        C: IntoIterator<Item = (V, Color)>,
        V: AsRef<str>,
    {
        if k == 0 {
            return Err(Error::Input("palette size must be positive".into()));
        }
        let mut slots: Vec<Option<Color>> = vec![None; graph.num_vertices()];
        for (v, c) in colors {
            let i = graph.require(v.as_ref())?;
            if !(1..=k).contains(&c) {
                return Err(Error::Input(format!(
                    "colour {c} of `{}` outside 1..={k}",
                    v.as_ref()
                )));
            }
            slots[i] = Some(c);
        }
        let colors = slots
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| Error::Input(format!("vertex `{}` has no colour", graph.vertex(i))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ColoredGraph { graph, k, colors })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn palette(&self) -> Color {
        self.k
    }

    pub fn color(&self, v: &str) -> Option<Color> {
        self.graph.index_of(v).map(|i| self.colors[i])
    }

    pub fn colors(&self) -> impl Iterator<Item = (&str, Color)> + '_ {
        self.graph.vertices().zip(self.colors.iter().copied())
    }

    pub fn used_colors(&self) -> BTreeSet<Color> {
        self.colors.iter().copied().collect()
    }

    pub fn color_class(&self, c: Color) -> VertexSet {
        self.colors()
            .filter(|&(_, x)| x == c)
            .map(|(v, _)| v.to_owned())
            .collect()
    }
}
