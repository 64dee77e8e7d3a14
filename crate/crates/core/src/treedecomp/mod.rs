//! Tree decompositions, their validation, and exact oracles for small graphs.

mod minor;
mod treewidth;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use minor::{has_minor, has_minor_exhaustive};
pub use treewidth::{brute_treewidth, brute_treewidth_exhaustive};

pub type NodeId = usize;

/// Size limits for the exponential oracles. Exceeding one is an error, never a hang.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    /// Vertices left after safe reductions before the exact treewidth search.
    pub treewidth: usize,
    /// Vertices of the pattern graph in minor tests.
    pub minor_pattern: usize,
    /// Vertices of the host graph in minor tests.
    pub minor_host: usize,
    /// Vertices of the host left after reductions, where the search runs.
    pub minor_kernel: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            treewidth: 12,
            minor_pattern: 6,
            minor_host: 64,
            minor_kernel: 18,
        }
    }
}

pub const ORACLE_CAP_ENV: &str = "CWQ_ORACLE_CAP";

impl OracleCaps {
    /// Applies an override such as `"14"` (treewidth only) or
    /// `"treewidth=14,minor_pattern=7,minor_host=80,minor_kernel=20"`.
    pub fn with_override(mut self, spec: &str) -> Result<OracleCaps> {
        let bad = || Error::Input(format!("bad oracle cap override `{spec}`"));
        let spec = spec.trim();
        if let Ok(n) = spec.parse::<usize>() {
            self.treewidth = n;
            return Ok(self);
        }
        for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            let value: usize = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "treewidth" => self.treewidth = value,
                "minor_pattern" => self.minor_pattern = value,
                "minor_host" => self.minor_host = value,
                "minor_kernel" => self.minor_kernel = value,
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }

    /// Defaults, overridden by `CWQ_ORACLE_CAP` when set.
    pub fn from_env() -> Result<OracleCaps> {
        match std::env::var(ORACLE_CAP_ENV) {
            Ok(spec) => OracleCaps::default().with_override(&spec),
            Err(_) => Ok(OracleCaps::default()),
        }
    }
}

/// A tree with a bag of vertex ids at every node.
///
/// Nodes are the keys of `bags`; a node with nothing in it still has an
/// (empty) bag. Nothing here is validated on construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TreeWire", try_from = "TreeWire")]
pub struct TreeDecomposition {
    pub bags: BTreeMap<NodeId, BTreeSet<String>>,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// JSON shape: `{"nodes": [..], "edges": [[a, b], ..], "bags": {node: [..]}}`.
#[derive(Serialize, Deserialize)]
struct TreeWire {
    nodes: Vec<NodeId>,
    edges: Vec<[NodeId; 2]>,
    #[serde(default)]
    bags: BTreeMap<NodeId, BTreeSet<String>>,
}

impl From<TreeDecomposition> for TreeWire {
    fn from(td: TreeDecomposition) -> TreeWire {
        TreeWire {
            nodes: td.bags.keys().copied().collect(),
            edges: td.edges.iter().map(|&(a, b)| [a, b]).collect(),
            bags: td.bags,
        }
    }
}

impl TryFrom<TreeWire> for TreeDecomposition {
    type Error = Error;

    fn try_from(w: TreeWire) -> Result<TreeDecomposition> {
        let mut bags: BTreeMap<NodeId, BTreeSet<String>> =
            w.nodes.iter().map(|&t| (t, BTreeSet::new())).collect();
        if bags.len() != w.nodes.len() {
            return Err(Error::InvalidTree("repeated node id".into()));
        }
        for (t, bag) in w.bags {
            match bags.get_mut(&t) {
                Some(slot) => *slot = bag,
                None => return Err(Error::InvalidTree(format!("bag for unknown node {t}"))),
            }
        }
        Ok(TreeDecomposition {
            bags,
            edges: w.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        })
    }
}

impl TreeDecomposition {
    pub fn new(
        bags: BTreeMap<NodeId, BTreeSet<String>>,
        edges: Vec<(NodeId, NodeId)>,
    ) -> TreeDecomposition {
        TreeDecomposition { bags, edges }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bags.keys().copied()
    }

    pub fn bag(&self, t: NodeId) -> Option<&BTreeSet<String>> {
        self.bags.get(&t)
    }

    /// Largest bag size minus one (zero when every bag is empty).
    pub fn width(&self) -> Result<usize> {
        let largest = self
            .bags
            .values()
            .map(BTreeSet::len)
            .max()
            .ok_or_else(|| Error::InvalidTree("decomposition has no nodes".into()))?;
        Ok(largest.saturating_sub(1))
    }

    /// Describes why the underlying graph is not a tree, if it is not.
    pub fn tree_defect(&self) -> Option<String> {
        if self.bags.is_empty() {
            return Some("the tree has no nodes".into());
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.edges {
            if !self.bags.contains_key(&a) || !self.bags.contains_key(&b) {
                return Some(format!("tree edge ({a}, {b}) has an endpoint without a bag"));
            }
            if a == b {
                return Some(format!("tree edge ({a}, {a}) is a loop"));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Some(format!("tree edge ({a}, {b}) is repeated"));
            }
        }
        let n = self.bags.len();
        let all: Vec<NodeId> = self.nodes().collect();
        let reached = self.component_of(all[0], &all.iter().copied().collect());
        if reached.len() != n {
            let missing = all.iter().find(|t| !reached.contains(t)).unwrap();
            return Some(format!("tree is disconnected: node {missing} unreachable from node {}", all[0]));
        }
        if self.edges.len() != n - 1 {
            return Some(format!("{} edges on {n} nodes contain a cycle", self.edges.len()));
        }
        None
    }

    fn adjacency(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut adj: BTreeMap<NodeId, Vec<NodeId>> = self.nodes().map(|t| (t, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    fn component_of(&self, start: NodeId, within: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for &s in adj.get(&t).into_iter().flatten() {
                if within.contains(&s) && seen.insert(s) {
                    stack.push(s);
                }
            }
        }
        seen
    }

    /// Whether `nodes` is nonempty and induces a connected subtree.
    pub fn is_subtree(&self, nodes: &BTreeSet<NodeId>) -> bool {
        match nodes.first() {
            None => false,
            Some(&start) => self.component_of(start, nodes).len() == nodes.len(),
        }
    }

    /// Nodes whose bag contains `v`.
    pub fn nodes_containing(&self, v: &str) -> BTreeSet<NodeId> {
        self.bags
            .iter()
            .filter(|(_, bag)| bag.contains(v))
            .map(|(&t, _)| t)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Td1Failure {
    /// No bag contains the vertex.
    Missing { vertex: String },
    /// The bags containing the vertex do not form a subtree.
    Disconnected { vertex: String, nodes: Vec<NodeId> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TdReport {
    /// First vertex violating the subtree condition, if any.
    pub td1: Option<Td1Failure>,
    /// First edge with no bag containing both endpoints, if any.
    pub td2: Option<(String, String)>,
    pub width: usize,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.td1.is_none() && self.td2.is_none()
    }
}

/// Checks the subtree and edge-cover conditions of `td` against `g`.
///
/// Errors when `td` is not a tree or a bag names a vertex outside `g`.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<TdReport> {
    if let Some(defect) = td.tree_defect() {
        return Err(Error::InvalidTree(defect));
    }
    for bag in td.bags.values() {
        if let Some(v) = bag.iter().find(|v| !g.contains(v)) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    // In a forest a node set is connected iff it spans |S| - 1 edges.
    let mut node_count: BTreeMap<&str, usize> = BTreeMap::new();
    for bag in td.bags.values() {
        for v in bag {
            *node_count.entry(v.as_str()).or_default() += 1;
        }
    }
    let mut edge_count: BTreeMap<&str, usize> = BTreeMap::new();
    for &(a, b) in &td.edges {
        for v in td.bags[&a].intersection(&td.bags[&b]) {
            *edge_count.entry(v.as_str()).or_default() += 1;
        }
    }
    let td1 = g.vertices().find_map(|v| match node_count.get(v) {
        None => Some(Td1Failure::Missing { vertex: v.to_owned() }),
        Some(&n) if edge_count.get(v).copied().unwrap_or(0) + 1 != n => Some(Td1Failure::Disconnected {
            vertex: v.to_owned(),
            nodes: td.nodes_containing(v).into_iter().collect(),
        }),
        _ => None,
    });
    let td2 = g
        .edges()
        .into_iter()
        .find(|(u, v)| !td.bags.values().any(|bag| bag.contains(*u) && bag.contains(*v)))
        .map(|(u, v)| (u.to_owned(), v.to_owned()));
    Ok(TdReport {
        td1,
        td2,
        width: td.width()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn td(bags: &[(NodeId, &[&str])], edges: &[(NodeId, NodeId)]) -> TreeDecomposition {
        TreeDecomposition::new(
            bags.iter()
                .map(|(t, b)| (*t, b.iter().map(|s| s.to_string()).collect()))
                .collect(),
            edges.to_vec(),
        )
    }

    #[test]
    fn single_vertex() {
        let g = Graph::new(["v"], Vec::<(&str, &str)>::new()).unwrap();
        let r = validate_td(&g, &td(&[(0, &["v"])], &[])).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.width, 0);
    }

    #[test]
    fn path_decomposition_of_p3() {
        let g = Graph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let good = validate_td(&g, &td(&[(0, &["a", "b"]), (1, &["b", "c"])], &[(0, 1)])).unwrap();
        assert!(good.is_valid());
        assert_eq!(good.width, 1);
        let bad = validate_td(&g, &td(&[(0, &["a", "b"]), (1, &["c"])], &[(0, 1)])).unwrap();
        assert_eq!(bad.td2, Some(("b".into(), "c".into())));
        assert!(bad.td1.is_none());
    }

    #[test]
    fn td1_failures() {
        let g = Graph::from_edges([("a", "b")]).unwrap();
        let missing = validate_td(&g, &td(&[(0, &["a"])], &[])).unwrap();
        assert_eq!(missing.td1, Some(Td1Failure::Missing { vertex: "b".into() }));
        let split = validate_td(
            &g,
            &td(&[(0, &["a", "b"]), (1, &[]), (2, &["a"])], &[(0, 1), (1, 2)]),
        )
        .unwrap();
        assert_eq!(
            split.td1,
            Some(Td1Failure::Disconnected {
                vertex: "a".into(),
                nodes: vec![0, 2]
            })
        );
    }

    #[test]
    fn widths() {
        assert_eq!(td(&[(0, &["a"]), (1, &["b"])], &[(0, 1)]).width().unwrap(), 0);
        assert_eq!(
            td(&[(0, &["a", "b", "c"]), (1, &["b"])], &[(0, 1)]).width().unwrap(),
            2
        );
        assert!(TreeDecomposition::default().width().is_err());
    }

    #[test]
    fn non_trees_are_input_errors() {
        let g = Graph::from_edges([("a", "b")]).unwrap();
        let forest = td(&[(0, &["a", "b"]), (1, &[])], &[]);
        assert!(matches!(validate_td(&g, &forest), Err(Error::InvalidTree(_))));
        let cycle = td(&[(0, &["a", "b"]), (1, &[]), (2, &[])], &[(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(validate_td(&g, &cycle), Err(Error::InvalidTree(_))));
        let stranger = td(&[(0, &["a", "b", "z"])], &[]);
        assert!(matches!(validate_td(&g, &stranger), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn cap_overrides() {
        let caps = OracleCaps::default().with_override("14").unwrap();
        assert_eq!(caps.treewidth, 14);
        let caps = OracleCaps::default()
            .with_override("minor_pattern=7, minor_kernel=20")
            .unwrap();
        assert_eq!((caps.minor_pattern, caps.minor_kernel, caps.treewidth), (7, 20, 12));
        assert!(OracleCaps::default().with_override("bogus=1").is_err());
    }

    /// Naive definition: for every vertex, every node on the tree path between
    /// two nodes containing it also contains it.
    fn naive_valid(g: &Graph, t: &TreeDecomposition) -> bool {
        let adj = t.adjacency();
        let path = |from: NodeId, to: NodeId| -> Vec<NodeId> {
            let mut parent = BTreeMap::from([(from, from)]);
            let mut stack = vec![from];
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if !parent.contains_key(&y) {
                        parent.insert(y, x);
                        stack.push(y);
                    }
                }
            }
            let mut out = vec![to];
            let mut cur = to;
            while cur != from {
                cur = parent[&cur];
                out.push(cur);
            }
            out
        };
        let td1 = g.vertices().all(|v| {
            let holders: Vec<NodeId> = t.nodes_containing(v).into_iter().collect();
            !holders.is_empty()
                && holders.iter().all(|&a| {
                    holders
                        .iter()
                        .all(|&b| path(a, b).iter().all(|x| t.bags[x].contains(v)))
                })
        });
        let td2 = g
            .edges()
            .iter()
            .all(|(u, v)| t.bags.values().any(|b| b.contains(*u) && b.contains(*v)));
        td1 && td2
    }

    #[test]
    fn single_deletions_agree_with_the_naive_definition() {
        // C5 with a fan decomposition from vertex a.
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]).unwrap();
        let base = td(
            &[(0, &["a", "b", "c"]), (1, &["a", "c", "d"]), (2, &["a", "d", "e"])],
            &[(0, 1), (1, 2)],
        );
        assert!(validate_td(&g, &base).unwrap().is_valid());
        let mut caught = 0;
        for (&t, bag) in &base.bags {
            for v in bag {
                let mut m = base.clone();
                m.bags.get_mut(&t).unwrap().remove(v);
                let ours = validate_td(&g, &m).unwrap().is_valid();
                assert_eq!(ours, naive_valid(&g, &m), "deleting {v} from node {t}");
                caught += (!ours) as usize;
            }
        }
        assert!(caught > 0);
    }

    #[test]
    fn json_shape_round_trips() {
        let t = td(&[(0, &["a", "b"]), (1, &[])], &[(0, 1)]);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"nodes":[0,1],"edges":[[0,1]],"bags":{"0":["a","b"],"1":[]}}"#);
        assert_eq!(serde_json::from_str::<TreeDecomposition>(&text).unwrap(), t);
        let stray = r#"{"nodes":[0],"edges":[],"bags":{"3":["a"]}}"#;
        assert!(serde_json::from_str::<TreeDecomposition>(stray).is_err());
    }
}
