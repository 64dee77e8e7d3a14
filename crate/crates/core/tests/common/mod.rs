//! Independent reference checks used by the integration tests. Nothing here
//! calls the library's own validators; graphs are read only through their
//! vertex and edge lists.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use cwq::{ColoredGraph, DecompositionResult, Graph};

pub const INF: u64 = u64::MAX;

/// Adjacency lists by vertex name.
pub struct Adj {
    pub names: Vec<String>,
    pub index: BTreeMap<String, usize>,
    pub nbrs: Vec<BTreeSet<usize>>,
}

impl Adj {
    pub fn of(g: &Graph) -> Adj {
        let names: Vec<String> = g.vertices().map(str::to_owned).collect();
        let index: BTreeMap<String, usize> = names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut nbrs = vec![BTreeSet::new(); names.len()];
        for (u, v) in g.edges() {
            let (a, b) = (index[u], index[v]);
            nbrs[a].insert(b);
            nbrs[b].insert(a);
        }
        Adj { names, index, nbrs }
    }

    pub fn from_edge_list(vertices: &[String], edges: &[(String, String)]) -> Adj {
        let names = vertices.to_vec();
        let index: BTreeMap<String, usize> = names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut nbrs = vec![BTreeSet::new(); names.len()];
        for (u, v) in edges {
            let (a, b) = (index[u], index[v]);
            nbrs[a].insert(b);
            nbrs[b].insert(a);
        }
        Adj { names, index, nbrs }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Floyd-Warshall, `INF` for disconnected pairs.
    pub fn all_pairs(&self) -> Vec<Vec<u64>> {
        let n = self.len();
        let mut d = vec![vec![INF; n]; n];
        for i in 0..n {
            d[i][i] = 0;
            for &j in &self.nbrs[i] {
                d[i][j] = 1;
            }
        }
        for m in 0..n {
            for i in 0..n {
                if d[i][m] == INF {
                    continue;
                }
                for j in 0..n {
                    if d[m][j] != INF && d[i][m] + d[m][j] < d[i][j] {
                        d[i][j] = d[i][m] + d[m][j];
                    }
                }
            }
        }
        d
    }

    pub fn edge_set(&self) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for (i, ns) in self.nbrs.iter().enumerate() {
            for &j in ns {
                let (a, b) = (&self.names[i], &self.names[j]);
                out.insert(if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) });
            }
        }
        out
    }
}

/// Treewidth by the subset recurrence over elimination prefixes:
/// `TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)`, where
/// `Q(S, v)` is the set of vertices outside `S + v` reachable from `v`
/// through `S`.
pub fn treewidth(adj: &Adj) -> usize {
    let n = adj.len();
    assert!(n <= 16, "reference treewidth is exponential");
    if n == 0 {
        return 0;
    }
    let nb: Vec<u32> = adj.nbrs.iter().map(|s| s.iter().fold(0u32, |m, &j| m | 1 << j)).collect();
    let q = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(x) = stack.pop() {
            let mut m = nb[x] & !seen;
            seen |= m;
            out |= m & !s;
            m &= s;
            while m != 0 {
                let y = m.trailing_zeros() as usize;
                m &= m - 1;
                stack.push(y);
            }
        }
        out.count_ones() as usize
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![usize::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut m = s;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = s & !(1 << v);
            best = best.min(tw[rest as usize].max(q(rest, v)));
        }
        tw[s as usize] = best;
    }
    tw[full as usize]
}

/// Full reference check of a decomposition result against a coloured graph
/// with palette `k`. Returns the first problem found.
pub fn check_decomposition(cg: &ColoredGraph, r: &DecompositionResult) -> Result<(), String> {
    let g = cg.graph();
    let adj = Adj::of(g);
    let k = cg.palette() as usize;
    let color: BTreeMap<&str, u32> = cg.colors().collect();

    // Partition.
    let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
    for (id, members) in r.partition.parts() {
        if members.is_empty() {
            return Err(format!("empty part {id}"));
        }
        for v in members {
            if !adj.index.contains_key(v) {
                return Err(format!("unknown vertex {v}"));
            }
            if owner.insert(v, id).is_some() {
                return Err(format!("vertex {v} in two parts"));
            }
        }
    }
    if owner.len() != adj.len() {
        return Err("partition does not cover".into());
    }

    // Domination and colours.
    for (id, members) in r.partition.parts() {
        let idx: Vec<usize> = members.iter().map(|v| adj.index[v]).collect();
        let dominated = (0..adj.len()).any(|d| idx.iter().all(|&x| x == d || adj.nbrs[d].contains(&x)));
        if !dominated {
            return Err(format!("part {id} not dominated"));
        }
        let colors: BTreeSet<u32> = members.iter().map(|v| color[v.as_str()]).collect();
        if colors.len() != 1 {
            return Err(format!("part {id} not monochromatic"));
        }
        if r.part_colors.get(id) != colors.iter().next() {
            return Err(format!("part {id} colour recorded wrongly"));
        }
    }
    if r.part_colors.len() != r.partition.len() {
        return Err("part_colors has extra entries".into());
    }

    // Tree shape.
    let nodes: BTreeSet<usize> = r.tree.bags.keys().copied().collect();
    if nodes.is_empty() {
        return Err("no tree nodes".into());
    }
    if r.tree.edges.len() + 1 != nodes.len() {
        return Err("edge count is not nodes - 1".into());
    }
    let mut tree_adj: BTreeMap<usize, Vec<usize>> = nodes.iter().map(|&t| (t, Vec::new())).collect();
    for &(a, b) in &r.tree.edges {
        if !nodes.contains(&a) || !nodes.contains(&b) || a == b {
            return Err(format!("bad tree edge {a}-{b}"));
        }
        tree_adj.get_mut(&a).unwrap().push(b);
        tree_adj.get_mut(&b).unwrap().push(a);
    }
    let connected_within = |set: &BTreeSet<usize>| -> bool {
        let Some(&start) = set.iter().next() else { return false };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &u in &tree_adj[&t] {
                if set.contains(&u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen.len() == set.len()
    };
    if !connected_within(&nodes) {
        return Err("tree is disconnected".into());
    }
    for bag in r.tree.bags.values() {
        if let Some(p) = bag.iter().find(|p| r.partition.part(p).is_none()) {
            return Err(format!("bag holds unknown part {p}"));
        }
    }

    // TD1, TD2, width.
    for id in r.partition.ids() {
        let holding: BTreeSet<usize> = r.tree.bags.iter().filter(|(_, b)| b.contains(id)).map(|(&t, _)| t).collect();
        if !connected_within(&holding) {
            return Err(format!("TD1 fails for part {id}"));
        }
    }
    for (u, v) in adj.edge_set() {
        let (p, q) = (owner[u.as_str()], owner[v.as_str()]);
        if p != q && !r.tree.bags.values().any(|b| b.contains(p) && b.contains(q)) {
            return Err(format!("TD2 fails for {p}-{q}"));
        }
    }
    if let Some(b) = r.tree.bags.values().find(|b| b.len() > k) {
        return Err(format!("bag of size {} exceeds {k}", b.len()));
    }

    // Rainbow node and colour subtrees.
    let used: BTreeSet<u32> = color.values().copied().collect();
    let bag_colors = |b: &BTreeSet<String>| -> BTreeSet<u32> { b.iter().map(|p| r.part_colors[p]).collect() };
    match r.tree.bags.get(&r.rainbow_node) {
        Some(b) if bag_colors(b) == used => {}
        _ => return Err("rainbow node is not rainbow".into()),
    }
    for c in &used {
        let holding: BTreeSet<usize> =
            r.tree.bags.iter().filter(|(_, b)| bag_colors(b).contains(c)).map(|(&t, _)| t).collect();
        if !connected_within(&holding) {
            return Err(format!("colour {c} nodes disconnected"));
        }
    }
    Ok(())
}

/// Path `x, x-y.1, .., y` following the subdivision naming, built by hand.
pub fn subdivided_edge(x: &str, y: &str, interior: usize) -> Vec<String> {
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    let mut inner: Vec<String> = (1..=interior).map(|i| format!("{lo}-{hi}.{i}")).collect();
    if x != lo {
        inner.reverse();
    }
    let mut out = vec![x.to_owned()];
    out.extend(inner);
    out.push(y.to_owned());
    out
}

pub fn path_edges(path: &[String]) -> Vec<(String, String)> {
    path.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

/// Vertex and edge lists of a union of paths.
pub fn union_of_paths(paths: &[Vec<String>]) -> (Vec<String>, Vec<(String, String)>) {
    let mut vs = BTreeSet::new();
    let mut es = Vec::new();
    for p in paths {
        vs.extend(p.iter().cloned());
        es.extend(path_edges(p));
    }
    (vs.into_iter().collect(), es)
}
