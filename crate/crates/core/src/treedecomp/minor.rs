//! Minor containment for a small pattern in a host graph.
//!
//! The host is first shrunk by rules that cannot change the answer given
//! the pattern's minimum degree: with minimum degree at least 2, vertices of
//! degree at most 1 are deleted; with at least 3, degree-2 vertices are
//! suppressed (replaced by an edge between their neighbours). The search then
//! assigns connected, disjoint branch sets to the pattern vertices one by one.

use std::collections::BTreeSet;

use super::OracleCaps;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hosts above this size are refused by [`has_minor_exhaustive`].
const EXHAUSTIVE_HOST_CAP: usize = 10;
const EXHAUSTIVE_PATTERN_CAP: usize = 5;

/// Whether `h` is a minor of `g`.
pub fn has_minor(g: &Graph, h: &Graph, caps: &OracleCaps) -> Result<bool> {
    if h.num_vertices() > caps.minor_pattern {
        return Err(Error::CapExceeded {
            what: "minor pattern",
            size: h.num_vertices(),
            cap: caps.minor_pattern,
        });
    }
    if g.num_vertices() > caps.minor_host {
        return Err(Error::CapExceeded {
            what: "minor host",
            size: g.num_vertices(),
            cap: caps.minor_host,
        });
    }
    if h.is_empty() {
        return Ok(true);
    }
    let min_degree = (0..h.num_vertices())
        .map(|i| h.neighbor_indices(i).len())
        .min()
        .unwrap_or(0);
    let kernel = reduce_host(g, min_degree);
    if kernel.len() > caps.minor_kernel.min(64) {
        return Err(Error::CapExceeded {
            what: "minor host kernel",
            size: kernel.len(),
            cap: caps.minor_kernel.min(64),
        });
    }
    let kernel_edges = kernel.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2;
    if kernel.len() < h.num_vertices() || kernel_edges < h.num_edges() {
        return Ok(false);
    }

    let mut order: Vec<usize> = (0..h.num_vertices()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(h.neighbor_indices(i).len()));
    let rank: Vec<usize> = {
        let mut r = vec![0; order.len()];
        for (pos, &x) in order.iter().enumerate() {
            r[x] = pos;
        }
        r
    };
    // For each pattern vertex in search order, the positions of its earlier neighbours.
    let earlier: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(pos, &x)| {
            h.neighbor_indices(x)
                .iter()
                .map(|&y| rank[y])
                .filter(|&p| p < pos)
                .collect()
        })
        .collect();
    let mut search = Search {
        adj: &kernel,
        earlier: &earlier,
        branch: Vec::with_capacity(order.len()),
    };
    let all = if kernel.len() == 64 {
        u64::MAX
    } else {
        (1u64 << kernel.len()) - 1
    };
    Ok(search.place(all))
}

/// Labels every host vertex with a pattern vertex or nothing, and checks the
/// labelling directly. Only for tiny graphs; used to cross-check [`has_minor`].
pub fn has_minor_exhaustive(g: &Graph, h: &Graph) -> Result<bool> {
    if g.num_vertices() > EXHAUSTIVE_HOST_CAP {
        return Err(Error::CapExceeded {
            what: "exhaustive minor host",
            size: g.num_vertices(),
            cap: EXHAUSTIVE_HOST_CAP,
        });
    }
    if h.num_vertices() > EXHAUSTIVE_PATTERN_CAP {
        return Err(Error::CapExceeded {
            what: "exhaustive minor pattern",
            size: h.num_vertices(),
            cap: EXHAUSTIVE_PATTERN_CAP,
        });
    }
    let n = g.num_vertices();
    let p = h.num_vertices();
    let base = p + 1;
    let total = base.pow(n as u32);
    let mut labels = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = c % base;
            c /= base;
        }
        let sets: Vec<Vec<usize>> = (1..=p)
            .map(|x| (0..n).filter(|&v| labels[v] == x).collect())
            .collect();
        if sets.iter().any(|s| s.is_empty() || !g.is_connected_subset_idx(s)) {
            continue;
        }
        let touches = |a: &[usize], b: &[usize]| {
            a.iter().any(|&u| b.iter().any(|&v| g.has_edge_idx(u, v)))
        };
        if h.edge_indices().all(|(x, y)| touches(&sets[x], &sets[y])) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Host adjacency as bitmasks after the reductions allowed by `min_degree`.
fn reduce_host(g: &Graph, min_degree: usize) -> Vec<u64> {
    let mut adj: Vec<BTreeSet<usize>> = (0..g.num_vertices())
        .map(|i| g.neighbor_indices(i).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..g.num_vertices()).collect();
    let remove = |adj: &mut Vec<BTreeSet<usize>>, alive: &mut BTreeSet<usize>, v: usize| {
        for u in std::mem::take(&mut adj[v]) {
            adj[u].remove(&v);
        }
        alive.remove(&v);
    };
    loop {
        let mut changed = false;
        for v in alive.clone() {
            let d = adj[v].len();
            if min_degree >= 2 && d <= 1 {
                remove(&mut adj, &mut alive, v);
                changed = true;
            } else if min_degree >= 3 && d == 2 {
                let mut it = adj[v].iter().copied();
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                remove(&mut adj, &mut alive, v);
                adj[a].insert(b);
                adj[b].insert(a);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = alive.into_iter().collect();
    kept.iter()
        .map(|&v| {
            adj[v]
                .iter()
                .filter_map(|u| kept.iter().position(|w| w == u))
                .fold(0u64, |m, j| m | (1 << j))
        })
        .collect()
}

struct Search<'a> {
    adj: &'a [u64],
    earlier: &'a [Vec<usize>],
    branch: Vec<u64>,
}

impl Search<'_> {
    fn neighborhood(&self, set: u64) -> u64 {
        let mut out = 0;
        let mut s = set;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            out |= self.adj[v];
        }
        out & !set
    }

    /// Tries to give branch sets to the remaining pattern vertices using `free`.
    fn place(&mut self, free: u64) -> bool {
        let pos = self.branch.len();
        if pos == self.earlier.len() {
            return true;
        }
        let still_needed = (self.earlier.len() - pos - 1) as u32;
        if free.count_ones() <= still_needed {
            return false;
        }
        // Every earlier neighbour's branch set must border the new one, so it
        // must border the free region at all.
        let targets: Vec<u64> = self.earlier[pos].iter().map(|&p| self.branch[p]).collect();
        if targets.iter().any(|&t| self.neighborhood(t) & free == 0) {
            return false;
        }
        let mut roots = free;
        while roots != 0 {
            let r = roots.trailing_zeros() as usize;
            roots &= roots - 1;
            // Connected sets whose least vertex is r.
            let allowed = free & !((1u64 << r) - 1);
            if self.grow(1 << r, 0, allowed, free, &targets, still_needed) {
                return true;
            }
        }
        false
    }

    /// Enumerates each connected set containing `set` inside `allowed` once:
    /// branch on the least frontier vertex, include it or exclude it for good.
    fn grow(
        &mut self,
        set: u64,
        excluded: u64,
        allowed: u64,
        free: u64,
        targets: &[u64],
        still_needed: u32,
    ) -> bool {
        if (free & !set).count_ones() < still_needed {
            return false;
        }
        let frontier = self.neighborhood(set) & allowed & !excluded;
        if frontier == 0 {
            let borders = self.neighborhood(set);
            if targets.iter().all(|&t| t & borders != 0) {
                self.branch.push(set);
                if self.place(free & !set) {
                    return true;
                }
                self.branch.pop();
            }
            return false;
        }
        let v = 1u64 << frontier.trailing_zeros();
        self.grow(set | v, excluded, allowed, free, targets, still_needed)
            || self.grow(set, excluded | v, allowed, free, targets, still_needed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedecomp::brute_treewidth_exhaustive;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((format!("k{a}"), format!("k{b}")));
            }
        }
        Graph::new((0..n).map(|i| format!("k{i}")), edges).unwrap()
    }

    fn subdivided_k4(times: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let mut prev = format!("k{a}");
                for i in 1..=times {
                    let next = format!("k{a}-k{b}.{i}");
                    edges.push((prev, next.clone()));
                    prev = next;
                }
                edges.push((prev, format!("k{b}")));
            }
        }
        Graph::from_edges(edges).unwrap()
    }

    #[test]
    fn single_vertex_pattern() {
        let caps = OracleCaps::default();
        let k1 = complete(1);
        assert!(has_minor(&complete(3), &k1, &caps).unwrap());
        assert!(has_minor_exhaustive(&complete(3), &k1).unwrap());
    }

    #[test]
    fn trees_have_no_triangle() {
        let tree = Graph::from_edges([("a", "b"), ("b", "c"), ("b", "d"), ("d", "e")]).unwrap();
        assert!(!has_minor(&tree, &complete(3), &OracleCaps::default()).unwrap());
        assert!(!has_minor_exhaustive(&tree, &complete(3)).unwrap());
    }

    #[test]
    fn subdivided_clique_contains_its_clique() {
        let caps = OracleCaps::default();
        let g = subdivided_k4(7);
        assert_eq!(g.num_vertices(), 46);
        assert!(has_minor(&g, &complete(4), &caps).unwrap());
        assert!(!has_minor(&g, &complete(5), &caps).unwrap());
        let one_split = Graph::from_edges([
            ("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "x"), ("x", "d"),
        ])
        .unwrap();
        assert!(has_minor_exhaustive(&one_split, &complete(4)).unwrap());
    }

    #[test]
    fn cycle_contracts_to_a_triangle() {
        let c7 = Graph::from_edges((0..7).map(|i| (format!("c{i}"), format!("c{}", (i + 1) % 7))))
            .unwrap();
        assert!(has_minor(&c7, &complete(3), &OracleCaps::default()).unwrap());
        assert!(!has_minor(&c7, &complete(4), &OracleCaps::default()).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let tiny = OracleCaps {
            minor_pattern: 3,
            ..OracleCaps::default()
        };
        assert!(matches!(
            has_minor(&complete(5), &complete(4), &tiny),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            has_minor_exhaustive(&subdivided_k4(2), &complete(4)),
            Err(Error::CapExceeded { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(min: usize, max: usize, tag: &'static str) -> impl Strategy<Value = Graph> {
            (min..=max).prop_flat_map(move |n| {
                proptest::collection::vec((0..n, 0..n), 0..(2 * n + 2)).prop_map(move |pairs| {
                    Graph::new(
                        (0..n).map(|i| format!("{tag}{i}")),
                        pairs
                            .into_iter()
                            .filter(|(a, b)| a != b)
                            .map(|(a, b)| (format!("{tag}{a}"), format!("{tag}{b}"))),
                    )
                    .unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn search_matches_labelling_oracle(
                g in arb_graph(1, 7, "g"),
                h in arb_graph(1, 4, "h"),
            ) {
                let fast = has_minor(&g, &h, &OracleCaps::default()).unwrap();
                let slow = has_minor_exhaustive(&g, &h).unwrap();
                prop_assert_eq!(fast, slow);
            }

            #[test]
            fn treewidth_is_minor_monotone(
                g in arb_graph(1, 8, "g"),
                h in arb_graph(1, 4, "h"),
            ) {
                if has_minor(&g, &h, &OracleCaps::default()).unwrap() {
                    let tg = brute_treewidth_exhaustive(&g, 12).unwrap();
                    let th = brute_treewidth_exhaustive(&h, 12).unwrap();
                    prop_assert!(th <= tg);
                }
            }

            #[test]
            fn suppression_preserves_clique_minors(
                g in arb_graph(4, 9, "g"),
                times in 0usize..3,
            ) {
                // Subdividing every edge never changes whether K4 is a minor.
                let mut edges = Vec::new();
                for (u, v) in g.edges() {
                    let mut prev = u.to_owned();
                    for i in 1..=times {
                        let next = format!("{u}-{v}.{i}");
                        edges.push((prev, next.clone()));
                        prev = next;
                    }
                    edges.push((prev, v.to_owned()));
                }
                let sub = Graph::new(
                    g.vertices().map(str::to_owned).chain(edges.iter().flat_map(|(a, b)| [a.clone(), b.clone()])).collect::<BTreeSet<_>>(),
                    edges,
                ).unwrap();
                let caps = OracleCaps { minor_host: 128, ..OracleCaps::default() };
                prop_assert_eq!(
                    has_minor(&g, &complete(4), &caps).unwrap(),
                    has_minor(&sub, &complete(4), &caps).unwrap()
                );
            }
        }
    }
}
