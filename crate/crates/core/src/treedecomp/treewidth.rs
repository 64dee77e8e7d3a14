//! Exact treewidth for small graphs.
//!
//! The search is the subset recurrence over elimination orderings:
//! `TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|)`, where
//! `Q(S, v)` is the set of vertices outside `S + v` reachable from `v`
//! through `S`. It is memoised on the set of eliminated vertices.
//!
//! [`brute_treewidth`] first applies the simplicial and almost-simplicial
//! reduction rules, which keep `max(low, tw(kernel)) = tw(g)`, and runs the
//! search on the kernel only. [`brute_treewidth_exhaustive`] skips them.

use std::collections::BTreeSet;

use super::OracleCaps;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exact treewidth, with the size cap applied to the reduced kernel.
pub fn brute_treewidth(g: &Graph, caps: &OracleCaps) -> Result<usize> {
    if g.is_empty() {
        return Err(Error::Input("treewidth of the empty graph is undefined here".into()));
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..g.num_vertices())
        .map(|i| g.neighbor_indices(i).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..g.num_vertices()).collect();
    let low = reduce(&mut adj, &mut alive);
    if alive.len() > caps.treewidth {
        return Err(Error::CapExceeded {
            what: "treewidth kernel",
            size: alive.len(),
            cap: caps.treewidth,
        });
    }
    let kernel: Vec<usize> = alive.into_iter().collect();
    let masks = local_masks(&kernel, &adj);
    Ok(low.max(subset_search(&masks)))
}

/// Exact treewidth by the subset recurrence alone, with the cap on `|V(g)|`.
pub fn brute_treewidth_exhaustive(g: &Graph, cap: usize) -> Result<usize> {
    if g.is_empty() {
        return Err(Error::Input("treewidth of the empty graph is undefined here".into()));
    }
    if g.num_vertices() > cap {
        return Err(Error::CapExceeded {
            what: "treewidth search",
            size: g.num_vertices(),
            cap,
        });
    }
    let adj: Vec<BTreeSet<usize>> = (0..g.num_vertices())
        .map(|i| g.neighbor_indices(i).iter().copied().collect())
        .collect();
    let all: Vec<usize> = (0..g.num_vertices()).collect();
    Ok(subset_search(&local_masks(&all, &adj)))
}

fn is_clique(adj: &[BTreeSet<usize>], set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|b| adj[a].contains(b)))
}

fn remove_vertex(adj: &mut [BTreeSet<usize>], alive: &mut BTreeSet<usize>, v: usize) {
    for u in std::mem::take(&mut adj[v]) {
        adj[u].remove(&v);
    }
    alive.remove(&v);
}

/// Largest minimum degree over subgraphs; a lower bound on treewidth.
fn degeneracy(adj: &[BTreeSet<usize>], alive: &BTreeSet<usize>) -> usize {
    let mut deg: Vec<usize> = adj.iter().map(BTreeSet::len).collect();
    let mut left = alive.clone();
    let mut best = 0;
    while let Some(&v) = left.iter().min_by_key(|&&v| deg[v]) {
        best = best.max(deg[v]);
        left.remove(&v);
        for &u in &adj[v] {
            if left.contains(&u) {
                deg[u] -= 1;
            }
        }
    }
    best
}

/// Applies the reduction rules until none fires; returns the lower bound.
///
/// `low` is a running lower bound on the treewidth of the input. The
/// almost-simplicial rule needs one, so it is raised to the kernel's
/// degeneracy whenever the rules stall.
fn reduce(adj: &mut [BTreeSet<usize>], alive: &mut BTreeSet<usize>) -> usize {
    let mut low = 0;
    loop {
        let mut changed = false;
        for v in alive.clone() {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            if is_clique(adj, &nbrs) {
                low = low.max(nbrs.len());
                remove_vertex(adj, alive, v);
                changed = true;
                continue;
            }
            if nbrs.len() > low {
                continue;
            }
            let special = nbrs.iter().copied().find(|&w| {
                let rest: Vec<usize> = nbrs.iter().copied().filter(|&u| u != w).collect();
                is_clique(adj, &rest)
            });
            if let Some(w) = special {
                // Eliminating v turns N(v) into a clique, i.e. contracts vw.
                for &u in nbrs.iter().filter(|&&u| u != w) {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
                remove_vertex(adj, alive, v);
                changed = true;
            }
        }
        if !changed {
            let bound = degeneracy(adj, alive);
            if bound <= low {
                return low;
            }
            low = bound;
        }
    }
}

/// Adjacency of `vertices` as bitmasks over their positions.
fn local_masks(vertices: &[usize], adj: &[BTreeSet<usize>]) -> Vec<u64> {
    let pos = |v: usize| vertices.iter().position(|&x| x == v);
    vertices
        .iter()
        .map(|&v| {
            adj[v]
                .iter()
                .filter_map(|&u| pos(u))
                .fold(0u64, |m, j| m | (1 << j))
        })
        .collect()
}

/// `|Q(S, v)|`: vertices outside `S + v` reachable from `v` through `S`.
fn q_size(masks: &[u64], s: u64, v: usize) -> u32 {
    let mut reached = 1u64 << v;
    let mut frontier = 1u64 << v;
    let mut outside = 0u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let x = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= masks[x];
        }
        next &= !reached;
        reached |= next;
        outside |= next & !s;
        frontier = next & s;
    }
    outside.count_ones()
}

fn subset_search(masks: &[u64]) -> usize {
    let n = masks.len();
    if n == 0 {
        return 0;
    }
    assert!(n < 32, "subset search is limited to fewer than 32 vertices");
    let full = (1u64 << n) - 1;
    // tw[S] over eliminated sets; -1 encodes the empty set's minus infinity.
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut best = i32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let q = q_size(masks, without, v) as i32;
            best = best.min(tw[without as usize].max(q));
        }
        tw[s as usize] = best;
    }
    tw[full as usize].max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((format!("k{a}"), format!("k{b}")));
            }
        }
        Graph::new((0..n).map(|i| format!("k{i}")), edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges((0..n).map(|i| (format!("c{i}"), format!("c{}", (i + 1) % n)))).unwrap()
    }

    /// Width of the elimination ordering `order`, by simulating fill-in.
    fn elimination_width(g: &Graph, order: &[usize]) -> usize {
        let mut adj: Vec<BTreeSet<usize>> = (0..g.num_vertices())
            .map(|i| g.neighbor_indices(i).iter().copied().collect())
            .collect();
        let mut width = 0;
        for &v in order {
            let nbrs: Vec<usize> = adj[v].iter().copied().collect();
            width = width.max(nbrs.len());
            for &a in &nbrs {
                adj[a].remove(&v);
                for &b in &nbrs {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        width
    }

    /// Minimum over every permutation: the definition, with no memoisation.
    fn permutation_oracle(g: &Graph) -> usize {
        fn permute(items: &mut Vec<usize>, k: usize, g: &Graph, best: &mut usize) {
            if k == items.len() {
                *best = (*best).min(elimination_width(g, items));
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                permute(items, k + 1, g, best);
                items.swap(k, i);
            }
        }
        let mut items: Vec<usize> = (0..g.num_vertices()).collect();
        let mut best = usize::MAX;
        permute(&mut items, 0, g, &mut best);
        best
    }

    #[test]
    fn trees_have_treewidth_one() {
        let star = Graph::from_edges([("c", "a"), ("c", "b"), ("c", "d"), ("d", "e")]).unwrap();
        let caps = OracleCaps::default();
        assert_eq!(brute_treewidth(&star, &caps).unwrap(), 1);
        assert_eq!(brute_treewidth_exhaustive(&star, 12).unwrap(), 1);
    }

    #[test]
    fn complete_graphs() {
        let caps = OracleCaps::default();
        assert_eq!(brute_treewidth(&complete(5), &caps).unwrap(), 4);
        assert_eq!(brute_treewidth_exhaustive(&complete(5), 12).unwrap(), 4);
        assert_eq!(brute_treewidth(&complete(1), &caps).unwrap(), 0);
    }

    #[test]
    fn six_cycle_matches_permutation_oracle() {
        let c6 = cycle(6);
        assert_eq!(permutation_oracle(&c6), 2);
        assert_eq!(brute_treewidth_exhaustive(&c6, 12).unwrap(), 2);
        assert_eq!(brute_treewidth(&c6, &OracleCaps::default()).unwrap(), 2);
    }

    #[test]
    fn caps_fail_loudly() {
        let k14 = complete(14);
        assert!(matches!(
            brute_treewidth_exhaustive(&k14, 12),
            Err(Error::CapExceeded { .. })
        ));
        // A clique reduces away entirely.
        assert_eq!(brute_treewidth(&k14, &OracleCaps::default()).unwrap(), 13);
        // A 4x4 grid has no simplicial or almost simplicial vertices once
        // the corners are gone, so a small cap is exceeded.
        let mut edges = Vec::new();
        for r in 0..4 {
            for c in 0..4 {
                if c + 1 < 4 {
                    edges.push((format!("{r}{c}"), format!("{r}{}", c + 1)));
                }
                if r + 1 < 4 {
                    edges.push((format!("{r}{c}"), format!("{}{c}", r + 1)));
                }
            }
        }
        let grid = Graph::from_edges(edges).unwrap();
        let tiny = OracleCaps {
            treewidth: 5,
            ..OracleCaps::default()
        };
        assert!(matches!(brute_treewidth(&grid, &tiny), Err(Error::CapExceeded { .. })));
        let roomy = OracleCaps {
            treewidth: 16,
            ..OracleCaps::default()
        };
        assert_eq!(brute_treewidth(&grid, &roomy).unwrap(), 4);
    }

    #[test]
    fn long_subdivisions_reduce_to_their_branch_graph() {
        // 7-subdivision of K4: 46 vertices, treewidth 3.
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let mut prev = format!("k{a}");
                for i in 1..=7 {
                    let next = format!("k{a}-k{b}.{i}");
                    edges.push((prev, next.clone()));
                    prev = next;
                }
                edges.push((prev, format!("k{b}")));
            }
        }
        let g = Graph::from_edges(edges).unwrap();
        assert_eq!(g.num_vertices(), 46);
        assert_eq!(brute_treewidth(&g, &OracleCaps::default()).unwrap(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
            (1..=max).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |pairs| {
                    Graph::new(
                        (0..n).map(|i| format!("v{i}")),
                        pairs
                            .into_iter()
                            .filter(|(a, b)| a != b)
                            .map(|(a, b)| (format!("v{a}"), format!("v{b}"))),
                    )
                    .unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(96))]

            #[test]
            fn reductions_do_not_change_the_answer(g in arb_graph(9)) {
                let plain = brute_treewidth_exhaustive(&g, 12).unwrap();
                let reduced = brute_treewidth(&g, &OracleCaps::default()).unwrap();
                prop_assert_eq!(plain, reduced);
            }

            #[test]
            fn subset_search_matches_permutations(g in arb_graph(6)) {
                prop_assert_eq!(brute_treewidth_exhaustive(&g, 12).unwrap(), permutation_oracle(&g));
            }
        }
    }
}
