//! Minor models pushed through a quasi-isometric embedding of a long subdivision.
//!
//! With `R = c(c + 1)`, each branch vertex `v` of the subdivision gets
//! `X_v = N^R[v]`, and each pattern edge the stretch `P_e` of its path lying
//! between the two balls. These are far apart in the source; the embedding
//! keeps them apart, so the `c`-neighbourhoods of their images form a model.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, VertexSet};
use crate::quasi_iso::{check_qi, QiMap};
use crate::scalar::Scalar;

/// Branch sets for the pattern vertices and connector sets for its edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ModelWire", from = "ModelWire")]
pub struct MinorModel {
    pub branch_sets: BTreeMap<String, VertexSet>,
    /// Keyed by pattern edge `(u, v)` with `u < v`.
    pub edge_paths: BTreeMap<(String, String), VertexSet>,
}

#[derive(Serialize, Deserialize)]
struct EdgePathWire {
    edge: [String; 2],
    vertices: VertexSet,
}

#[derive(Serialize, Deserialize)]
struct ModelWire {
    branch_sets: BTreeMap<String, VertexSet>,
    edge_paths: Vec<EdgePathWire>,
}

impl From<MinorModel> for ModelWire {
    fn from(m: MinorModel) -> ModelWire {
        ModelWire {
            branch_sets: m.branch_sets,
            edge_paths: m
                .edge_paths
                .into_iter()
                .map(|((u, v), vertices)| EdgePathWire { edge: [u, v], vertices })
                .collect(),
        }
    }
}

impl From<ModelWire> for MinorModel {
    fn from(w: ModelWire) -> MinorModel {
        MinorModel {
            branch_sets: w.branch_sets,
            edge_paths: w
                .edge_paths
                .into_iter()
                .map(|EdgePathWire { edge: [u, v], vertices }| {
                    if u < v {
                        ((u, v), vertices)
                    } else {
                        ((v, u), vertices)
                    }
                })
                .collect(),
        }
    }
}

impl MinorModel {
    /// Checks that this is a model of `h` in `g`: all sets nonempty and
    /// connected, branch sets pairwise disjoint, edge sets pairwise disjoint,
    /// and an edge set meets a branch set exactly when the vertex is an
    /// endpoint of the edge. Errors name the offending pair.
    pub fn check(&self, g: &Graph, h: &Graph) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        let wanted_vertices: BTreeSet<&str> = h.vertices().collect();
        let have_vertices: BTreeSet<&str> = self.branch_sets.keys().map(String::as_str).collect();
        if wanted_vertices != have_vertices {
            return fail("branch sets do not match the pattern vertices".into());
        }
        let wanted_edges: BTreeSet<(&str, &str)> = h.edges().into_iter().collect();
        let have_edges: BTreeSet<(&str, &str)> =
            self.edge_paths.keys().map(|(u, v)| (u.as_str(), v.as_str())).collect();
        if wanted_edges != have_edges {
            return fail("edge sets do not match the pattern edges".into());
        }
        let connected = |name: &str, set: &VertexSet| -> Result<()> {
            if set.is_empty() {
                return fail(format!("{name} is empty"));
            }
            if !g.is_connected_subset(set)? {
                return fail(format!("{name} is not connected"));
            }
            Ok(())
        };
        for (v, set) in &self.branch_sets {
            connected(&format!("branch set of `{v}`"), set)?;
        }
        for ((u, v), set) in &self.edge_paths {
            connected(&format!("edge set of `{u}`-`{v}`"), set)?;
        }
        let branches: Vec<_> = self.branch_sets.iter().collect();
        for (a, (v, x)) in branches.iter().enumerate() {
            for (w, y) in &branches[a + 1..] {
                if let Some(z) = x.intersection(y).next() {
                    return fail(format!("branch sets of `{v}` and `{w}` share `{z}`"));
                }
            }
        }
        let paths: Vec<_> = self.edge_paths.iter().collect();
        for (a, (e, x)) in paths.iter().enumerate() {
            for (f, y) in &paths[a + 1..] {
                if let Some(z) = x.intersection(y).next() {
                    return fail(format!("edge sets of {e:?} and {f:?} share `{z}`"));
                }
            }
        }
        for ((u, v), p) in &self.edge_paths {
            for (w, x) in &self.branch_sets {
                let meets = !p.is_disjoint(x);
                let endpoint = w == u || w == v;
                if meets != endpoint {
                    return fail(format!(
                        "edge set of `{u}`-`{v}` {} branch set of `{w}`",
                        if meets { "meets the non-incident" } else { "misses the incident" }
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Smallest source distances between the sets that must stay apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationFacts {
    /// Between balls of distinct branch vertices.
    pub branch_gap: Distance,
    /// Between stretches of distinct edges.
    pub path_gap: Distance,
    /// Between a stretch and the ball of a vertex not on its edge.
    pub path_branch_gap: Distance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuiltModel {
    pub model: MinorModel,
    pub facts: SeparationFacts,
}

/// For each pattern edge, the path joining its ends in the subdivision.
fn branch_paths(h: &Graph, source: &Graph) -> Result<BTreeMap<(String, String), Vec<String>>> {
    let not_sub = |why: String| Error::Input(format!("source is not a subdivision of the pattern: {why}"));
    for v in h.vertices() {
        if !source.contains(v) {
            return Err(not_sub(format!("branch vertex `{v}` is missing")));
        }
    }
    let mut found: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    let mut interior_seen = BTreeSet::new();
    for u in h.vertices() {
        for first in source.neighbors(u)? {
            let mut path = vec![u.to_owned(), first.to_owned()];
            while !h.contains(path.last().unwrap()) {
                let cur = path.last().unwrap().clone();
                let prev = &path[path.len() - 2];
                let next: Vec<&str> = source.neighbors(&cur)?.filter(|w| w != prev).collect();
                if next.len() != 1 {
                    return Err(not_sub(format!("`{cur}` has degree {}", next.len() + 1)));
                }
                path.push(next[0].to_owned());
            }
            let end = path.last().unwrap().clone();
            if end == u {
                return Err(not_sub(format!("a path leaves and returns to `{u}`")));
            }
            if !h.has_edge(u, &end) {
                return Err(not_sub(format!("a path joins `{u}` and `{end}`, which are not adjacent")));
            }
            if u < end.as_str() {
                interior_seen.extend(path[1..path.len() - 1].iter().cloned());
                if found.insert((u.to_owned(), end.clone()), path).is_some() {
                    return Err(not_sub(format!("two paths join `{u}` and `{end}`")));
                }
            }
        }
    }
    if found.len() != h.num_edges() {
        return Err(not_sub("some pattern edge has no path".into()));
    }
    if h.num_vertices() + interior_seen.len() != source.num_vertices() {
        return Err(not_sub("extra vertices outside the subdivided paths".into()));
    }
    Ok(found)
}

/// Builds the model of `h` in the target of `f`, whose source must be a
/// subdivision of `h` with every edge subdivided at least `4c(c + 1) - 1`
/// times, and which must satisfy the distortion window for its constant `c`.
pub fn build_minor_model<S: Scalar>(h: &Graph, f: &QiMap<S>) -> Result<BuiltModel> {
    let c = f.c;
    let one = S::one();
    if c < one {
        return Err(Error::Input(format!("constant must be at least 1, got {c}")));
    }
    let source = &f.source;
    let target = &f.target;
    let paths = branch_paths(h, source)?;
    let radius = c * (c + one);
    let needed = S::from_count(4) * radius;
    for ((u, v), path) in &paths {
        let length = S::from_count(path.len() as u64 - 1);
        if length < needed {
            return Err(Error::Input(format!(
                "edge `{u}`-`{v}` is subdivided {} times, fewer than 4c(c+1)-1 = {}",
                path.len() - 2,
                needed - one
            )));
        }
    }
    let report = check_qi(f);
    if !report.qi1 {
        return Err(Error::Input(format!(
            "map fails the distortion window for c = {c}: {:?}",
            report.lower_witness.or(report.upper_witness).or(report.infinity_mismatch)
        )));
    }

    let balls: BTreeMap<String, VertexSet> = h
        .vertices()
        .map(|v| Ok((v.to_owned(), source.closed_r_neighborhood([v], radius)?)))
        .collect::<Result<_>>()?;
    let stretches: BTreeMap<(String, String), VertexSet> = paths
        .iter()
        .map(|((u, v), path)| {
            // From the last vertex of u's ball to the first of v's ball.
            let start = path.iter().rposition(|x| balls[u].contains(x)).unwrap();
            let end = path.iter().position(|x| balls[v].contains(x)).unwrap();
            let stretch = if start <= end { &path[start..=end] } else { &path[end..=start] };
            ((u.clone(), v.clone()), stretch.iter().cloned().collect())
        })
        .collect();

    let gap = |a: &VertexSet, b: &VertexSet| source.set_distance(a, b);
    let mut facts = SeparationFacts {
        branch_gap: Distance::Infinite,
        path_gap: Distance::Infinite,
        path_branch_gap: Distance::Infinite,
    };
    let ball_list: Vec<_> = balls.iter().collect();
    for (a, (_, x)) in ball_list.iter().enumerate() {
        for (_, y) in &ball_list[a + 1..] {
            facts.branch_gap = facts.branch_gap.min(gap(x, y)?);
        }
    }
    let stretch_list: Vec<_> = stretches.iter().collect();
    for (a, ((u, v), p)) in stretch_list.iter().enumerate() {
        for (_, q) in &stretch_list[a + 1..] {
            facts.path_gap = facts.path_gap.min(gap(p, q)?);
        }
        for (w, x) in &balls {
            if w != u && w != v {
                facts.path_branch_gap = facts.path_branch_gap.min(gap(p, x)?);
            }
        }
    }
    let floor = S::from_count(2) * radius;
    for (name, d) in [
        ("branch balls", facts.branch_gap),
        ("edge stretches", facts.path_gap),
        ("edge stretch and branch ball", facts.path_branch_gap),
    ] {
        if d.finite().is_some_and(|d| S::from_count(d) < floor) {
            return Err(Error::Contract(format!(
                "{name} are only {d} apart, below 2c(c+1) = {floor}"
            )));
        }
    }

    let image = |set: &VertexSet| -> Result<VertexSet> {
        let imgs: Vec<&str> = set.iter().map(|v| f.f[v].as_str()).collect();
        target.closed_r_neighborhood(imgs, c)
    };
    let model = MinorModel {
        branch_sets: balls.iter().map(|(v, x)| Ok((v.clone(), image(x)?))).collect::<Result<_>>()?,
        edge_paths: stretches.iter().map(|(e, p)| Ok((e.clone(), image(p)?))).collect::<Result<_>>()?,
    };
    model.check(target, h)?;
    Ok(BuiltModel { model, facts })
}
