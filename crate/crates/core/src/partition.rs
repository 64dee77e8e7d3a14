//! Vertex partitions, quotient graphs and induced colourings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Graph, VertexSet};

/// Disjoint nonempty parts, keyed by a stable part id.
///
/// Serialises as `{part_id: [vertex, ..]}`; deserialising re-runs the checks of [`Partition::new`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BTreeMap<String, VertexSet>", try_from = "BTreeMap<String, VertexSet>")]
pub struct Partition {
    parts: BTreeMap<String, VertexSet>,
}

impl Partition {
    /// Checks that parts are nonempty, pairwise disjoint and have distinct ids.
    /// Coverage of a particular graph is checked by [`Partition::check_covers`].
    pub fn new<I, P, S>(parts: I) -> Result<Partition>
    where
        I: IntoIterator<Item = (P, S)>,
        P: Into<String>,
        S: IntoIterator,
        S::Item: Into<String>,
    {
        let mut out: BTreeMap<String, VertexSet> = BTreeMap::new();
        let mut owner: BTreeMap<String, String> = BTreeMap::new();
        for (id, members) in parts {
            let id = id.into();
            let members: VertexSet = members.into_iter().map(Into::into).collect();
            if members.is_empty() {
                return Err(Error::InvalidPartition(format!("part `{id}` is empty")));
            }
            for v in &members {
                if let Some(other) = owner.insert(v.clone(), id.clone()) {
                    return Err(Error::InvalidPartition(format!(
                        "vertex `{v}` lies in parts `{other}` and `{id}`"
                    )));
                }
            }
            if out.insert(id.clone(), members).is_some() {
                return Err(Error::InvalidPartition(format!("duplicate part id `{id}`")));
            }
        }
        Ok(Partition { parts: out })
    }

    /// One part per vertex, named after it.
    pub fn singletons(g: &Graph) -> Partition {
        Partition {
            parts: g
                .vertices()
                .map(|v| (v.to_owned(), VertexSet::from([v.to_owned()])))
                .collect(),
        }
    }

    /// The whole vertex set as a single part.
    pub fn whole(g: &Graph, id: impl Into<String>) -> Result<Partition> {
        Partition::new([(id.into(), g.vertices().map(str::to_owned).collect::<Vec<_>>())])
    }

    pub fn parts(&self) -> &BTreeMap<String, VertexSet> {
        &self.parts
    }

    pub fn part(&self, id: &str) -> Option<&VertexSet> {
        self.parts.get(id)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.parts.keys().map(String::as_str)
    }

    /// Vertex id to the id of the part holding it.
    pub fn owners(&self) -> BTreeMap<&str, &str> {
        self.parts
            .iter()
            .flat_map(|(id, vs)| vs.iter().map(move |v| (v.as_str(), id.as_str())))
            .collect()
    }

    /// Errors unless the parts cover exactly `V(g)`.
    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        let owners = self.owners();
        if let Some(v) = owners.keys().find(|v| !g.contains(v)) {
            return Err(Error::InvalidPartition(format!("`{v}` is not a vertex of the graph")));
        }
        if let Some(v) = g.vertices().find(|v| !owners.contains_key(v)) {
            return Err(Error::InvalidPartition(format!("vertex `{v}` is in no part")));
        }
        Ok(())
    }

    /// Part index for every graph vertex index, in part-id order.
    pub(crate) fn index_map(&self, g: &Graph) -> Result<Vec<usize>> {
        self.check_covers(g)?;
        let mut map = vec![0; g.num_vertices()];
        for (pi, members) in self.parts.values().enumerate() {
            for v in members {
                map[g.require(v)?] = pi;
            }
        }
        Ok(map)
    }

}

impl From<Partition> for BTreeMap<String, VertexSet> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl TryFrom<BTreeMap<String, VertexSet>> for Partition {
    type Error = Error;

    fn try_from(parts: BTreeMap<String, VertexSet>) -> Result<Partition> {
        Partition::new(parts)
    }
}

/// `G/P` together with the projection from vertices to part ids.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: Graph,
    pub projection: BTreeMap<String, String>,
}

/// Quotient graph: one vertex per part, an edge between two distinct parts
/// whenever some edge of `g` joins them. Parts spanning an edge get no loop.
pub fn quotient(g: &Graph, p: &Partition) -> Result<Quotient> {
    let map = p.index_map(g)?;
    let ids: Vec<&str> = p.ids().collect();
    let mut edges = Vec::new();
    for (a, b) in g.edge_indices() {
        let (pa, pb) = (map[a], map[b]);
        if pa != pb {
            edges.push((ids[pa], ids[pb]));
        }
    }
    let graph = Graph::new(ids.iter().copied(), edges)?;
    let projection = g
        .vertices()
        .enumerate()
        .map(|(i, v)| (v.to_owned(), ids[map[i]].to_owned()))
        .collect();
    Ok(Quotient { graph, projection })
}

/// Whether every part is a single colour class fragment.
pub fn is_monochromatic(cg: &ColoredGraph, p: &Partition) -> Result<bool> {
    p.check_covers(cg.graph())?;
    Ok(p.parts().values().all(|members| part_color(cg, members).is_some()))
}

/// The colouring `c_P` of the quotient. Defined only for monochromatic partitions.
pub fn induced_coloring(cg: &ColoredGraph, p: &Partition) -> Result<BTreeMap<String, Color>> {
    p.check_covers(cg.graph())?;
    p.parts()
        .iter()
        .map(|(id, members)| {
            part_color(cg, members).map(|c| (id.clone(), c)).ok_or_else(|| {
                Error::Contract(format!(
                    "part `{id}` is not monochromatic, so it has no induced colour"
                ))
            })
        })
        .collect()
}

fn part_color(cg: &ColoredGraph, members: &VertexSet) -> Option<Color> {
    let mut colors = members.iter().map(|v| cg.color(v));
    let first = colors.next()??;
    colors.all(|c| c == Some(first)).then_some(first)
}
