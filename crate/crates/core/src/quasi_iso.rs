//! Quasi-isometry maps between graphs and exhaustive checks of their bounds.
//!
//! A map `f` with constant `c` must satisfy, for all source vertices `x, y`,
//! `d(x, y) / c - c <= d'(f(x), f(y)) <= c * d(x, y) + c` (the distortion
//! window) and every target vertex must lie within `c` of the image (the
//! density condition). When `d(x, y)` is infinite the image distance must be
//! infinite as well, and the other way round.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph};
use crate::partition::{quotient, Partition};
use crate::scalar::Scalar;

/// A total vertex map between two graphs with its claimed constant.
#[derive(Clone, Debug, PartialEq)]
pub struct QiMap<S> {
    pub source: Graph,
    pub target: Graph,
    pub f: BTreeMap<String, String>,
    pub c: S,
}

impl<S: Scalar> QiMap<S> {
    /// Checks that `f` is total on the source, lands in the target, and `c > 0`.
    pub fn new(source: Graph, target: Graph, f: BTreeMap<String, String>, c: S) -> Result<QiMap<S>> {
        if !(c > S::zero()) {
            return Err(Error::Input(format!("quasi-isometry constant must be positive, got {c}")));
        }
        if let Some(v) = source.vertices().find(|v| !f.contains_key(*v)) {
            return Err(Error::Input(format!("map is undefined on source vertex `{v}`")));
        }
        if let Some(v) = f.keys().find(|v| !source.contains(v)) {
            return Err(Error::UnknownVertex(v.clone()));
        }
        if let Some((v, w)) = f.iter().find(|(_, w)| !target.contains(w)) {
            return Err(Error::Input(format!("`{v}` maps to `{w}`, which is not a target vertex")));
        }
        Ok(QiMap { source, target, f, c })
    }

    /// The identity on `g`.
    pub fn identity(g: &Graph, c: S) -> Result<QiMap<S>> {
        let f = g.vertices().map(|v| (v.to_owned(), v.to_owned())).collect();
        QiMap::new(g.clone(), g.clone(), f, c)
    }

    /// The same map with another constant.
    pub fn with_constant(&self, c: S) -> Result<QiMap<S>> {
        QiMap::new(self.source.clone(), self.target.clone(), self.f.clone(), c)
    }

    /// Target index of every source index.
    pub(crate) fn index_map(&self) -> Vec<usize> {
        self.source
            .vertices()
            .map(|v| self.target.index_of(&self.f[v]).expect("checked in new"))
            .collect()
    }
}

/// Sends each vertex to its part in the quotient.
///
/// The constant is one more than the largest weak diameter of a part, which
/// is the constant the partition guarantees.
pub fn projection_map<S: Scalar>(g: &Graph, p: &Partition) -> Result<QiMap<S>> {
    let c = max_part_diameter(g, p)?;
    let q = quotient(g, p)?;
    QiMap::new(g.clone(), q.graph, q.projection, S::from_count(c + 1))
}

fn max_part_diameter(g: &Graph, p: &Partition) -> Result<u64> {
    p.check_covers(g)?;
    let mut worst = 0;
    for (id, members) in p.parts() {
        match g.weak_diameter(members)? {
            Distance::Finite(d) => worst = worst.max(d),
            Distance::Infinite => {
                return Err(Error::Input(format!(
                    "part `{id}` meets two components, so its weak diameter is infinite"
                )))
            }
        }
    }
    Ok(worst)
}

fn scalar_json<S: Scalar, Z: Serializer>(x: &Option<S>, z: Z) -> std::result::Result<Z::Ok, Z::Error> {
    match x {
        Some(v) => z.serialize_f64(v.to_f64_lossy()),
        None => z.serialize_none(),
    }
}

/// A source pair with its two distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub x: String,
    pub y: String,
    pub source_distance: Distance,
    pub target_distance: Distance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiReport<S: Scalar> {
    pub c: f64,
    pub qi1: bool,
    pub qi2: bool,
    /// Smallest `d'(f x, f y) - (d(x, y) / c - c)` over finite pairs, with its pair.
    #[serde(serialize_with = "scalar_json")]
    pub lower_slack: Option<S>,
    pub lower_witness: Option<PairWitness>,
    /// Smallest `c * d(x, y) + c - d'(f x, f y)` over finite pairs, with its pair.
    #[serde(serialize_with = "scalar_json")]
    pub upper_slack: Option<S>,
    pub upper_witness: Option<PairWitness>,
    /// A pair with exactly one of its two distances infinite.
    pub infinity_mismatch: Option<PairWitness>,
    /// Farthest target vertex from the image, and its distance.
    pub density: Option<(String, Distance)>,
}

impl<S: Scalar> QiReport<S> {
    pub fn passed(&self) -> bool {
        self.qi1 && self.qi2
    }
}

/// Checks the distortion window on all source pairs and density on all target vertices.
pub fn check_qi<S: Scalar>(m: &QiMap<S>) -> QiReport<S> {
    let c = m.c;
    let fi = m.index_map();
    let ds = m.source.all_pairs();
    let dt = m.target.all_pairs();
    let n = m.source.num_vertices();
    let witness = |a: usize, b: usize| PairWitness {
        x: m.source.vertex(a).to_owned(),
        y: m.source.vertex(b).to_owned(),
        source_distance: ds.get(a, b),
        target_distance: dt.get(fi[a], fi[b]),
    };

    let mut lower: Option<(S, usize, usize)> = None;
    let mut upper: Option<(S, usize, usize)> = None;
    let mut mismatch = None;
    for a in 0..n {
        for b in a + 1..n {
            match (ds.get(a, b), dt.get(fi[a], fi[b])) {
                (Distance::Finite(r), Distance::Finite(r2)) => {
                    let (r, r2) = (S::from_count(r), S::from_count(r2));
                    let lo = r2 - (r / c - c);
                    let hi = c * r + c - r2;
                    if lower.is_none_or(|(s, _, _)| lo < s) {
                        lower = Some((lo, a, b));
                    }
                    if upper.is_none_or(|(s, _, _)| hi < s) {
                        upper = Some((hi, a, b));
                    }
                }
                (Distance::Infinite, Distance::Infinite) => {}
                _ => {
                    if mismatch.is_none() {
                        mismatch = Some((a, b));
                    }
                }
            }
        }
    }

    let image: Vec<usize> = {
        let mut v = fi.clone();
        v.sort_unstable();
        v.dedup();
        v
    };
    let density = if m.target.is_empty() {
        None
    } else {
        let reach = m.target.bfs_indices(&image);
        let (far, d) = reach
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(&x.0)))
            .map(|(i, d)| (i, *d))
            .unwrap();
        Some((m.target.vertex(far).to_owned(), d))
    };

    let zero = S::zero();
    let qi1 = mismatch.is_none()
        && lower.is_none_or(|(s, _, _)| s >= zero)
        && upper.is_none_or(|(s, _, _)| s >= zero);
    let qi2 = density.as_ref().is_none_or(|(_, d)| d.at_most(c));
    QiReport {
        c: c.to_f64_lossy(),
        qi1,
        qi2,
        lower_slack: lower.map(|(s, _, _)| s),
        lower_witness: lower.map(|(_, a, b)| witness(a, b)),
        upper_slack: upper.map(|(s, _, _)| s),
        upper_witness: upper.map(|(_, a, b)| witness(a, b)),
        infinity_mismatch: mismatch.map(|(a, b)| witness(a, b)),
        density,
    }
}

/// Result of [`check_partqi_tight`] or [`check_partqi_with`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartQiReport {
    /// The diameter constant the bounds were checked with.
    pub c: u64,
    pub pairs_checked: usize,
    /// `r' <= r` on every pair.
    pub contracts: bool,
    /// `r <= (c + 1)(r' + 1)`, i.e. `r / (c + 1) - 1 <= r'`, on every pair.
    pub lower_bound: bool,
    /// Pair maximising `r' - r`.
    pub worst_contraction: Option<PairWitness>,
    /// Pair maximising `r - (c + 1)(r' + 1)`.
    pub worst_lower: Option<PairWitness>,
    /// A pair finite on one side only.
    pub infinity_mismatch: Option<PairWitness>,
}

impl PartQiReport {
    pub fn passed(&self) -> bool {
        self.contracts && self.lower_bound && self.infinity_mismatch.is_none()
    }
}

/// Checks `r / (c + 1) - 1 <= r' <= r` for every pair, with `c` the largest
/// weak diameter of a part. All arithmetic is on integers.
pub fn check_partqi_tight(g: &Graph, p: &Partition) -> Result<PartQiReport> {
    let c = max_part_diameter(g, p)?;
    check_partqi_with(g, p, c)
}

/// The same bounds with a caller-chosen diameter constant `c`.
pub fn check_partqi_with(g: &Graph, p: &Partition, c: u64) -> Result<PartQiReport> {
    max_part_diameter(g, p)?;
    let q = quotient(g, p)?;
    let m = QiMap::new(g.clone(), q.graph, q.projection, 1.0f64)?;
    let fi = m.index_map();
    let ds = g.all_pairs();
    let dt = m.target.all_pairs();
    let n = g.num_vertices();
    let witness = |a: usize, b: usize| PairWitness {
        x: g.vertex(a).to_owned(),
        y: g.vertex(b).to_owned(),
        source_distance: ds.get(a, b),
        target_distance: dt.get(fi[a], fi[b]),
    };
    let mut pairs = 0;
    let mut contraction: Option<(i128, usize, usize)> = None;
    let mut lower: Option<(i128, usize, usize)> = None;
    let mut mismatch = None;
    for a in 0..n {
        for b in a + 1..n {
            match (ds.get(a, b), dt.get(fi[a], fi[b])) {
                (Distance::Finite(r), Distance::Finite(r2)) => {
                    pairs += 1;
                    let (r, r2) = (r as i128, r2 as i128);
                    let up = r2 - r;
                    let lo = r - (c as i128 + 1) * (r2 + 1);
                    if contraction.is_none_or(|(s, _, _)| up > s) {
                        contraction = Some((up, a, b));
                    }
                    if lower.is_none_or(|(s, _, _)| lo > s) {
                        lower = Some((lo, a, b));
                    }
                }
                (Distance::Infinite, Distance::Infinite) => {}
                _ => {
                    if mismatch.is_none() {
                        mismatch = Some((a, b));
                    }
                }
            }
        }
    }
    Ok(PartQiReport {
        c,
        pairs_checked: pairs,
        contracts: contraction.is_none_or(|(s, _, _)| s <= 0),
        lower_bound: lower.is_none_or(|(s, _, _)| s <= 0),
        worst_contraction: contraction.map(|(_, a, b)| witness(a, b)),
        worst_lower: lower.map(|(_, a, b)| witness(a, b)),
        infinity_mismatch: mismatch.map(|(a, b)| witness(a, b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn path(n: usize) -> Graph {
        Graph::from_edges((1..n).map(|i| (format!("p{i}"), format!("p{}", i + 1)))).unwrap()
    }

    #[test]
    fn identity_passes_with_constant_one() {
        let m = QiMap::identity(&path(5), 1.0).unwrap();
        let r = check_qi(&m);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn constant_map_fails_the_lower_bound_at_the_ends() {
        let g = path(5);
        let point = Graph::new(["o"], Vec::<(&str, &str)>::new()).unwrap();
        let f = g.vertices().map(|v| (v.to_owned(), "o".to_owned())).collect();
        let m = QiMap::new(g, point, f, Rational64::from_integer(1)).unwrap();
        let r = check_qi(&m);
        assert!(!r.qi1);
        assert!(r.qi2);
        assert_eq!(r.lower_slack, Some(Rational64::from_integer(-3)));
        let w = r.lower_witness.unwrap();
        assert_eq!((w.x.as_str(), w.y.as_str()), ("p1", "p5"));
    }

    #[test]
    fn singleton_projection_is_an_isometry() {
        let g = path(4);
        let m: QiMap<f64> = projection_map(&g, &Partition::singletons(&g)).unwrap();
        assert_eq!(m.c, 1.0);
        assert!(check_qi(&m).passed());
        let t = check_partqi_tight(&g, &Partition::singletons(&g)).unwrap();
        assert_eq!(t.c, 0);
        assert!(t.passed());
        let w = t.worst_contraction.unwrap();
        assert_eq!(w.source_distance, w.target_distance);
    }

    #[test]
    fn halves_of_a_path() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        let p = Partition::new([("L", ["a", "b"]), ("R", ["c", "d"])]).unwrap();
        let m: QiMap<Rational64> = projection_map(&g, &p).unwrap();
        assert_eq!(m.c, Rational64::from_integer(2));
        assert_eq!(m.target.edges(), vec![("L", "R")]);
        assert!(check_qi(&m).passed());
        assert!(check_partqi_tight(&g, &p).unwrap().passed());
    }

    #[test]
    fn whole_graph_as_one_part() {
        let g = path(6);
        let p = Partition::whole(&g, "all").unwrap();
        let t = check_partqi_tight(&g, &p).unwrap();
        assert_eq!(t.c, 5);
        assert!(t.passed());
        // With a smaller constant the far pair breaks the lower bound: 5 > 2 * 1.
        assert!(!check_partqi_with(&g, &p, 1).unwrap().lower_bound);
    }

    #[test]
    fn infinite_distances_must_match() {
        let g = Graph::new(["a", "b"], Vec::<(&str, &str)>::new()).unwrap();
        let k2 = Graph::from_edges([("a", "b")]).unwrap();
        let f = [("a", "a"), ("b", "b")].map(|(x, y)| (x.to_owned(), y.to_owned())).into();
        let m = QiMap::new(g.clone(), k2, f, 5.0).unwrap();
        let r = check_qi(&m);
        assert!(!r.qi1);
        assert!(r.infinity_mismatch.is_some());
        assert!(check_qi(&QiMap::identity(&g, 1.0).unwrap()).passed());
        let spans = Partition::whole(&g, "x").unwrap();
        assert!(matches!(check_partqi_tight(&g, &spans), Err(Error::Input(_))));
    }

    #[test]
    fn density_reports_the_far_vertex() {
        let g = Graph::new(["p1"], Vec::<(&str, &str)>::new()).unwrap();
        let f = [("p1".to_owned(), "p1".to_owned())].into();
        let m = QiMap::new(g, path(4), f, 2.0).unwrap();
        let r = check_qi(&m);
        assert_eq!(r.density, Some(("p4".to_owned(), Distance::Finite(3))));
        assert!(!r.qi2);
        assert!(check_qi(&m.with_constant(3.0).unwrap()).qi2);
    }

    #[test]
    fn constructor_rejects_partial_maps() {
        let g = path(3);
        let f: BTreeMap<String, String> = [("p1".to_owned(), "p1".to_owned())].into();
        assert!(QiMap::new(g.clone(), g.clone(), f, 1.0).is_err());
        assert!(QiMap::identity(&g, 0.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn tight_bounds_imply_the_window(
                n in 1usize..9,
                pairs in proptest::collection::vec((0usize..9, 0usize..9), 0..20),
                labels in proptest::collection::vec(0usize..3, 9),
            ) {
                let g = Graph::new(
                    (0..n).map(|i| format!("v{i}")),
                    pairs.iter().filter(|(a, b)| a != b && *a < n && *b < n)
                        .map(|(a, b)| (format!("v{a}"), format!("v{b}"))),
                ).unwrap();
                // Parts are label classes inside one component, so diameters stay finite.
                let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
                for (ci, comp) in g.components().into_iter().enumerate() {
                    for v in comp {
                        let i: usize = v[1..].parse().unwrap();
                        groups.entry(format!("c{ci}l{}", labels[i])).or_default().push(v);
                    }
                }
                let p = Partition::new(groups).unwrap();
                let tight = check_partqi_tight(&g, &p).unwrap();
                prop_assert!(tight.passed(), "{:?}", tight);
                let m: QiMap<Rational64> = projection_map(&g, &p).unwrap();
                prop_assert!(check_qi(&m).passed());
            }
        }
    }
}
