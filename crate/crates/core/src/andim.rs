//! Covers by far-apart bounded sets, and pulling them back along a
//! quasi-isometric embedding.
//!
//! A cover family of dimension `n` at scale `r` is `n + 1` collections of
//! vertex sets such that every vertex lies in some set, two sets of the same
//! collection are at distance more than `r`, and every set has weak diameter
//! at most the stated bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, VertexSet};
use crate::quasi_iso::{check_qi, QiMap};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverFamily<S> {
    pub r: S,
    pub bound: S,
    pub collections: Vec<Vec<VertexSet>>,
}

impl<S: Scalar> CoverFamily<S> {
    /// Rejects a family with no collections, an empty set, or a negative scale or bound.
    pub fn new(r: S, bound: S, collections: Vec<Vec<VertexSet>>) -> Result<CoverFamily<S>> {
        if collections.is_empty() {
            return Err(Error::Input("a cover family needs at least one collection".into()));
        }
        if r < S::zero() || bound < S::zero() {
            return Err(Error::Input(format!("scale {r} and bound {bound} must be nonnegative")));
        }
        for (i, coll) in collections.iter().enumerate() {
            if coll.iter().any(VertexSet::is_empty) {
                return Err(Error::Input(format!("collection {i} contains an empty set")));
            }
        }
        Ok(CoverFamily { r, bound, collections })
    }

    /// Dimension: number of collections minus one.
    pub fn n(&self) -> usize {
        self.collections.len() - 1
    }

    pub fn with_scale(&self, r: S, bound: S) -> Result<CoverFamily<S>> {
        CoverFamily::new(r, bound, self.collections.clone())
    }
}

/// A linear control function `r -> slope * r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlDilation<S> {
    slope: S,
}

impl<S: Scalar> ControlDilation<S> {
    pub fn new(slope: S) -> Result<ControlDilation<S>> {
        if !(slope > S::zero()) {
            return Err(Error::Input(format!("dilation slope must be positive, got {slope}")));
        }
        Ok(ControlDilation { slope })
    }

    pub fn slope(&self) -> S {
        self.slope
    }

    pub fn at(&self, r: S) -> S {
        self.slope * r
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CloseSets {
    pub collection: usize,
    pub first: usize,
    pub second: usize,
    pub distance: Distance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WideSet {
    pub collection: usize,
    pub set: usize,
    pub diameter: Distance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    /// A vertex in no set.
    pub uncovered: Option<String>,
    /// Two sets of one collection at distance at most `r`.
    pub close: Option<CloseSets>,
    /// A set whose weak diameter exceeds the bound.
    pub wide: Option<WideSet>,
    /// Largest weak diameter of any set.
    pub max_diameter: Distance,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_none() && self.close.is_none() && self.wide.is_none()
    }
}

/// Checks coverage, `r`-disjointness within each collection (distances
/// strictly above `r`) and the diameter bound.
pub fn validate_cover<S: Scalar>(g: &Graph, cf: &CoverFamily<S>) -> Result<CoverReport> {
    let mut covered = vec![false; g.num_vertices()];
    let mut indexed: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cf.collections.len());
    for coll in &cf.collections {
        let mut sets = Vec::with_capacity(coll.len());
        for set in coll {
            let idx = g.indices_of(set)?;
            for &i in &idx {
                covered[i] = true;
            }
            sets.push(idx);
        }
        indexed.push(sets);
    }
    let uncovered = covered.iter().position(|c| !c).map(|i| g.vertex(i).to_owned());

    let mut close = None;
    let mut wide = None;
    let mut max_diameter = Distance::Finite(0);
    'outer: for (ci, sets) in indexed.iter().enumerate() {
        for (a, s) in sets.iter().enumerate() {
            let dist = g.bfs_indices(s);
            for (b, t) in sets.iter().enumerate().skip(a + 1) {
                let d = t.iter().map(|&j| dist[j]).min().unwrap();
                if !d.exceeds(cf.r) {
                    close = Some(CloseSets {
                        collection: ci,
                        first: a,
                        second: b,
                        distance: d,
                    });
                    break 'outer;
                }
            }
        }
    }
    for (ci, sets) in indexed.iter().enumerate() {
        for (si, s) in sets.iter().enumerate() {
            let d = g.weak_diameter_idx(s);
            max_diameter = max_diameter.max(d);
            if wide.is_none() && !d.at_most(cf.bound) {
                wide = Some(WideSet {
                    collection: ci,
                    set: si,
                    diameter: d,
                });
            }
        }
    }
    Ok(CoverReport {
        uncovered,
        close,
        wide,
        max_diameter,
    })
}

/// Pulls a cover of the target of `m` back to its source.
///
/// The target cover must be valid at scale `r' = c r + c` with diameter bound
/// `d'(r')`. Each target set is replaced by its preimage (empty preimages are
/// dropped), giving a cover at scale `r` with bound `c d'(2 c r) + c^2 r`.
/// The result is validated again, against the sharper bound
/// `c d'(r') + c^2`, before it is returned.
pub fn pullback_cover<S: Scalar>(
    m: &QiMap<S>,
    cf: &CoverFamily<S>,
    d_prime: &ControlDilation<S>,
    r: S,
) -> Result<CoverFamily<S>> {
    let c = m.c;
    if r < S::one() {
        return Err(Error::Input(format!("scale must be at least 1, got {r}")));
    }
    let qi = check_qi(m);
    if !qi.qi1 {
        return Err(Error::Input(format!(
            "map fails the distortion window for c = {c}; witness {:?}",
            qi.lower_witness.or(qi.upper_witness).or(qi.infinity_mismatch)
        )));
    }
    let r_target = c * r + c;
    let target_report = validate_cover(&m.target, &cf.with_scale(r_target, d_prime.at(r_target))?)?;
    if !target_report.passed() {
        return Err(Error::Input(format!(
            "target cover is not valid at scale {r_target} with bound {}: {target_report:?}",
            d_prime.at(r_target)
        )));
    }

    let two = S::from_count(2);
    let bound = c * d_prime.at(two * c * r) + c * c * r;
    let sharp = c * d_prime.at(r_target) + c * c;
    if !(sharp <= bound) {
        return Err(Error::Contract(format!(
            "c d'(c r + c) + c^2 = {sharp} exceeds c d'(2 c r) + c^2 r = {bound}"
        )));
    }

    let mut preimage: std::collections::BTreeMap<&str, Vec<&str>> = Default::default();
    for (v, w) in &m.f {
        preimage.entry(w.as_str()).or_default().push(v.as_str());
    }
    let collections: Vec<Vec<VertexSet>> = cf
        .collections
        .iter()
        .map(|coll| {
            coll.iter()
                .map(|set| -> VertexSet {
                    set.iter()
                        .flat_map(|w| preimage.get(w.as_str()).into_iter().flatten())
                        .map(|v| (*v).to_owned())
                        .collect()
                })
                .filter(|s| !s.is_empty())
                .collect()
        })
        .collect();

    let sharp_family = CoverFamily::new(r, sharp, collections)?;
    let report = validate_cover(&m.source, &sharp_family)?;
    if !report.passed() {
        return Err(Error::Contract(format!("pulled-back cover fails validation: {report:?}")));
    }
    sharp_family.with_scale(r, bound)
}

/// One collection holding each connected component; valid at every scale
/// when the bound is at least the largest component diameter, which is the
/// bound returned.
pub fn component_cover<S: Scalar>(g: &Graph, r: S) -> Result<CoverFamily<S>> {
    let sets: Vec<VertexSet> = g.components();
    let bound = S::from_count(g.max_component_diameter());
    CoverFamily::new(r, bound, vec![sets])
}

/// Two collections of distance bands. Within each component, vertices are
/// layered by distance from the component's smallest vertex into bands of
/// width `floor(r) + 1`; even bands go to the first collection and odd bands
/// to the second. Bands of equal parity are more than `r` apart. The bound
/// returned is the largest weak diameter of a band.
pub fn annulus_cover<S: Scalar>(g: &Graph, r: S) -> Result<CoverFamily<S>> {
    let width = r
        .floor_u64()
        .ok_or_else(|| Error::Input(format!("scale must be a nonnegative finite number, got {r}")))?
        + 1;
    let mut collections: Vec<Vec<VertexSet>> = vec![Vec::new(), Vec::new()];
    let mut widest = 0;
    for comp in g.component_indices() {
        let dist = g.bfs_indices(&comp[..1]);
        let mut bands: std::collections::BTreeMap<u64, Vec<usize>> = Default::default();
        for &v in &comp {
            let d = dist[v].finite().expect("same component");
            bands.entry(d / width).or_default().push(v);
        }
        for (b, members) in bands {
            if let Some(d) = g.weak_diameter_idx(&members).finite() {
                widest = widest.max(d);
            }
            collections[(b % 2) as usize].push(members.iter().map(|&i| g.vertex(i).to_owned()).collect());
        }
    }
    collections.retain(|c| !c.is_empty());
    if collections.is_empty() {
        collections.push(Vec::new());
    }
    CoverFamily::new(r, S::from_count(widest), collections)
}
