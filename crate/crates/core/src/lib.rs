//! Clique-width expressions, dominated partitions with a small-width tree
//! decomposition of the quotient, quasi-isometry checks, lower-bound
//! generators and cover pullbacks.
//!
//! Graph distances are integers throughout. The real-valued parameters (the
//! quasi-isometry constant, cover scales, diameter bounds and dilation
//! slopes) are generic over [`Scalar`], implemented for `f32`, `f64` and
//! [`Exact`] rationals.

pub mod andim;
pub mod corpus;
pub mod decompose;
pub mod dot;
pub mod error;
pub mod expr;
pub mod generators;
pub mod graph;
pub mod io;
pub mod partition;
pub mod quasi_iso;
pub mod scalar;
pub mod treedecomp;

pub use andim::{annulus_cover, component_cover, pullback_cover, validate_cover, ControlDilation, CoverFamily, CoverReport};
pub use corpus::{generate_corpus, random_strict_expr, CorpusConfig};
pub use decompose::{decompose, verify_result, DecompositionResult, VerifyReport};
pub use error::{Error, Result};
pub use expr::{evaluate, normalize, parse, parse_expr, validate_strict, CwExpr, Node, NodeKind, Rule, ValidationReport};
pub use generators::{
    build_minor_model, complete_graph, gen_path, gen_spider, gen_subdivided_clique, subdivide, MinorModel,
    SubdivisionSpec,
};
pub use graph::{Color, ColoredGraph, Distance, Graph, VertexSet};
pub use partition::{quotient, Partition, Quotient};
pub use quasi_iso::{check_partqi_tight, check_partqi_with, check_qi, projection_map, QiMap, QiReport};
pub use scalar::Scalar;
pub use treedecomp::{brute_treewidth, has_minor, validate_td, OracleCaps, TreeDecomposition};

/// Exact rational scalar.
pub type Exact = num_rational::Rational64;

pub type QiMapF64 = QiMap<f64>;
pub type QiMapExact = QiMap<Exact>;
pub type QiReportF64 = QiReport<f64>;
pub type QiReportExact = QiReport<Exact>;
pub type CoverFamilyF64 = CoverFamily<f64>;
pub type CoverFamilyExact = CoverFamily<Exact>;
pub type ControlDilationF64 = ControlDilation<f64>;
pub type ControlDilationExact = ControlDilation<Exact>;
