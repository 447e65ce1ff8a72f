//! Exact computation of target-valued double ramification cycles as
//! decorated-graph classes, with the supporting combinatorics and an
//! evaluator for resolved `A_ell` surfaces.

pub mod aell;
pub mod cli;
pub mod error;
pub mod graph;
pub mod math;
pub mod pixton;
pub mod strata;
pub mod target;
pub mod weighting;

pub use error::{Error, Result};
pub use graph::{CanonicalForm, Graph, StableGraph, Vertex, VertexLabel, ZGraph};
pub use math::{MathError, Rational};
pub use target::{CurveClass, TargetError, TargetKind, TargetModel};
