//! Log terminal surfaces obtained by blowing up four lines in the plane.
//!
//! A surface is described by its visible graph: the dual graph of the four
//! lines and all exceptional curves, with marks (negative
//! self-intersections) and weights. Black curves are contracted to cyclic
//! quotient singularities, and the (log) canonical class of the result is
//! computed exactly from the graph.

pub mod closed_forms;
pub mod error;
pub mod format;
pub mod graph;
pub mod invisible;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod search;
pub mod singularity;
pub mod stern_brocot;
pub mod volume;

pub use error::{Error, Result};
pub use graph::{Color, Insertion, Origin, Vertex, VertexId, VisibleGraph, CORNERS, EDGES};
pub use lattice::DivisorClass;
pub use rational::{format_rational, parse_rational, Rational};
pub use singularity::{Chain, DiscrepancyVector};
pub use volume::{certify, NearCy, Status, SurfaceReport, WeightSystem};
