//! Exact computations for quasi-random graphs and step graphons.

pub mod cut;
pub mod error;
pub mod graph;
pub mod graphon;
pub mod hf;
pub mod qr;
pub mod rng;

pub use cut::CutResult;
pub use error::{Error, Result};
pub use graph::{Graph, PatternGraph, VertexConstraint, VertexSet};
pub use graphon::{BoxSpec, KernelRange, StepKernel};
pub use qr::DeviationReport;
