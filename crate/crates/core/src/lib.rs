//! Krylov spread complexity of continuous-time quantum walks on graphs.
//!
//! The walk Hamiltonian is the adjacency matrix of an undirected simple
//! graph and the walker starts on vertex 0. This crate computes the Krylov
//! basis, the spread complexity `C(t)`, its long-time average `C̄` and the
//! vertex limiting distribution, and searches graph space for graphs of
//! extremal `C̄`.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod graphs;
pub mod krylov;
pub mod optimizer;
pub mod spectral;

pub use error::{Error, Result};
pub use graphs::Graph;
pub use krylov::{ComplexityReport, WeightSequence};
