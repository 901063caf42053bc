//! Latency-optimal uncoded file placement for geo-distributed storage with
//! preferential (non-uniform) file demands.
//!
//! Pipeline: [`model`] ingests and expands a network, [`nngraph`] builds the
//! nearest-neighbor graph and its extended graph, [`coloring`] enumerates
//! admissible color classes, [`assignment`] maps classes to files with the
//! Hungarian method, and [`planner`] ties them together. [`evaluation`]
//! scores any placement or linear code, and [`oracle`] is the brute-force
//! reference used to check the planner.

pub mod assignment;
pub mod coloring;
pub mod dot;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod model;
pub mod nngraph;
pub mod oracle;
pub mod planner;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Q;
