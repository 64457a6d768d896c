//! Opinion dynamics with decaying confidence.
//!
//! Agents repeatedly average their opinion with graph neighbors whose opinion
//! lies within a confidence radius that shrinks geometrically (`R * rho^t`).
//! The interaction graph freezes in finite time and its connected components
//! are the detected communities. This crate simulates the dynamics, extracts
//! and cross-checks communities, verifies them spectrally (second-smallest
//! normalized-Laplacian eigenvalue), scores them (modularity, random-walk
//! stability), and drives Monte-Carlo experiments over benchmark graphs.

pub mod community;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod graph;
pub mod quality;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, Partition};
pub use dynamics::{OpinionTrace, SimulationConfig, WeightMode};
