//! Constraint-based causal screening for dynamical systems.
//!
//! - [`graph`]: directed mixed graphs with mandatory loops, ancestry, treks,
//!   parent graphs and latent projection.
//! - [`separation`]: mu-separation and local-independence oracles.
//! - [`screening`]: the trek, parent and ancestry-propagation steps and the
//!   CS, CSAPC, CSAP and CA learners built from them.
//! - [`hawkes`]: linear Hawkes processes with exponential kernels.
//! - [`experiments`]: random corpora, metrics, connectome ingestion and
//!   benchmark sweeps.

pub mod error;
pub mod experiments;
pub mod graph;
pub mod hawkes;
pub mod rng;
pub mod screening;
pub mod separation;

pub use error::{Error, Result};
pub use graph::{Dmg, DmgBuilder, NodeId, NodeSet, ObservedSet};
pub use screening::{AlgorithmId, LearnResult};
pub use separation::{mu_separated, GraphOracle, IndependenceOracle, SeparationQuery};
