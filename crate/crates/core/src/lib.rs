//! Simulation and analysis of one-way (cluster-state) quantum computation
//! under imperfect entangling gates and single-qubit dephasing.

pub mod clifford;
pub mod clusterlab;
pub mod entanglement;
pub mod error;
pub mod oneway;
pub mod phasenoise;
pub mod qstate;
pub mod stats;

pub use error::{Error, Result};
