//! Simulation of the three-qubit Deutsch-Jozsa algorithm on a weakly coupled
//! liquid-state NMR spin system.

pub mod error;
pub mod experiment;
pub mod functions;
pub mod quantum;
pub mod refocusing;
pub mod sequence;
pub mod spectroscopy;
pub mod spin_system;

pub use error::{Error, Result};
