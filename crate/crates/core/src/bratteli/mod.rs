//! Bratteli diagrams truncated at a finite horizon, exact path counting,
//! clopen subsets of the path space, the level groups
//! `Γ_n = ∏_{v ∈ V_n} Alt(E(v0, v))` and closed formulas for orbit
//! averages under them.
//!
//! All probabilities are exact rationals.

mod builtin;
mod clopen;
mod diagram;
mod formulas;
mod lda;
mod paths;

pub use builtin::{by_name, chain, odometer, random_simple, two_chains};
pub use clopen::ClopenSet;
pub use diagram::{BratteliDiagram, MarkovReport, SimplicityReport};
pub use formulas::{
    count_meeting, ergodic_average_point, inclusion_probability, kset_decay_bound, meeting_counts, prefix_counts,
    product_ratio_bound, KsetDecayReport, ProductRatioReport,
};
pub use lda::{
    element_from_multisection, gamma_group, lda_act, lda_compose, lda_uniform, rigid_stabilizer_check,
    LevelGroupElement, Multisection, RigidStabilizerCheck,
};
pub use paths::{FinitePath, LevelPaths};

use thiserror::Error;

use crate::permgrp::PermGroupError;
use crate::ErrorClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BratteliError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("level {requested} is beyond the horizon {horizon}")]
    Horizon { requested: usize, horizon: usize },
    #[error("vertex {vertex} of level {level} has only {degree} paths from the root, at least 3 are needed")]
    Degree { level: usize, vertex: usize, degree: String },
    #[error("level {level} has {points} paths, above the cap {cap}")]
    CapExceeded { level: usize, points: String, cap: usize },
    #[error("cocycle condition fails: {0}")]
    Cocycle(String),
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    PermGroup(#[from] PermGroupError),
}

impl BratteliError {
    pub fn class(&self) -> ErrorClass {
        match self {
            BratteliError::CapExceeded { .. } => ErrorClass::CapExceeded,
            BratteliError::PermGroup(e) => e.class(),
            _ => ErrorClass::Config,
        }
    }
}
