//! Spherically symmetric rooted trees and their depth-truncated automorphisms.
//!
//! Automorphisms act on the right: `v·g`. A [`Portrait`] stores, at every
//! vertex down to a fixed depth, the permutation `g` induces on that
//! vertex's children, which is the finite form of the wreath recursion
//! `g = ((g_v)_{v ∈ L_n}, σ_g)`.

pub(crate) mod portrait;
mod ray;
mod valency;
mod vertex;

pub use portrait::{Activity, ActivityReport, Portrait, PortraitJson, PortraitNodeJson};
pub use ray::BoundaryRay;
pub use valency::ValencySequence;
pub use vertex::{Level, Vertex};

use thiserror::Error;

use crate::ErrorClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid valency sequence: {0}")]
    InvalidValency(String),
    #[error("digit {digit} at position {position} is out of range for degree {degree}")]
    DigitOutOfRange { position: usize, digit: usize, degree: usize },
    #[error("valency mismatch between operands")]
    ValencyMismatch,
    #[error("vertex of depth {vertex} exceeds available depth {depth}")]
    TooDeep { vertex: usize, depth: usize },
    #[error("level {level} has {points} points, above the cap of {cap}")]
    CapExceeded { level: usize, points: usize, cap: usize },
    #[error("activity at level {level} is undecided for {undecided} vertices; expand deeper")]
    UndecidedActivity { level: usize, undecided: usize },
    #[error("malformed portrait: {0}")]
    Malformed(String),
    #[error("cannot parse {0:?} as a vertex")]
    Parse(String),
}

impl TreeError {
    pub fn class(&self) -> ErrorClass {
        match self {
            TreeError::CapExceeded { .. } => ErrorClass::CapExceeded,
            _ => ErrorClass::Config,
        }
    }
}
