//! Finite permutation groups on tree levels and path sets.

mod chain;
mod facts;
mod group;
mod quotient;

pub use facts::{alt_generation_check, double_commutator, double_commutator_check};
pub use group::PermGroup;
pub use quotient::{level_rigid_stabilizer, rigid_stabilizer, LevelQuotient};

use num_bigint::BigUint;
use thiserror::Error;

use crate::selfsim::SelfSimError;
use crate::treecore::TreeError;
use crate::ErrorClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermGroupError {
    #[error("permutation on {found} points in a group of degree {expected}")]
    Degree { expected: usize, found: usize },
    #[error("subgroup is not contained in the ambient group")]
    NotContained,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("group of order {order} exceeds the enumeration limit {limit}")]
    TooLarge { order: BigUint, limit: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    SelfSim(#[from] SelfSimError),
}

impl PermGroupError {
    pub fn class(&self) -> ErrorClass {
        match self {
            PermGroupError::Tree(e) => e.class(),
            PermGroupError::SelfSim(e) => e.class(),
            PermGroupError::TooLarge { .. } => ErrorClass::CapExceeded,
            _ => ErrorClass::Config,
        }
    }
}
