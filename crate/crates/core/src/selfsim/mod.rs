//! Self-similar groups given by finite recursion tables.
//!
//! A table assigns to every generator a root permutation and one section
//! word per child, `g = (w_0, …, w_{d−1}) σ_g`. Level-indexed tables (the
//! groups `G_ω`) carry one row per level key instead of a single row.

mod activity;
mod assumption;
mod automaton;
pub mod builtin;
mod expand;
mod identity;
mod nucleus;
mod omega;
mod table;
mod word;

pub use activity::{active_vertices, activity_bound, activity_by_expansion, ActivityBound};
pub use assumption::{check_assumption_c, first_active_depth, AssumptionCReport, StateDepth};
pub use automaton::{Automaton, StateId};
pub use expand::{expand, Expander};
pub use identity::{IdentityVerdict, WordSolver};
pub use nucleus::Nucleus;
pub use omega::{minimal_block_length, omega_in_prime};
pub use table::{GeneratorJson, RecursionTable, Rule, TableJson};
pub use word::{Letter, Word};

use thiserror::Error;

use crate::treecore::TreeError;
use crate::ErrorClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelfSimError {
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("unknown generator {0:?}")]
    UnknownSymbol(String),
    #[error("invalid recursion table: {0}")]
    InvalidTable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("more than {limit} section states (longest section word has length {longest_word}); the table may not be contracting")]
    StateLimit { limit: usize, longest_word: usize },
    #[error("nucleus unavailable: {0}")]
    NucleusUnavailable(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

impl SelfSimError {
    pub fn class(&self) -> ErrorClass {
        match self {
            SelfSimError::StateLimit { .. } => ErrorClass::CapExceeded,
            SelfSimError::Tree(e) => e.class(),
            _ => ErrorClass::Config,
        }
    }
}
