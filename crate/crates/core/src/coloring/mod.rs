//! Closed subsets of the boundary, the red/green/blue coloring they induce,
//! and the finite-index approximations `K_i(H)` built from it.
//!
//! Every subgroup here lives in a level quotient `Γ_m`; statements about
//! `K_i(H)` are exact at that quotient level.

mod badblue;
mod closed;
mod paint;
mod subgroup;

pub use badblue::{
    bad_blue_estimate, bad_blue_exhaustive, bb2_bound_check, conjugacy_class, conjugate_traces, empirical_weakstar_distance,
    proportion_recursion_check, trace, word_ball, BadBlueReport, Bb2Report, ProportionReport, ProportionRow,
};
pub use closed::ClosedSetSpec;
pub use paint::{index_set, Coloring};
pub use subgroup::{fix_levels, fixed_point_coloring, k_i_subgroup, subgroup_a, ApproxSubgroup, FixReport, SubgroupSpec};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgrp::PermGroupError;
use crate::selfsim::SelfSimError;
use crate::treecore::TreeError;
use crate::ErrorClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    /// The cylinder misses the closed set.
    Red,
    /// The cylinder lies inside the closed set.
    Green,
    /// The cylinder meets both the set and its complement.
    Blue,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("level {i} with c0 = {c0} needs quotient depth at least {}, got {m}", i + c0)]
    DepthBudget { i: usize, c0: usize, m: usize },
    #[error("the word ball is empty")]
    EmptyBall,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    PermGroup(#[from] PermGroupError),
    #[error(transparent)]
    SelfSim(#[from] SelfSimError),
}

impl ColoringError {
    pub fn class(&self) -> ErrorClass {
        match self {
            ColoringError::Tree(e) => e.class(),
            ColoringError::PermGroup(e) => e.class(),
            ColoringError::SelfSim(e) => e.class(),
            _ => ErrorClass::Config,
        }
    }
}
