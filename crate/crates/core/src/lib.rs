//! Exact computations for groups acting on rooted trees and for the
//! alternating full groups of Bratteli diagrams.
//!
//! The crate is organised bottom-up:
//!
//! * [`treecore`]: spherically symmetric trees, vertices, rays and
//!   depth-truncated automorphism portraits with wreath-recursion arithmetic.
//! * [`selfsim`]: recursion tables (Grigorchuk, Gupta–Sidki, `G_ω`,
//!   Basilica), word expansion, nucleus computation, the word problem,
//!   activity counts and the generalized contraction condition.
//! * [`perm`] and [`permgrp`]: dense permutations and stabilizer-chain
//!   permutation groups (orders, membership, stabilizers, sampling).
//! * [`coloring`]: closed subsets of the boundary, the red/green/blue
//!   coloring, the approximating subgroups `K_i(H)` and bad-blue-vertex
//!   experiments.
//! * [`bratteli`]: Bratteli diagrams, exact path counting and the closed
//!   formulas for orbit averages under `∏ Alt(E(v0, v))`.

pub mod bratteli;
pub mod caps;
pub mod coloring;
pub mod perm;
pub mod permgrp;
pub mod selfsim;
pub mod treecore;

mod periodic;

pub use perm::Perm;
pub use permgrp::PermGroup;
pub use treecore::{BoundaryRay, Portrait, ValencySequence, Vertex};

/// Coarse classification of failures, used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input: malformed config, unknown symbol, violated precondition.
    Config,
    /// A level or domain exceeded the configured point cap.
    CapExceeded,
    /// An internal consistency check failed.
    Invariant,
}
