//! Exact LP-duality analysis of core imputations in matching games.
//!
//! The crate models five cooperative matching games (assignment, uniform
//! and general bipartite b-matching, Hoffman-Kruskal with edge bounds, and
//! general-graph matching), builds their primal and dual LPs, solves them
//! over the rationals and checks core-related statements against a
//! brute-force matching oracle.

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod formulations;
pub mod game;
pub mod generate;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod reproduce;

pub use analysis::{
    CoreFailure, CoreQuery, CoreVerdict, DualSolution, SurplusAccount, SurplusRule,
};
pub use error::{Error, Result};
pub use game::{
    Capacities, Edge, GameInstance, GameKind, Imputation, Provenance, Side, SubCoalition, Vertex,
    Violation,
};
pub use lp::{FaceBound, LinearProgram, LpSolution, LpStatus, Objective, Relation, Sense};
pub use oracle::{Caps, ClassLabel, Matching};
pub use rational::{rat, Rational};
