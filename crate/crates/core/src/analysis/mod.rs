//! Core imputations through LP duality: the dual-to-imputation map, core
//! membership, complementarity checks, extreme and simultaneous
//! imputations, Hoffman-Kruskal surplus and concurrency.

mod complementarity;
mod core;
mod dual;

pub use self::complementarity::{
    always_paid_fairly, coordinate_ranges, extreme_imputations, meet_join, paid_sometimes,
    simultaneous_imputation, verify_complementarity, ComplementarityReport, CoreQuery, PlayerRow,
    TeamRow,
};
pub use self::core::{
    check_concurrency, core_nonempty, core_polytope, in_d_of_i, is_core_imputation,
    is_core_imputation_with, sample_core_vertices, Concurrency, CoreFailure, CoreOracle,
    CoreVerdict, SurplusRule,
};
pub use self::dual::{
    deterministic_dual, dual_to_imputation, is_optimal_dual, primal_optimum, surplus_account,
    DualFace, DualSolution, SurplusAccount,
};
