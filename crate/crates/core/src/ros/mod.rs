//! Symmetric rational outline square constructions: symmetrization,
//! scaling, interpolation, the similar-square reduction, closed-form
//! families, and an exact feasibility oracle.

pub mod build;
pub mod families;
pub mod oracle;
pub mod similar;

pub use build::{
    chain_interpolate, interpolate, ros_bounded_family, scale_to_integer, symmetrize, BuildError,
};
pub use families::{
    family_h1h2a_h3b, family_h1h2h3h4m, family_h1h2h3m, solve_two_var, FamilyError, Infeasible,
    TwoVarInfeasible, TwoVarSystem,
};
pub use oracle::{
    feasibility_oracle, feasibility_oracle_bounded, ClassSystem, InfeasibilityCertificate,
    OracleError, OracleOutcome,
};
pub use similar::{
    collapse_similar, complete_similar, expand_similar, is_similar, ClassSolution,
    ClassStructure, SimilarError,
};
