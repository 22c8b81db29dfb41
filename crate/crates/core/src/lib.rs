//! Construction and verification of latin squares with pairwise disjoint
//! subsquares, via exact-rational outline squares.
//!
//! The crate is organized around four layers:
//!
//! - domain types and verifiers ([`rat`], [`partition`], [`latin`],
//!   [`outline`], [`symros`], [`report`]);
//! - necessary conditions and literature existence predicates
//!   ([`conditions`]);
//! - symmetric rational outline square constructions and an exact
//!   feasibility oracle ([`ros`]);
//! - integer-side machinery that turns rational squares into actual
//!   realizations: equitable edge colorings, transversal squares, frequency
//!   and outline arrays, and the lifting pipelines ([`lifting`]).
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod conditions;
pub mod fixtures;
pub mod latin;
pub mod lifting;
pub mod outline;
pub mod partition;
pub mod rat;
pub mod report;
pub mod ros;
pub mod symros;

pub use latin::{verify_latin, verify_realization, LatinSquare, Realization};
pub use outline::{
    reduce_modulo, scale_rational_outline, verify_outline_square, verify_rational_outline,
    Multiset, OutlineSquare, RationalOutlineSquare,
};
pub use partition::{Partition, Permutation};
pub use rat::Rat;
pub use report::{Report, Violation};
pub use symros::{verify_sym_ros, SymRos};
