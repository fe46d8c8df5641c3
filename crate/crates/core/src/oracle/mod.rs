//! Seeded generators, randomized checks and unitary-commutator constructions.

pub mod fuzz;
pub mod gen;
pub mod unitary;

pub use fuzz::{fuzz_membership, nullity_identity_check, random_square_zero, FuzzConfig, FuzzFailure, FuzzReport};
pub use unitary::{
    search_unitary_3x3, unitary_commutator_2x2, unitary_commutator_4x4_paired, UnitaryPair,
    UnitarySearchReport,
};
