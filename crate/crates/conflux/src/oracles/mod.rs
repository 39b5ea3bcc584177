//! Bounded decision procedures consulted by processors: feasibility of
//! condition sequences, joinability of terms and conditional pairs, and
//! termination and normalization of systems.

pub mod feasibility;
pub mod joinability;
pub mod termination;

pub use feasibility::{feasible, FeasibilityQuery, FeasibilityResult};
pub use joinability::{
    joinable_pair, joinable_pair_explained, joinable_terms, strongly_joinable_pair, JoinResult, JOIN_VAR,
};
pub use termination::{lpo_gt, normalizing, orient_lpo, terminating, termination_proof, Precedence, TerminationProof};
