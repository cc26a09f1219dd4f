//! Classical toolkit for quantum symmetry tests.
//!
//! The crate simulates the circuits that test whether a state is Bose
//! symmetric, symmetric, Bose-symmetric extendible or symmetric extendible
//! with respect to a finite group representation. It computes their
//! acceptance probabilities exactly, computes the matching maximum
//! symmetric fidelities by convex optimisation, and trains parameterised
//! provers.
//!
//! Module map:
//! - [`qmath`]: dense complex linear algebra, fidelity, purification.
//! - [`simulator`]: statevector and density-matrix circuit execution.
//! - [`groups`]: finite groups, representations, projectors and twirls.
//! - [`symmetry_tests`]: the four tests and their specialisations.
//! - [`maxfid`]: conditional-gradient solver for maximum symmetric fidelity.
//! - [`variational`]: parameterised provers and training loops.
//! - [`resource`]: free-channel predicates and monotonicity checks.
//! - [`presets`]: named states and reference value tables.

pub mod error;
pub mod groups;
pub mod maxfid;
pub mod presets;
pub mod qmath;
pub mod resource;
pub mod simulator;
pub mod variational;

pub use error::{Error, Result};
