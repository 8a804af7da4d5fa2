//! Contraction of locally differentially private (LDP) channels over finite
//! alphabets.
//!
//! The crate is organised bottom-up:
//!
//! * [`prob`]: finite distributions, channels and exact f-divergences,
//!   including hockey-stick curves and their integral representations.
//! * [`mechanisms`]: randomized response, the binary mechanism, Hadamard
//!   response, and an ε-LDP audit for arbitrary channels.
//! * [`contraction`]: closed-form contraction constants (Υ_ε, Ψ_ε), the
//!   Dobrushin coefficient, the distribution-dependent χ² coefficient and a
//!   brute-force search used to verify them.
//! * [`fisher`]: Fisher information and the private van Trees / Cramér–Rao
//!   bounds.
//! * [`minimax`]: private Le Cam, Assouad and mutual-information bounds plus
//!   the Hölder density packing.
//! * [`simulation`]: a seeded, scheduler-independent Monte Carlo harness.
//!
//! Reports ([`report::BoundReport`], [`simulation::SimResult`],
//! [`contraction::ContractionEstimate`]) serialize to JSON with 17
//! significant digits through [`report::to_json`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contraction;
pub mod error;
pub mod fisher;
pub mod io;
pub mod mechanisms;
pub mod minimax;
pub mod prob;
pub mod quad;
pub mod report;
pub mod rng;
pub mod simulation;

pub use error::{Error, Result};
pub use mechanisms::PrivacyLevel;
pub use prob::{Channel, DivergenceKind, ProbVector};
