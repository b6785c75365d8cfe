//! Decide whether a distribution over binary strings of length `n` comes from a
//! hidden Markov process on at most `⌊(n+1)/2⌋` hidden states, and recover the
//! process parameters (up to relabeling of the hidden states) when it does.
//!
//! The pipeline is:
//!
//! 1. [`hankel`]: build finite Hankel blocks `P[v, w] = p(vw)` and estimate their
//!    numerical rank.
//! 2. [`finitary`]: when the rank pattern of the blocks certifies a finitary
//!    process of rank `e`, infer an observable-operator parametrization
//!    `(T0, T1, x)` of dimension `e`.
//! 3. [`recover`]: diagonalize `T0 (T0 + T1)^{-1}` to turn the operator form into a
//!    stochastic `(M, E, π)` parametrization.
//! 4. [`identify`]: loop over candidate state counts and return a [`Verdict`].
//!
//! [`minors`] is a brute-force determinantal cross-check of the rank pattern.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distribution;
pub mod error;
pub mod finitary;
pub mod hankel;
pub mod hmp_model;
pub mod identify;
pub mod io;
pub mod linalg;
pub mod minors;
pub mod recover;
pub mod tolerance;
pub mod word;

pub use distribution::StringDistribution;
pub use error::{Error, Result};
pub use finitary::{FinitaryInference, FinitaryParams};
pub use hankel::{HankelBlock, RankReport};
pub use hmp_model::{HmpParams, ObservableSplit};


pub use minors::MinorScanResult;
pub use identify::{certify, identify, IdentifyOptions, Verdict, VerdictKind};
pub use recover::{recover_hmm, RecoveryKind, RecoveryOutcome};
pub use tolerance::ToleranceConfig;
pub use word::Word;
