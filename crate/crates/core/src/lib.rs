//! Rough-set feature selection for discretized numeric tables, with the
//! downstream consumers needed to judge a selection: K-Means and fuzzy
//! C-Means clustering, a small feed-forward classifier, and confusion-matrix
//! reporting.
//!
//! The intended flow mirrors a gene-expression workflow:
//!
//! 1. [`table`] loads a samples-by-genes CSV and discretizes every condition
//!    column with per-column 1-D K-Means, yielding a [`table::DecisionTable`].
//! 2. [`roughset`] computes dependency degrees over that table and selects
//!    attributes greedily ([`roughset::quick_reduct`]) or exhaustively
//!    ([`roughset::exhaustive_reducts`]).
//! 3. [`clustering`] and [`classifier`] run on the reduced attribute set.
//! 4. [`evaluation`] aligns cluster ids with class labels and renders
//!    accuracy/error and rate tables.
//! 5. [`pipeline`] wires the stages together behind one seeded, reproducible
//!    entry point and writes every artifact plus a hashed manifest.
//!
//! Everything is deterministic for a fixed seed: per-stage and per-column
//! seeds are derived from the master seed, random generators are ChaCha8,
//! and no iteration order depends on hashing.

pub mod classifier;
pub mod clustering;
pub mod error;
pub mod evaluation;
pub mod pipeline;
pub mod roughset;
pub mod seeding;
pub mod table;

pub use error::{Error, Result};
