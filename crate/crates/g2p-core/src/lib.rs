//! Loop-level parallelism analysis for C code.
//!
//! The pipeline has four stages:
//!
//! 1. [`cfront`] tokenizes restricted C, extracts outermost `for` loops
//!    together with any OpenMP pragma that precedes them, and derives task
//!    labels from the pragma.
//! 2. [`graphrep`] parses a loop into an AST and assembles a heterogeneous
//!    graph over it: tree edges, statement-level control-flow edges, and
//!    lexical edges linking neighbouring leaf tokens.
//! 3. [`synthgen`] renders labeled synthetic loops from templates and checks
//!    every label with a brute-force dependence oracle.
//! 4. [`hgt`] trains a heterogeneous graph transformer on the featurized
//!    graphs; [`eval`] computes metrics and composes pragma suggestions.
//!
//! Everything is deterministic given a seed: corpora, parameter
//! initialization, training history, and checkpoints reproduce byte for byte.

pub mod cfront;
pub mod eval;
pub mod graphrep;
pub mod hgt;
pub mod jsonl;
pub mod rng;
pub mod synthgen;
