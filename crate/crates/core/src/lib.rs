//! Active automata learning with rewriting advice.
//!
//! This crate implements the classic L* loop for DFAs and Mealy machines,
//! plus an *advice layer* that sits between the learner and the teacher.
//! Advice is a string rewriting system (plain or with regular-expression
//! contexts) that is consistent with the target language: whenever a word
//! rewrites to another, both are in the language or neither is. The advice
//! layer uses this to answer membership queries from a normal-form cache and
//! to answer equivalence queries by consistency-checking the hypothesis,
//! forwarding to the real teacher only when inference fails.
//!
//! The crate also ships seed-driven generators for the target languages and
//! advice systems used by the benchmark harness (random DFAs, pattern DFAs,
//! convolutions, bit-wise addition, partial-DFA encodings), and the harness
//! itself, which measures how many queries the advice saves.

pub mod advice;
pub mod automata;
mod error;
pub mod generators;
pub mod harness;
pub mod learner;
pub mod oracle;
pub mod rewriting;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
