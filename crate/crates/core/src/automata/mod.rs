//! Finite-state machinery: DFAs, Mealy machines, regular expressions with an
//! NFA evaluation backend, product searches, and the subsumption preorder.
//!
//! Everything here is deterministic by construction: breadth-first searches
//! explore symbols in alphabet order, so every "shortest word" operation
//! returns the lexicographically least among the shortest candidates.

mod alphabet;
mod dfa;
mod mealy;
mod nfa;
mod product;
mod regex;
mod subsumption;

pub use alphabet::{Alphabet, StateId, Symbol, Word};
pub use dfa::Dfa;
pub use mealy::{shortest_mealy_mismatch, MealyMachine};
pub use nfa::Nfa;
pub use product::{
    distinguished_within, reachable_via_with_words, shortest_counterexample, states_reachable_via,
};
pub use regex::RegexAst;
pub use subsumption::{subsumption_relation, subsumption_witness};

pub(crate) use dfa::MooreTable;
pub(crate) use mealy::MealyRefinement;
pub(crate) use nfa::SubsetRunner;
pub(crate) use subsumption::subsumption_matrix;
