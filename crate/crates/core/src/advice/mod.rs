//! The advice layer: intercepts membership and equivalence queries and
//! answers them from a rewriting system consistent with the target language,
//! forwarding to the real oracle only when inference fails.
//!
//! Membership inference keys a cache by normal forms (two-sided advice) or
//! by subsequence checks against known answers (upward-closed advice).
//! Equivalence inference consistency-checks the hypothesis against the
//! advice; a violation yields a pair of words, one of which must be a
//! counterexample, identified with a single membership query.

mod cache;
mod consistency;
mod layer;

pub use cache::{upward_closed_infer, NormalFormCache, SignedCache};
pub use consistency::{
    check_consistency, check_consistency_csrs, check_consistency_mealy,
    check_consistency_one_sided, ConsistencyVerdict, Polarity,
};
pub use layer::{AdviceLayer, AdviceMode, AdviceOptions, MealyAdviceLayer};
