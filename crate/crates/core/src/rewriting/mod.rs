//! String rewriting: plain systems, controlled systems with regex contexts,
//! normal forms under a fixed deterministic strategy, and best-effort
//! convergence verdicts.

mod convergence;
mod csrs;
mod srs;

pub use convergence::{
    check_convergence, check_convergence_csrs, ConvergenceStatus, ConvergenceVerdict, CriticalPair,
    LocalConfluenceVerdict, TerminationVerdict,
};
pub use csrs::{ControlledRule, Csrs};
pub use srs::{RewriteRule, RewriteStep, Srs};
