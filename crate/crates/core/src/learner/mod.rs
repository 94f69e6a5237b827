//! The L* algorithm over observation tables, for DFAs and Mealy machines,
//! parameterized over query channels so an advice layer can intercept them.

mod lstar;
mod mealy_learn;
mod table;

pub use lstar::{
    build_hypothesis, lstar_learn, CexProcessing, Hypothesis, InitialTests, LearnerConfig, Oracle,
    QueryStats,
};
pub use mealy_learn::{build_mealy_hypothesis, lstar_mealy, MealyHypothesis, MealyOracle};
pub use table::ObservationTable;
