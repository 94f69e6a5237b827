//! Simulated teachers backed by a reference automaton, with query counting
//! and a verification hook for shadow-mode soundness checks.

use crate::automata::{
    shortest_counterexample, shortest_mealy_mismatch, Alphabet, Dfa, MealyMachine, Symbol, Word,
};
use crate::learner::{MealyOracle, Oracle, QueryStats};
use crate::{Error, Result};

/// A teacher for a regular language given by a reference DFA. Equivalence
/// queries are answered with a shortest counterexample (ties broken by
/// alphabet order), the most reproducible oracle policy.
pub struct SimulatedTeacher {
    target: Dfa,
    stats: QueryStats,
}

impl SimulatedTeacher {
    pub fn new(target: Dfa) -> Self {
        SimulatedTeacher {
            target,
            stats: QueryStats::default(),
        }
    }

    pub fn target(&self) -> &Dfa {
        &self.target
    }
}

impl Oracle for SimulatedTeacher {
    fn member(&mut self, w: &Word) -> Result<bool> {
        let answer = self.target.accepts(w)?;
        self.stats.mq_asked += 1;
        Ok(answer)
    }

    fn equivalence(&mut self, hypothesis: &Dfa) -> Result<Option<Word>> {
        let cex = shortest_counterexample(hypothesis, &self.target)?;
        self.stats.eq_asked += 1;
        if let Some(w) = &cex {
            // Re-check the contract on every call: the word must disagree.
            debug_assert_ne!(
                hypothesis.accepts(w)?,
                self.target.accepts(w)?,
                "counterexample does not distinguish hypothesis and target"
            );
            self.stats.cex_total_length += w.len() as u64;
        }
        Ok(cex)
    }

    fn query_stats(&self) -> QueryStats {
        self.stats
    }

    fn verify_member(&mut self, w: &Word, claimed: bool) -> Result<bool> {
        Ok(self.target.accepts(w)? == claimed)
    }
}

/// A teacher for a Mealy-computed function; output queries count as
/// membership queries.
pub struct SimulatedMealyTeacher {
    target: MealyMachine,
    stats: QueryStats,
}

impl SimulatedMealyTeacher {
    pub fn new(target: MealyMachine) -> Self {
        SimulatedMealyTeacher {
            target,
            stats: QueryStats::default(),
        }
    }

    pub fn target(&self) -> &MealyMachine {
        &self.target
    }
}

impl MealyOracle for SimulatedMealyTeacher {
    fn last_output(&mut self, w: &Word) -> Result<Symbol> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        let answer = self.target.last_output(w)?;
        self.stats.mq_asked += 1;
        Ok(answer)
    }

    fn equivalence(&mut self, hypothesis: &MealyMachine) -> Result<Option<Word>> {
        let cex = shortest_mealy_mismatch(hypothesis, &self.target)?;
        self.stats.eq_asked += 1;
        if let Some(w) = &cex {
            debug_assert_ne!(hypothesis.last_output(w)?, self.target.last_output(w)?);
            self.stats.cex_total_length += w.len() as u64;
        }
        Ok(cex)
    }

    fn output_alphabet(&self) -> &Alphabet {
        self.target.output_alphabet()
    }

    fn query_stats(&self) -> QueryStats {
        self.stats
    }

    fn verify_output(&mut self, w: &Word, claimed: Symbol) -> Result<bool> {
        Ok(self.target.last_output(w)? == claimed)
    }
}
