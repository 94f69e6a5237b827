use crate::automata::{Alphabet, Dfa, Word};
use crate::{Error, Result};

use super::table::ObservationTable;

/// Which test words a fresh table starts with. `EpsilonPlusAlphabet` (the
/// default) seeds the tests with every single letter as well, which lets
/// small targets come out right on the first hypothesis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InitialTests {
    EpsilonOnly,
    EpsilonPlusAlphabet,
}

/// How counterexamples extend the table: their prefixes as selectors
/// (classic) or their suffixes as test words.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CexProcessing {
    AllPrefixes,
    AllSuffixes,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LearnerConfig {
    pub initial_tests: InitialTests,
    pub cex_processing: CexProcessing,
    pub max_rounds: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            initial_tests: InitialTests::EpsilonPlusAlphabet,
            cex_processing: CexProcessing::AllPrefixes,
            max_rounds: 10_000,
        }
    }
}

/// Counters of asked versus inferred queries; the measurand of every
/// experiment. "Asked" queries reached the real oracle, "inferred" ones were
/// answered by the advice layer.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct QueryStats {
    pub mq_asked: u64,
    pub mq_inferred: u64,
    pub eq_asked: u64,
    pub eq_inferred: u64,
    pub cex_total_length: u64,
}

impl QueryStats {
    pub fn total_mq(&self) -> u64 {
        self.mq_asked + self.mq_inferred
    }

    pub fn total_eq(&self) -> u64 {
        self.eq_asked + self.eq_inferred
    }
}

/// The query channel a DFA learner talks to: membership and equivalence,
/// plus the stats the channel accumulated. An advice layer implements this
/// by wrapping another oracle; the equivalence method may internally ask
/// membership queries, which is why one object carries both.
pub trait Oracle {
    fn member(&mut self, w: &Word) -> Result<bool>;

    /// `None` means equivalent; otherwise a word in the symmetric
    /// difference of hypothesis and target.
    fn equivalence(&mut self, hypothesis: &Dfa) -> Result<Option<Word>>;

    fn query_stats(&self) -> QueryStats;

    /// Shadow-verification hook: does `claimed` match the ground truth for
    /// `w`? Must not touch the query counters. Oracles that cannot verify
    /// report an error rather than guessing.
    fn verify_member(&mut self, _w: &Word, _claimed: bool) -> Result<bool> {
        Err(Error::ShadowUnsupported)
    }
}

/// A hypothesis DFA together with its table back-maps: per state the
/// selector word that realizes it, and the test words that split the states.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    pub dfa: Dfa,
    pub state_selectors: Vec<Word>,
    pub tests: Vec<Word>,
}

/// Builds the hypothesis automaton from a closed, filled table: one state
/// per selector, the state of `s` accepting iff `entry(s, epsilon)`, and
/// `delta(state(s), a) = state(s')` where `row(s a) = row(s')`.
pub fn build_hypothesis(table: &ObservationTable<bool>) -> Result<Hypothesis> {
    debug_assert!(table.tests().first().is_some_and(Word::is_empty));
    let n = table.selectors().len();
    let alphabet = table.alphabet().clone();
    let mut accepting = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    for i in 0..n {
        accepting.push(table.selector_row(i)[0]);
        let mut succ = Vec::with_capacity(alphabet.len());
        for a in alphabet.symbols() {
            succ.push(table.hypothesis_step(i, a).ok_or(Error::TableNotClosed)?);
        }
        delta.push(succ);
    }
    let dfa = Dfa::new(alphabet, 0, accepting, delta)?;
    Ok(Hypothesis {
        dfa,
        state_selectors: table.selectors().to_vec(),
        tests: table.tests().to_vec(),
    })
}

pub(super) fn initial_tests(alphabet: &Alphabet, which: InitialTests) -> Vec<Word> {
    let mut tests = vec![Word::empty()];
    if which == InitialTests::EpsilonPlusAlphabet {
        tests.extend(alphabet.symbols().map(Word::singleton));
    }
    tests
}

/// The L* loop: close the table, build a hypothesis, ask equivalence,
/// process the counterexample, repeat. Returns the learned DFA (the minimal
/// automaton of the target language when the channels answer consistently)
/// and the channel's query statistics.
///
/// Exceeding `max_rounds` signals inconsistent channels (for example wrong
/// advice) and reports divergence rather than looping forever.
pub fn lstar_learn<O: Oracle>(
    oracle: &mut O,
    alphabet: &Alphabet,
    config: &LearnerConfig,
) -> Result<(Dfa, QueryStats)> {
    let mut table: ObservationTable<bool> = ObservationTable::new(
        alphabet.clone(),
        initial_tests(alphabet, config.initial_tests),
    );
    for _round in 0..config.max_rounds {
        table.close(&mut |w: &Word| oracle.member(w))?;
        let hypothesis = build_hypothesis(&table)?;
        match oracle.equivalence(&hypothesis.dfa)? {
            None => return Ok((hypothesis.dfa, oracle.query_stats())),
            Some(cex) => {
                alphabet.check_word(&cex)?;
                table.process_counterexample(&cex, config.cex_processing, &mut |w: &Word| {
                    oracle.member(w)
                })?;
            }
        }
    }
    Err(Error::Divergence(config.max_rounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    #[test]
    fn all_false_table_builds_the_one_state_rejecting_dfa() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let mut table: ObservationTable<bool> =
            ObservationTable::new(al.clone(), vec![Word::empty()]);
        table.close(&mut |_w: &Word| Ok(false)).unwrap();
        let hyp = build_hypothesis(&table).unwrap();
        assert_eq!(hyp.dfa.state_count(), 1);
        assert!(!hyp.dfa.is_accepting(hyp.dfa.initial()));
        assert_eq!(hyp.state_selectors, vec![Word::empty()]);
    }

    #[test]
    fn hypothesis_from_parity_rows() {
        // S = {eps, a} with row(eps) = [1], row(a) = [0], row(aa) = row(eps).
        let al = Alphabet::new(["a"]).unwrap();
        let mut table: ObservationTable<bool> =
            ObservationTable::new(al.clone(), vec![Word::empty()]);
        table
            .close(&mut |w: &Word| Ok(w.len().is_multiple_of(2)))
            .unwrap();
        let hyp = build_hypothesis(&table).unwrap();
        assert_eq!(hyp.dfa.state_count(), 2);
        let a = al.parse_word("a").unwrap();
        assert!(hyp.dfa.accepts(&Word::empty()).unwrap());
        assert!(!hyp.dfa.accepts(&a).unwrap());
        assert!(hyp.dfa.accepts(&a.concat(&a)).unwrap());
    }
}
