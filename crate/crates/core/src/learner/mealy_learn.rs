use crate::automata::{Alphabet, MealyMachine, Symbol, Word};
use crate::{Error, Result};

use super::lstar::{LearnerConfig, QueryStats};
use super::table::ObservationTable;

/// Query channel for Mealy learning. Membership queries become output
/// queries: the last output letter on a non-empty input word.
pub trait MealyOracle {
    fn last_output(&mut self, w: &Word) -> Result<Symbol>;

    fn equivalence(&mut self, hypothesis: &MealyMachine) -> Result<Option<Word>>;

    fn output_alphabet(&self) -> &Alphabet;

    fn query_stats(&self) -> QueryStats;

    fn verify_output(&mut self, _w: &Word, _claimed: Symbol) -> Result<bool> {
        Err(Error::ShadowUnsupported)
    }
}

#[derive(Clone, Debug)]
pub struct MealyHypothesis {
    pub machine: MealyMachine,
    pub state_selectors: Vec<Word>,
    pub tests: Vec<Word>,
}

/// Hypothesis construction for the Mealy table: entries store output
/// symbols, and because every single letter is a test word (they seed the
/// table and tests are never removed), `lambda(state(s), a)` can be read
/// directly from the cell `(s, a)`.
pub fn build_mealy_hypothesis(
    table: &ObservationTable<Symbol>,
    output_alphabet: &Alphabet,
) -> Result<MealyHypothesis> {
    let alphabet = table.alphabet().clone();
    let n = table.selectors().len();
    let mut delta = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(n);
    for i in 0..n {
        let mut succ = Vec::with_capacity(alphabet.len());
        let mut out = Vec::with_capacity(alphabet.len());
        for a in alphabet.symbols() {
            succ.push(table.hypothesis_step(i, a).ok_or(Error::TableNotClosed)?);
            // The single letter `a` is the test with index `a` by
            // construction, so lambda sits in the selector's own row.
            out.push(table.selector_row(i)[a.index()]);
        }
        delta.push(succ);
        lambda.push(out);
    }
    let machine = MealyMachine::new(alphabet, output_alphabet.clone(), 0, delta, lambda)?;
    Ok(MealyHypothesis {
        machine,
        state_selectors: table.selectors().to_vec(),
        tests: table.tests().to_vec(),
    })
}

/// L* for Mealy machines: the observation table stores output symbols, test
/// words are non-empty (seeded with the single letters), and the result is
/// the minimal machine computing the target function.
pub fn lstar_mealy<O: MealyOracle>(
    oracle: &mut O,
    input_alphabet: &Alphabet,
    config: &LearnerConfig,
) -> Result<(MealyMachine, QueryStats)> {
    let tests: Vec<Word> = input_alphabet.symbols().map(Word::singleton).collect();
    let mut table: ObservationTable<Symbol> = ObservationTable::new(input_alphabet.clone(), tests);
    let output_alphabet = oracle.output_alphabet().clone();
    for _round in 0..config.max_rounds {
        table.close(&mut |w: &Word| oracle.last_output(w))?;
        let hypothesis = build_mealy_hypothesis(&table, &output_alphabet)?;
        match oracle.equivalence(&hypothesis.machine)? {
            None => return Ok((hypothesis.machine, oracle.query_stats())),
            Some(cex) => {
                if cex.is_empty() {
                    return Err(Error::InvalidInput(
                        "a Mealy counterexample must be non-empty".into(),
                    ));
                }
                input_alphabet.check_word(&cex)?;
                table.process_counterexample(&cex, config.cex_processing, &mut |w: &Word| {
                    oracle.last_output(w)
                })?;
            }
        }
    }
    Err(Error::Divergence(config.max_rounds))
}
