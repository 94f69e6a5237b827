use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use crate::automata::{Alphabet, Symbol, Word};
use crate::Result;

use super::CexProcessing;

/// The L* observation table, generic over the cell value: `bool` for
/// language learning, an output symbol for Mealy learning.
///
/// Selectors are kept *representative-unique*: no two selectors ever share a
/// row vector, so hypothesis states are exactly the selectors and the
/// classic consistency-repair step has nothing to do. Counterexample
/// processing preserves this (see [`Self::process_counterexample`]).
///
/// All membership results are memoized by the queried word, so the table
/// logic never asks the channel the same word twice. Row vectors are cached
/// per selector and per boundary slot and extended in place when test words
/// arrive, which keeps the per-round cost proportional to the new cells.
pub struct ObservationTable<V> {
    alphabet: Alphabet,
    selectors: Vec<Word>,
    selector_index: HashMap<Word, usize>,
    tests: Vec<Word>,
    test_set: HashSet<Word>,
    memo: HashMap<Word, V>,
    /// Row vectors parallel to `selectors`; lengths match `tests` except for
    /// freshly pushed selectors (see `sync_rows`).
    sel_rows: Vec<Vec<V>>,
    row_index: HashMap<Vec<V>, usize>,
    /// Cached boundary rows keyed by (selector index, symbol).
    boundary_rows: HashMap<(usize, u32), Vec<V>>,
    /// Boundary slots that are themselves selectors, so scans can skip them
    /// without rebuilding words.
    promoted: HashSet<(usize, u32)>,
}

fn memoized_ask<V: Clone, M>(memo: &mut HashMap<Word, V>, w: Word, mq: &mut M) -> Result<V>
where
    M: FnMut(&Word) -> Result<V>,
{
    if let Some(v) = memo.get(&w) {
        return Ok(v.clone());
    }
    let v = mq(&w)?;
    memo.insert(w, v.clone());
    Ok(v)
}

impl<V: Clone + Eq + Hash> ObservationTable<V> {
    /// A fresh table with `S = {epsilon}` and the given test words.
    pub fn new(alphabet: Alphabet, initial_tests: Vec<Word>) -> Self {
        let mut table = ObservationTable {
            alphabet,
            selectors: Vec::new(),
            selector_index: HashMap::new(),
            tests: initial_tests.clone(),
            test_set: initial_tests.into_iter().collect(),
            memo: HashMap::new(),
            sel_rows: Vec::new(),
            row_index: HashMap::new(),
            boundary_rows: HashMap::new(),
            promoted: HashSet::new(),
        };
        table.selectors.push(Word::empty());
        table.selector_index.insert(Word::empty(), 0);
        table
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn selectors(&self) -> &[Word] {
        &self.selectors
    }

    pub fn tests(&self) -> &[Word] {
        &self.tests
    }

    /// Number of distinct membership words the table has asked its channel.
    pub fn distinct_queries(&self) -> usize {
        self.memo.len()
    }

    pub fn value(&self, w: &Word) -> Option<&V> {
        self.memo.get(w)
    }

    /// Row of the selector with index `i`; valid once the table was closed.
    pub fn selector_row(&self, i: usize) -> &[V] {
        &self.sel_rows[i]
    }

    /// Index of the selector whose row equals `row`, if any.
    pub fn selector_with_row(&self, row: &[V]) -> Option<usize> {
        self.row_index.get(row).copied()
    }

    /// The hypothesis transition out of selector `si` on `a`: the selector
    /// whose row matches the boundary slot. `None` when the table is not
    /// closed (or not filled) there.
    pub fn hypothesis_step(&self, si: usize, a: Symbol) -> Option<usize> {
        if self.promoted.contains(&(si, a.0)) {
            return self
                .selector_index
                .get(&self.selectors[si].extended(a))
                .copied();
        }
        let row = self.boundary_rows.get(&(si, a.0))?;
        if row.len() != self.tests.len() {
            return None;
        }
        self.row_index.get(row).copied()
    }

    fn compute_row<M>(&mut self, base: &Word, mq: &mut M) -> Result<Vec<V>>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        let mut row = Vec::with_capacity(self.tests.len());
        for ti in 0..self.tests.len() {
            let w = base.concat(&self.tests[ti]);
            row.push(memoized_ask(&mut self.memo, w, mq)?);
        }
        Ok(row)
    }

    /// Computes any missing selector rows (fresh selectors only; test
    /// extensions update rows in place).
    fn sync_rows<M>(&mut self, mq: &mut M) -> Result<()>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        while self.sel_rows.len() < self.selectors.len() {
            let i = self.sel_rows.len();
            let base = self.selectors[i].clone();
            let row = self.compute_row(&base, mq)?;
            debug_assert!(
                !self.row_index.contains_key(&row),
                "selector rows must stay pairwise distinct"
            );
            self.row_index.insert(row.clone(), i);
            self.sel_rows.push(row);
        }
        Ok(())
    }

    fn ensure_boundary_row<M>(&mut self, si: usize, a: Symbol, mq: &mut M) -> Result<()>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        if self.boundary_rows.contains_key(&(si, a.0)) {
            return Ok(());
        }
        let base = self.selectors[si].extended(a);
        let row = self.compute_row(&base, mq)?;
        self.boundary_rows.insert((si, a.0), row);
        Ok(())
    }

    /// Adds a word with a known-fresh row as a new selector.
    fn push_selector(&mut self, word: Word, row: Vec<V>) {
        let idx = self.selectors.len();
        debug_assert!(!self.row_index.contains_key(&row));
        // Keep the closure scan's skip set current in both directions: the
        // new selector may be the child of an existing one, and raw
        // counterexample prefixes may have arrived before their parent.
        if !word.is_empty() {
            let parent = word.slice(0..word.len() - 1);
            if let Some(&pi) = self.selector_index.get(&parent) {
                let last = *word.symbols().last().expect("non-empty");
                self.promoted.insert((pi, last.0));
                self.boundary_rows.remove(&(pi, last.0));
            }
        }
        for a in self.alphabet.symbols().collect::<Vec<_>>() {
            if self.selector_index.contains_key(&word.extended(a)) {
                self.promoted.insert((idx, a.0));
            }
        }
        self.selector_index.insert(word.clone(), idx);
        self.row_index.insert(row.clone(), idx);
        self.selectors.push(word);
        self.sel_rows.push(row);
    }

    /// The lexicographically-least shortest boundary word whose row matches
    /// no selector row, or `None` when the table is closed.
    fn find_unclosed<M>(&mut self, mq: &mut M) -> Result<Option<(usize, Symbol)>>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        let mut best: Option<(usize, Symbol)> = None;
        let symbols: Vec<Symbol> = self.alphabet.symbols().collect();
        for si in 0..self.selectors.len() {
            for &a in &symbols {
                if self.promoted.contains(&(si, a.0)) {
                    continue;
                }
                self.ensure_boundary_row(si, a, mq)?;
                let row = &self.boundary_rows[&(si, a.0)];
                if self.row_index.contains_key(row) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, ba)) => {
                        let cand = self.selectors[si].extended(a);
                        let incumbent = self.selectors[bi].extended(ba);
                        cand.length_lex_cmp(&incumbent) == std::cmp::Ordering::Less
                    }
                };
                if better {
                    best = Some((si, a));
                }
            }
        }
        Ok(best)
    }

    /// Is every boundary row represented by a selector? Only meaningful once
    /// rows are filled; returns false on an unfilled table.
    pub fn is_closed(&self) -> bool {
        if self.sel_rows.len() != self.selectors.len() {
            return false;
        }
        for si in 0..self.selectors.len() {
            for a in self.alphabet.symbols() {
                if self.promoted.contains(&(si, a.0)) {
                    continue;
                }
                match self.boundary_rows.get(&(si, a.0)) {
                    Some(row) if self.row_index.contains_key(row) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Repeatedly promotes the boundary word (shortest first, ties by
    /// alphabet order) whose row vector matches no selector row, filling new
    /// entries through `mq`, until the table is closed.
    pub fn close<M>(&mut self, mq: &mut M) -> Result<()>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        self.sync_rows(mq)?;
        while let Some((si, a)) = self.find_unclosed(mq)? {
            let word = self.selectors[si].extended(a);
            let row = self
                .boundary_rows
                .remove(&(si, a.0))
                .expect("find_unclosed filled this row");
            self.promoted.insert((si, a.0));
            self.push_selector(word, row);
        }
        Ok(())
    }

    /// Appends test words (deduplicated), extending every cached row in
    /// place with the new columns.
    pub fn add_tests<M>(&mut self, new_tests: Vec<Word>, mq: &mut M) -> Result<()>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        let fresh: Vec<Word> = new_tests
            .into_iter()
            .filter(|t| self.test_set.insert(t.clone()))
            .collect();
        if fresh.is_empty() {
            return Ok(());
        }
        for i in 0..self.sel_rows.len() {
            for t in &fresh {
                let w = self.selectors[i].concat(t);
                let v = memoized_ask(&mut self.memo, w, mq)?;
                self.sel_rows[i].push(v);
            }
        }
        let mut slots: Vec<(usize, u32)> = self.boundary_rows.keys().copied().collect();
        slots.sort_unstable();
        for (si, a) in slots {
            for t in &fresh {
                let w = self.selectors[si].extended(Symbol(a)).concat(t);
                let v = memoized_ask(&mut self.memo, w, mq)?;
                self.boundary_rows
                    .get_mut(&(si, a))
                    .expect("key exists")
                    .push(v);
            }
        }
        // Longer rows, same distinctness; re-key the row lookup.
        self.row_index.clear();
        for (i, row) in self.sel_rows.iter().enumerate() {
            self.row_index.insert(row.clone(), i);
        }
        self.tests.extend(fresh);
        Ok(())
    }

    /// Extends the table from a counterexample.
    ///
    /// Under `AllPrefixes`, the counterexample is consumed to exhaustion:
    /// each pass adds every prefix whose row vector is new as a selector
    /// (prefixes whose row duplicates an existing selector are skipped,
    /// which is what keeps selectors representative-unique without a
    /// consistency-repair step); when a pass contributes no prefix, a
    /// single splitting suffix is located by binary search over the
    /// hypothesis run and added as a test word, which provably separates a
    /// new state on re-closing. Passes repeat until the table itself
    /// classifies the counterexample correctly, so one equivalence answer
    /// is milked for as many states as it can support.
    ///
    /// Under `AllSuffixes`, all non-empty suffixes join the test words.
    pub fn process_counterexample<M>(
        &mut self,
        cex: &Word,
        policy: CexProcessing,
        mq: &mut M,
    ) -> Result<()>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        self.sync_rows(mq)?;
        match policy {
            CexProcessing::AllSuffixes => {
                // Shortest suffix first, so the test list stays
                // suffix-closed as it grows.
                let suffixes: Vec<Word> = (0..cex.len())
                    .rev()
                    .map(|i| cex.slice(i..cex.len()))
                    .collect();
                self.add_tests(suffixes, mq)
            }
            CexProcessing::AllPrefixes => {
                // The iteration bound only guards against channels that
                // answer inconsistently; consistent channels exit via
                // correct classification long before it.
                for _ in 0..4096 {
                    self.close(mq)?;
                    if self.classifies_correctly(cex, mq)? {
                        return Ok(());
                    }
                    let mut added = false;
                    for i in 1..=cex.len() {
                        let p = cex.slice(0..i);
                        if self.selector_index.contains_key(&p) {
                            continue;
                        }
                        let row = self.compute_row(&p, mq)?;
                        if !self.row_index.contains_key(&row) {
                            self.push_selector(p, row);
                            added = true;
                        }
                    }
                    if !added {
                        match self.splitting_suffix(cex, mq)? {
                            Some(suffix) => self.add_tests(vec![suffix], mq)?,
                            // No flip to exploit (inconsistent channels);
                            // leave the rest to the divergence guard.
                            None => return Ok(()),
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Does the closed table's hypothesis classify `cex` like the channel
    /// does?
    fn classifies_correctly<M>(&mut self, cex: &Word, mq: &mut M) -> Result<bool>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        let Some(run) = self.representative_run(cex) else {
            return Ok(true);
        };
        let channel_answer = memoized_ask(&mut self.memo, cex.clone(), mq)?;
        Ok(self.claimed_value(&run, cex) == Some(channel_answer))
    }

    /// The hypothesis run over `cex` as selector indices, or `None` while
    /// the table is not closed along it.
    fn representative_run(&self, cex: &Word) -> Option<Vec<usize>> {
        let mut run = Vec::with_capacity(cex.len() + 1);
        run.push(0usize);
        for &a in cex.symbols() {
            run.push(self.hypothesis_step(*run.last().expect("non-empty"), a)?);
        }
        Some(run)
    }

    /// What the table claims for `cex`: the epsilon-row value of the final
    /// representative for language tables, the last-letter cell of the
    /// penultimate representative for Mealy-style tables.
    fn claimed_value(&self, run: &[usize], cex: &Word) -> Option<V> {
        if self.tests[0].is_empty() {
            Some(self.sel_rows[*run.last()?][0].clone())
        } else {
            let last = *cex.symbols().last()?;
            Some(self.sel_rows[run[cex.len() - 1]][last.index()].clone())
        }
    }

    /// Binary search for a distinguishing suffix of `cex`, following the
    /// hypothesis run through selector representatives.
    ///
    /// Let `r_i` be the hypothesis state (selector) after the first `i`
    /// letters and `f(i)` the channel's answer for `selector(r_i) *
    /// suffix_i`. The endpoints disagree (`f(0)` is the answer for the
    /// counterexample itself, the final value is what the hypothesis
    /// claims), and adjacent values across a table-backed step agree, so
    /// some flip `f(i) != f(i+1)` sits strictly inside; its suffix, added
    /// as a test, splits the boundary word `selector(r_i) * cex[i]` from
    /// its current representative.
    fn splitting_suffix<M>(&mut self, cex: &Word, mq: &mut M) -> Result<Option<Word>>
    where
        M: FnMut(&Word) -> Result<V>,
    {
        // Representative run. Bail out (no suffix) if the table is not
        // closed along it; close() will make progress instead.
        let mut run = Vec::with_capacity(cex.len() + 1);
        run.push(0usize);
        for &a in cex.symbols() {
            match self.hypothesis_step(*run.last().expect("non-empty"), a) {
                Some(next) => run.push(next),
                None => return Ok(None),
            }
        }
        // The upper endpoint carries the hypothesis's claim. For language
        // tables (epsilon is a test) that is f(n): the value of the final
        // representative itself. Mealy tables have no epsilon test and the
        // claim is already f(n-1), the cell of the last letter; the end
        // word there is never empty, so the channel can always answer.
        let mut lo = 0usize;
        let mut hi = if self.tests[0].is_empty() {
            cex.len()
        } else {
            cex.len() - 1
        };
        if hi == lo {
            return Ok(None);
        }
        let value_at = |table: &mut Self, i: usize, mq: &mut M| -> Result<V> {
            let w = table.selectors[run[i]].concat(&cex.slice(i..cex.len()));
            if w.is_empty() {
                // selector(epsilon) with the empty suffix: the hypothesis
                // claim for language tables; read it from the row.
                return Ok(table.sel_rows[run[i]][0].clone());
            }
            memoized_ask(&mut table.memo, w, mq)
        };
        let f_lo = value_at(self, lo, mq)?;
        let f_hi = value_at(self, hi, mq)?;
        if f_lo == f_hi {
            // Not a counterexample for the current table data (possible
            // when the channel answers inconsistently); nothing to split.
            return Ok(None);
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let f_mid = value_at(self, mid, mq)?;
            if f_mid == f_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Flip between lo and lo + 1; the splitting test is the suffix
        // after position lo + 1.
        Ok(Some(cex.slice(lo + 1..cex.len())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    /// Membership channel for the language "even number of a's", counting
    /// how often it is consulted.
    fn parity_channel(
        count: std::rc::Rc<std::cell::Cell<usize>>,
    ) -> impl FnMut(&Word) -> Result<bool> {
        move |w: &Word| {
            count.set(count.get() + 1);
            Ok(w.symbols()
                .iter()
                .filter(|s| s.0 == 0)
                .count()
                .is_multiple_of(2))
        }
    }

    #[test]
    fn close_promotes_the_odd_row() {
        let count = std::rc::Rc::new(std::cell::Cell::new(0));
        let mut mq = parity_channel(count.clone());
        let mut t = ObservationTable::new(ab(), vec![Word::empty()]);
        t.close(&mut mq).unwrap();
        assert!(t.is_closed());
        assert_eq!(t.selectors().len(), 2, "epsilon and `a`");
        assert_eq!(t.selectors()[1], ab().parse_word("a").unwrap());
    }

    #[test]
    fn closing_a_closed_table_asks_nothing() {
        let count = std::rc::Rc::new(std::cell::Cell::new(0));
        let mut mq = parity_channel(count.clone());
        let mut t = ObservationTable::new(ab(), vec![Word::empty()]);
        t.close(&mut mq).unwrap();
        let asked = count.get();
        t.close(&mut mq).unwrap();
        assert_eq!(count.get(), asked, "already closed: zero new queries");
    }

    #[test]
    fn memoization_never_repeats_a_word() {
        use std::cell::RefCell;
        use std::collections::HashSet;
        use std::rc::Rc;
        let seen: Rc<RefCell<HashSet<Word>>> = Rc::default();
        let seen2 = seen.clone();
        let mut mq = move |w: &Word| {
            assert!(seen2.borrow_mut().insert(w.clone()), "repeated query {w:?}");
            Ok(w.len().is_multiple_of(2))
        };
        let mut t = ObservationTable::new(ab(), vec![Word::empty()]);
        t.close(&mut mq).unwrap();
        let cex = ab().parse_word("a b a").unwrap();
        t.process_counterexample(&cex, CexProcessing::AllPrefixes, &mut mq)
            .unwrap();
        t.close(&mut mq).unwrap();
    }

    #[test]
    fn suffix_processing_extends_tests() {
        let count = std::rc::Rc::new(std::cell::Cell::new(0));
        let mut mq = parity_channel(count);
        let mut t = ObservationTable::new(ab(), vec![Word::empty()]);
        t.close(&mut mq).unwrap();
        let cex = ab().parse_word("a b a").unwrap();
        t.process_counterexample(&cex, CexProcessing::AllSuffixes, &mut mq)
            .unwrap();
        let tests: Vec<String> = t.tests().iter().map(|w| ab().format_word(w)).collect();
        assert_eq!(tests, vec!["", "a", "b a", "a b a"]);
    }

    #[test]
    fn stalled_prefix_processing_adds_one_splitting_suffix() {
        // Language {b, ab}: after closing with C = {eps}, the selectors are
        // {eps, b} and every prefix of the counterexample "b a b" has a row
        // equal to an existing selector, so prefix processing stalls and
        // the binary search must contribute exactly one suffix test.
        let al = ab();
        let in_language = |w: &Word| al.format_word(w) == "b" || al.format_word(w) == "a b";
        let mut mq = |w: &Word| Ok(in_language(w));
        let mut t = ObservationTable::new(al.clone(), vec![Word::empty()]);
        t.close(&mut mq).unwrap();
        assert_eq!(t.selectors().len(), 2);
        let before = t.tests().len();
        let cex = al.parse_word("b a b").unwrap();
        t.process_counterexample(&cex, CexProcessing::AllPrefixes, &mut mq)
            .unwrap();
        assert_eq!(
            t.tests().len(),
            before + 1,
            "exactly one suffix joins the tests"
        );
        t.close(&mut mq).unwrap();
        assert_eq!(t.selectors().len(), 3, "the new test splits a boundary row");
    }
}
