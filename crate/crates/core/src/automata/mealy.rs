use std::collections::{HashMap, VecDeque};

use super::alphabet::{Alphabet, StateId, Symbol, Word};
use crate::{Error, Result};

/// A complete Mealy machine: every transition carries an output letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MealyMachine {
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    initial: StateId,
    delta: Vec<Vec<StateId>>,
    lambda: Vec<Vec<Symbol>>,
}

impl MealyMachine {
    pub fn new(
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        initial: StateId,
        delta: Vec<Vec<StateId>>,
        lambda: Vec<Vec<Symbol>>,
    ) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "a Mealy machine needs at least one state".into(),
            ));
        }
        if initial >= n {
            return Err(Error::InvalidInput(format!(
                "initial state {initial} out of range (0..{n})"
            )));
        }
        if lambda.len() != n {
            return Err(Error::InvalidInput(
                "delta and lambda must have the same domain".into(),
            ));
        }
        for q in 0..n {
            if delta[q].len() != input_alphabet.len() || lambda[q].len() != input_alphabet.len() {
                return Err(Error::InvalidInput(format!(
                    "state {q} must define a transition and output for every input symbol"
                )));
            }
            for &t in &delta[q] {
                if t >= n {
                    return Err(Error::InvalidInput(format!(
                        "transition from state {q} targets missing state {t}"
                    )));
                }
            }
            for &o in &lambda[q] {
                if !output_alphabet.contains(o) {
                    return Err(Error::ForeignSymbol {
                        id: o.index(),
                        size: output_alphabet.len(),
                    });
                }
            }
        }
        Ok(MealyMachine {
            input_alphabet,
            output_alphabet,
            initial,
            delta,
            lambda,
        })
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    #[inline]
    pub fn step(&self, q: StateId, a: Symbol) -> StateId {
        self.delta[q][a.index()]
    }

    #[inline]
    pub fn output(&self, q: StateId, a: Symbol) -> Symbol {
        self.lambda[q][a.index()]
    }

    /// The full output word for `w`.
    pub fn output_word(&self, w: &Word) -> Result<Word> {
        self.input_alphabet.check_word(w)?;
        let mut q = self.initial;
        let mut out = Vec::with_capacity(w.len());
        for &a in w.symbols() {
            out.push(self.output(q, a));
            q = self.step(q, a);
        }
        Ok(Word::from_symbols(out))
    }

    /// The last output letter on `w`. Undefined (an error) on the empty
    /// word.
    pub fn last_output(&self, w: &Word) -> Result<Symbol> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        self.input_alphabet.check_word(w)?;
        let mut q = self.initial;
        let mut last = None;
        for &a in w.symbols() {
            last = Some(self.output(q, a));
            q = self.step(q, a);
        }
        Ok(last.expect("word is non-empty"))
    }

    pub(crate) fn last_output_from(&self, mut q: StateId, w: &Word) -> Option<Symbol> {
        let mut last = None;
        for &a in w.symbols() {
            last = Some(self.output(q, a));
            q = self.step(q, a);
        }
        last
    }

    pub(crate) fn run_from_unchecked(&self, mut q: StateId, w: &Word) -> StateId {
        for &a in w.symbols() {
            q = self.step(q, a);
        }
        q
    }

    /// A shortest non-empty word whose last output differs between the two
    /// states, or `None` when the states compute the same residual function.
    pub fn distinguishing_word(&self, q1: StateId, q2: StateId) -> Option<Word> {
        MealyRefinement::new(self).distinguishing_word(q1, q2)
    }
}

/// Refinement levels for the Mealy right congruence: two states share a
/// class at level k iff the last output agrees on every input word of
/// length <= k. Level 1 is the partition by output rows.
pub(crate) struct MealyRefinement<'a> {
    machine: &'a MealyMachine,
    levels: Vec<Vec<u32>>,
}

impl<'a> MealyRefinement<'a> {
    pub(crate) fn new(machine: &'a MealyMachine) -> Self {
        let n = machine.state_count();
        let mut keys: HashMap<&[Symbol], u32> = HashMap::new();
        let mut level1 = Vec::with_capacity(n);
        for q in 0..n {
            let fresh = keys.len() as u32;
            level1.push(*keys.entry(machine.lambda[q].as_slice()).or_insert(fresh));
        }
        let mut levels = vec![level1];
        loop {
            let prev = levels.last().unwrap();
            let mut keys: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for q in 0..n {
                let succ: Vec<u32> = machine
                    .input_alphabet
                    .symbols()
                    .map(|a| prev[machine.step(q, a)])
                    .collect();
                let fresh = keys.len() as u32;
                next.push(*keys.entry((prev[q], succ)).or_insert(fresh));
            }
            if *prev == next {
                break;
            }
            levels.push(next);
        }
        MealyRefinement { machine, levels }
    }

    pub(crate) fn equivalent(&self, q1: StateId, q2: StateId) -> bool {
        let stable = self.levels.last().unwrap();
        stable[q1] == stable[q2]
    }

    pub(crate) fn distinguishing_word(&self, q1: StateId, q2: StateId) -> Option<Word> {
        if self.equivalent(q1, q2) {
            return None;
        }
        // levels[i] captures words of length <= i + 1.
        let mut level = (0..self.levels.len())
            .find(|&i| self.levels[i][q1] != self.levels[i][q2])
            .expect("stable classes differ");
        let mut word = Word::empty();
        let (mut p1, mut p2) = (q1, q2);
        while level > 0 {
            let prev = &self.levels[level - 1];
            for a in self.machine.input_alphabet.symbols() {
                let (t1, t2) = (self.machine.step(p1, a), self.machine.step(p2, a));
                if prev[t1] != prev[t2] {
                    word.push(a);
                    p1 = t1;
                    p2 = t2;
                    break;
                }
            }
            level -= 1;
        }
        // Level 0: some single letter separates the output rows.
        for a in self.machine.input_alphabet.symbols() {
            if self.machine.output(p1, a) != self.machine.output(p2, a) {
                word.push(a);
                return Some(word);
            }
        }
        unreachable!("level-0 separation means some output letter differs")
    }
}

/// A shortest non-empty input word on which the machines' last outputs
/// differ; `None` iff they compute the same function.
pub fn shortest_mealy_mismatch(m1: &MealyMachine, m2: &MealyMachine) -> Result<Option<Word>> {
    if m1.input_alphabet != m2.input_alphabet || m1.output_alphabet != m2.output_alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let n2 = m2.state_count();
    let idx = |p: StateId, q: StateId| p * n2 + q;
    let mut parent: Vec<Option<(usize, Symbol)>> = vec![None; m1.state_count() * n2];
    let mut seen = vec![false; m1.state_count() * n2];
    let start = idx(m1.initial, m2.initial);
    seen[start] = true;
    let mut queue = VecDeque::new();
    queue.push_back((m1.initial, m2.initial));
    while let Some((p, q)) = queue.pop_front() {
        for a in m1.input_alphabet.symbols() {
            if m1.output(p, a) != m2.output(q, a) {
                let mut w = trace(&parent, start, idx(p, q));
                w.push(a);
                return Ok(Some(w));
            }
            let (tp, tq) = (m1.step(p, a), m2.step(q, a));
            let t = idx(tp, tq);
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((idx(p, q), a));
                queue.push_back((tp, tq));
            }
        }
    }
    Ok(None)
}

fn trace(parent: &[Option<(usize, Symbol)>], start: usize, mut node: usize) -> Word {
    let mut rev = Vec::new();
    while node != start {
        let (prev, a) = parent[node].expect("non-start nodes have parents");
        rev.push(a);
        node = prev;
    }
    rev.reverse();
    Word::from_symbols(rev)
}
