use std::collections::HashMap;
use std::collections::VecDeque;

use super::alphabet::{Alphabet, StateId, Symbol, Word};
use crate::{Error, Result};

/// A complete deterministic finite automaton. `delta` is total: there is a
/// successor for every (state, symbol) pair. Completeness is enforced at
/// construction; file loaders that want to complete a partial table with a
/// sink must do so explicitly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    delta: Vec<Vec<StateId>>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        initial: StateId,
        accepting: Vec<bool>,
        delta: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 {
            return Err(Error::InvalidInput("a DFA needs at least one state".into()));
        }
        if initial >= n {
            return Err(Error::InvalidInput(format!(
                "initial state {initial} out of range (0..{n})"
            )));
        }
        if delta.len() != n {
            return Err(Error::InvalidInput(format!(
                "transition table has {} rows for {n} states",
                delta.len()
            )));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidInput(format!(
                    "state {q} defines {} transitions for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            for &t in row {
                if t >= n {
                    return Err(Error::InvalidInput(format!(
                        "transition from state {q} targets missing state {t}"
                    )));
                }
            }
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_count()).filter(|&q| self.accepting[q])
    }

    #[inline]
    pub fn step(&self, q: StateId, a: Symbol) -> StateId {
        self.delta[q][a.index()]
    }

    /// Runs the automaton on `w` from state `q`.
    pub fn run_from(&self, q: StateId, w: &Word) -> Result<StateId> {
        self.alphabet.check_word(w)?;
        Ok(self.run_from_unchecked(q, w))
    }

    #[inline]
    pub(crate) fn run_from_unchecked(&self, mut q: StateId, w: &Word) -> StateId {
        for &a in w.symbols() {
            q = self.delta[q][a.index()];
        }
        q
    }

    /// The state reached from the initial state on `w`.
    pub fn run(&self, w: &Word) -> Result<StateId> {
        self.run_from(self.initial, w)
    }

    /// Does the automaton accept `w`?
    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.accepting[self.run(w)?])
    }

    /// States reachable from the initial state, in BFS discovery order
    /// (symbols explored in alphabet order).
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for a in self.alphabet.symbols() {
                let t = self.step(q, a);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Shortest access words for every state in one BFS pass; `None` for
    /// unreachable states. Ties are broken by alphabet order.
    pub fn shortest_access_words(&self) -> Vec<Option<Word>> {
        let n = self.state_count();
        let mut parent: Vec<Option<(StateId, Symbol)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        let mut order = Vec::new();
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for a in self.alphabet.symbols() {
                let t = self.step(p, a);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((p, a));
                    queue.push_back(t);
                }
            }
        }
        let mut words = vec![None; n];
        for q in order {
            words[q] = Some(trace_back(&parent, self.initial, q));
        }
        words
    }

    /// A shortest word reaching `q` from the initial state, or `None` if `q`
    /// is unreachable. Ties are broken by alphabet order (BFS explores
    /// symbols in order).
    pub fn shortest_access_word(&self, q: StateId) -> Option<Word> {
        let n = self.state_count();
        let mut parent: Vec<Option<(StateId, Symbol)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(p) = queue.pop_front() {
            if p == q {
                return Some(trace_back(&parent, self.initial, q));
            }
            for a in self.alphabet.symbols() {
                let t = self.step(p, a);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((p, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A shortest word `v` such that exactly one of the runs from `q1` and
    /// `q2` on `v` accepts; `None` iff the two states are language
    /// equivalent. Computed by Moore refinement with witness extraction, so
    /// the result is also lexicographically least among the shortest.
    pub fn distinguishing_word(&self, q1: StateId, q2: StateId) -> Option<Word> {
        MooreTable::new(self).distinguishing_word(q1, q2)
    }

    /// The minimal DFA for the same language: unreachable states removed,
    /// equivalent states merged, and states renumbered canonically in BFS
    /// order from the initial state (symbols in alphabet order), so that two
    /// minimized DFAs of the same language compare equal with `==`.
    pub fn minimize(&self) -> Dfa {
        let reachable = self.reachable_states();
        let mut dense = vec![usize::MAX; self.state_count()];
        for (i, &q) in reachable.iter().enumerate() {
            dense[q] = i;
        }
        // Restriction of the automaton to its reachable part.
        let r_accepting: Vec<bool> = reachable.iter().map(|&q| self.accepting[q]).collect();
        let r_delta: Vec<Vec<StateId>> = reachable
            .iter()
            .map(|&q| {
                self.alphabet
                    .symbols()
                    .map(|a| dense[self.step(q, a)])
                    .collect()
            })
            .collect();
        let restricted = Dfa {
            alphabet: self.alphabet.clone(),
            initial: dense[self.initial],
            accepting: r_accepting,
            delta: r_delta,
        };

        let classes = MooreTable::new(&restricted).stable_classes().to_vec();
        let class_count = classes.iter().map(|&c| c as usize + 1).max().unwrap_or(1);
        // One representative per class; transitions read off any member.
        let mut rep = vec![usize::MAX; class_count];
        for (q, &c) in classes.iter().enumerate() {
            if rep[c as usize] == usize::MAX {
                rep[c as usize] = q;
            }
        }

        // Canonical numbering: BFS over classes from the initial class.
        let init_class = classes[restricted.initial] as usize;
        let mut number = vec![usize::MAX; class_count];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        number[init_class] = 0;
        order.push(init_class);
        queue.push_back(init_class);
        while let Some(c) = queue.pop_front() {
            for a in self.alphabet.symbols() {
                let t = classes[restricted.step(rep[c], a)] as usize;
                if number[t] == usize::MAX {
                    number[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }

        let accepting = order
            .iter()
            .map(|&c| restricted.accepting[rep[c]])
            .collect();
        let delta = order
            .iter()
            .map(|&c| {
                self.alphabet
                    .symbols()
                    .map(|a| number[classes[restricted.step(rep[c], a)] as usize])
                    .collect()
            })
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            accepting,
            delta,
        }
    }
}

pub(crate) fn trace_back(
    parent: &[Option<(StateId, Symbol)>],
    start: StateId,
    mut q: StateId,
) -> Word {
    let mut rev = Vec::new();
    while q != start || parent[q].is_some() {
        match parent[q] {
            Some((p, a)) => {
                rev.push(a);
                q = p;
            }
            None => break,
        }
    }
    rev.reverse();
    Word::from_symbols(rev)
}

/// Moore's refinement sequence with all intermediate levels retained.
///
/// `levels[i][q]` is the equivalence class of state `q` under "agreement on
/// all words of length <= i". Two states are language equivalent iff they
/// share a class at the stable level. Keeping every level allows exact
/// witness extraction: if states first differ at level `i`, the shortest
/// distinguishing word has length exactly `i`, and its first symbol is the
/// least `a` whose successors differ at level `i - 1`.
pub(crate) struct MooreTable<'a> {
    dfa: &'a Dfa,
    levels: Vec<Vec<u32>>,
}

impl<'a> MooreTable<'a> {
    pub(crate) fn new(dfa: &'a Dfa) -> Self {
        let n = dfa.state_count();
        let level0: Vec<u32> = (0..n).map(|q| dfa.accepting[q] as u32).collect();
        let mut levels = vec![level0];
        loop {
            let prev = levels.last().unwrap();
            let mut keys: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for q in 0..n {
                let succ: Vec<u32> = dfa
                    .alphabet
                    .symbols()
                    .map(|a| prev[dfa.step(q, a)])
                    .collect();
                let fresh = keys.len() as u32;
                let class = *keys.entry((prev[q], succ)).or_insert(fresh);
                next.push(class);
            }
            if *prev == next {
                break;
            }
            levels.push(next);
        }
        MooreTable { dfa, levels }
    }

    pub(crate) fn stable_classes(&self) -> &[u32] {
        self.levels.last().unwrap()
    }

    pub(crate) fn equivalent(&self, q1: StateId, q2: StateId) -> bool {
        let stable = self.stable_classes();
        stable[q1] == stable[q2]
    }

    pub(crate) fn distinguishing_word(&self, q1: StateId, q2: StateId) -> Option<Word> {
        if self.equivalent(q1, q2) {
            return None;
        }
        // First level at which the pair separates = length of the shortest
        // distinguishing word.
        let mut level = (0..self.levels.len())
            .find(|&i| self.levels[i][q1] != self.levels[i][q2])
            .expect("stable classes differ, so some level separates the pair");
        let mut word = Word::empty();
        let (mut p1, mut p2) = (q1, q2);
        while level > 0 {
            let prev = &self.levels[level - 1];
            let mut advanced = false;
            for a in self.dfa.alphabet.symbols() {
                let (t1, t2) = (self.dfa.step(p1, a), self.dfa.step(p2, a));
                if prev[t1] != prev[t2] {
                    word.push(a);
                    p1 = t1;
                    p2 = t2;
                    advanced = true;
                    break;
                }
            }
            debug_assert!(advanced, "a separated pair must have separated successors");
            level -= 1;
        }
        debug_assert_ne!(self.dfa.accepting[p1], self.dfa.accepting[p2]);
        Some(word)
    }
}
