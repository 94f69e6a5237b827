use std::collections::HashMap;

use super::alphabet::{Alphabet, StateId, Symbol};
use super::regex::RegexAst;

/// A nondeterministic finite automaton with epsilon moves. Only used as an
/// evaluation vehicle for regular-expression languages, so it stays minimal:
/// adjacency lists and nothing else.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Option<Symbol>, StateId)>>,
}

impl Nfa {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn edges_from(&self, q: StateId) -> &[(Option<Symbol>, StateId)] {
        &self.edges[q]
    }

    /// Thompson-style construction; the resulting NFA recognizes exactly the
    /// language of `e` under the usual recursive semantics.
    pub fn from_regex(e: &RegexAst, alphabet: &Alphabet) -> Nfa {
        let mut builder = Builder::default();
        let frag = builder.build(e);
        Nfa {
            alphabet: alphabet.clone(),
            initial: vec![frag.start],
            accepting: {
                let mut acc = vec![false; builder.edges.len()];
                acc[frag.accept] = true;
                acc
            },
            edges: builder.edges,
        }
    }

    pub fn accepts_empty_word(&self) -> bool {
        let mut runner = SubsetRunner::new(self);
        let start = runner.start();
        runner.is_accepting(start)
    }
}

struct Frag {
    start: StateId,
    accept: StateId,
}

#[derive(Default)]
struct Builder {
    edges: Vec<Vec<(Option<Symbol>, StateId)>>,
}

impl Builder {
    fn fresh(&mut self) -> StateId {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    fn link(&mut self, from: StateId, label: Option<Symbol>, to: StateId) {
        self.edges[from].push((label, to));
    }

    fn build(&mut self, e: &RegexAst) -> Frag {
        match e {
            RegexAst::EmptySet => {
                let start = self.fresh();
                let accept = self.fresh();
                Frag { start, accept }
            }
            RegexAst::Epsilon => {
                let start = self.fresh();
                let accept = self.fresh();
                self.link(start, None, accept);
                Frag { start, accept }
            }
            RegexAst::Symbol(s) => {
                let start = self.fresh();
                let accept = self.fresh();
                self.link(start, Some(*s), accept);
                Frag { start, accept }
            }
            RegexAst::Concat(a, b) => {
                let fa = self.build(a);
                let fb = self.build(b);
                self.link(fa.accept, None, fb.start);
                Frag {
                    start: fa.start,
                    accept: fb.accept,
                }
            }
            RegexAst::Alt(a, b) => {
                let fa = self.build(a);
                let fb = self.build(b);
                let start = self.fresh();
                let accept = self.fresh();
                self.link(start, None, fa.start);
                self.link(start, None, fb.start);
                self.link(fa.accept, None, accept);
                self.link(fb.accept, None, accept);
                Frag { start, accept }
            }
            RegexAst::Star(a) => {
                let fa = self.build(a);
                let start = self.fresh();
                let accept = self.fresh();
                self.link(start, None, fa.start);
                self.link(start, None, accept);
                self.link(fa.accept, None, fa.start);
                self.link(fa.accept, None, accept);
                Frag { start, accept }
            }
        }
    }
}

/// On-the-fly subset construction over an [`Nfa`]. Subsets are epsilon
/// closed, interned, and memoized per (subset, symbol) step, which keeps
/// product searches deterministic and cheap to repeat.
pub(crate) struct SubsetRunner<'a> {
    nfa: &'a Nfa,
    ids: HashMap<Vec<StateId>, usize>,
    subsets: Vec<Vec<StateId>>,
    accepting: Vec<bool>,
    steps: Vec<HashMap<Symbol, usize>>,
}

impl<'a> SubsetRunner<'a> {
    pub(crate) fn new(nfa: &'a Nfa) -> Self {
        SubsetRunner {
            nfa,
            ids: HashMap::new(),
            subsets: Vec::new(),
            accepting: Vec::new(),
            steps: Vec::new(),
        }
    }

    fn closure(&self, seed: &[StateId]) -> Vec<StateId> {
        let mut seen = vec![false; self.nfa.state_count()];
        let mut stack: Vec<StateId> = Vec::new();
        for &q in seed {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &(label, t) in self.nfa.edges_from(q) {
                if label.is_none() && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..self.nfa.state_count()).filter(|&q| seen[q]).collect()
    }

    fn intern(&mut self, subset: Vec<StateId>) -> usize {
        if let Some(&id) = self.ids.get(&subset) {
            return id;
        }
        let id = self.subsets.len();
        let acc = subset.iter().any(|&q| self.nfa.is_accepting(q));
        self.ids.insert(subset.clone(), id);
        self.subsets.push(subset);
        self.accepting.push(acc);
        self.steps.push(HashMap::new());
        id
    }

    pub(crate) fn start(&mut self) -> usize {
        let closed = self.closure(self.nfa.initial_states());
        self.intern(closed)
    }

    pub(crate) fn step(&mut self, subset_id: usize, a: Symbol) -> usize {
        if let Some(&next) = self.steps[subset_id].get(&a) {
            return next;
        }
        let mut moved = Vec::new();
        for &q in &self.subsets[subset_id] {
            for &(label, t) in self.nfa.edges_from(q) {
                if label == Some(a) {
                    moved.push(t);
                }
            }
        }
        let closed = self.closure(&moved);
        let next = self.intern(closed);
        self.steps[subset_id].insert(a, next);
        next
    }

    pub(crate) fn is_accepting(&self, subset_id: usize) -> bool {
        self.accepting[subset_id]
    }

    /// Runs a full word from the start subset.
    pub(crate) fn accepts(&mut self, w: &super::alphabet::Word) -> bool {
        let mut id = self.start();
        for &a in w.symbols() {
            id = self.step(id, a);
        }
        self.is_accepting(id)
    }
}
