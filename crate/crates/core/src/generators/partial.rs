use std::collections::HashSet;

use crate::automata::{Alphabet, Dfa, RegexAst, StateId, Symbol, Word};
use crate::rewriting::{ControlledRule, Csrs};
use crate::{Error, Result};

use super::partial_access_words;
use super::rng::SplitMix64;

/// A DFA with a partial transition map: the partial specification a
/// controlled rewriting system can encode.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialDfa {
    alphabet: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    delta: Vec<Vec<Option<StateId>>>,
}

impl PartialDfa {
    pub fn new(
        alphabet: Alphabet,
        initial: StateId,
        accepting: Vec<bool>,
        delta: Vec<Vec<Option<StateId>>>,
    ) -> Result<Self> {
        let n = accepting.len();
        if n == 0 {
            return Err(Error::InvalidInput("need at least one state".into()));
        }
        if initial >= n || delta.len() != n {
            return Err(Error::InvalidInput("state ids out of range".into()));
        }
        for row in &delta {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidInput(
                    "every state needs a slot per symbol".into(),
                ));
            }
            if row.iter().flatten().any(|&t| t >= n) {
                return Err(Error::InvalidInput("transition target out of range".into()));
            }
        }
        Ok(PartialDfa {
            alphabet,
            initial,
            accepting,
            delta,
        })
    }

    /// A total automaton viewed as a partial one.
    pub fn from_dfa(d: &Dfa) -> Self {
        PartialDfa {
            alphabet: d.alphabet().clone(),
            initial: d.initial(),
            accepting: (0..d.state_count()).map(|q| d.is_accepting(q)).collect(),
            delta: (0..d.state_count())
                .map(|q| d.alphabet().symbols().map(|a| Some(d.step(q, a))).collect())
                .collect(),
        }
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

    pub fn step(&self, q: StateId, a: Symbol) -> Option<StateId> {
        self.delta[q][a.index()]
    }

    pub fn defined_transitions(&self) -> impl Iterator<Item = (StateId, Symbol, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(move |(q, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, t)| t.map(|target| (q, Symbol(a as u32), target)))
        })
    }

    /// The state after running `w` over defined transitions only.
    pub fn run(&self, w: &Word) -> Result<Option<StateId>> {
        self.alphabet.check_word(w)?;
        let mut q = self.initial;
        for &a in w.symbols() {
            match self.step(q, a) {
                Some(t) => q = t,
                None => return Ok(None),
            }
        }
        Ok(Some(q))
    }

    /// Is the automaton total after all?
    pub fn is_total(&self) -> bool {
        self.delta.iter().all(|row| row.iter().all(Option::is_some))
    }
}

/// Keeps a uniformly chosen set of `keep` transitions of `d`. Sampling is
/// restricted to transitions whose source is already reachable through kept
/// ones, which forces the kept set to span every touched state from the
/// initial state; that is exactly the precondition of the rewriting
/// encoding. Deterministic under `seed`.
pub fn prune_transitions(d: &Dfa, keep: usize, seed: u64) -> Result<PartialDfa> {
    if keep == 0 {
        return Err(Error::InvalidInput(
            "must keep at least one transition".into(),
        ));
    }
    let n = d.state_count();
    let mut rng = SplitMix64::new(seed);
    let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; d.alphabet().len()]; n];
    let mut reachable: HashSet<StateId> = HashSet::from([d.initial()]);
    let mut kept = 0usize;
    while kept < keep {
        // All not-yet-kept transitions with a reachable source, in
        // (state, symbol) order for determinism.
        let mut candidates = Vec::new();
        for (q, row) in delta.iter().enumerate() {
            if !reachable.contains(&q) {
                continue;
            }
            for a in d.alphabet().symbols() {
                if row[a.index()].is_none() {
                    candidates.push((q, a));
                }
            }
        }
        if candidates.is_empty() {
            return Err(Error::InvalidInput(format!(
                "cannot keep {keep} transitions: only {kept} are reachable from the initial state"
            )));
        }
        let (q, a) = candidates[rng.next_below(candidates.len() as u64) as usize];
        let target = d.step(q, a);
        delta[q][a.index()] = Some(target);
        reachable.insert(target);
        kept += 1;
    }
    let accepting = (0..n).map(|q| d.is_accepting(q)).collect();
    PartialDfa::new(d.alphabet().clone(), d.initial(), accepting, delta)
}

/// Encodes a partial DFA as a controlled rewriting system over its own
/// alphabet: with `S` the BFS access words of the reachable states, every
/// defined transition `(q, a)` whose extended access word `u_q a` is not
/// itself in `S` yields the start-anchored rule `(u_q a, u', {eps}, sigma*)`
/// where `u'` is the access word of the target. Tree transitions (those
/// with `u_q a` in `S`) would rewrite a word to itself and are omitted, so
/// the rule count is the number of defined transitions minus `|S| - 1`.
///
/// For every word with a defined run, exhaustive rewriting reaches the
/// access word of the state the run ends in.
pub fn encode_partial_dfa(b: &PartialDfa) -> Result<Csrs> {
    let access = partial_access_words(b);
    for (q, _, t) in b.defined_transitions() {
        if !access.contains_key(&q) || !access.contains_key(&t) {
            return Err(Error::InvalidInput(format!(
                "transition at state {q} is not reachable over defined transitions"
            )));
        }
    }
    let access_set: HashSet<&Word> = access.values().collect();
    let star = RegexAst::sigma_star(b.alphabet());
    let mut rules = Vec::new();
    // Deterministic rule order: states in id order, symbols in order.
    for q in 0..b.state_count() {
        let Some(u) = access.get(&q) else { continue };
        for a in b.alphabet().symbols() {
            let Some(t) = b.step(q, a) else { continue };
            let lhs = u.extended(a);
            if access_set.contains(&lhs) {
                continue;
            }
            let rhs = access[&t].clone();
            rules.push(ControlledRule::new(
                lhs,
                rhs,
                RegexAst::Epsilon,
                star.clone(),
            ));
        }
    }
    Csrs::new(b.alphabet().clone(), rules)
}
