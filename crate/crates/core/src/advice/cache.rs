use std::collections::{HashMap, HashSet};

use crate::automata::Word;

/// The inference store for two-sided advice: answers keyed by the normal
/// form of the queried word. Any two words with the same normal form share a
/// slot, which is exactly what consistency licenses.
#[derive(Clone, Debug)]
pub struct NormalFormCache<V = bool> {
    map: HashMap<Word, V>,
    hits: u64,
    misses: u64,
}

impl<V: Clone> Default for NormalFormCache<V> {
    fn default() -> Self {
        NormalFormCache {
            map: HashMap::new(),
            hits: 0,
            misses: 0,
        }
    }
}

impl<V: Clone> NormalFormCache<V> {
    pub fn lookup(&mut self, key: &Word) -> Option<V> {
        match self.map.get(key) {
            Some(v) => {
                self.hits += 1;
                Some(v.clone())
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    pub fn insert(&mut self, key: Word, answer: V) {
        self.map.insert(key, answer);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }
}

/// Known-positive and known-negative words, for one-sided inference. The
/// two sets stay disjoint because each word gets exactly one oracle answer.
#[derive(Clone, Debug, Default)]
pub struct SignedCache {
    positive: Vec<Word>,
    negative: Vec<Word>,
    recorded: HashSet<Word>,
}

impl SignedCache {
    pub fn record(&mut self, w: Word, answer: bool) {
        if !self.recorded.insert(w.clone()) {
            return;
        }
        if answer {
            self.positive.push(w);
        } else {
            self.negative.push(w);
        }
    }

    pub fn positive(&self) -> &[Word] {
        &self.positive
    }

    pub fn negative(&self) -> &[Word] {
        &self.negative
    }
}

/// Membership inference for upward-closed targets (the `eps -> a` advice):
/// `w` is in the language if some known-positive word is a subsequence of
/// it, out of the language if it is a subsequence of some known-negative
/// word, and unknown otherwise. Linear two-pointer scans per cached word.
pub fn upward_closed_infer(cache: &SignedCache, w: &Word) -> Option<bool> {
    if cache.positive.iter().any(|p| p.is_subsequence_of(w)) {
        return Some(true);
    }
    if cache.negative.iter().any(|n| w.is_subsequence_of(n)) {
        return Some(false);
    }
    None
}
