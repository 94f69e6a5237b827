//! Brute-force reference implementations shared by the integration suites.
//! Everything here is deliberately naive: plain enumeration and definition
//! chasing, independent of the library's algorithmic paths, so it can serve
//! as an oracle for them.

#![allow(dead_code)]

use srslearn::automata::{Alphabet, Dfa, StateId, Word};
use srslearn::generators::SplitMix64;
use srslearn::rewriting::{Csrs, Srs};

/// All words up to `max_len`, shortest first, alphabet order inside a
/// length class.
pub fn enumerate_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in alphabet.symbols() {
                next.push(w.extended(s));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// First word (in length-lex order) reaching `q`, scanning up to `max_len`.
pub fn brute_shortest_access(d: &Dfa, q: StateId, max_len: usize) -> Option<Word> {
    enumerate_words(d.alphabet(), max_len)
        .into_iter()
        .find(|w| d.run(w).unwrap() == q)
}

/// First word on which exactly one of the two states accepts.
pub fn brute_distinguishing(d: &Dfa, q1: StateId, q2: StateId, max_len: usize) -> Option<Word> {
    enumerate_words(d.alphabet(), max_len)
        .into_iter()
        .find(|w| {
            let a1 = d.is_accepting(d.run_from(q1, w).unwrap());
            let a2 = d.is_accepting(d.run_from(q2, w).unwrap());
            a1 != a2
        })
}

/// First word in the symmetric difference of the two languages.
pub fn brute_counterexample(d1: &Dfa, d2: &Dfa, max_len: usize) -> Option<Word> {
    enumerate_words(d1.alphabet(), max_len)
        .into_iter()
        .find(|w| d1.accepts(w).unwrap() != d2.accepts(w).unwrap())
}

/// Is `L_{s1} (restricted to words up to max_len) a subset of L_{s2}`?
pub fn brute_subsumes(d: &Dfa, s1: StateId, s2: StateId, max_len: usize) -> bool {
    enumerate_words(d.alphabet(), max_len).into_iter().all(|w| {
        let in1 = d.is_accepting(d.run_from(s1, &w).unwrap());
        let in2 = d.is_accepting(d.run_from(s2, &w).unwrap());
        !in1 || in2
    })
}

/// First single-step pair (s, t) with `|s| <= max_len` on which the
/// automaton's answers differ; `None` means single-step consistent at this
/// bound.
pub fn brute_consistency_violation(srs: &Srs, d: &Dfa, max_len: usize) -> Option<(Word, Word)> {
    for s in enumerate_words(d.alphabet(), max_len) {
        let s_in = d.accepts(&s).unwrap();
        for t in srs.single_step(&s).unwrap() {
            if d.accepts(&t).unwrap() != s_in {
                return Some((s, t));
            }
        }
    }
    None
}

/// One-sided variant: positive polarity means membership must be preserved
/// along rewriting, negative means non-membership must be.
pub fn brute_one_sided_violation(
    srs: &Srs,
    d: &Dfa,
    positive: bool,
    max_len: usize,
) -> Option<(Word, Word)> {
    for s in enumerate_words(d.alphabet(), max_len) {
        let s_in = d.accepts(&s).unwrap();
        for t in srs.single_step(&s).unwrap() {
            let t_in = d.accepts(&t).unwrap();
            let violated = if positive {
                s_in && !t_in
            } else {
                !s_in && t_in
            };
            if violated {
                return Some((s, t));
            }
        }
    }
    None
}

/// Controlled variant of [`brute_consistency_violation`].
pub fn brute_csrs_consistency_violation(
    csrs: &Csrs,
    d: &Dfa,
    max_len: usize,
) -> Option<(Word, Word)> {
    for s in enumerate_words(d.alphabet(), max_len) {
        let s_in = d.accepts(&s).unwrap();
        for t in csrs.single_step(&s).unwrap() {
            if d.accepts(&t).unwrap() != s_in {
                return Some((s, t));
            }
        }
    }
    None
}

/// Reduces `w` picking a uniformly random applicable (position, rule) at
/// every step; for convergent systems this must land on the same normal
/// form as the fixed strategy.
pub fn random_strategy_normal_form(srs: &Srs, w: &Word, rng: &mut SplitMix64) -> Word {
    let mut cur = w.clone();
    loop {
        let matches = srs.matches(&cur);
        if matches.is_empty() {
            return cur;
        }
        let (pos, rule) = matches[rng.next_below(matches.len() as u64) as usize];
        cur = srs.apply(&cur, pos, rule);
    }
}

pub fn random_word(alphabet: &Alphabet, len: usize, rng: &mut SplitMix64) -> Word {
    let mut w = Word::empty();
    for _ in 0..len {
        w.push(srslearn::automata::Symbol(
            rng.next_below(alphabet.len() as u64) as u32,
        ));
    }
    w
}

/// A random plain rewriting system with `rules` rules whose sides have
/// length at most `max_side` (left side non-empty, sides distinct).
pub fn random_srs(alphabet: &Alphabet, rules: usize, max_side: usize, rng: &mut SplitMix64) -> Srs {
    let mut out = Vec::new();
    while out.len() < rules {
        let llen = 1 + rng.next_below(max_side as u64) as usize;
        let rlen = rng.next_below((max_side + 1) as u64) as usize;
        let lhs = random_word(alphabet, llen, rng);
        let rhs = random_word(alphabet, rlen, rng);
        if lhs != rhs {
            out.push((lhs, rhs));
        }
    }
    Srs::new(alphabet.clone(), out).unwrap()
}

/// Convenience constructors used across the suites.
pub fn alphabet(tokens: &[&str]) -> Alphabet {
    Alphabet::new(tokens.to_vec()).unwrap()
}

pub fn word(al: &Alphabet, text: &str) -> Word {
    al.parse_word(text).unwrap()
}

pub fn parity_dfa() -> Dfa {
    let al = alphabet(&["a", "b"]);
    Dfa::new(al, 0, vec![true, false], vec![vec![1, 0], vec![0, 1]]).unwrap()
}

pub fn accept_all(al: &Alphabet) -> Dfa {
    let delta = vec![al.symbols().map(|_| 0).collect()];
    Dfa::new(al.clone(), 0, vec![true], delta).unwrap()
}
