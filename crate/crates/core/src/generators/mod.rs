//! Seed-driven construction of the benchmark target languages and their
//! advice systems: random DFAs, idempotent-letter variants, pattern DFAs,
//! convolutions, the bit-wise addition language, partial-DFA encodings, and
//! the rewrite-system builders that go with them.
//!
//! Every generator consumes a [`SplitMix64`] stream, so identical seeds give
//! identical outputs on every platform.

mod advice_builders;
mod partial;
mod rng;

pub use advice_builders::{
    bitadd_srs, convolution_srs, idempotent_srs, independence_srs, synchronizing_srs,
    upward_closure_srs,
};
pub use partial::{encode_partial_dfa, prune_transitions, PartialDfa};
pub use rng::SplitMix64;

use std::collections::{HashMap, VecDeque};

use crate::automata::{Alphabet, Dfa, StateId, Symbol, Word};
use crate::{Error, Result};

/// A uniformly random complete DFA: every transition target drawn uniformly
/// (states in id order, symbols in alphabet order), then one acceptance coin
/// per state with probability `accept_prob`.
pub fn random_dfa(n: usize, alphabet: &Alphabet, accept_prob: f64, seed: u64) -> Result<Dfa> {
    if n == 0 {
        return Err(Error::InvalidInput("a DFA needs at least one state".into()));
    }
    if !(0.0..=1.0).contains(&accept_prob) {
        return Err(Error::InvalidInput(format!(
            "accept probability {accept_prob} outside [0, 1]"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let delta: Vec<Vec<StateId>> = (0..n)
        .map(|_| {
            alphabet
                .symbols()
                .map(|_| rng.next_below(n as u64) as usize)
                .collect()
        })
        .collect();
    let accepting: Vec<bool> = (0..n).map(|_| rng.next_f64() < accept_prob).collect();
    Dfa::new(alphabet.clone(), 0, accepting, delta)
}

/// Patches the automaton so that the letter `a` becomes idempotent: every
/// state in the image of the `a`-transition gets an `a`-self-loop, which
/// forces `delta(q, aa) = delta(q, a)` everywhere. The perturbation is
/// minimal and deterministic; no other transition changes.
pub fn make_letter_idempotent(d: &Dfa, a: Symbol) -> Result<Dfa> {
    if !d.alphabet().contains(a) {
        return Err(Error::ForeignSymbol {
            id: a.index(),
            size: d.alphabet().len(),
        });
    }
    let n = d.state_count();
    let mut delta: Vec<Vec<StateId>> = (0..n)
        .map(|q| d.alphabet().symbols().map(|s| d.step(q, s)).collect())
        .collect();
    for q in 0..n {
        let image = d.step(q, a);
        delta[image][a.index()] = image;
    }
    let accepting = (0..n).map(|q| d.is_accepting(q)).collect();
    Dfa::new(d.alphabet().clone(), d.initial(), accepting, delta)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PatternMode {
    /// Accept words containing at least one of the patterns as an infix.
    Any,
    /// Accept words containing all of the patterns as infixes.
    All,
}

/// The minimal DFA for infix-pattern matching. `Any` builds an Aho-Corasick
/// failure automaton over the patterns; `All` takes the product of the
/// single-pattern automata (tracking which patterns have been seen). Both
/// are minimized so state counts are canonical.
pub fn pattern_dfa(patterns: &[Word], mode: PatternMode, alphabet: &Alphabet) -> Result<Dfa> {
    if patterns.is_empty() {
        return Err(Error::InvalidInput("need at least one pattern".into()));
    }
    for p in patterns {
        alphabet.check_word(p)?;
        if p.is_empty() {
            return Err(Error::InvalidInput("patterns must be non-empty".into()));
        }
    }
    let dfa = match mode {
        PatternMode::Any => aho_corasick_dfa(patterns, alphabet),
        PatternMode::All => {
            let singles: Vec<Dfa> = patterns
                .iter()
                .map(|p| aho_corasick_dfa(std::slice::from_ref(p), alphabet))
                .collect();
            let mut acc = singles[0].clone();
            for next in &singles[1..] {
                acc = product_and(&acc, next);
            }
            acc
        }
    };
    Ok(dfa.minimize())
}

/// Trie + failure links, with matches collapsed into an accepting sink.
fn aho_corasick_dfa(patterns: &[Word], alphabet: &Alphabet) -> Dfa {
    let sigma = alphabet.len();
    // Trie construction; node 0 is the root.
    let mut children: Vec<Vec<Option<usize>>> = vec![vec![None; sigma]];
    let mut terminal = vec![false];
    for p in patterns {
        let mut node = 0usize;
        for &s in p.symbols() {
            node = match children[node][s.index()] {
                Some(next) => next,
                None => {
                    children.push(vec![None; sigma]);
                    terminal.push(false);
                    let fresh = children.len() - 1;
                    children[node][s.index()] = Some(fresh);
                    fresh
                }
            };
        }
        terminal[node] = true;
    }
    // Breadth-first failure computation, completing the goto function as we
    // go (the standard construction).
    let nodes = children.len();
    let mut fail = vec![0usize; nodes];
    let mut goto: Vec<Vec<usize>> = vec![vec![0; sigma]; nodes];
    let mut queue = VecDeque::new();
    for a in 0..sigma {
        match children[0][a] {
            Some(c) => {
                fail[c] = 0;
                goto[0][a] = c;
                queue.push_back(c);
            }
            None => goto[0][a] = 0,
        }
    }
    while let Some(node) = queue.pop_front() {
        terminal[node] = terminal[node] || terminal[fail[node]];
        for a in 0..sigma {
            match children[node][a] {
                Some(c) => {
                    fail[c] = goto[fail[node]][a];
                    goto[node][a] = c;
                    queue.push_back(c);
                }
                None => goto[node][a] = goto[fail[node]][a],
            }
        }
    }
    // Matches are permanent: reroute every accepting node into a sink.
    let sink = nodes;
    let mut delta: Vec<Vec<StateId>> = Vec::with_capacity(nodes + 1);
    for node in 0..nodes {
        if terminal[node] {
            delta.push(vec![sink; sigma]);
        } else {
            delta.push((0..sigma).map(|a| goto[node][a]).collect());
        }
    }
    delta.push(vec![sink; sigma]);
    let mut accepting = terminal;
    accepting.push(true);
    // Terminal nodes themselves count as "pattern seen".
    Dfa::new(alphabet.clone(), 0, accepting, delta).expect("construction is well-formed")
}

/// Product automaton accepting the intersection; both inputs share one
/// alphabet.
fn product_and(d1: &Dfa, d2: &Dfa) -> Dfa {
    let n2 = d2.state_count();
    let idx = |p: StateId, q: StateId| p * n2 + q;
    let n = d1.state_count() * n2;
    let mut accepting = vec![false; n];
    let mut delta = vec![Vec::new(); n];
    for p in 0..d1.state_count() {
        for q in 0..n2 {
            accepting[idx(p, q)] = d1.is_accepting(p) && d2.is_accepting(q);
            delta[idx(p, q)] = d1
                .alphabet()
                .symbols()
                .map(|a| idx(d1.step(p, a), d2.step(q, a)))
                .collect();
        }
    }
    Dfa::new(
        d1.alphabet().clone(),
        idx(d1.initial(), d2.initial()),
        accepting,
        delta,
    )
    .expect("product is well-formed")
}

/// The union alphabet for a convolution: all of `a1`'s tokens in their
/// order, then `a2`'s remaining tokens in theirs. With disjoint operands
/// this puts every first-component letter before every second-component
/// letter, which is the orientation the convolution advice relies on.
pub fn union_alphabet(a1: &Alphabet, a2: &Alphabet) -> Alphabet {
    let mut tokens: Vec<String> = a1.tokens().to_vec();
    for t in a2.tokens() {
        if a1.symbol(t).is_none() {
            tokens.push(t.clone());
        }
    }
    Alphabet::new(tokens).expect("operand alphabets are valid")
}

/// The convolution of two regular languages: a word over the union alphabet
/// is accepted iff its projection onto each component alphabet is accepted
/// by that component. Shared letters advance both sides, private letters
/// one. The result is minimized.
pub fn convolution(d1: &Dfa, d2: &Dfa) -> Dfa {
    let alphabet = union_alphabet(d1.alphabet(), d2.alphabet());
    let n2 = d2.state_count();
    let idx = |p: StateId, q: StateId| p * n2 + q;
    let n = d1.state_count() * n2;
    let sym1: Vec<Option<Symbol>> = alphabet
        .tokens()
        .iter()
        .map(|t| d1.alphabet().symbol(t))
        .collect();
    let sym2: Vec<Option<Symbol>> = alphabet
        .tokens()
        .iter()
        .map(|t| d2.alphabet().symbol(t))
        .collect();
    let mut accepting = vec![false; n];
    let mut delta = vec![Vec::new(); n];
    for p in 0..d1.state_count() {
        for q in 0..n2 {
            accepting[idx(p, q)] = d1.is_accepting(p) && d2.is_accepting(q);
            delta[idx(p, q)] = alphabet
                .symbols()
                .map(|a| {
                    let tp = match sym1[a.index()] {
                        Some(s) => d1.step(p, s),
                        None => p,
                    };
                    let tq = match sym2[a.index()] {
                        Some(s) => d2.step(q, s),
                        None => q,
                    };
                    idx(tp, tq)
                })
                .collect();
        }
    }
    Dfa::new(alphabet, idx(d1.initial(), d2.initial()), accepting, delta)
        .expect("product is well-formed")
        .minimize()
}

/// The alphabet of bit-triples `(a,b,c)` in lexicographic bit order.
pub fn bitadd_alphabet() -> Alphabet {
    let mut tokens = Vec::with_capacity(8);
    for a in 0..2u8 {
        for b in 0..2u8 {
            for c in 0..2u8 {
                tokens.push(format!("({a},{b},{c})"));
            }
        }
    }
    Alphabet::new(tokens).expect("eight distinct tokens")
}

/// The 3-state carry automaton for least-significant-bit-first addition:
/// a word of bit-triples is accepted iff the first two tracks sum to the
/// third. States: carry 0 (initial, accepting), carry 1, reject sink.
pub fn bitadd_dfa() -> Dfa {
    let alphabet = bitadd_alphabet();
    let sink = 2usize;
    let mut delta = vec![Vec::with_capacity(8), Vec::with_capacity(8), vec![sink; 8]];
    for (carry, row) in delta.iter_mut().enumerate().take(2) {
        for a in 0..2usize {
            for b in 0..2usize {
                for c in 0..2usize {
                    let sum = a + b + carry;
                    let target = if sum % 2 == c { sum / 2 } else { sink };
                    row.push(target);
                }
            }
        }
    }
    Dfa::new(alphabet, 0, vec![true, false, false], delta).expect("construction is well-formed")
}

/// BFS access words over the defined part of a partial DFA, shortest first,
/// ties by alphabet order; the prefix-closed selector set of the encoding.
pub(crate) fn partial_access_words(b: &PartialDfa) -> HashMap<StateId, Word> {
    let mut access = HashMap::new();
    let mut queue = VecDeque::new();
    access.insert(b.initial(), Word::empty());
    queue.push_back(b.initial());
    while let Some(q) = queue.pop_front() {
        let base = access[&q].clone();
        for a in b.alphabet().symbols() {
            if let Some(t) = b.step(q, a) {
                access.entry(t).or_insert_with(|| {
                    queue.push_back(t);
                    base.extended(a)
                });
            }
        }
    }
    access
}
