//! The rewrite systems that go with the generated target languages. Each
//! builder returns the exact rule set its scenario calls for; commutation
//! rules are oriented so the smaller letter moves left, which makes the
//! systems terminating (length-preserving, lexicographically decreasing)
//! and confluent.

use std::collections::BTreeSet;

use crate::automata::{Alphabet, Symbol, Word};
use crate::rewriting::Srs;
use crate::{Error, Result};

use super::{bitadd_alphabet, union_alphabet};

/// `{u u -> u}`: the sequence `u` (often a single letter) is idempotent.
pub fn idempotent_srs(alphabet: &Alphabet, u: &Word) -> Result<Srs> {
    if u.is_empty() {
        return Err(Error::InvalidRule(
            "idempotent word must be non-empty".into(),
        ));
    }
    alphabet.check_word(u)?;
    Srs::new(alphabet.clone(), vec![(u.concat(u), u.clone())])
}

/// Commutation of independent letters: one rule `b a -> a b` per unordered
/// independent pair, oriented by the alphabet's total order (`a < b`).
pub fn independence_srs(alphabet: &Alphabet, independent: &[(Symbol, Symbol)]) -> Result<Srs> {
    let mut pairs = BTreeSet::new();
    for &(x, y) in independent {
        if !alphabet.contains(x) || !alphabet.contains(y) {
            return Err(Error::ForeignSymbol {
                id: x.index().max(y.index()),
                size: alphabet.len(),
            });
        }
        if x == y {
            return Err(Error::InvalidRule(
                "a letter cannot be independent of itself".into(),
            ));
        }
        pairs.insert((x.min(y), x.max(y)));
    }
    let rules = pairs
        .into_iter()
        .map(|(a, b)| {
            (
                Word::from_symbols(vec![b, a]),
                Word::from_symbols(vec![a, b]),
            )
        })
        .collect();
    Srs::new(alphabet.clone(), rules)
}

/// The convolution advice: private letters of the two components commute.
/// Over the union alphabet (first component's letters first) this is
/// `b a -> a b` for every private `a` of the first and private `b` of the
/// second component, i.e. first-component letters drift left.
pub fn convolution_srs(a1: &Alphabet, a2: &Alphabet) -> Result<Srs> {
    let union = union_alphabet(a1, a2);
    let mut rules = Vec::new();
    for t1 in a1.tokens() {
        if a2.symbol(t1).is_some() {
            continue;
        }
        let a = union.symbol(t1).expect("union contains both operands");
        for t2 in a2.tokens() {
            if a1.symbol(t2).is_some() {
                continue;
            }
            let b = union.symbol(t2).expect("union contains both operands");
            rules.push((
                Word::from_symbols(vec![b, a]),
                Word::from_symbols(vec![a, b]),
            ));
        }
    }
    Srs::new(union, rules)
}

/// `{a w -> w | a in Sigma}`: reading `w` forgets everything before it (a
/// synchronizing word of the minimal automaton).
pub fn synchronizing_srs(alphabet: &Alphabet, w: &Word) -> Result<Srs> {
    if w.is_empty() {
        return Err(Error::InvalidRule(
            "synchronizing word must be non-empty".into(),
        ));
    }
    alphabet.check_word(w)?;
    let rules = alphabet
        .symbols()
        .map(|a| {
            let mut lhs = Word::singleton(a);
            lhs = lhs.concat(w);
            (lhs, w.clone())
        })
        .collect();
    Srs::new(alphabet.clone(), rules)
}

/// The bit-wise addition advice: swapping the first two tracks of a triple
/// preserves the sum, so `(1,0,0) -> (0,1,0)` and `(1,0,1) -> (0,1,1)`.
pub fn bitadd_srs() -> Srs {
    let alphabet = bitadd_alphabet();
    let rule = |from: &str, to: &str| {
        (
            Word::singleton(alphabet.symbol(from).expect("bitadd token")),
            Word::singleton(alphabet.symbol(to).expect("bitadd token")),
        )
    };
    let rules = vec![rule("(1,0,0)", "(0,1,0)"), rule("(1,0,1)", "(0,1,1)")];
    Srs::new(alphabet, rules).expect("fixed rules are valid")
}

/// `{eps -> a | a in Sigma}`, the upward-closure advice. One-sided by
/// nature: it inserts letters, so it is only ever positively consistent.
pub fn upward_closure_srs(alphabet: &Alphabet) -> Srs {
    let rules = alphabet
        .symbols()
        .map(|a| (Word::empty(), Word::singleton(a)))
        .collect();
    Srs::one_sided(alphabet.clone(), rules).expect("fixed rules are valid")
}
