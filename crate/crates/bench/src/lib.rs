//! Shared fixtures for the criterion benchmarks: deterministic targets and
//! advice systems at the sizes the harness uses.

use srslearn::automata::{Alphabet, Dfa, Word};
use srslearn::generators::{make_letter_idempotent, random_dfa, SplitMix64};
use srslearn::rewriting::Srs;

pub fn four_letters() -> Alphabet {
    Alphabet::new(["a", "b", "c", "d"]).unwrap()
}

pub fn idempotent_target(states: usize, seed: u64) -> Dfa {
    let al = four_letters();
    let letter = al.symbols().next().unwrap();
    let base = random_dfa(states, &al, 0.1, seed).unwrap();
    make_letter_idempotent(&base, letter).unwrap()
}

pub fn idempotent_advice() -> Srs {
    let al = four_letters();
    srslearn::generators::idempotent_srs(&al, &al.parse_word("a").unwrap()).unwrap()
}

pub fn random_words(alphabet: &Alphabet, count: usize, len: usize, seed: u64) -> Vec<Word> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            Word::from_symbols(
                (0..len)
                    .map(|_| {
                        srslearn::automata::Symbol(rng.next_below(alphabet.len() as u64) as u32)
                    })
                    .collect(),
            )
        })
        .collect()
}
