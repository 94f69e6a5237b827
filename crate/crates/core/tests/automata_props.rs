//! Property checks of the automata operations against brute-force
//! enumeration, at the small scales where enumeration is exact.

mod common;

use common::{
    alphabet, brute_counterexample, brute_distinguishing, brute_shortest_access, enumerate_words,
};
use srslearn::automata::{
    distinguished_within, shortest_counterexample, states_reachable_via, subsumption_relation,
    subsumption_witness, RegexAst,
};
use srslearn::generators::{random_dfa, SplitMix64};

#[test]
fn minimize_preserves_the_language_exhaustively() {
    let al = alphabet(&["a", "b"]);
    for seed in 0..40u64 {
        let d = random_dfa(8, &al, 0.3, seed).unwrap();
        let m = d.minimize();
        for w in enumerate_words(&al, 2 * d.state_count()) {
            assert_eq!(
                d.accepts(&w).unwrap(),
                m.accepts(&w).unwrap(),
                "seed {seed}"
            );
        }
        // Idempotent up to equality thanks to canonical numbering.
        assert_eq!(m, m.minimize(), "seed {seed}");
        // No two distinct states of the result are equivalent.
        for q1 in 0..m.state_count() {
            for q2 in (q1 + 1)..m.state_count() {
                assert!(m.distinguishing_word(q1, q2).is_some(), "seed {seed}");
            }
        }
    }
}

#[test]
fn access_words_match_brute_force() {
    let al = alphabet(&["a", "b", "c"]);
    for seed in 100..120u64 {
        let d = random_dfa(6, &al, 0.3, seed).unwrap();
        for q in 0..d.state_count() {
            let brute = brute_shortest_access(&d, q, d.state_count());
            assert_eq!(d.shortest_access_word(q), brute, "seed {seed} state {q}");
        }
    }
}

#[test]
fn distinguishing_words_match_brute_force() {
    let al = alphabet(&["a", "b"]);
    for seed in 200..230u64 {
        let d = random_dfa(7, &al, 0.3, seed).unwrap();
        for q1 in 0..d.state_count() {
            for q2 in 0..d.state_count() {
                // The Moore bound: equivalent iff no word up to |Q| works.
                let brute = brute_distinguishing(&d, q1, q2, d.state_count());
                assert_eq!(
                    d.distinguishing_word(q1, q2),
                    brute,
                    "seed {seed} states {q1},{q2}"
                );
            }
        }
    }
}

#[test]
fn counterexamples_match_brute_force() {
    let al = alphabet(&["a", "b"]);
    for seed in 300..330u64 {
        let d1 = random_dfa(4, &al, 0.3, seed).unwrap();
        let d2 = random_dfa(4, &al, 0.3, seed + 1000).unwrap();
        let got = shortest_counterexample(&d1, &d2).unwrap();
        // Words up to the product diameter are enough.
        let brute = brute_counterexample(&d1, &d2, d1.state_count() * d2.state_count());
        assert_eq!(got, brute, "seed {seed}");
    }
}

#[test]
fn equivalence_iff_identical_minimizations() {
    let al = alphabet(&["a", "b"]);
    for seed in 400..440u64 {
        let d1 = random_dfa(6, &al, 0.4, seed).unwrap();
        let d2 = random_dfa(6, &al, 0.4, seed + 7).unwrap();
        let equivalent = shortest_counterexample(&d1, &d2).unwrap().is_none();
        assert_eq!(equivalent, d1.minimize() == d2.minimize(), "seed {seed}");
        assert_eq!(shortest_counterexample(&d1, &d1.clone()).unwrap(), None);
    }
}

#[test]
fn subsumption_is_a_preorder_and_matches_brute_force() {
    let al = alphabet(&["a", "b"]);
    for seed in 500..520u64 {
        // 4 states keep the sound witness bound |Q|^2 = 16 enumerable.
        let d = random_dfa(4, &al, 0.3, seed).unwrap();
        let rel = subsumption_relation(&d);
        let n = d.state_count();
        // Reflexive and transitive.
        for q in 0..n {
            assert!(rel.contains(&(q, q)), "seed {seed}");
        }
        for &(a, b) in &rel {
            for c in 0..n {
                if rel.contains(&(b, c)) {
                    assert!(rel.contains(&(a, c)), "seed {seed}: transitivity");
                }
            }
        }
        // Agreement with enumeration up to |Q|^2 (the product-diameter
        // bound: a shortest inclusion witness visits each state pair at
        // most once).
        let words = enumerate_words(&al, n * n);
        for s1 in 0..n {
            for s2 in 0..n {
                let brute = words.iter().all(|w| {
                    !d.is_accepting(d.run_from(s1, w).unwrap())
                        || d.is_accepting(d.run_from(s2, w).unwrap())
                });
                assert_eq!(rel.contains(&(s1, s2)), brute, "seed {seed} ({s1},{s2})");
                match subsumption_witness(&d, s1, s2) {
                    Some(w) => {
                        assert!(!brute);
                        assert!(d.is_accepting(d.run_from(s1, &w).unwrap()));
                        assert!(!d.is_accepting(d.run_from(s2, &w).unwrap()));
                    }
                    None => assert!(brute),
                }
            }
        }
    }
}

#[test]
fn reachable_via_sigma_star_is_the_reachable_set() {
    let al = alphabet(&["a", "b", "c"]);
    for seed in 600..615u64 {
        let d = random_dfa(9, &al, 0.3, seed).unwrap();
        let via = states_reachable_via(&d, &RegexAst::sigma_star(&al)).unwrap();
        let reachable: std::collections::BTreeSet<_> = d.reachable_states().into_iter().collect();
        assert_eq!(via, reachable, "seed {seed}");
    }
}

#[test]
fn reachable_via_matches_enumeration_for_small_regexes() {
    let al = alphabet(&["a", "b"]);
    let a = RegexAst::symbol(al.symbol("a").unwrap());
    let b = RegexAst::symbol(al.symbol("b").unwrap());
    let cases = vec![
        RegexAst::concat(a.clone(), RegexAst::star(b.clone())),
        RegexAst::alt(RegexAst::Epsilon, RegexAst::concat(b.clone(), a.clone())),
        RegexAst::star(RegexAst::concat(a.clone(), b.clone())),
    ];
    for seed in 700..710u64 {
        let d = random_dfa(5, &al, 0.3, seed).unwrap();
        for e in &cases {
            let got = states_reachable_via(&d, e).unwrap();
            // Brute force: evaluate e on all words up to a safe bound via
            // the library NFA (already cross-checked against recursive
            // semantics in unit tests) and collect run targets.
            let mut expected = std::collections::BTreeSet::new();
            let nfa = srslearn::automata::Nfa::from_regex(e, &al);
            for w in enumerate_words(&al, 12) {
                if nfa_accepts(&nfa, &w) {
                    expected.insert(d.run(&w).unwrap());
                }
            }
            assert_eq!(got, expected, "seed {seed} regex {e:?}");
        }
    }
}

/// Tiny NFA evaluator used only by this test, independent of the library's
/// subset runner: explicit state-set stepping with epsilon closure.
fn nfa_accepts(nfa: &srslearn::automata::Nfa, w: &srslearn::automata::Word) -> bool {
    use std::collections::BTreeSet;
    let closure = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut stack: Vec<usize> = out.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &(label, t) in nfa.edges_from(q) {
                if label.is_none() && out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    };
    let mut cur = closure(&nfa.initial_states().iter().copied().collect());
    for &a in w.symbols() {
        let mut next = BTreeSet::new();
        for &q in &cur {
            for &(label, t) in nfa.edges_from(q) {
                if label == Some(a) {
                    next.insert(t);
                }
            }
        }
        cur = closure(&next);
    }
    cur.iter().any(|&q| nfa.is_accepting(q))
}

#[test]
fn distinguished_within_agrees_with_enumeration() {
    let al = alphabet(&["a", "b"]);
    let a = RegexAst::symbol(al.symbol("a").unwrap());
    let b = RegexAst::symbol(al.symbol("b").unwrap());
    let cases = vec![
        RegexAst::EmptySet,
        RegexAst::Epsilon,
        RegexAst::star(a.clone()),
        RegexAst::concat(b.clone(), RegexAst::star(a.clone())),
        RegexAst::sigma_star(&al),
    ];
    let mut rng = SplitMix64::new(4242);
    for _ in 0..12 {
        let d = random_dfa(5, &al, 0.35, rng.next_u64()).unwrap();
        for e in &cases {
            let nfa = srslearn::automata::Nfa::from_regex(e, &al);
            for q1 in 0..d.state_count() {
                for q2 in 0..d.state_count() {
                    let got = distinguished_within(&d, q1, q2, e).unwrap();
                    let brute = enumerate_words(&al, 10).into_iter().find(|w| {
                        nfa_accepts(&nfa, w)
                            && d.is_accepting(d.run_from(q1, w).unwrap())
                                != d.is_accepting(d.run_from(q2, w).unwrap())
                    });
                    assert_eq!(got, brute, "{e:?} states {q1},{q2}");
                }
            }
        }
    }
}
