//! Rewriting-engine properties: strategy independence on convergent
//! systems, single-step structure, trace validity, and the plain-system
//! embedding into controlled systems.

mod common;

use common::{alphabet, random_strategy_normal_form, random_word, word};
use proptest::prelude::*;
use srslearn::automata::Word;
use srslearn::generators::SplitMix64;
use srslearn::rewriting::{check_convergence, Csrs, Srs};

fn sorting_srs() -> Srs {
    let al = alphabet(&["a", "b"]);
    Srs::new(al.clone(), vec![(word(&al, "b a"), word(&al, "a b"))]).unwrap()
}

fn idempotent_srs() -> Srs {
    let al = alphabet(&["a", "b"]);
    Srs::new(al.clone(), vec![(word(&al, "a a"), word(&al, "a"))]).unwrap()
}

#[test]
fn random_strategies_agree_with_the_fixed_strategy() {
    for srs in [sorting_srs(), idempotent_srs()] {
        assert!(check_convergence(&srs).is_convergent());
        let al = srs.alphabet().clone();
        let mut rng = SplitMix64::new(8);
        for _ in 0..40 {
            let w = random_word(&al, 1 + rng.next_below(10) as usize, &mut rng);
            let fixed = srs.normal_form(&w, srs.default_step_budget(&w)).unwrap();
            for _ in 0..100 {
                assert_eq!(random_strategy_normal_form(&srs, &w, &mut rng), fixed);
            }
        }
    }
}

#[test]
fn normal_forms_are_irreducible() {
    let srs = sorting_srs();
    let al = srs.alphabet().clone();
    let mut rng = SplitMix64::new(9);
    for _ in 0..200 {
        let w = random_word(&al, rng.next_below(12) as usize, &mut rng);
        let nf = srs.normal_form(&w, srs.default_step_budget(&w)).unwrap();
        assert!(srs.single_step(&nf).unwrap().is_empty());
    }
}

#[test]
fn embedded_plain_rules_agree_with_the_plain_engine_exhaustively() {
    let srs = Srs::new(
        alphabet(&["a", "b"]),
        vec![
            (
                word(&alphabet(&["a", "b"]), "b a"),
                word(&alphabet(&["a", "b"]), "a b"),
            ),
            (
                word(&alphabet(&["a", "b"]), "a a"),
                word(&alphabet(&["a", "b"]), "a"),
            ),
        ],
    )
    .unwrap();
    let csrs = Csrs::from_srs(&srs);
    let al = srs.alphabet().clone();
    for w in common::enumerate_words(&al, 6) {
        assert_eq!(
            srs.single_step(&w).unwrap(),
            csrs.single_step(&w).unwrap(),
            "single step on {w:?}"
        );
        let budget = srs.default_step_budget(&w);
        assert_eq!(
            srs.normal_form(&w, budget).unwrap(),
            csrs.normal_form(&w, budget).unwrap()
        );
    }
}

proptest! {
    /// Every single-step result differs from the source by exactly one rule
    /// application, re-checkable by scanning, and is at most one rhs longer.
    #[test]
    fn single_step_results_are_one_application_away(
        letters in proptest::collection::vec(0u32..2, 0..12),
        seed in 0u64..500,
    ) {
        let mut rng = SplitMix64::new(seed);
        let al = alphabet(&["a", "b"]);
        let srs = common::random_srs(&al, 1 + rng.next_below(3) as usize, 2, &mut rng);
        let w = Word::from_symbols(letters.iter().map(|&i| srslearn::automata::Symbol(i)).collect());
        let max_rhs = srs.rules().iter().map(|r| r.rhs().len()).max().unwrap_or(0);
        for t in srs.single_step(&w).unwrap() {
            prop_assert!(t.len() <= w.len() + max_rhs);
            // Scan: some (position, rule) application of w produces t.
            let witnessed = srs
                .matches(&w)
                .into_iter()
                .any(|(pos, rule)| srs.apply(&w, pos, rule) == t);
            prop_assert!(witnessed);
        }
    }

    /// The recorded trace replays step by step to the normal form.
    #[test]
    fn traces_replay(seed in 0u64..300) {
        let mut rng = SplitMix64::new(seed);
        let al = alphabet(&["a", "b", "c"]);
        let srs = sorting3(&al);
        let w = random_word(&al, rng.next_below(14) as usize, &mut rng);
        let budget = srs.default_step_budget(&w);
        let (nf, trace) = srs.normal_form_traced(&w, budget).unwrap();
        let mut cur = w;
        for step in &trace {
            cur = srs.apply(&cur, step.position, step.rule);
            prop_assert_eq!(&cur, &step.result);
        }
        prop_assert_eq!(cur, nf);
    }
}

/// Full sorting system over three letters, used by the proptest above.
fn sorting3(al: &srslearn::automata::Alphabet) -> Srs {
    let mut rules = Vec::new();
    let syms: Vec<_> = al.symbols().collect();
    for i in 0..syms.len() {
        for j in (i + 1)..syms.len() {
            rules.push((
                Word::from_symbols(vec![syms[j], syms[i]]),
                Word::from_symbols(vec![syms[i], syms[j]]),
            ));
        }
    }
    Srs::new(al.clone(), rules).unwrap()
}

#[test]
fn full_sorting_system_is_convergent_and_sorts() {
    let al = alphabet(&["a", "b", "c"]);
    let srs = sorting3(&al);
    let verdict = check_convergence(&srs);
    assert!(verdict.is_convergent());
    let mut rng = SplitMix64::new(77);
    for _ in 0..100 {
        let w = random_word(&al, rng.next_below(10) as usize, &mut rng);
        let nf = srs.normal_form(&w, srs.default_step_budget(&w)).unwrap();
        let mut sorted = w.symbols().to_vec();
        sorted.sort();
        assert_eq!(nf, Word::from_symbols(sorted));
    }
}

#[test]
fn one_sided_upward_system_exhausts_its_budget() {
    let al = alphabet(&["a", "b"]);
    let srs = srslearn::generators::upward_closure_srs(&al);
    let err = srs.normal_form(&Word::empty(), 50).unwrap_err();
    assert!(matches!(
        err,
        srslearn::Error::StepBudgetExhausted { budget: 50 }
    ));
    let verdict = check_convergence(&srs);
    assert_ne!(
        verdict.termination,
        srslearn::rewriting::TerminationVerdict::Proved
    );
}
