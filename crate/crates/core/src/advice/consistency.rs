use crate::automata::{
    distinguished_within, reachable_via_with_words, subsumption_matrix, subsumption_witness, Dfa,
    MealyMachine, MealyRefinement, MooreTable, Word,
};
use crate::rewriting::{Csrs, Srs};
use crate::{Error, Result};

/// Result of a consistency check: either the advice cannot contradict the
/// automaton's language, or a witness pair `(x l y, x r y)` that differs by
/// one rule application and is classified differently by the automaton.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConsistencyVerdict {
    Consistent,
    Witness(Word, Word),
}

impl ConsistencyVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyVerdict::Consistent)
    }
}

/// Polarity of one-sided consistency: positive advice may only rewrite into
/// the language, negative advice only out of it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Decides whether `r` is consistent with `L(d)` by checking, at every
/// reachable state, that both sides of every rule lead to language-equivalent
/// states. The scan is rules in list order, states in id order, so the
/// reported witness is deterministic. On a minimal automaton the equivalence
/// test degenerates to state equality; staying semantic keeps the verdict
/// correct for arbitrary complete DFAs.
pub fn check_consistency(r: &Srs, d: &Dfa) -> Result<ConsistencyVerdict> {
    if r.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let moore = MooreTable::new(d);
    let reachable = reachable_flags(d);
    for rule in r.rules() {
        for (q, _) in reachable.iter().enumerate().filter(|(_, ok)| **ok) {
            let s1 = d.run_from_unchecked(q, rule.lhs());
            let s2 = d.run_from_unchecked(q, rule.rhs());
            if let Some(v) = moore.distinguishing_word(s1, s2) {
                let u = d
                    .shortest_access_word(q)
                    .expect("the scan only visits reachable states");
                let x = u.concat(rule.lhs()).concat(&v);
                let y = u.concat(rule.rhs()).concat(&v);
                return Ok(ConsistencyVerdict::Witness(x, y));
            }
        }
    }
    Ok(ConsistencyVerdict::Consistent)
}

/// Controlled variant: a rule `(l, r, e_x, e_y)` is only constrained at
/// states reachable via a word of `L(e_x)`, and only needs the two successor
/// states to agree on suffixes from `L(e_y)`.
pub fn check_consistency_csrs(c: &Csrs, d: &Dfa) -> Result<ConsistencyVerdict> {
    if c.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let mut moore: Option<MooreTable> = None;
    for rule in c.rules() {
        let access = reachable_via_with_words(d, rule.prefix_ctx())?;
        let suffix_universal = rule.suffix_ctx().is_sigma_star(d.alphabet());
        for (q, x) in access {
            let s1 = d.run_from_unchecked(q, rule.lhs());
            let s2 = d.run_from_unchecked(q, rule.rhs());
            let y = if suffix_universal {
                moore
                    .get_or_insert_with(|| MooreTable::new(d))
                    .distinguishing_word(s1, s2)
            } else {
                distinguished_within(d, s1, s2, rule.suffix_ctx())?
            };
            if let Some(y) = y {
                let wx = x.concat(rule.lhs()).concat(&y);
                let wy = x.concat(rule.rhs()).concat(&y);
                return Ok(ConsistencyVerdict::Witness(wx, wy));
            }
        }
    }
    Ok(ConsistencyVerdict::Consistent)
}

/// One-sided variant via the subsumption preorder: positive consistency
/// needs `delta(q, l) <= delta(q, r)` at every reachable state, negative
/// consistency the reverse inclusion. The witness suffix is a word in the
/// residual-language difference of the offending pair.
pub fn check_consistency_one_sided(
    r: &Srs,
    d: &Dfa,
    polarity: Polarity,
) -> Result<ConsistencyVerdict> {
    if r.alphabet() != d.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let matrix = subsumption_matrix(d);
    let reachable = reachable_flags(d);
    for rule in r.rules() {
        for (q, _) in reachable.iter().enumerate().filter(|(_, ok)| **ok) {
            let s1 = d.run_from_unchecked(q, rule.lhs());
            let s2 = d.run_from_unchecked(q, rule.rhs());
            let (lo, hi) = match polarity {
                Polarity::Positive => (s1, s2),
                Polarity::Negative => (s2, s1),
            };
            if !matrix[lo][hi] {
                let v = subsumption_witness(d, lo, hi)
                    .expect("the subsumption matrix said the inclusion fails");
                let u = d
                    .shortest_access_word(q)
                    .expect("the scan only visits reachable states");
                let x = u.concat(rule.lhs()).concat(&v);
                let y = u.concat(rule.rhs()).concat(&v);
                return Ok(ConsistencyVerdict::Witness(x, y));
            }
        }
    }
    Ok(ConsistencyVerdict::Consistent)
}

/// Mealy variant: along both rule sides the machine must emit the same final
/// output letter and land in states whose residual output functions agree.
/// Rules with an empty side are rejected; the last output of an empty run is
/// context-dependent and has no sound single-state check.
pub fn check_consistency_mealy(r: &Srs, m: &MealyMachine) -> Result<ConsistencyVerdict> {
    if r.alphabet() != m.input_alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    for rule in r.rules() {
        if rule.lhs().is_empty() || rule.rhs().is_empty() {
            return Err(Error::AdviceRejected(
                "Mealy advice requires rules with non-empty sides".into(),
            ));
        }
    }
    let refinement = MealyRefinement::new(m);
    let (reachable, access) = mealy_reachability(m);
    for rule in r.rules() {
        for q in 0..m.state_count() {
            if !reachable[q] {
                continue;
            }
            let o1 = m.last_output_from(q, rule.lhs()).expect("lhs is non-empty");
            let o2 = m.last_output_from(q, rule.rhs()).expect("rhs is non-empty");
            let s1 = m.run_from_unchecked(q, rule.lhs());
            let s2 = m.run_from_unchecked(q, rule.rhs());
            let v = if o1 != o2 {
                Some(Word::empty())
            } else {
                refinement.distinguishing_word(s1, s2)
            };
            if let Some(v) = v {
                let u = access[q]
                    .clone()
                    .expect("reachable state has an access word");
                let x = u.concat(rule.lhs()).concat(&v);
                let y = u.concat(rule.rhs()).concat(&v);
                return Ok(ConsistencyVerdict::Witness(x, y));
            }
        }
    }
    Ok(ConsistencyVerdict::Consistent)
}

fn reachable_flags(d: &Dfa) -> Vec<bool> {
    let mut flags = vec![false; d.state_count()];
    for q in d.reachable_states() {
        flags[q] = true;
    }
    flags
}

fn mealy_reachability(m: &MealyMachine) -> (Vec<bool>, Vec<Option<Word>>) {
    use std::collections::VecDeque;
    let n = m.state_count();
    let mut seen = vec![false; n];
    let mut access: Vec<Option<Word>> = vec![None; n];
    let mut queue = VecDeque::new();
    seen[m.initial()] = true;
    access[m.initial()] = Some(Word::empty());
    queue.push_back(m.initial());
    while let Some(q) = queue.pop_front() {
        for a in m.input_alphabet().symbols() {
            let t = m.step(q, a);
            if !seen[t] {
                seen[t] = true;
                access[t] = Some(access[q].as_ref().unwrap().extended(a));
                queue.push_back(t);
            }
        }
    }
    (seen, access)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Alphabet, RegexAst};
    use crate::rewriting::ControlledRule;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(text: &str) -> Word {
        ab().parse_word(text).unwrap()
    }

    fn idempotent_a() -> Srs {
        Srs::new(ab(), vec![(w("a a"), w("a"))]).unwrap()
    }

    fn parity() -> Dfa {
        Dfa::new(ab(), 0, vec![true, false], vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn accept_all() -> Dfa {
        Dfa::new(ab(), 0, vec![true], vec![vec![0, 0]]).unwrap()
    }

    #[test]
    fn idempotent_consistent_with_accept_all() {
        assert!(check_consistency(&idempotent_a(), &accept_all())
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn idempotent_vs_parity_yields_the_shortest_witness() {
        let got = check_consistency(&idempotent_a(), &parity()).unwrap();
        assert_eq!(got, ConsistencyVerdict::Witness(w("a a"), w("a")));
    }

    #[test]
    fn empty_srs_is_vacuously_consistent() {
        let empty = Srs::new(ab(), vec![]).unwrap();
        assert!(check_consistency(&empty, &parity())
            .unwrap()
            .is_consistent());
        for polarity in [Polarity::Positive, Polarity::Negative] {
            assert!(check_consistency_one_sided(&empty, &parity(), polarity)
                .unwrap()
                .is_consistent());
        }
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let unary = Alphabet::new(["a"]).unwrap();
        let d = Dfa::new(unary.clone(), 0, vec![true], vec![vec![0]]).unwrap();
        assert!(matches!(
            check_consistency(&idempotent_a(), &d),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn csrs_with_vacuous_suffix_context_is_consistent() {
        let rule = ControlledRule::new(w("a a"), w("a"), RegexAst::Epsilon, RegexAst::EmptySet);
        let c = Csrs::new(ab(), vec![rule]).unwrap();
        assert!(check_consistency_csrs(&c, &parity())
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn csrs_anchored_rule_vs_parity_gives_witness() {
        let rule = ControlledRule::new(
            w("a a"),
            w("a"),
            RegexAst::Epsilon,
            RegexAst::sigma_star(&ab()),
        );
        let c = Csrs::new(ab(), vec![rule]).unwrap();
        let got = check_consistency_csrs(&c, &parity()).unwrap();
        assert_eq!(got, ConsistencyVerdict::Witness(w("a a"), w("a")));
    }

    fn upward_srs() -> Srs {
        let al = ab();
        let rules = al
            .symbols()
            .map(|a| (Word::empty(), Word::singleton(a)))
            .collect();
        Srs::one_sided(al, rules).unwrap()
    }

    #[test]
    fn upward_rules_positively_consistent_with_contains_a() {
        // "contains an a": q0 rejecting, q1 accepting sink.
        let d = Dfa::new(ab(), 0, vec![false, true], vec![vec![1, 0], vec![1, 1]]).unwrap();
        assert!(
            check_consistency_one_sided(&upward_srs(), &d, Polarity::Positive)
                .unwrap()
                .is_consistent()
        );
    }

    #[test]
    fn upward_rules_vs_single_word_language() {
        // Language {a}: inserting any letter after `a` falls out of the
        // language, so positive consistency fails; the first violation in
        // scan order is at the initial state with rule eps -> a.
        let d = Dfa::new(
            ab(),
            0,
            vec![false, true, false],
            vec![vec![1, 2], vec![2, 2], vec![2, 2]],
        )
        .unwrap();
        let got = check_consistency_one_sided(&upward_srs(), &d, Polarity::Positive).unwrap();
        assert_eq!(got, ConsistencyVerdict::Witness(w("a"), w("a a")));
    }

    #[test]
    fn mealy_rejects_epsilon_sided_rules() {
        let m = MealyMachine::new(
            ab(),
            ab(),
            0,
            vec![vec![0, 0]],
            vec![vec![crate::automata::Symbol(0), crate::automata::Symbol(1)]],
        )
        .unwrap();
        assert!(matches!(
            check_consistency_mealy(&upward_srs(), &m),
            Err(Error::AdviceRejected(_))
        ));
    }

    #[test]
    fn mealy_idempotent_consistent_on_a_fixpoint_machine() {
        // delta(q, a) is an a-fixpoint with a stable output everywhere, so
        // {aa -> a} can never be observed.
        let out = Alphabet::new(["x", "y"]).unwrap();
        let m = MealyMachine::new(
            ab(),
            out,
            0,
            vec![vec![1, 0], vec![1, 1]],
            vec![
                vec![crate::automata::Symbol(0), crate::automata::Symbol(1)],
                vec![crate::automata::Symbol(0), crate::automata::Symbol(0)],
            ],
        )
        .unwrap();
        assert!(check_consistency_mealy(&idempotent_a(), &m)
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn mealy_idempotent_witness_on_toggle() {
        // Toggle machine emitting the state parity: `a a` from the initial
        // state ends where `a` started but with a different final output.
        let out = Alphabet::new(["0", "1"]).unwrap();
        let m = MealyMachine::new(
            ab(),
            out,
            0,
            vec![vec![1, 1], vec![0, 0]],
            vec![
                vec![crate::automata::Symbol(0), crate::automata::Symbol(0)],
                vec![crate::automata::Symbol(1), crate::automata::Symbol(1)],
            ],
        )
        .unwrap();
        let got = check_consistency_mealy(&idempotent_a(), &m).unwrap();
        assert_eq!(got, ConsistencyVerdict::Witness(w("a a"), w("a")));
        let empty = Srs::new(ab(), vec![]).unwrap();
        assert!(check_consistency_mealy(&empty, &m).unwrap().is_consistent());
    }
}
