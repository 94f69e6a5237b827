//! The advice layer end to end: membership inference through the
//! normal-form cache, equivalence inference with witness pairs, the
//! upward-closed fast path, savings accounting, and shadow-mode soundness.

mod common;

use common::{alphabet, parity_dfa, word};
use srslearn::advice::{AdviceLayer, AdviceMode, AdviceOptions};
use srslearn::automata::{shortest_counterexample, Dfa, Word};
use srslearn::generators::{
    bitadd_dfa, bitadd_srs, idempotent_srs, make_letter_idempotent, random_dfa,
};
use srslearn::learner::{lstar_learn, LearnerConfig, Oracle, QueryStats};
use srslearn::oracle::SimulatedTeacher;
use srslearn::rewriting::Srs;
use srslearn::Result;

fn idempotent_ab() -> Srs {
    let al = alphabet(&["a", "b"]);
    idempotent_srs(&al, &word(&al, "a")).unwrap()
}

fn two_sided_layer(target: Dfa, srs: Srs) -> AdviceLayer<SimulatedTeacher> {
    let al = target.alphabet().clone();
    AdviceLayer::new(
        SimulatedTeacher::new(target),
        al,
        AdviceMode::TwoSided(srs),
        AdviceOptions::default(),
    )
    .unwrap()
}

#[test]
fn membership_is_answered_from_the_cache_after_one_ask() {
    let al = alphabet(&["a", "b"]);
    let target = common::accept_all(&al);
    let mut layer = two_sided_layer(target, idempotent_ab());
    // First query is forwarded and cached under its normal form "a b".
    assert!(layer.member(&word(&al, "a a b")).unwrap());
    assert_eq!(layer.query_stats().mq_asked, 1);
    // Same normal form: answered without the oracle.
    assert!(layer.member(&word(&al, "a b")).unwrap());
    let stats = layer.query_stats();
    assert_eq!((stats.mq_asked, stats.mq_inferred), (1, 1));
    assert_eq!(layer.inner().query_stats().mq_asked, 1);
}

#[test]
fn mode_none_caches_by_the_word_itself() {
    let al = alphabet(&["a", "b"]);
    let teacher = SimulatedTeacher::new(parity_dfa());
    let mut layer = AdviceLayer::new(
        teacher,
        al.clone(),
        AdviceMode::None,
        AdviceOptions::default(),
    )
    .unwrap();
    // Two distinct words never share a cache slot without advice.
    assert!(layer.member(&word(&al, "a a b")).unwrap());
    assert!(!layer.member(&word(&al, "a b")).unwrap());
    let stats = layer.query_stats();
    assert_eq!((stats.mq_asked, stats.mq_inferred), (2, 0));
    // Re-asking the same word is served from the cache.
    assert!(layer.member(&word(&al, "a a b")).unwrap());
    assert_eq!(layer.query_stats().mq_inferred, 1);
}

#[test]
fn non_convergent_advice_is_rejected_without_an_override() {
    let al = alphabet(&["a", "b"]);
    // a -> b, b -> a cycles; not provably terminating.
    let srs = Srs::new(
        al.clone(),
        vec![
            (word(&al, "a"), word(&al, "b")),
            (word(&al, "b"), word(&al, "a")),
        ],
    )
    .unwrap();
    let teacher = SimulatedTeacher::new(common::accept_all(&al));
    let err = AdviceLayer::new(
        teacher,
        al.clone(),
        AdviceMode::TwoSided(srs.clone()),
        AdviceOptions::default(),
    )
    .err()
    .unwrap();
    assert!(matches!(err, srslearn::Error::AdviceRejected(_)));

    // Equivalence-only use is fine.
    let teacher = SimulatedTeacher::new(common::accept_all(&al));
    let layer = AdviceLayer::new(
        teacher,
        al,
        AdviceMode::TwoSided(srs),
        AdviceOptions {
            eq_only: true,
            ..AdviceOptions::default()
        },
    );
    assert!(layer.is_ok());
}

#[test]
fn inferred_equivalence_returns_the_rewrite_partner_for_accept_all() {
    // Target accepts everything; hypothesis is the parity DFA. The advice
    // {aa -> a} is inconsistent with the hypothesis, witness ("a a", "a").
    // mq("a a") = true agrees with the hypothesis, so the partner "a" is
    // the counterexample -- found with one membership and zero equivalence
    // queries.
    let al = alphabet(&["a", "b"]);
    let mut layer = two_sided_layer(common::accept_all(&al), idempotent_ab());
    let cex = layer.equivalence(&parity_dfa()).unwrap().unwrap();
    assert_eq!(cex, word(&al, "a"));
    let stats = layer.query_stats();
    assert_eq!(stats.eq_asked, 0);
    assert_eq!(stats.eq_inferred, 1);
    assert_eq!(stats.mq_asked, 1);
    assert_eq!(layer.inner().query_stats().eq_asked, 0);
}

#[test]
fn inferred_equivalence_returns_the_first_witness_when_it_disagrees() {
    // Target is {epsilon}: both "a a" and "a" are outside, so the advice is
    // consistent with the target; the parity hypothesis accepts "a a", so
    // mq("a a") = false exposes it directly.
    let al = alphabet(&["a", "b"]);
    let target = Dfa::new(
        al.clone(),
        0,
        vec![true, false],
        vec![vec![1, 1], vec![1, 1]],
    )
    .unwrap();
    let mut layer = two_sided_layer(target, idempotent_ab());
    let cex = layer.equivalence(&parity_dfa()).unwrap().unwrap();
    assert_eq!(cex, word(&al, "a a"));
}

#[test]
fn consistent_hypotheses_forward_the_equivalence_query() {
    let al = alphabet(&["a", "b"]);
    let target = common::accept_all(&al);
    let mut layer = two_sided_layer(target.clone(), idempotent_ab());
    assert_eq!(layer.equivalence(&target).unwrap(), None);
    let stats = layer.query_stats();
    assert_eq!((stats.eq_asked, stats.eq_inferred), (1, 0));
}

#[test]
fn learning_with_advice_reduces_asked_membership_queries_on_bitadd() {
    let target = bitadd_dfa();
    let config = LearnerConfig::default();

    let mut plain = SimulatedTeacher::new(target.clone());
    let (learned, plain_stats) = lstar_learn(&mut plain, target.alphabet(), &config).unwrap();
    assert_eq!(learned.state_count(), 3);
    assert_eq!(plain_stats.eq_asked, 1);

    let mut advised = two_sided_layer(target.clone(), bitadd_srs());
    let (learned2, advised_stats) = lstar_learn(&mut advised, target.alphabet(), &config).unwrap();
    assert_eq!(learned2.state_count(), 3);
    assert!(
        advised_stats.mq_asked < plain_stats.mq_asked,
        "advice should save asked membership queries: {} vs {}",
        advised_stats.mq_asked,
        plain_stats.mq_asked
    );
    // Every query the learner posed is accounted asked-or-inferred.
    assert_eq!(
        advised_stats.total_mq() - advised_stats.eq_inferred,
        plain_stats.total_mq(),
        "same learner trajectory implies the same table demands, \
         plus one witness query per inferred equivalence answer"
    );
}

#[test]
fn savings_accounting_matches_learner_demands() {
    /// Counts learner-level channel calls (the advice layer's witness
    /// queries are internal and accounted separately via eq_inferred).
    struct Spy<O> {
        inner: O,
        member_calls: u64,
        eq_calls: u64,
    }
    impl<O: Oracle> Oracle for Spy<O> {
        fn member(&mut self, w: &Word) -> Result<bool> {
            self.member_calls += 1;
            self.inner.member(w)
        }
        fn equivalence(&mut self, h: &Dfa) -> Result<Option<Word>> {
            self.eq_calls += 1;
            self.inner.equivalence(h)
        }
        fn query_stats(&self) -> QueryStats {
            self.inner.query_stats()
        }
    }

    let al = alphabet(&["a", "b", "c", "d"]);
    let letter = al.symbols().next().unwrap();
    let target = make_letter_idempotent(&random_dfa(60, &al, 0.1, 11).unwrap(), letter).unwrap();
    let srs = idempotent_srs(&al, &Word::singleton(letter)).unwrap();
    let layer = two_sided_layer(target.clone(), srs);
    let mut spy = Spy {
        inner: layer,
        member_calls: 0,
        eq_calls: 0,
    };
    let (learned, _) = lstar_learn(&mut spy, &al, &LearnerConfig::default()).unwrap();
    assert_eq!(shortest_counterexample(&learned, &target).unwrap(), None);

    let stats = spy.inner.query_stats();
    // One witness membership query per inferred equivalence answer, on top
    // of the learner's own demands.
    assert_eq!(
        stats.mq_asked + stats.mq_inferred,
        spy.member_calls + stats.eq_inferred,
        "membership accounting"
    );
    assert_eq!(
        stats.eq_asked + stats.eq_inferred,
        spy.eq_calls,
        "equivalence accounting"
    );
    // The teacher saw exactly the asked queries.
    let teacher_stats = spy.inner.inner().query_stats();
    assert_eq!(teacher_stats.mq_asked, stats.mq_asked);
    assert_eq!(teacher_stats.eq_asked, stats.eq_asked);
}

#[test]
fn shadow_mode_sees_no_mismatches_for_consistent_advice() {
    let al = alphabet(&["a", "b", "c", "d"]);
    let letter = al.symbols().next().unwrap();
    for seed in 0..5u64 {
        let target =
            make_letter_idempotent(&random_dfa(50, &al, 0.1, 600 + seed).unwrap(), letter).unwrap();
        let srs = idempotent_srs(&al, &Word::singleton(letter)).unwrap();
        let teacher = SimulatedTeacher::new(target.clone());
        let mut layer = AdviceLayer::new(
            teacher,
            al.clone(),
            AdviceMode::TwoSided(srs),
            AdviceOptions {
                shadow: true,
                ..AdviceOptions::default()
            },
        )
        .unwrap();
        let (learned, _) = lstar_learn(&mut layer, &al, &LearnerConfig::default()).unwrap();
        assert_eq!(shortest_counterexample(&learned, &target).unwrap(), None);
        assert_eq!(layer.shadow_mismatches(), 0, "seed {seed}");
    }
}

#[test]
fn upward_closed_advice_learns_subsequence_languages() {
    // Target: words containing "a b" as a subsequence -- upward closed.
    let al = alphabet(&["a", "b"]);
    let target = Dfa::new(
        al.clone(),
        0,
        vec![false, false, true],
        vec![vec![1, 0], vec![1, 2], vec![2, 2]],
    )
    .unwrap();
    let teacher = SimulatedTeacher::new(target.clone());
    let mut layer = AdviceLayer::new(
        teacher,
        al.clone(),
        AdviceMode::UpwardClosed,
        AdviceOptions {
            shadow: true,
            ..AdviceOptions::default()
        },
    )
    .unwrap();
    let (learned, stats) = lstar_learn(&mut layer, &al, &LearnerConfig::default()).unwrap();
    assert_eq!(shortest_counterexample(&learned, &target).unwrap(), None);
    assert_eq!(layer.shadow_mismatches(), 0);
    assert!(stats.mq_inferred > 0, "subsequence inference should fire");
}

#[test]
fn wrong_advice_diverges_instead_of_mislearning() {
    // {aa -> a} is NOT consistent with the parity language; the layer will
    // keep manufacturing bogus counterexamples until the round limit trips.
    let target = parity_dfa();
    let al = target.alphabet().clone();
    let teacher = SimulatedTeacher::new(target);
    let mut layer = AdviceLayer::new(
        teacher,
        al.clone(),
        AdviceMode::TwoSided(idempotent_ab()),
        AdviceOptions::default(),
    )
    .unwrap();
    let config = LearnerConfig {
        max_rounds: 30,
        ..LearnerConfig::default()
    };
    let err = lstar_learn(&mut layer, &al, &config).unwrap_err();
    assert!(matches!(err, srslearn::Error::Divergence(30)));
}
