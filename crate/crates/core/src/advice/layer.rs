use crate::automata::{Alphabet, Dfa, MealyMachine, Symbol, Word};
use crate::learner::{MealyOracle, Oracle, QueryStats};
use crate::rewriting::{check_convergence, check_convergence_csrs, Csrs, Srs};
use crate::{Error, Result};

use super::cache::{upward_closed_infer, NormalFormCache, SignedCache};
use super::consistency::{
    check_consistency, check_consistency_csrs, check_consistency_mealy,
    check_consistency_one_sided, ConsistencyVerdict, Polarity,
};

/// What kind of advice the layer holds. `UpwardClosed` fixes the system
/// `{eps -> a | a in Sigma}` implicitly and adds the subsequence fast path
/// for membership inference.
#[derive(Clone, Debug)]
pub enum AdviceMode {
    None,
    TwoSided(Srs),
    TwoSidedControlled(Csrs),
    Positive(Srs),
    Negative(Srs),
    UpwardClosed,
}

impl AdviceMode {
    pub fn label(&self) -> &'static str {
        match self {
            AdviceMode::None => "none",
            AdviceMode::TwoSided(_) => "two-sided",
            AdviceMode::TwoSidedControlled(_) => "csrs",
            AdviceMode::Positive(_) => "positive",
            AdviceMode::Negative(_) => "negative",
            AdviceMode::UpwardClosed => "upward",
        }
    }
}

#[derive(Clone, Copy, Default, Debug)]
pub struct AdviceOptions {
    /// Use the membership cache even when convergence could not be proved.
    pub assume_convergent: bool,
    /// Restrict two-sided advice to equivalence inference; the membership
    /// path degrades to caching by the word itself.
    pub eq_only: bool,
    /// Cross-check every inferred answer against the real oracle.
    pub shadow: bool,
}

/// The interception layer between a learner and its oracle. Membership
/// queries are answered from the normal-form cache when possible;
/// equivalence queries are answered from a consistency check of the
/// hypothesis against the advice, spending one membership query to decide
/// which witness word is the counterexample. Everything else is forwarded.
pub struct AdviceLayer<O> {
    inner: O,
    alphabet: Alphabet,
    mode: AdviceMode,
    /// The implicit system for upward-closed mode.
    upward: Option<Srs>,
    infer_membership: bool,
    cache: NormalFormCache<bool>,
    signed: SignedCache,
    stats: QueryStats,
    shadow: bool,
    shadow_mismatches: u64,
    last_witness: Option<(Word, Word)>,
}

impl<O: Oracle> AdviceLayer<O> {
    pub fn new(
        inner: O,
        alphabet: Alphabet,
        mode: AdviceMode,
        options: AdviceOptions,
    ) -> Result<Self> {
        let infer_membership = match &mode {
            AdviceMode::None => false,
            AdviceMode::TwoSided(srs) => {
                if srs.alphabet() != &alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                membership_gate(check_convergence(srs).is_convergent(), &options)?
            }
            AdviceMode::TwoSidedControlled(csrs) => {
                if csrs.alphabet() != &alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                membership_gate(check_convergence_csrs(csrs).is_convergent(), &options)?
            }
            AdviceMode::Positive(srs) | AdviceMode::Negative(srs) => {
                if srs.alphabet() != &alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                // General one-sided membership inference would need
                // reachability between arbitrary words; only the
                // upward-closed fast path implements it.
                false
            }
            AdviceMode::UpwardClosed => false,
        };
        let upward = match mode {
            AdviceMode::UpwardClosed => {
                let rules = alphabet
                    .symbols()
                    .map(|a| (Word::empty(), Word::singleton(a)))
                    .collect();
                Some(Srs::one_sided(alphabet.clone(), rules)?)
            }
            _ => None,
        };
        Ok(AdviceLayer {
            inner,
            alphabet,
            mode,
            upward,
            infer_membership,
            cache: NormalFormCache::default(),
            signed: SignedCache::default(),
            stats: QueryStats::default(),
            shadow: options.shadow,
            shadow_mismatches: 0,
            last_witness: None,
        })
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }

    pub fn mode(&self) -> &AdviceMode {
        &self.mode
    }

    pub fn cache(&self) -> &NormalFormCache<bool> {
        &self.cache
    }

    pub fn signed_cache(&self) -> &SignedCache {
        &self.signed
    }

    /// Number of inferred answers that disagreed with the oracle in shadow
    /// mode. Stays zero when the advice is consistent with the target.
    pub fn shadow_mismatches(&self) -> u64 {
        self.shadow_mismatches
    }

    /// The witness pair of the most recent consistency violation, for
    /// divergence diagnostics.
    pub fn last_witness(&self) -> Option<&(Word, Word)> {
        self.last_witness.as_ref()
    }

    /// The cache key for a membership query: the normal form under the
    /// advice when inference is on, the word itself otherwise.
    fn membership_key(&self, w: &Word) -> Result<Word> {
        if !self.infer_membership {
            return Ok(w.clone());
        }
        let nf = match &self.mode {
            AdviceMode::TwoSided(srs) => srs.normal_form(w, srs.default_step_budget(w)),
            AdviceMode::TwoSidedControlled(csrs) => {
                csrs.normal_form(w, csrs.default_step_budget(w))
            }
            _ => unreachable!("membership inference is only enabled for two-sided modes"),
        };
        nf.map_err(|e| match e {
            Error::StepBudgetExhausted { budget } => Error::AdviceFailure(format!(
                "normal form of a {}-letter query did not converge within {budget} steps",
                w.len()
            )),
            other => other,
        })
    }

    fn shadow_check_membership(&mut self, w: &Word, inferred: bool) -> Result<()> {
        if self.shadow && !self.inner.verify_member(w, inferred)? {
            self.shadow_mismatches += 1;
        }
        Ok(())
    }
}

fn membership_gate(proved: bool, options: &AdviceOptions) -> Result<bool> {
    if proved || options.assume_convergent {
        Ok(true)
    } else if options.eq_only {
        Ok(false)
    } else {
        Err(Error::AdviceRejected(
            "advice is not provably convergent; pass assume_convergent to force the \
             membership cache or eq_only to use it for equivalence queries alone"
                .into(),
        ))
    }
}

impl<O: Oracle> Oracle for AdviceLayer<O> {
    fn member(&mut self, w: &Word) -> Result<bool> {
        self.alphabet.check_word(w)?;
        if matches!(self.mode, AdviceMode::UpwardClosed) {
            if let Some(answer) = upward_closed_infer(&self.signed, w) {
                self.stats.mq_inferred += 1;
                self.shadow_check_membership(w, answer)?;
                return Ok(answer);
            }
            let answer = self.inner.member(w)?;
            self.stats.mq_asked += 1;
            self.signed.record(w.clone(), answer);
            return Ok(answer);
        }

        let key = self.membership_key(w)?;
        if let Some(answer) = self.cache.lookup(&key) {
            self.stats.mq_inferred += 1;
            self.shadow_check_membership(w, answer)?;
            return Ok(answer);
        }
        let answer = self.inner.member(w)?;
        self.stats.mq_asked += 1;
        self.cache.insert(key, answer);
        Ok(answer)
    }

    fn equivalence(&mut self, hypothesis: &Dfa) -> Result<Option<Word>> {
        let verdict = match &self.mode {
            AdviceMode::None => ConsistencyVerdict::Consistent,
            AdviceMode::TwoSided(srs) => check_consistency(srs, hypothesis)?,
            AdviceMode::TwoSidedControlled(csrs) => check_consistency_csrs(csrs, hypothesis)?,
            AdviceMode::Positive(srs) => {
                check_consistency_one_sided(srs, hypothesis, Polarity::Positive)?
            }
            AdviceMode::Negative(srs) => {
                check_consistency_one_sided(srs, hypothesis, Polarity::Negative)?
            }
            AdviceMode::UpwardClosed => check_consistency_one_sided(
                self.upward.as_ref().expect("constructed for this mode"),
                hypothesis,
                Polarity::Positive,
            )?,
        };
        match verdict {
            ConsistencyVerdict::Consistent => {
                let result = self.inner.equivalence(hypothesis)?;
                self.stats.eq_asked += 1;
                if let Some(cex) = &result {
                    self.stats.cex_total_length += cex.len() as u64;
                }
                Ok(result)
            }
            ConsistencyVerdict::Witness(x, y) => {
                self.last_witness = Some((x.clone(), y.clone()));
                // One membership query decides which of the pair
                // contradicts the target; the other side then has to.
                let x_in_target = self.member(&x)?;
                let cex = if x_in_target != hypothesis.accepts(&x)? {
                    x
                } else {
                    y
                };
                self.stats.eq_inferred += 1;
                self.stats.cex_total_length += cex.len() as u64;
                if self.shadow {
                    let hypothesis_answer = hypothesis.accepts(&cex)?;
                    if self.inner.verify_member(&cex, hypothesis_answer)? {
                        // The target agrees with the hypothesis on the word
                        // we returned as a counterexample.
                        self.shadow_mismatches += 1;
                    }
                }
                Ok(Some(cex))
            }
        }
    }

    fn query_stats(&self) -> QueryStats {
        self.stats
    }

    fn verify_member(&mut self, w: &Word, claimed: bool) -> Result<bool> {
        self.inner.verify_member(w, claimed)
    }
}

/// The advice layer for Mealy learning. Only two-sided advice is defined
/// here (one-sided consistency has no Mealy analogue via last outputs), and
/// rules must have non-empty sides.
pub struct MealyAdviceLayer<O> {
    inner: O,
    advice: Option<Srs>,
    infer_membership: bool,
    cache: NormalFormCache<Symbol>,
    stats: QueryStats,
    shadow: bool,
    shadow_mismatches: u64,
    last_witness: Option<(Word, Word)>,
}

impl<O: MealyOracle> MealyAdviceLayer<O> {
    pub fn new(
        inner: O,
        alphabet: Alphabet,
        advice: Option<Srs>,
        options: AdviceOptions,
    ) -> Result<Self> {
        let infer_membership = match &advice {
            None => false,
            Some(srs) => {
                if srs.alphabet() != &alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                if srs
                    .rules()
                    .iter()
                    .any(|r| r.lhs().is_empty() || r.rhs().is_empty())
                {
                    return Err(Error::AdviceRejected(
                        "Mealy advice requires rules with non-empty sides".into(),
                    ));
                }
                membership_gate(check_convergence(srs).is_convergent(), &options)?
            }
        };
        Ok(MealyAdviceLayer {
            inner,
            advice,
            infer_membership,
            cache: NormalFormCache::default(),
            stats: QueryStats::default(),
            shadow: options.shadow,
            shadow_mismatches: 0,
            last_witness: None,
        })
    }

    pub fn into_inner(self) -> O {
        self.inner
    }

    pub fn shadow_mismatches(&self) -> u64 {
        self.shadow_mismatches
    }

    pub fn last_witness(&self) -> Option<&(Word, Word)> {
        self.last_witness.as_ref()
    }

    fn membership_key(&self, w: &Word) -> Result<Word> {
        match (&self.advice, self.infer_membership) {
            (Some(srs), true) => {
                srs.normal_form(w, srs.default_step_budget(w))
                    .map_err(|e| match e {
                        Error::StepBudgetExhausted { budget } => Error::AdviceFailure(format!(
                            "normal form did not converge within {budget} steps"
                        )),
                        other => other,
                    })
            }
            _ => Ok(w.clone()),
        }
    }
}

impl<O: MealyOracle> MealyOracle for MealyAdviceLayer<O> {
    fn last_output(&mut self, w: &Word) -> Result<Symbol> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        let key = self.membership_key(w)?;
        if let Some(answer) = self.cache.lookup(&key) {
            self.stats.mq_inferred += 1;
            if self.shadow && !self.inner.verify_output(w, answer)? {
                self.shadow_mismatches += 1;
            }
            return Ok(answer);
        }
        let answer = self.inner.last_output(w)?;
        self.stats.mq_asked += 1;
        self.cache.insert(key, answer);
        Ok(answer)
    }

    fn equivalence(&mut self, hypothesis: &MealyMachine) -> Result<Option<Word>> {
        let verdict = match &self.advice {
            None => ConsistencyVerdict::Consistent,
            Some(srs) => check_consistency_mealy(srs, hypothesis)?,
        };
        match verdict {
            ConsistencyVerdict::Consistent => {
                let result = self.inner.equivalence(hypothesis)?;
                self.stats.eq_asked += 1;
                if let Some(cex) = &result {
                    self.stats.cex_total_length += cex.len() as u64;
                }
                Ok(result)
            }
            ConsistencyVerdict::Witness(x, y) => {
                self.last_witness = Some((x.clone(), y.clone()));
                let target_out = self.last_output(&x)?;
                let cex = if target_out != hypothesis.last_output(&x)? {
                    x
                } else {
                    y
                };
                self.stats.eq_inferred += 1;
                self.stats.cex_total_length += cex.len() as u64;
                if self.shadow {
                    let claimed = hypothesis.last_output(&cex)?;
                    if self.inner.verify_output(&cex, claimed)? {
                        self.shadow_mismatches += 1;
                    }
                }
                Ok(Some(cex))
            }
        }
    }

    fn output_alphabet(&self) -> &Alphabet {
        self.inner.output_alphabet()
    }

    fn query_stats(&self) -> QueryStats {
        self.stats
    }

    fn verify_output(&mut self, w: &Word, claimed: Symbol) -> Result<bool> {
        self.inner.verify_output(w, claimed)
    }
}
