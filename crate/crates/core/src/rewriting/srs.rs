use std::collections::BTreeSet;

use crate::automata::{Alphabet, Word};
use crate::{Error, Result};

/// A directed identity `lhs -> rhs` between words over one alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteRule {
    lhs: Word,
    rhs: Word,
}

impl RewriteRule {
    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &Word {
        &self.rhs
    }
}

/// One application of a rule at a position, with the word it produced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteStep {
    pub rule: usize,
    pub position: usize,
    pub result: Word,
}

/// A string rewriting system: an ordered list of rules over an alphabet.
/// Rule order matters only for the fixed reduction strategy (leftmost match
/// position, first rule in list order), which makes normal forms
/// deterministic even for systems that are not confluent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Srs {
    alphabet: Alphabet,
    rules: Vec<RewriteRule>,
}

impl Srs {
    /// Builds a two-sided system. Empty left-hand sides are rejected here: a
    /// rule like `eps -> a` expands forever and can never feed the
    /// normal-form cache.
    pub fn new(alphabet: Alphabet, rules: Vec<(Word, Word)>) -> Result<Self> {
        let srs = Self::build(alphabet, rules)?;
        if let Some(r) = srs.rules.iter().find(|r| r.lhs.is_empty()) {
            return Err(Error::InvalidRule(format!(
                "empty left-hand side (rhs of length {}) is only allowed in one-sided systems",
                r.rhs.len()
            )));
        }
        Ok(srs)
    }

    /// Builds a system for one-sided use, where empty left-hand sides are
    /// meaningful (upward closure is `eps -> a` for every letter).
    pub fn one_sided(alphabet: Alphabet, rules: Vec<(Word, Word)>) -> Result<Self> {
        Self::build(alphabet, rules)
    }

    fn build(alphabet: Alphabet, rules: Vec<(Word, Word)>) -> Result<Self> {
        let mut out = Vec::with_capacity(rules.len());
        for (lhs, rhs) in rules {
            alphabet.check_word(&lhs)?;
            alphabet.check_word(&rhs)?;
            if lhs == rhs {
                return Err(Error::InvalidRule(
                    "left- and right-hand side must differ".into(),
                ));
            }
            out.push(RewriteRule { lhs, rhs });
        }
        Ok(Srs {
            alphabet,
            rules: out,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn has_empty_lhs(&self) -> bool {
        self.rules.iter().any(|r| r.lhs.is_empty())
    }

    /// Sum of all rule side lengths; the size measure used in budgets.
    pub fn total_rule_size(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len() + r.rhs.len()).sum()
    }

    fn max_lhs_len(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0)
    }

    /// All applicable (position, rule) pairs, position-major, rules in list
    /// order within a position.
    pub fn matches(&self, w: &Word) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let syms = w.symbols();
        for pos in 0..=syms.len() {
            for (i, rule) in self.rules.iter().enumerate() {
                let l = rule.lhs.symbols();
                if pos + l.len() <= syms.len() && &syms[pos..pos + l.len()] == l {
                    out.push((pos, i));
                }
            }
        }
        out
    }

    /// Replaces the `rule` match at `position` in `w`.
    pub fn apply(&self, w: &Word, position: usize, rule: usize) -> Word {
        let r = &self.rules[rule];
        let syms = w.symbols();
        debug_assert_eq!(
            &syms[position..position + r.lhs.len()],
            r.lhs.symbols(),
            "apply called on a non-match"
        );
        let mut v = Vec::with_capacity(syms.len() - r.lhs.len() + r.rhs.len());
        v.extend_from_slice(&syms[..position]);
        v.extend_from_slice(r.rhs.symbols());
        v.extend_from_slice(&syms[position + r.lhs.len()..]);
        Word::from_symbols(v)
    }

    /// The set of words reachable from `w` in exactly one rewrite step.
    pub fn single_step(&self, w: &Word) -> Result<BTreeSet<Word>> {
        self.alphabet.check_word(w)?;
        Ok(self
            .matches(w)
            .into_iter()
            .map(|(pos, rule)| self.apply(w, pos, rule))
            .collect())
    }

    /// The default budget `10 * (|w| + 1) * (total rule size + 1)`: generous
    /// enough for convergent desk-scale systems, small enough to turn
    /// accidental non-termination into a diagnosable error.
    pub fn default_step_budget(&self, w: &Word) -> usize {
        10 * (w.len() + 1) * (self.total_rule_size() + 1)
    }

    /// Reduces `w` with the fixed strategy until no rule applies. For a
    /// convergent system this is the unique normal form.
    pub fn normal_form(&self, w: &Word, step_budget: usize) -> Result<Word> {
        self.alphabet.check_word(w)?;
        self.reduce(w.clone(), step_budget, |_| {})
    }

    /// Like [`Self::normal_form`], returning the full reduction trace so the
    /// derivation can be audited or printed.
    pub fn normal_form_traced(
        &self,
        w: &Word,
        step_budget: usize,
    ) -> Result<(Word, Vec<RewriteStep>)> {
        self.alphabet.check_word(w)?;
        let mut trace = Vec::new();
        let nf = self.reduce(w.clone(), step_budget, |step| trace.push(step))?;
        Ok((nf, trace))
    }

    /// Leftmost-position, first-rule reduction loop. After a rewrite at
    /// position `p`, a new match can only start at `p - max_lhs + 1` or
    /// later (everything to the left was already matchless and its windows
    /// end before the changed region), so the scan resumes there instead of
    /// at zero.
    fn reduce(
        &self,
        mut cur: Word,
        step_budget: usize,
        mut on_step: impl FnMut(RewriteStep),
    ) -> Result<Word> {
        if self.rules.is_empty() {
            return Ok(cur);
        }
        let max_l = self.max_lhs_len();
        let mut steps = 0usize;
        let mut scan_from = 0usize;
        'search: loop {
            let syms = cur.symbols();
            let mut pos = scan_from;
            while pos <= syms.len() {
                for (i, rule) in self.rules.iter().enumerate() {
                    let l = rule.lhs.symbols();
                    if pos + l.len() <= syms.len() && &syms[pos..pos + l.len()] == l {
                        if steps == step_budget {
                            return Err(Error::StepBudgetExhausted {
                                budget: step_budget,
                            });
                        }
                        steps += 1;
                        cur = self.apply(&cur, pos, i);
                        on_step(RewriteStep {
                            rule: i,
                            position: pos,
                            result: cur.clone(),
                        });
                        scan_from = pos.saturating_sub(max_l.saturating_sub(1));
                        continue 'search;
                    }
                }
                pos += 1;
            }
            return Ok(cur);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn srs(rules: &[(&str, &str)]) -> Srs {
        let al = ab();
        let rules = rules
            .iter()
            .map(|(l, r)| (al.parse_word(l).unwrap(), al.parse_word(r).unwrap()))
            .collect();
        Srs::new(al, rules).unwrap()
    }

    #[test]
    fn single_step_collapses_duplicates() {
        let r = srs(&[("a a", "a")]);
        let w = ab().parse_word("a a a").unwrap();
        let got = r.single_step(&w).unwrap();
        assert_eq!(got.len(), 1, "two positions, one result word");
        assert!(got.contains(&ab().parse_word("a a").unwrap()));
    }

    #[test]
    fn empty_system_has_no_steps() {
        let r = Srs::new(ab(), vec![]).unwrap();
        let w = ab().parse_word("a b").unwrap();
        assert!(r.single_step(&w).unwrap().is_empty());
        assert_eq!(r.normal_form(&w, 10).unwrap(), w);
    }

    #[test]
    fn commutation_single_step() {
        let r = srs(&[("b a", "a b")]);
        let got = r.single_step(&ab().parse_word("b a b").unwrap()).unwrap();
        assert_eq!(got, BTreeSet::from([ab().parse_word("a b b").unwrap()]));
    }

    #[test]
    fn normal_form_removes_duplicate_letters() {
        let r = srs(&[("a a", "a")]);
        let w = ab().parse_word("b a a b").unwrap();
        let budget = r.default_step_budget(&w);
        assert_eq!(
            r.normal_form(&w, budget).unwrap(),
            ab().parse_word("b a b").unwrap()
        );
    }

    #[test]
    fn normal_form_bubble_sorts() {
        let r = srs(&[("b a", "a b")]);
        let w = ab().parse_word("b b a a").unwrap();
        let budget = r.default_step_budget(&w);
        assert_eq!(
            r.normal_form(&w, budget).unwrap(),
            ab().parse_word("a a b b").unwrap()
        );
    }

    #[test]
    fn trace_replays_to_the_normal_form() {
        let r = srs(&[("b a", "a b"), ("a a", "a")]);
        let w = ab().parse_word("b a b a a").unwrap();
        let (nf, trace) = r.normal_form_traced(&w, r.default_step_budget(&w)).unwrap();
        let mut cur = w;
        for step in &trace {
            let stepped = r.apply(&cur, step.position, step.rule);
            assert_eq!(stepped, step.result);
            cur = stepped;
        }
        assert_eq!(cur, nf);
        assert!(r.matches(&nf).is_empty(), "normal form is irreducible");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // a -> b, b -> a cycles forever.
        let r = srs(&[("a", "b"), ("b", "a")]);
        let w = ab().parse_word("a").unwrap();
        assert!(matches!(
            r.normal_form(&w, 100),
            Err(Error::StepBudgetExhausted { budget: 100 })
        ));
    }

    #[test]
    fn empty_lhs_needs_one_sided_mode() {
        let al = ab();
        let rule = (Word::empty(), al.parse_word("a").unwrap());
        assert!(Srs::new(al.clone(), vec![rule.clone()]).is_err());
        let r = Srs::one_sided(al, vec![rule]).unwrap();
        assert!(r.has_empty_lhs());
    }

    #[test]
    fn lhs_equal_rhs_is_rejected() {
        let al = ab();
        let w = al.parse_word("a").unwrap();
        assert!(Srs::new(al, vec![(w.clone(), w)]).is_err());
    }
}
