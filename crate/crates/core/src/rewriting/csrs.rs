use std::collections::BTreeSet;

use crate::automata::{Alphabet, Nfa, RegexAst, SubsetRunner, Word};
use crate::{Error, Result};

use super::srs::{RewriteStep, Srs};

/// A rewrite rule with regular-expression contexts: it applies to the split
/// `w = x lhs y` only when `x` matches `prefix_ctx` and `y` matches
/// `suffix_ctx`.
#[derive(Clone, PartialEq, Debug)]
pub struct ControlledRule {
    lhs: Word,
    rhs: Word,
    prefix_ctx: RegexAst,
    suffix_ctx: RegexAst,
}

impl ControlledRule {
    pub fn new(lhs: Word, rhs: Word, prefix_ctx: RegexAst, suffix_ctx: RegexAst) -> Self {
        ControlledRule {
            lhs,
            rhs,
            prefix_ctx,
            suffix_ctx,
        }
    }

    pub fn lhs(&self) -> &Word {
        &self.lhs
    }

    pub fn rhs(&self) -> &Word {
        &self.rhs
    }

    pub fn prefix_ctx(&self) -> &RegexAst {
        &self.prefix_ctx
    }

    pub fn suffix_ctx(&self) -> &RegexAst {
        &self.suffix_ctx
    }
}

/// How much context machinery a rule actually needs. Plain rules apply
/// anywhere, anchored rules apply only at the start of the word; both are
/// decided from the position and the matched window alone, which keeps the
/// fast scanning strategy of plain rewriting valid.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum CtxClass {
    Plain,
    PrefixAnchored,
    General,
}

/// A controlled string rewriting system. A plain rule embeds as
/// `(l, r, sigma*, sigma*)`.
#[derive(Clone, Debug)]
pub struct Csrs {
    alphabet: Alphabet,
    rules: Vec<ControlledRule>,
    classes: Vec<CtxClass>,
    /// Compiled context NFAs for rules that need full regex evaluation.
    compiled: Vec<Option<(Nfa, Nfa)>>,
}

impl Csrs {
    pub fn new(alphabet: Alphabet, rules: Vec<ControlledRule>) -> Result<Self> {
        for rule in &rules {
            alphabet.check_word(&rule.lhs)?;
            alphabet.check_word(&rule.rhs)?;
            if rule.lhs == rule.rhs {
                return Err(Error::InvalidRule(
                    "left- and right-hand side must differ".into(),
                ));
            }
            if rule.lhs.is_empty() {
                return Err(Error::InvalidRule(
                    "controlled rules must have a non-empty left-hand side".into(),
                ));
            }
        }
        let classes: Vec<CtxClass> = rules
            .iter()
            .map(|r| {
                let suffix_universal = r.suffix_ctx.is_sigma_star(&alphabet);
                if suffix_universal && r.prefix_ctx.is_sigma_star(&alphabet) {
                    CtxClass::Plain
                } else if suffix_universal && r.prefix_ctx.matches_only_epsilon() {
                    CtxClass::PrefixAnchored
                } else {
                    CtxClass::General
                }
            })
            .collect();
        let compiled = rules
            .iter()
            .zip(&classes)
            .map(|(r, c)| match c {
                CtxClass::General => Some((
                    Nfa::from_regex(&r.prefix_ctx, &alphabet),
                    Nfa::from_regex(&r.suffix_ctx, &alphabet),
                )),
                _ => None,
            })
            .collect();
        Ok(Csrs {
            alphabet,
            rules,
            classes,
            compiled,
        })
    }

    /// Embeds a plain system: every rule gets `sigma*` contexts.
    pub fn from_srs(srs: &Srs) -> Self {
        let alphabet = srs.alphabet().clone();
        let star = RegexAst::sigma_star(&alphabet);
        let rules = srs
            .rules()
            .iter()
            .map(|r| {
                ControlledRule::new(r.lhs().clone(), r.rhs().clone(), star.clone(), star.clone())
            })
            .collect();
        Csrs::new(alphabet, rules).expect("plain rules are valid controlled rules")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[ControlledRule] {
        &self.rules
    }

    /// True when every rule applies only at position zero (with a free
    /// suffix), like the partial-DFA encodings.
    pub fn is_prefix_anchored(&self) -> bool {
        self.classes.iter().all(|&c| c == CtxClass::PrefixAnchored)
    }

    /// True when every rule is an embedded plain rule.
    pub fn is_plain(&self) -> bool {
        self.classes.iter().all(|&c| c == CtxClass::Plain)
    }

    fn positional_only(&self) -> bool {
        self.classes
            .iter()
            .all(|&c| matches!(c, CtxClass::Plain | CtxClass::PrefixAnchored))
    }

    pub fn total_rule_size(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len() + r.rhs.len()).sum()
    }

    fn max_lhs_len(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0)
    }

    pub fn default_step_budget(&self, w: &Word) -> usize {
        10 * (w.len() + 1) * (self.total_rule_size() + 1)
    }

    fn window_matches(&self, syms: &[crate::automata::Symbol], pos: usize, rule: usize) -> bool {
        let l = self.rules[rule].lhs.symbols();
        pos + l.len() <= syms.len() && &syms[pos..pos + l.len()] == l
    }

    /// Context check for positional rules; `None` means the rule needs full
    /// regex evaluation.
    fn positional_ok(&self, pos: usize, rule: usize) -> Option<bool> {
        match self.classes[rule] {
            CtxClass::Plain => Some(true),
            CtxClass::PrefixAnchored => Some(pos == 0),
            CtxClass::General => None,
        }
    }

    fn general_ok(&self, w: &Word, pos: usize, rule: usize) -> bool {
        let (prefix_nfa, suffix_nfa) = self.compiled[rule]
            .as_ref()
            .expect("general rules are compiled");
        let prefix = w.slice(0..pos);
        let suffix = w.slice(pos + self.rules[rule].lhs.len()..w.len());
        SubsetRunner::new(prefix_nfa).accepts(&prefix)
            && SubsetRunner::new(suffix_nfa).accepts(&suffix)
    }

    /// All applicable (position, rule) pairs with their contexts satisfied.
    pub fn matches(&self, w: &Word) -> Result<Vec<(usize, usize)>> {
        self.alphabet.check_word(w)?;
        let syms = w.symbols();
        let mut out = Vec::new();
        for pos in 0..=syms.len() {
            for rule in 0..self.rules.len() {
                if !self.window_matches(syms, pos, rule) {
                    continue;
                }
                let ok = match self.positional_ok(pos, rule) {
                    Some(v) => v,
                    None => self.general_ok(w, pos, rule),
                };
                if ok {
                    out.push((pos, rule));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, w: &Word, position: usize, rule: usize) -> Word {
        let r = &self.rules[rule];
        let syms = w.symbols();
        let mut v = Vec::with_capacity(syms.len() - r.lhs.len() + r.rhs.len());
        v.extend_from_slice(&syms[..position]);
        v.extend_from_slice(r.rhs.symbols());
        v.extend_from_slice(&syms[position + r.lhs.len()..]);
        Word::from_symbols(v)
    }

    pub fn single_step(&self, w: &Word) -> Result<BTreeSet<Word>> {
        Ok(self
            .matches(w)?
            .into_iter()
            .map(|(pos, rule)| self.apply(w, pos, rule))
            .collect())
    }

    pub fn normal_form(&self, w: &Word, step_budget: usize) -> Result<Word> {
        self.alphabet.check_word(w)?;
        self.reduce(w.clone(), step_budget, |_| {})
    }

    pub fn normal_form_traced(
        &self,
        w: &Word,
        step_budget: usize,
    ) -> Result<(Word, Vec<RewriteStep>)> {
        self.alphabet.check_word(w)?;
        let mut trace = Vec::new();
        let nf = self.reduce(w.clone(), step_budget, |s| trace.push(s))?;
        Ok((nf, trace))
    }

    /// Same strategy as plain reduction: leftmost position, first rule.
    /// Positional-only systems keep the resumable scan (context validity
    /// depends only on the position); systems with real regex contexts
    /// rescan from the start after each step, because a rewrite anywhere can
    /// change whether a far-away context matches.
    fn reduce(
        &self,
        mut cur: Word,
        step_budget: usize,
        mut on_step: impl FnMut(RewriteStep),
    ) -> Result<Word> {
        if self.rules.is_empty() {
            return Ok(cur);
        }
        let positional = self.positional_only();
        let max_l = self.max_lhs_len();
        let mut steps = 0usize;
        let mut scan_from = 0usize;
        'search: loop {
            let syms = cur.symbols();
            let mut pos = scan_from;
            while pos <= syms.len() {
                for rule in 0..self.rules.len() {
                    if !self.window_matches(syms, pos, rule) {
                        continue;
                    }
                    let ok = match self.positional_ok(pos, rule) {
                        Some(v) => v,
                        None => self.general_ok(&cur, pos, rule),
                    };
                    if !ok {
                        continue;
                    }
                    if steps == step_budget {
                        return Err(Error::StepBudgetExhausted {
                            budget: step_budget,
                        });
                    }
                    steps += 1;
                    cur = self.apply(&cur, pos, rule);
                    on_step(RewriteStep {
                        rule,
                        position: pos,
                        result: cur.clone(),
                    });
                    scan_from = if positional {
                        pos.saturating_sub(max_l.saturating_sub(1))
                    } else {
                        0
                    };
                    continue 'search;
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

    fn w(text: &str) -> Word {
        ab().parse_word(text).unwrap()
    }

    fn anchored(rules: &[(&str, &str)]) -> Csrs {
        let al = ab();
        let rules = rules
            .iter()
            .map(|(l, r)| {
                ControlledRule::new(
                    al.parse_word(l).unwrap(),
                    al.parse_word(r).unwrap(),
                    RegexAst::Epsilon,
                    RegexAst::sigma_star(&al),
                )
            })
            .collect();
        Csrs::new(al, rules).unwrap()
    }

    #[test]
    fn anchored_rule_applies_only_at_the_start() {
        let c = anchored(&[("a a", "a")]);
        assert!(c.is_prefix_anchored());
        let got = c.single_step(&w("a a b")).unwrap();
        assert_eq!(got, BTreeSet::from([w("a b")]));
        assert!(c.single_step(&w("b a a")).unwrap().is_empty());
    }

    #[test]
    fn empty_suffix_context_never_applies() {
        let al = ab();
        let rule = ControlledRule::new(
            w("a"),
            w("b"),
            RegexAst::sigma_star(&al),
            RegexAst::EmptySet,
        );
        let c = Csrs::new(al, vec![rule]).unwrap();
        assert!(c.single_step(&w("a a")).unwrap().is_empty());
    }

    #[test]
    fn partial_dfa_style_rules_rewrite_prefixes() {
        // Encoding of the two-state machine with access words {eps, a}:
        // b -> eps, a a -> a, a b -> a, all anchored at the start.
        let c = anchored(&[("b", ""), ("a a", "a"), ("a b", "a")]);
        let got = c.single_step(&w("b a")).unwrap();
        assert_eq!(got, BTreeSet::from([w("a")]));
        let nf = c
            .normal_form(&w("b b a"), c.default_step_budget(&w("b b a")))
            .unwrap();
        assert_eq!(nf, w("a"));
    }

    #[test]
    fn empty_csrs_is_identity() {
        let c = Csrs::new(ab(), vec![]).unwrap();
        let word = w("a b a");
        assert_eq!(c.normal_form(&word, 5).unwrap(), word);
    }

    #[test]
    fn embedded_plain_rules_match_plain_engine() {
        let al = ab();
        let srs = Srs::new(al.clone(), vec![(w("b a"), w("a b"))]).unwrap();
        let c = Csrs::from_srs(&srs);
        assert!(c.is_plain());
        let word = w("b b a a");
        let budget = srs.default_step_budget(&word);
        assert_eq!(
            c.normal_form(&word, budget).unwrap(),
            srs.normal_form(&word, budget).unwrap()
        );
    }

    #[test]
    fn general_contexts_are_evaluated() {
        // a -> b, but only when preceded by exactly `b` and followed by a
        // word in a*.
        let al = ab();
        let b = RegexAst::symbol(al.symbol("b").unwrap());
        let a_star = RegexAst::star(RegexAst::symbol(al.symbol("a").unwrap()));
        let rule = ControlledRule::new(w("a"), w("b"), b, a_star);
        let c = Csrs::new(al, vec![rule]).unwrap();
        let got = c.single_step(&w("b a a")).unwrap();
        assert_eq!(got, BTreeSet::from([w("b b a")]));
        assert!(c.single_step(&w("a a b")).unwrap().is_empty());
    }
}
