use crate::automata::Word;

use super::csrs::Csrs;
use super::srs::Srs;

/// A peak word with its two one-step reducts that could not be rejoined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalPair {
    pub peak: Word,
    pub left: Word,
    pub right: Word,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TerminationVerdict {
    Proved,
    Unknown,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LocalConfluenceVerdict {
    Proved,
    /// Both sides of this critical pair reached irreducible words that
    /// differ, so the peak has two distinct normal forms.
    Refuted(CriticalPair),
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConvergenceStatus {
    Proved,
    Unknown,
}

/// Best-effort convergence analysis. `convergent` is `Proved` only when both
/// termination and local confluence are proved (Newman's lemma); everything
/// the heuristics cannot settle stays `Unknown` rather than failing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvergenceVerdict {
    pub termination: TerminationVerdict,
    pub local_confluence: LocalConfluenceVerdict,
    pub convergent: ConvergenceStatus,
}

impl ConvergenceVerdict {
    pub fn is_convergent(&self) -> bool {
        self.convergent == ConvergenceStatus::Proved
    }

    fn assemble(termination: TerminationVerdict, local_confluence: LocalConfluenceVerdict) -> Self {
        let convergent = if termination == TerminationVerdict::Proved
            && local_confluence == LocalConfluenceVerdict::Proved
        {
            ConvergenceStatus::Proved
        } else {
            ConvergenceStatus::Unknown
        };
        ConvergenceVerdict {
            termination,
            local_confluence,
            convergent,
        }
    }
}

/// Termination is proved when every rule strictly decreases the well-founded
/// (length, lexicographic-by-symbol-order) measure; rewriting inside a
/// context preserves the strict decrease.
fn termination_by_length_lex(lhs: &Word, rhs: &Word) -> bool {
    lhs.len() > rhs.len() || (lhs.len() == rhs.len() && lhs > rhs)
}

/// Knuth-Bendix style convergence check for plain systems: length-lex
/// termination plus joinability of every critical pair.
pub fn check_convergence(r: &Srs) -> ConvergenceVerdict {
    let termination = if r
        .rules()
        .iter()
        .all(|rule| termination_by_length_lex(rule.lhs(), rule.rhs()))
    {
        TerminationVerdict::Proved
    } else {
        TerminationVerdict::Unknown
    };

    let pairs = plain_critical_pairs(r);
    let local_confluence = join_pairs(
        pairs,
        |w, budget| r.normal_form(w, budget).ok(),
        |w| r.default_step_budget(w),
    );
    ConvergenceVerdict::assemble(termination, local_confluence)
}

/// Convergence check for controlled systems. Plain embeddings reuse the
/// plain critical pairs; prefix-anchored systems (every rule applies only at
/// position zero) overlap exactly when one left-hand side is a prefix of
/// another. Anything with real regex contexts is reported unknown: overlap
/// analysis is not position-local there.
pub fn check_convergence_csrs(c: &Csrs) -> ConvergenceVerdict {
    let termination = if c
        .rules()
        .iter()
        .all(|rule| termination_by_length_lex(rule.lhs(), rule.rhs()))
    {
        TerminationVerdict::Proved
    } else {
        TerminationVerdict::Unknown
    };

    let local_confluence = if c.is_plain() {
        let pairs = plain_critical_pairs_from(
            &c.rules()
                .iter()
                .map(|r| (r.lhs().clone(), r.rhs().clone()))
                .collect::<Vec<_>>(),
        );
        join_pairs(
            pairs,
            |w, budget| c.normal_form(w, budget).ok(),
            |w| c.default_step_budget(w),
        )
    } else if c.is_prefix_anchored() {
        let pairs = anchored_critical_pairs(c);
        join_pairs(
            pairs,
            |w, budget| c.normal_form(w, budget).ok(),
            |w| c.default_step_budget(w),
        )
    } else if c.rules().is_empty() {
        LocalConfluenceVerdict::Proved
    } else {
        LocalConfluenceVerdict::Unknown
    };
    ConvergenceVerdict::assemble(termination, local_confluence)
}

fn join_pairs(
    pairs: Vec<CriticalPair>,
    nf: impl Fn(&Word, usize) -> Option<Word>,
    budget: impl Fn(&Word) -> usize,
) -> LocalConfluenceVerdict {
    let mut any_unknown = false;
    for pair in pairs {
        let b = budget(&pair.peak)
            .max(budget(&pair.left))
            .max(budget(&pair.right));
        match (nf(&pair.left, b), nf(&pair.right, b)) {
            (Some(l), Some(r)) if l == r => {}
            (Some(_), Some(_)) => return LocalConfluenceVerdict::Refuted(pair),
            _ => any_unknown = true,
        }
    }
    if any_unknown {
        LocalConfluenceVerdict::Unknown
    } else {
        LocalConfluenceVerdict::Proved
    }
}

fn plain_critical_pairs(r: &Srs) -> Vec<CriticalPair> {
    plain_critical_pairs_from(
        &r.rules()
            .iter()
            .map(|rule| (rule.lhs().clone(), rule.rhs().clone()))
            .collect::<Vec<_>>(),
    )
}

/// Overlaps and containments of left-hand sides, a rule with itself
/// included. The identical application (same rule, offset zero, full match)
/// is skipped: it is not a peak.
fn plain_critical_pairs_from(rules: &[(Word, Word)]) -> Vec<CriticalPair> {
    let mut out = Vec::new();
    for (i, (l1, r1)) in rules.iter().enumerate() {
        for (j, (l2, r2)) in rules.iter().enumerate() {
            let s1 = l1.symbols();
            let s2 = l2.symbols();
            for offset in 0..s1.len().max(1) {
                if i == j && offset == 0 {
                    continue;
                }
                if offset + s2.len() <= s1.len() {
                    // l2 contained in l1 at `offset`.
                    if &s1[offset..offset + s2.len()] == s2 {
                        let peak = l1.clone();
                        let left = r1.clone();
                        let mut right = Vec::new();
                        right.extend_from_slice(&s1[..offset]);
                        right.extend_from_slice(r2.symbols());
                        right.extend_from_slice(&s1[offset + s2.len()..]);
                        out.push(CriticalPair {
                            peak,
                            left,
                            right: Word::from_symbols(right),
                        });
                    }
                } else if offset < s1.len() {
                    // Proper overlap: the tail of l1 from `offset` is a
                    // prefix of l2.
                    let k = s1.len() - offset;
                    if k < s2.len() && s1[offset..] == s2[..k] {
                        let mut peak = Vec::new();
                        peak.extend_from_slice(s1);
                        peak.extend_from_slice(&s2[k..]);
                        let mut left = Vec::new();
                        left.extend_from_slice(r1.symbols());
                        left.extend_from_slice(&s2[k..]);
                        let mut right = Vec::new();
                        right.extend_from_slice(&s1[..offset]);
                        right.extend_from_slice(r2.symbols());
                        out.push(CriticalPair {
                            peak: Word::from_symbols(peak),
                            left: Word::from_symbols(left),
                            right: Word::from_symbols(right),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Critical pairs of a prefix-anchored system: both applications sit at
/// position zero, so the only peaks are words where one left-hand side is a
/// prefix of the other (equal sides of distinct rules included).
fn anchored_critical_pairs(c: &Csrs) -> Vec<CriticalPair> {
    let mut out = Vec::new();
    let rules = c.rules();
    for (i, a) in rules.iter().enumerate() {
        for (j, b) in rules.iter().enumerate() {
            if i == j {
                continue;
            }
            let la = a.lhs().symbols();
            let lb = b.lhs().symbols();
            if la.len() <= lb.len() && &lb[..la.len()] == la {
                let peak = b.lhs().clone();
                let mut left = Vec::new();
                left.extend_from_slice(a.rhs().symbols());
                left.extend_from_slice(&lb[la.len()..]);
                out.push(CriticalPair {
                    peak,
                    left: Word::from_symbols(left),
                    right: b.rhs().clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

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
    fn idempotent_rule_is_convergent() {
        let v = check_convergence(&srs(&[("a a", "a")]));
        assert_eq!(v.termination, TerminationVerdict::Proved);
        assert_eq!(v.local_confluence, LocalConfluenceVerdict::Proved);
        assert!(v.is_convergent());
        // The single critical pair comes from the self-overlap on `a a a`.
        let pairs = plain_critical_pairs(&srs(&[("a a", "a")]));
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].peak, ab().parse_word("a a a").unwrap());
    }

    #[test]
    fn two_cycle_has_unknown_termination() {
        let v = check_convergence(&srs(&[("a", "b"), ("b", "a")]));
        assert_eq!(v.termination, TerminationVerdict::Unknown);
        assert_eq!(v.convergent, ConvergenceStatus::Unknown);
    }

    #[test]
    fn commutation_rule_is_convergent() {
        // Same length, lexicographically decreasing (a < b), no overlaps.
        let v = check_convergence(&srs(&[("b a", "a b")]));
        assert_eq!(v.termination, TerminationVerdict::Proved);
        assert_eq!(v.local_confluence, LocalConfluenceVerdict::Proved);
        assert!(v.is_convergent());
    }

    #[test]
    fn genuinely_non_confluent_pair_is_refuted() {
        // a a -> a and a a -> b b: the peak a a has normal forms a and b b.
        let v = check_convergence(&srs(&[("a a", "a"), ("a a", "b b")]));
        assert!(matches!(
            v.local_confluence,
            LocalConfluenceVerdict::Refuted(_)
        ));
        assert_eq!(v.convergent, ConvergenceStatus::Unknown);
    }

    #[test]
    fn anchored_encoding_is_convergent() {
        use crate::automata::RegexAst;
        use crate::rewriting::csrs::{ControlledRule, Csrs};
        let al = ab();
        let w = |t: &str| al.parse_word(t).unwrap();
        let rules = vec![
            ControlledRule::new(w("b"), w(""), RegexAst::Epsilon, RegexAst::sigma_star(&al)),
            ControlledRule::new(
                w("a a"),
                w("a"),
                RegexAst::Epsilon,
                RegexAst::sigma_star(&al),
            ),
            ControlledRule::new(
                w("a b"),
                w("a"),
                RegexAst::Epsilon,
                RegexAst::sigma_star(&al),
            ),
        ];
        let c = Csrs::new(al, rules).unwrap();
        let v = check_convergence_csrs(&c);
        assert_eq!(v.termination, TerminationVerdict::Proved);
        assert_eq!(v.local_confluence, LocalConfluenceVerdict::Proved);
        assert!(v.is_convergent());
    }
}
