use std::collections::BTreeSet;

use super::alphabet::{Alphabet, Symbol, Word};

/// Regular expressions over an alphabet: empty set, empty word, single
/// symbols, concatenation, alternation and Kleene star.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RegexAst {
    EmptySet,
    Epsilon,
    Symbol(Symbol),
    Concat(Box<RegexAst>, Box<RegexAst>),
    Alt(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
}

impl RegexAst {
    pub fn symbol(s: Symbol) -> Self {
        RegexAst::Symbol(s)
    }

    pub fn concat(a: RegexAst, b: RegexAst) -> Self {
        RegexAst::Concat(Box::new(a), Box::new(b))
    }

    pub fn alt(a: RegexAst, b: RegexAst) -> Self {
        RegexAst::Alt(Box::new(a), Box::new(b))
    }

    pub fn star(a: RegexAst) -> Self {
        RegexAst::Star(Box::new(a))
    }

    /// The expression matching exactly `w`.
    pub fn literal(w: &Word) -> Self {
        let mut syms = w.symbols().iter();
        match syms.next() {
            None => RegexAst::Epsilon,
            Some(&first) => syms.fold(RegexAst::Symbol(first), |acc, &s| {
                RegexAst::concat(acc, RegexAst::Symbol(s))
            }),
        }
    }

    /// The alternation of all letters, i.e. the expression for the alphabet
    /// itself.
    pub fn sigma(alphabet: &Alphabet) -> Self {
        let mut syms = alphabet.symbols();
        let first = RegexAst::Symbol(syms.next().expect("alphabets are non-empty"));
        syms.fold(first, |acc, s| RegexAst::alt(acc, RegexAst::Symbol(s)))
    }

    /// The universal expression over `alphabet`.
    pub fn sigma_star(alphabet: &Alphabet) -> Self {
        RegexAst::star(RegexAst::sigma(alphabet))
    }

    /// Does the language contain the empty word?
    pub fn nullable(&self) -> bool {
        match self {
            RegexAst::EmptySet | RegexAst::Symbol(_) => false,
            RegexAst::Epsilon | RegexAst::Star(_) => true,
            RegexAst::Concat(a, b) => a.nullable() && b.nullable(),
            RegexAst::Alt(a, b) => a.nullable() || b.nullable(),
        }
    }

    /// Is the language empty?
    pub fn is_empty_language(&self) -> bool {
        match self {
            RegexAst::EmptySet => true,
            RegexAst::Epsilon | RegexAst::Symbol(_) | RegexAst::Star(_) => false,
            RegexAst::Concat(a, b) => a.is_empty_language() || b.is_empty_language(),
            RegexAst::Alt(a, b) => a.is_empty_language() && b.is_empty_language(),
        }
    }

    fn language_within_epsilon(&self) -> bool {
        match self {
            RegexAst::EmptySet | RegexAst::Epsilon => true,
            RegexAst::Symbol(_) => false,
            RegexAst::Concat(a, b) => {
                self.is_empty_language()
                    || (a.language_within_epsilon() && b.language_within_epsilon())
            }
            RegexAst::Alt(a, b) => a.language_within_epsilon() && b.language_within_epsilon(),
            RegexAst::Star(a) => a.language_within_epsilon(),
        }
    }

    /// Is the language exactly `{epsilon}`? Used as a fast path for
    /// position-anchored rewriting contexts.
    pub fn matches_only_epsilon(&self) -> bool {
        self.nullable() && self.language_within_epsilon()
    }

    /// Syntactic check for the universal-language shape `(a1 + ... + an)*`
    /// covering the whole alphabet. A fast path, not a decision procedure.
    pub fn is_sigma_star(&self, alphabet: &Alphabet) -> bool {
        match self {
            RegexAst::Star(body) => match body.alt_symbol_set() {
                Some(set) => set.len() == alphabet.len(),
                None => false,
            },
            _ => false,
        }
    }

    fn alt_symbol_set(&self) -> Option<BTreeSet<Symbol>> {
        match self {
            RegexAst::Symbol(s) => Some(BTreeSet::from([*s])),
            RegexAst::Alt(a, b) => {
                let mut set = a.alt_symbol_set()?;
                set.extend(b.alt_symbol_set()?);
                Some(set)
            }
            _ => None,
        }
    }

    /// Rough size measure: number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            RegexAst::EmptySet | RegexAst::Epsilon | RegexAst::Symbol(_) => 1,
            RegexAst::Concat(a, b) | RegexAst::Alt(a, b) => 1 + a.size() + b.size(),
            RegexAst::Star(a) => 1 + a.size(),
        }
    }
}
