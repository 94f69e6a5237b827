use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

/// Index of a state inside an automaton.
pub type StateId = usize;

/// A symbol is an index into an [`Alphabet`]. Symbols are ordered by their
/// index, which realizes the total order of the alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered, finite set of tokens. Tokens are non-empty and contain no
/// whitespace, so words can always be written as space-separated tokens
/// (this is what allows tuple symbols like `(1,0,1)` to be single letters).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::InvalidInput("alphabet must be non-empty".into()));
        }
        let mut index = HashMap::new();
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::InvalidInput(format!(
                    "invalid alphabet token `{t}`: tokens must be non-empty and whitespace-free"
                )));
            }
            if index.insert(t.clone(), Symbol(i as u32)).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate alphabet token `{t}`"
                )));
            }
        }
        Ok(Alphabet { tokens, index })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty alphabets
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.tokens.len()).map(|i| Symbol(i as u32))
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn symbol(&self, token: &str) -> Option<Symbol> {
        self.index.get(token).copied()
    }

    pub fn token(&self, s: Symbol) -> &str {
        &self.tokens[s.index()]
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.tokens.len()
    }

    /// Checks that every symbol of `w` is a symbol of this alphabet.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        for &s in w.symbols() {
            if !self.contains(s) {
                return Err(Error::ForeignSymbol {
                    id: s.index(),
                    size: self.len(),
                });
            }
        }
        Ok(())
    }

    /// Parses a whitespace-separated token sequence. An empty (or
    /// all-whitespace) string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            match self.symbol(tok) {
                Some(s) => out.push(s),
                None => return Err(Error::UnknownToken(tok.to_string())),
            }
        }
        Ok(Word(out))
    }

    /// Renders a word as space-separated tokens; the empty word renders as "".
    pub fn format_word(&self, w: &Word) -> String {
        w.symbols()
            .iter()
            .map(|&s| self.token(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A finite sequence of symbols, possibly empty.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub const fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn singleton(s: Symbol) -> Self {
        Word(vec![s])
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extended(&self, s: Symbol) -> Word {
        let mut w = self.clone();
        w.push(s);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The subword at `range`, as an owned word.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// All prefixes from the empty word up to the full word.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.len()).map(move |i| self.slice(0..i))
    }

    /// All suffixes from the full word down to the empty word.
    pub fn suffixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.len()).map(move |i| self.slice(i..self.len()))
    }

    /// Two-pointer subsequence test: does `self` embed into `other` keeping
    /// order?
    pub fn is_subsequence_of(&self, other: &Word) -> bool {
        let mut it = self.0.iter();
        let mut next = it.next();
        for s in &other.0 {
            match next {
                None => return true,
                Some(n) if n == s => next = it.next(),
                Some(_) => {}
            }
        }
        next.is_none()
    }

    /// Length-lexicographic comparison (shorter first, ties by symbol order).
    /// This is the word order used for tie-breaking throughout the crate.
    pub fn length_lex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "#{}", s.0)?;
        }
        Ok(())
    }
}
