//! Line-based text formats for automata and rewriting systems, plus the
//! regex grammar used by controlled rules.
//!
//! Automaton files:
//! ```text
//! # comment
//! alphabet: a b c
//! states: 3
//! initial: 0
//! accepting: 0 2
//! trans: 0 a 1
//! ```
//! Mealy machines add an `outputs:` header and one `out: <state> <symbol>
//! <output>` line per transition. Missing transitions are rejected unless
//! the caller opts into sink completion or partial loading.
//!
//! Rewriting systems are one rule per line, `LHS -> RHS`, words written as
//! space-separated tokens with `_` for the empty word; controlled rules
//! append `| ex = REGEX | ey = REGEX`. An optional `alphabet:` header makes
//! files self-contained; without it the alphabet is inferred from the rule
//! tokens, sorted lexicographically. Regexes are token sequences where
//! `(`, `)`, `+`, `*` have the usual meaning, `~` is the empty word, `!`
//! the empty set, and `.` abbreviates the whole alphabet.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use srslearn::automata::{Alphabet, Dfa, MealyMachine, RegexAst, StateId, Symbol, Word};
use srslearn::generators::PartialDfa;
use srslearn::rewriting::{ControlledRule, Csrs, Srs};
use srslearn::Error;

pub type Result<T> = std::result::Result<T, Error>;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::InvalidInput(format!("line {line}: {}", message.into()))
}

/// How to treat missing transitions when loading an automaton.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Completion {
    /// Reject files with undefined transitions.
    Reject,
    /// Add an explicit rejecting sink state and route undefined transitions
    /// to it.
    WithSink,
    /// Keep the transition map partial.
    AllowPartial,
}

#[derive(Clone, Debug)]
pub enum LoadedAutomaton {
    Dfa(Dfa),
    Mealy(MealyMachine),
    Partial(PartialDfa),
}

struct RawAutomaton {
    alphabet: Option<Alphabet>,
    outputs: Option<Alphabet>,
    states: Option<usize>,
    initial: Option<StateId>,
    accepting: Vec<StateId>,
    trans: Vec<(usize, StateId, String, StateId)>,
    out: Vec<(usize, StateId, String, String)>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

pub fn parse_automaton(text: &str, completion: Completion) -> Result<LoadedAutomaton> {
    let mut raw = RawAutomaton {
        alphabet: None,
        outputs: None,
        states: None,
        initial: None,
        accepting: Vec::new(),
        trans: Vec::new(),
        out: Vec::new(),
    };
    for (no, line) in content_lines(text) {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_error(no, format!("expected `key: ...`, found `{line}`")))?;
        let rest = rest.trim();
        match key.trim() {
            "alphabet" => {
                raw.alphabet = Some(
                    Alphabet::new(rest.split_whitespace())
                        .map_err(|e| parse_error(no, e.to_string()))?,
                );
            }
            "outputs" => {
                raw.outputs = Some(
                    Alphabet::new(rest.split_whitespace())
                        .map_err(|e| parse_error(no, e.to_string()))?,
                );
            }
            "states" => {
                raw.states = Some(
                    rest.parse()
                        .map_err(|_| parse_error(no, format!("invalid state count `{rest}`")))?,
                );
            }
            "initial" => {
                raw.initial = Some(
                    rest.parse()
                        .map_err(|_| parse_error(no, format!("invalid initial state `{rest}`")))?,
                );
            }
            "accepting" => {
                for tok in rest.split_whitespace() {
                    raw.accepting.push(tok.parse().map_err(|_| {
                        parse_error(no, format!("invalid accepting state `{tok}`"))
                    })?);
                }
            }
            "trans" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(parse_error(
                        no,
                        "expected `trans: <state> <symbol> <state>`",
                    ));
                }
                let from = parts[0]
                    .parse()
                    .map_err(|_| parse_error(no, format!("invalid state `{}`", parts[0])))?;
                let to = parts[2]
                    .parse()
                    .map_err(|_| parse_error(no, format!("invalid state `{}`", parts[2])))?;
                raw.trans.push((no, from, parts[1].to_string(), to));
            }
            "out" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(parse_error(no, "expected `out: <state> <symbol> <output>`"));
                }
                let from = parts[0]
                    .parse()
                    .map_err(|_| parse_error(no, format!("invalid state `{}`", parts[0])))?;
                raw.out
                    .push((no, from, parts[1].to_string(), parts[2].to_string()));
            }
            other => return Err(parse_error(no, format!("unknown header `{other}`"))),
        }
    }

    let alphabet = raw
        .alphabet
        .ok_or_else(|| Error::InvalidInput("missing `alphabet:` header".into()))?;
    let n = raw
        .states
        .ok_or_else(|| Error::InvalidInput("missing `states:` header".into()))?;
    let initial = raw
        .initial
        .ok_or_else(|| Error::InvalidInput("missing `initial:` header".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput(
            "an automaton needs at least one state".into(),
        ));
    }
    if initial >= n {
        return Err(Error::InvalidInput(format!(
            "initial state {initial} out of range (0..{n})"
        )));
    }

    let mut delta: Vec<Vec<Option<StateId>>> = vec![vec![None; alphabet.len()]; n];
    for (no, from, token, to) in &raw.trans {
        let sym = alphabet
            .symbol(token)
            .ok_or_else(|| parse_error(*no, format!("symbol `{token}` not in the alphabet")))?;
        if *from >= n || *to >= n {
            return Err(parse_error(*no, "transition state out of range"));
        }
        if delta[*from][sym.index()].replace(*to).is_some() {
            return Err(parse_error(*no, "duplicate transition"));
        }
    }
    let mut accepting = vec![false; n];
    for q in &raw.accepting {
        if *q >= n {
            return Err(Error::InvalidInput(format!(
                "accepting state {q} out of range"
            )));
        }
        accepting[*q] = true;
    }

    let mealy = raw.outputs.is_some() || !raw.out.is_empty();
    if mealy {
        let outputs = raw
            .outputs
            .ok_or_else(|| Error::InvalidInput("Mealy files need an `outputs:` header".into()))?;
        let mut lambda: Vec<Vec<Option<Symbol>>> = vec![vec![None; alphabet.len()]; n];
        for (no, from, token, output) in &raw.out {
            let sym = alphabet
                .symbol(token)
                .ok_or_else(|| parse_error(*no, format!("symbol `{token}` not in the alphabet")))?;
            let out = outputs
                .symbol(output)
                .ok_or_else(|| parse_error(*no, format!("output `{output}` not in the outputs")))?;
            if *from >= n {
                return Err(parse_error(*no, "state out of range"));
            }
            if lambda[*from][sym.index()].replace(out).is_some() {
                return Err(parse_error(*no, "duplicate output entry"));
            }
        }
        let mut delta_total = Vec::with_capacity(n);
        let mut lambda_total = Vec::with_capacity(n);
        for q in 0..n {
            let mut drow = Vec::with_capacity(alphabet.len());
            let mut lrow = Vec::with_capacity(alphabet.len());
            for a in alphabet.symbols() {
                let d = delta[q][a.index()].ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "missing transition ({q}, {}): Mealy machines must be total",
                        alphabet.token(a)
                    ))
                })?;
                let l = lambda[q][a.index()].ok_or_else(|| {
                    Error::InvalidInput(format!("missing output ({q}, {})", alphabet.token(a)))
                })?;
                drow.push(d);
                lrow.push(l);
            }
            delta_total.push(drow);
            lambda_total.push(lrow);
        }
        return Ok(LoadedAutomaton::Mealy(MealyMachine::new(
            alphabet,
            outputs,
            initial,
            delta_total,
            lambda_total,
        )?));
    }

    let missing = delta.iter().any(|row| row.iter().any(Option::is_none));
    match completion {
        Completion::AllowPartial => Ok(LoadedAutomaton::Partial(PartialDfa::new(
            alphabet, initial, accepting, delta,
        )?)),
        Completion::Reject if missing => Err(Error::InvalidInput(
            "missing transitions (pass --complete-with-sink to add an explicit sink)".into(),
        )),
        Completion::Reject => {
            let total = delta
                .into_iter()
                .map(|row| row.into_iter().map(|t| t.expect("checked total")).collect())
                .collect();
            Ok(LoadedAutomaton::Dfa(Dfa::new(
                alphabet, initial, accepting, total,
            )?))
        }
        Completion::WithSink => {
            let (delta, accepting) = if missing {
                let sink = n;
                let mut total: Vec<Vec<StateId>> = delta
                    .into_iter()
                    .map(|row| row.into_iter().map(|t| t.unwrap_or(sink)).collect())
                    .collect();
                total.push(vec![sink; alphabet.len()]);
                let mut acc = accepting;
                acc.push(false);
                (total, acc)
            } else {
                (
                    delta
                        .into_iter()
                        .map(|row| row.into_iter().map(|t| t.expect("total")).collect())
                        .collect(),
                    accepting,
                )
            };
            Ok(LoadedAutomaton::Dfa(Dfa::new(
                alphabet, initial, accepting, delta,
            )?))
        }
    }
}

pub fn serialize_dfa(d: &Dfa) -> String {
    let mut s = String::new();
    let al = d.alphabet();
    let _ = writeln!(s, "alphabet: {}", al.tokens().join(" "));
    let _ = writeln!(s, "states: {}", d.state_count());
    let _ = writeln!(s, "initial: {}", d.initial());
    let acc: Vec<String> = d.accepting_states().map(|q| q.to_string()).collect();
    let _ = writeln!(s, "accepting: {}", acc.join(" "));
    for q in 0..d.state_count() {
        for a in al.symbols() {
            let _ = writeln!(s, "trans: {q} {} {}", al.token(a), d.step(q, a));
        }
    }
    s
}

pub fn serialize_partial(b: &PartialDfa) -> String {
    let mut s = String::new();
    let al = b.alphabet();
    let _ = writeln!(s, "alphabet: {}", al.tokens().join(" "));
    let _ = writeln!(s, "states: {}", b.state_count());
    let _ = writeln!(s, "initial: {}", b.initial());
    let acc: Vec<String> = (0..b.state_count())
        .filter(|&q| b.is_accepting(q))
        .map(|q| q.to_string())
        .collect();
    let _ = writeln!(s, "accepting: {}", acc.join(" "));
    for (q, a, t) in b.defined_transitions() {
        let _ = writeln!(s, "trans: {q} {} {t}", al.token(a));
    }
    s
}

pub fn serialize_mealy(m: &MealyMachine) -> String {
    let mut s = String::new();
    let al = m.input_alphabet();
    let _ = writeln!(s, "alphabet: {}", al.tokens().join(" "));
    let _ = writeln!(s, "outputs: {}", m.output_alphabet().tokens().join(" "));
    let _ = writeln!(s, "states: {}", m.state_count());
    let _ = writeln!(s, "initial: {}", m.initial());
    for q in 0..m.state_count() {
        for a in al.symbols() {
            let _ = writeln!(s, "trans: {q} {} {}", al.token(a), m.step(q, a));
        }
    }
    for q in 0..m.state_count() {
        for a in al.symbols() {
            let _ = writeln!(
                s,
                "out: {q} {} {}",
                al.token(a),
                m.output_alphabet().token(m.output(q, a))
            );
        }
    }
    s
}

/// A word in rule/argument notation: `_` for the empty word.
pub fn parse_rule_word(alphabet: &Alphabet, text: &str) -> Result<Word> {
    if text.trim() == "_" {
        return Ok(Word::empty());
    }
    alphabet.parse_word(text)
}

pub fn format_rule_word(alphabet: &Alphabet, w: &Word) -> String {
    if w.is_empty() {
        "_".to_string()
    } else {
        alphabet.format_word(w)
    }
}

#[derive(Clone, Debug)]
pub enum LoadedAdvice {
    Plain(Srs),
    Controlled(Csrs),
}

/// Parses an SRS or cSRS file; rules with `|` context clauses make the
/// whole system controlled. `one_sided` permits empty left-hand sides.
///
/// Files may carry their own `alphabet:` header; without one, the alphabet
/// of the automaton the advice accompanies (`companion`) is used, and as a
/// last resort the alphabet is inferred from the rule tokens in
/// lexicographic order.
pub fn parse_advice(
    text: &str,
    one_sided: bool,
    companion: Option<&Alphabet>,
) -> Result<LoadedAdvice> {
    let mut alphabet: Option<Alphabet> = None;
    let mut rule_lines = Vec::new();
    for (no, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("alphabet:") {
            alphabet = Some(
                Alphabet::new(rest.split_whitespace())
                    .map_err(|e| parse_error(no, e.to_string()))?,
            );
        } else {
            rule_lines.push((no, line));
        }
    }
    let alphabet = match (alphabet, companion) {
        (Some(a), _) => a,
        (None, Some(a)) => a.clone(),
        (None, None) => infer_alphabet(&rule_lines)?,
    };

    let controlled = rule_lines.iter().any(|(_, l)| l.contains('|'));
    if controlled {
        let mut rules = Vec::new();
        for (no, line) in rule_lines {
            rules.push(parse_controlled_rule(&alphabet, no, line)?);
        }
        Ok(LoadedAdvice::Controlled(Csrs::new(alphabet, rules)?))
    } else {
        let mut rules = Vec::new();
        for (no, line) in rule_lines {
            let (lhs, rhs) = split_rule(no, line)?;
            rules.push((
                parse_rule_word(&alphabet, lhs).map_err(|e| parse_error(no, e.to_string()))?,
                parse_rule_word(&alphabet, rhs).map_err(|e| parse_error(no, e.to_string()))?,
            ));
        }
        let srs = if one_sided {
            Srs::one_sided(alphabet, rules)?
        } else {
            Srs::new(alphabet, rules)?
        };
        Ok(LoadedAdvice::Plain(srs))
    }
}

fn infer_alphabet(rule_lines: &[(usize, &str)]) -> Result<Alphabet> {
    let mut tokens = BTreeSet::new();
    for (_, line) in rule_lines {
        let words = line.split('|').next().unwrap_or("");
        for side in words.split("->") {
            for tok in side.split_whitespace() {
                if tok != "_" {
                    tokens.insert(tok.to_string());
                }
            }
        }
    }
    if tokens.is_empty() {
        return Err(Error::InvalidInput(
            "cannot infer an alphabet from an empty rule set; add an `alphabet:` header".into(),
        ));
    }
    Alphabet::new(tokens)
}

fn split_rule(no: usize, line: &str) -> Result<(&str, &str)> {
    line.split_once("->")
        .ok_or_else(|| parse_error(no, "expected `LHS -> RHS`"))
}

fn parse_controlled_rule(alphabet: &Alphabet, no: usize, line: &str) -> Result<ControlledRule> {
    let mut parts = line.split('|').map(str::trim);
    let rule = parts.next().expect("split yields at least one part");
    let (lhs, rhs) = split_rule(no, rule)?;
    let mut prefix = RegexAst::sigma_star(alphabet);
    let mut suffix = RegexAst::sigma_star(alphabet);
    for clause in parts {
        let (key, value) = clause
            .split_once('=')
            .ok_or_else(|| parse_error(no, "expected `ex = REGEX` or `ey = REGEX`"))?;
        let regex =
            parse_regex(alphabet, value.trim()).map_err(|e| parse_error(no, e.to_string()))?;
        match key.trim() {
            "ex" => prefix = regex,
            "ey" => suffix = regex,
            other => return Err(parse_error(no, format!("unknown context `{other}`"))),
        }
    }
    Ok(ControlledRule::new(
        parse_rule_word(alphabet, lhs).map_err(|e| parse_error(no, e.to_string()))?,
        parse_rule_word(alphabet, rhs).map_err(|e| parse_error(no, e.to_string()))?,
        prefix,
        suffix,
    ))
}

pub fn serialize_srs(srs: &Srs) -> String {
    let mut s = String::new();
    let al = srs.alphabet();
    let _ = writeln!(s, "alphabet: {}", al.tokens().join(" "));
    for rule in srs.rules() {
        let _ = writeln!(
            s,
            "{} -> {}",
            format_rule_word(al, rule.lhs()),
            format_rule_word(al, rule.rhs())
        );
    }
    s
}

pub fn serialize_csrs(csrs: &Csrs) -> String {
    let mut s = String::new();
    let al = csrs.alphabet();
    let _ = writeln!(s, "alphabet: {}", al.tokens().join(" "));
    for rule in csrs.rules() {
        let _ = writeln!(
            s,
            "{} -> {} | ex = {} | ey = {}",
            format_rule_word(al, rule.lhs()),
            format_rule_word(al, rule.rhs()),
            format_regex(al, rule.prefix_ctx()),
            format_regex(al, rule.suffix_ctx()),
        );
    }
    s
}

// --- regex grammar ---

pub fn parse_regex(alphabet: &Alphabet, text: &str) -> Result<RegexAst> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::InvalidInput("empty regular expression".into()));
    }
    let mut parser = RegexParser {
        alphabet,
        tokens,
        pos: 0,
    };
    let ast = parser.alternation()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::InvalidInput(format!(
            "unexpected `{}` in regular expression",
            parser.tokens[parser.pos]
        )));
    }
    Ok(ast)
}

struct RegexParser<'a> {
    alphabet: &'a Alphabet,
    tokens: Vec<&'a str>,
    pos: usize,
}

impl<'a> RegexParser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).copied()
    }

    fn alternation(&mut self) -> Result<RegexAst> {
        let mut acc = self.concatenation()?;
        while self.peek() == Some("+") {
            self.pos += 1;
            let rhs = self.concatenation()?;
            acc = RegexAst::alt(acc, rhs);
        }
        Ok(acc)
    }

    fn concatenation(&mut self) -> Result<RegexAst> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(t) if t != "+" && t != ")") {
            let rhs = self.factor()?;
            acc = RegexAst::concat(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RegexAst> {
        let mut atom = self.atom()?;
        while self.peek() == Some("*") {
            self.pos += 1;
            atom = RegexAst::star(atom);
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<RegexAst> {
        let tok = self
            .peek()
            .ok_or_else(|| Error::InvalidInput("regular expression ends unexpectedly".into()))?;
        self.pos += 1;
        match tok {
            "(" => {
                let inner = self.alternation()?;
                if self.peek() != Some(")") {
                    return Err(Error::InvalidInput(
                        "unbalanced `(` in regular expression".into(),
                    ));
                }
                self.pos += 1;
                Ok(inner)
            }
            ")" => Err(Error::InvalidInput(
                "unexpected `)` in regular expression".into(),
            )),
            "*" => Err(Error::InvalidInput("`*` needs something to repeat".into())),
            "+" => Err(Error::InvalidInput("`+` needs a left operand".into())),
            "~" => Ok(RegexAst::Epsilon),
            "!" => Ok(RegexAst::EmptySet),
            "." => Ok(RegexAst::sigma(self.alphabet)),
            token => self
                .alphabet
                .symbol(token)
                .map(RegexAst::symbol)
                .ok_or_else(|| Error::UnknownToken(token.to_string())),
        }
    }
}

pub fn format_regex(alphabet: &Alphabet, e: &RegexAst) -> String {
    // Precedence: alternation 0, concatenation 1, star operand 2.
    fn go(alphabet: &Alphabet, e: &RegexAst, prec: u8, out: &mut String) {
        match e {
            RegexAst::EmptySet => out.push('!'),
            RegexAst::Epsilon => out.push('~'),
            RegexAst::Symbol(s) => out.push_str(alphabet.token(*s)),
            RegexAst::Alt(a, b) => {
                let need = prec > 0;
                if need {
                    out.push_str("( ");
                }
                go(alphabet, a, 0, out);
                out.push_str(" + ");
                go(alphabet, b, 1, out);
                if need {
                    out.push_str(" )");
                }
            }
            RegexAst::Concat(a, b) => {
                let need = prec > 1;
                if need {
                    out.push_str("( ");
                }
                go(alphabet, a, 1, out);
                out.push(' ');
                go(alphabet, b, 2, out);
                if need {
                    out.push_str(" )");
                }
            }
            RegexAst::Star(a) => {
                go(alphabet, a, 2, out);
                out.push_str(" *");
            }
        }
    }
    let mut s = String::new();
    go(alphabet, e, 0, &mut s);
    s
}
