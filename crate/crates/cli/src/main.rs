use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use srslearn::advice::{ConsistencyVerdict, Polarity};
use srslearn::automata::{Alphabet, Word};
use srslearn::generators::{
    self, bitadd_srs, convolution, encode_partial_dfa, idempotent_srs, independence_srs,
    make_letter_idempotent, pattern_dfa, prune_transitions, random_dfa, synchronizing_srs,
    upward_closure_srs, PatternMode,
};
use srslearn::harness::{BenchScenario, ScenarioConfig};
use srslearn::learner::{CexProcessing, InitialTests, LearnerConfig};
use srslearn::rewriting::Srs;
use srslearn::Error;

use srslearn_cli::commands::{self, LearnSettings, ModeFlag};
use srslearn_cli::format::{
    self, parse_advice, parse_automaton, serialize_csrs, serialize_dfa, serialize_partial,
    serialize_srs, Completion, LoadedAdvice, LoadedAutomaton,
};

/// Active automata learning with rewriting advice: learning runs against
/// simulated teachers, consistency checks, normal forms, generators, and a
/// paired benchmark harness.
#[derive(Parser)]
#[command(name = "srslearn", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn the language of an automaton file with a simulated teacher.
    Learn(LearnArgs),
    /// Run a benchmark scenario and print the paired-trial CSV.
    Bench(BenchArgs),
    /// Check consistency of a rewriting system with a DFA's language.
    Check(CheckArgs),
    /// Print the normal form and the rewrite trace of a word.
    Normalize(NormalizeArgs),
    /// Generate target automata and advice systems.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ModeArg {
    None,
    TwoSided,
    Csrs,
    Positive,
    Negative,
    Upward,
}

impl From<ModeArg> for ModeFlag {
    fn from(m: ModeArg) -> ModeFlag {
        match m {
            ModeArg::None => ModeFlag::None,
            ModeArg::TwoSided => ModeFlag::TwoSided,
            ModeArg::Csrs => ModeFlag::Csrs,
            ModeArg::Positive => ModeFlag::Positive,
            ModeArg::Negative => ModeFlag::Negative,
            ModeArg::Upward => ModeFlag::Upward,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum InitTestsArg {
    EpsilonOnly,
    EpsilonPlusAlphabet,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum CexArg {
    Prefixes,
    Suffixes,
}

#[derive(Args)]
struct LearnArgs {
    /// Target automaton file (DFA, or Mealy when it has an `outputs:` header).
    target: PathBuf,
    /// Advice file (SRS or cSRS), required by the advice modes.
    advice: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "epsilon-plus-alphabet")]
    init_tests: InitTestsArg,
    #[arg(long, value_enum, default_value = "prefixes")]
    cex: CexArg,
    /// Cross-check every inferred answer against the real teacher.
    #[arg(long)]
    shadow: bool,
    /// Write the learned automaton here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the run record here instead of stdout.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Complete a partial target with an explicit rejecting sink.
    #[arg(long)]
    complete_with_sink: bool,
    /// Use the membership cache even without a convergence proof.
    #[arg(long)]
    assume_convergent: bool,
    /// Use non-convergent advice for equivalence inference only.
    #[arg(long)]
    eq_only: bool,
    #[arg(long, default_value_t = 10_000)]
    max_rounds: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// One of: idempotent, conv-pattern, conv-random, conv-shared, bitadd,
    /// partial-csrs.
    scenario: String,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    min_states: usize,
    #[arg(long, default_value_t = 300)]
    max_states: usize,
    #[arg(long)]
    shadow: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum PolarityArg {
    TwoSided,
    Positive,
    Negative,
}

#[derive(Args)]
struct CheckArgs {
    /// Advice file (SRS or cSRS).
    advice: PathBuf,
    /// DFA file.
    target: PathBuf,
    #[arg(long, value_enum, default_value = "two-sided")]
    polarity: PolarityArg,
    #[arg(long)]
    complete_with_sink: bool,
}

#[derive(Args)]
struct NormalizeArgs {
    /// Advice file (SRS or cSRS).
    advice: PathBuf,
    /// The word, as space-separated tokens (`_` for the empty word).
    #[arg(required = true, num_args = 1..)]
    word: Vec<String>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// A uniformly random complete DFA.
    RandomDfa {
        #[arg(long, default_value_t = 50)]
        states: usize,
        #[arg(long, default_value = "a b c d")]
        alphabet: String,
        #[arg(long, default_value_t = 0.1)]
        accept_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also make this letter idempotent.
        #[arg(long)]
        idempotent_letter: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The minimal DFA of an infix-pattern language.
    Pattern {
        #[arg(long, default_value = "a b c d")]
        alphabet: String,
        /// Pattern words (repeatable).
        #[arg(long, required = true)]
        pattern: Vec<String>,
        /// any: some pattern occurs; all: every pattern occurs.
        #[arg(long, default_value = "any")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The convolution of the languages of two DFA files.
    Convolution {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 3-state bit-wise addition DFA.
    Bitadd {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep a random spanning subset of a DFA's transitions.
    Prune {
        target: PathBuf,
        #[arg(long)]
        keep: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a partial DFA as start-anchored controlled rewrite rules.
    EncodePartial {
        partial: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Advice builders.
    #[command(subcommand)]
    Advice(GenAdvice),
}

#[derive(Subcommand)]
enum GenAdvice {
    /// `u u -> u` for a word u.
    Idempotent {
        #[arg(long, default_value = "a b c d")]
        alphabet: String,
        #[arg(long, default_value = "a")]
        word: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Commutation rules for independent letter pairs, e.g. --pair "a b".
    Commutation {
        #[arg(long, default_value = "a b c d")]
        alphabet: String,
        #[arg(long, required = true)]
        pair: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Commutation of the private letters of two component DFA files.
    Conv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `a w -> w` for every letter a (w is a synchronizing word).
    Sync {
        #[arg(long, default_value = "a b c d")]
        alphabet: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The track-swap rules of the bit-wise addition language.
    Bitadd {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `_ -> a` for every letter a (one-sided, upward closure).
    Upward {
        #[arg(long, default_value = "a b c d")]
        alphabet: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::AdviceRejected(_)
        | Error::AdviceFailure(_)
        | Error::Divergence(_)
        | Error::StepBudgetExhausted { .. } => 3,
        _ => 2,
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_target(path: &PathBuf, completion: Completion) -> Result<LoadedAutomaton, Error> {
    parse_automaton(&read(path)?, completion)
}

fn load_advice(
    path: &PathBuf,
    one_sided: bool,
    companion: Option<&Alphabet>,
) -> Result<LoadedAdvice, Error> {
    parse_advice(&read(path)?, one_sided, companion)
}

fn automaton_alphabet(target: &LoadedAutomaton) -> Alphabet {
    match target {
        LoadedAutomaton::Dfa(d) => d.alphabet().clone(),
        LoadedAutomaton::Mealy(m) => m.input_alphabet().clone(),
        LoadedAutomaton::Partial(p) => p.alphabet().clone(),
    }
}

fn parse_alphabet(tokens: &str) -> Result<Alphabet, Error> {
    Alphabet::new(tokens.split_whitespace())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Learn(args) => {
            let completion = if args.complete_with_sink {
                Completion::WithSink
            } else {
                Completion::Reject
            };
            let target = load_target(&args.target, completion)?;
            let mode: ModeFlag = args.mode.into();
            let advice = match &args.advice {
                Some(path) => Some(load_advice(
                    path,
                    false,
                    Some(&automaton_alphabet(&target)),
                )?),
                None if mode.needs_advice_file() => {
                    return Err(Error::InvalidInput(format!(
                        "--mode {:?} needs an advice file",
                        args.mode
                    )))
                }
                None => None,
            };
            let settings = LearnSettings {
                mode,
                seed: args.seed,
                initial_tests: match args.init_tests {
                    InitTestsArg::EpsilonOnly => InitialTests::EpsilonOnly,
                    InitTestsArg::EpsilonPlusAlphabet => InitialTests::EpsilonPlusAlphabet,
                },
                cex: match args.cex {
                    CexArg::Prefixes => CexProcessing::AllPrefixes,
                    CexArg::Suffixes => CexProcessing::AllSuffixes,
                },
                max_rounds: args.max_rounds,
                shadow: args.shadow,
                assume_convergent: args.assume_convergent,
                eq_only: args.eq_only,
            };
            let target_name = args.target.display().to_string();
            match commands::learn(target, &target_name, advice, &settings) {
                Ok(outcome) => {
                    if let Some(path) = &args.out {
                        emit(Some(path), &outcome.automaton_text)?;
                    }
                    match &args.stats {
                        Some(path) => emit(Some(path), &format!("{}\n", outcome.record_line))?,
                        None => println!("{}", outcome.record_line),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e),
            }
        }
        Command::Bench(args) => {
            let scenario: BenchScenario = args.scenario.parse()?;
            let config = ScenarioConfig {
                trials: args.trials,
                seed_base: args.seed,
                min_states: args.min_states,
                max_states: args.max_states,
                shadow: args.shadow,
                learner: LearnerConfig::default(),
            };
            let csv = commands::bench(scenario, &config)?;
            emit(args.out.as_ref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let completion = if args.complete_with_sink {
                Completion::WithSink
            } else {
                Completion::Reject
            };
            let one_sided = args.polarity != PolarityArg::TwoSided;
            let target = load_target(&args.target, completion)?;
            let advice = load_advice(&args.advice, one_sided, Some(&automaton_alphabet(&target)))?;
            let polarity = match args.polarity {
                PolarityArg::TwoSided => None,
                PolarityArg::Positive => Some(Polarity::Positive),
                PolarityArg::Negative => Some(Polarity::Negative),
            };
            let alphabet = match &target {
                LoadedAutomaton::Dfa(d) => d.alphabet().clone(),
                _ => {
                    return Err(Error::InvalidInput(
                        "consistency checks need a complete DFA target".into(),
                    ))
                }
            };
            match commands::check(advice, target, polarity)? {
                ConsistencyVerdict::Consistent => {
                    println!("Consistent");
                    Ok(ExitCode::SUCCESS)
                }
                ConsistencyVerdict::Witness(x, y) => {
                    println!(
                        "Witness: {} / {}",
                        format::format_rule_word(&alphabet, &x),
                        format::format_rule_word(&alphabet, &y)
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Normalize(args) => {
            let advice = load_advice(&args.advice, false, None)?;
            let word_text = args.word.join(" ");
            let (nf, trace) = commands::normalize(&advice, &word_text)?;
            for line in &trace {
                println!("{line}");
            }
            println!("{nf}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen(command) => {
            gen(command)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn gen(command: GenCommand) -> Result<(), Error> {
    match command {
        GenCommand::RandomDfa {
            states,
            alphabet,
            accept_prob,
            seed,
            idempotent_letter,
            out,
        } => {
            let al = parse_alphabet(&alphabet)?;
            let mut dfa = random_dfa(states, &al, accept_prob, seed)?;
            if let Some(letter) = idempotent_letter {
                let sym = al
                    .symbol(letter.trim())
                    .ok_or_else(|| Error::UnknownToken(letter.clone()))?;
                dfa = make_letter_idempotent(&dfa, sym)?;
            }
            emit(out.as_ref(), &serialize_dfa(&dfa))
        }
        GenCommand::Pattern {
            alphabet,
            pattern,
            mode,
            out,
        } => {
            let al = parse_alphabet(&alphabet)?;
            let patterns: Vec<Word> = pattern
                .iter()
                .map(|p| al.parse_word(p))
                .collect::<Result<_, _>>()?;
            let mode = match mode.as_str() {
                "any" => PatternMode::Any,
                "all" => PatternMode::All,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown pattern mode `{other}` (use any or all)"
                    )))
                }
            };
            emit(
                out.as_ref(),
                &serialize_dfa(&pattern_dfa(&patterns, mode, &al)?),
            )
        }
        GenCommand::Convolution { left, right, out } => {
            let (LoadedAutomaton::Dfa(l), LoadedAutomaton::Dfa(r)) = (
                load_target(&left, Completion::Reject)?,
                load_target(&right, Completion::Reject)?,
            ) else {
                return Err(Error::InvalidInput(
                    "convolution takes two complete DFAs".into(),
                ));
            };
            emit(out.as_ref(), &serialize_dfa(&convolution(&l, &r)))
        }
        GenCommand::Bitadd { out } => emit(out.as_ref(), &serialize_dfa(&generators::bitadd_dfa())),
        GenCommand::Prune {
            target,
            keep,
            seed,
            out,
        } => {
            let LoadedAutomaton::Dfa(dfa) = load_target(&target, Completion::Reject)? else {
                return Err(Error::InvalidInput("prune takes a complete DFA".into()));
            };
            emit(
                out.as_ref(),
                &serialize_partial(&prune_transitions(&dfa, keep, seed)?),
            )
        }
        GenCommand::EncodePartial { partial, out } => {
            let loaded = load_target(&partial, Completion::AllowPartial)?;
            let partial = match loaded {
                LoadedAutomaton::Partial(p) => p,
                LoadedAutomaton::Dfa(d) => srslearn::generators::PartialDfa::from_dfa(&d),
                LoadedAutomaton::Mealy(_) => {
                    return Err(Error::InvalidInput("cannot encode a Mealy machine".into()))
                }
            };
            emit(
                out.as_ref(),
                &serialize_csrs(&encode_partial_dfa(&partial)?),
            )
        }
        GenCommand::Advice(advice) => gen_advice(advice),
    }
}

fn gen_advice(advice: GenAdvice) -> Result<(), Error> {
    let write_srs = |out: Option<&PathBuf>, srs: &Srs| emit(out, &serialize_srs(srs));
    match advice {
        GenAdvice::Idempotent {
            alphabet,
            word,
            out,
        } => {
            let al = parse_alphabet(&alphabet)?;
            let u = al.parse_word(&word)?;
            write_srs(out.as_ref(), &idempotent_srs(&al, &u)?)
        }
        GenAdvice::Commutation {
            alphabet,
            pair,
            out,
        } => {
            let al = parse_alphabet(&alphabet)?;
            let mut pairs = Vec::new();
            for p in &pair {
                let toks: Vec<&str> = p.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(Error::InvalidInput(format!(
                        "--pair takes two tokens, got `{p}`"
                    )));
                }
                let a = al
                    .symbol(toks[0])
                    .ok_or_else(|| Error::UnknownToken(toks[0].into()))?;
                let b = al
                    .symbol(toks[1])
                    .ok_or_else(|| Error::UnknownToken(toks[1].into()))?;
                pairs.push((a, b));
            }
            write_srs(out.as_ref(), &independence_srs(&al, &pairs)?)
        }
        GenAdvice::Conv { left, right, out } => {
            let (LoadedAutomaton::Dfa(l), LoadedAutomaton::Dfa(r)) = (
                load_target(&left, Completion::Reject)?,
                load_target(&right, Completion::Reject)?,
            ) else {
                return Err(Error::InvalidInput(
                    "conv advice takes two complete DFAs".into(),
                ));
            };
            write_srs(
                out.as_ref(),
                &srslearn::generators::convolution_srs(l.alphabet(), r.alphabet())?,
            )
        }
        GenAdvice::Sync {
            alphabet,
            word,
            out,
        } => {
            let al = parse_alphabet(&alphabet)?;
            let w = al.parse_word(&word)?;
            write_srs(out.as_ref(), &synchronizing_srs(&al, &w)?)
        }
        GenAdvice::Bitadd { out } => write_srs(out.as_ref(), &bitadd_srs()),
        GenAdvice::Upward { alphabet, out } => {
            let al = parse_alphabet(&alphabet)?;
            write_srs(out.as_ref(), &upward_closure_srs(&al))
        }
    }
}
