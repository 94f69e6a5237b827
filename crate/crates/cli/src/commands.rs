//! The work behind each subcommand, kept separate from argument parsing so
//! the integration tests can drive it directly.

use std::fmt::Write as _;

use srslearn::advice::{
    check_consistency, check_consistency_csrs, check_consistency_one_sided, AdviceLayer,
    AdviceMode, AdviceOptions, ConsistencyVerdict, MealyAdviceLayer, Polarity,
};
use srslearn::harness::{
    run_scenario, summarize, BenchScenario, PairedTrial, ScenarioConfig, SummaryStats,
};
use srslearn::learner::{
    lstar_learn, lstar_mealy, CexProcessing, InitialTests, LearnerConfig, QueryStats,
};
use srslearn::oracle::{SimulatedMealyTeacher, SimulatedTeacher};
use srslearn::rewriting::RewriteStep;
use srslearn::Error;

use crate::format::{
    format_rule_word, parse_rule_word, serialize_dfa, serialize_mealy, LoadedAdvice,
    LoadedAutomaton,
};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModeFlag {
    None,
    TwoSided,
    Csrs,
    Positive,
    Negative,
    Upward,
}

impl ModeFlag {
    pub fn needs_advice_file(self) -> bool {
        !matches!(self, ModeFlag::None | ModeFlag::Upward)
    }
}

pub fn advice_mode(flag: ModeFlag, advice: Option<LoadedAdvice>) -> Result<AdviceMode> {
    match (flag, advice) {
        (ModeFlag::None, _) => Ok(AdviceMode::None),
        (ModeFlag::Upward, _) => Ok(AdviceMode::UpwardClosed),
        (ModeFlag::TwoSided, Some(LoadedAdvice::Plain(srs))) => Ok(AdviceMode::TwoSided(srs)),
        (ModeFlag::TwoSided, Some(LoadedAdvice::Controlled(_))) => Err(Error::InvalidInput(
            "two-sided mode expects a plain rewriting system; use --mode csrs".into(),
        )),
        (ModeFlag::Csrs, Some(LoadedAdvice::Controlled(csrs))) => {
            Ok(AdviceMode::TwoSidedControlled(csrs))
        }
        (ModeFlag::Csrs, Some(LoadedAdvice::Plain(srs))) => Ok(AdviceMode::TwoSidedControlled(
            srslearn::rewriting::Csrs::from_srs(&srs),
        )),
        (ModeFlag::Positive, Some(LoadedAdvice::Plain(srs))) => Ok(AdviceMode::Positive(srs)),
        (ModeFlag::Negative, Some(LoadedAdvice::Plain(srs))) => Ok(AdviceMode::Negative(srs)),
        (ModeFlag::Positive | ModeFlag::Negative, Some(LoadedAdvice::Controlled(_))) => Err(
            Error::InvalidInput("one-sided modes take a plain rewriting system".into()),
        ),
        (flag, None) => Err(Error::InvalidInput(format!(
            "mode {flag:?} needs an advice file"
        ))),
    }
}

pub struct LearnOutcome {
    pub automaton_text: String,
    pub record_line: String,
    pub learned_states: usize,
    pub shadow_mismatches: u64,
    pub witness: Option<(String, String)>,
}

pub struct LearnSettings {
    pub mode: ModeFlag,
    pub seed: u64,
    pub initial_tests: InitialTests,
    pub cex: CexProcessing,
    pub max_rounds: usize,
    pub shadow: bool,
    pub assume_convergent: bool,
    pub eq_only: bool,
}

fn record_line(
    target: &str,
    mode: &str,
    settings: &LearnSettings,
    stats: QueryStats,
    learned: usize,
    wall_ms: u64,
    mismatches: u64,
) -> String {
    format!(
        "target={target} mode={mode} seed={} init_tests={} cex={} mq_asked={} mq_inferred={} \
         eq_asked={} eq_inferred={} cex_total_length={} learned_states={learned} wall_ms={wall_ms} \
         shadow_mismatches={mismatches}",
        settings.seed,
        match settings.initial_tests {
            InitialTests::EpsilonOnly => "epsilon-only",
            InitialTests::EpsilonPlusAlphabet => "epsilon-plus-alphabet",
        },
        match settings.cex {
            CexProcessing::AllPrefixes => "prefixes",
            CexProcessing::AllSuffixes => "suffixes",
        },
        stats.mq_asked,
        stats.mq_inferred,
        stats.eq_asked,
        stats.eq_inferred,
        stats.cex_total_length,
    )
}

/// Runs a learning session against a simulated teacher for the target in
/// the given file, through the advice layer.
pub fn learn(
    target: LoadedAutomaton,
    target_name: &str,
    advice: Option<LoadedAdvice>,
    settings: &LearnSettings,
) -> Result<LearnOutcome> {
    let config = LearnerConfig {
        initial_tests: settings.initial_tests,
        cex_processing: settings.cex,
        max_rounds: settings.max_rounds,
    };
    let options = AdviceOptions {
        assume_convergent: settings.assume_convergent,
        eq_only: settings.eq_only,
        shadow: settings.shadow,
    };
    match target {
        LoadedAutomaton::Partial(_) => Err(Error::InvalidInput(
            "learning needs a complete automaton (pass --complete-with-sink)".into(),
        )),
        LoadedAutomaton::Dfa(dfa) => {
            let mode = advice_mode(settings.mode, advice)?;
            let mode_label = mode.label().to_string();
            let alphabet = dfa.alphabet().clone();
            let teacher = SimulatedTeacher::new(dfa);
            let mut layer = AdviceLayer::new(teacher, alphabet.clone(), mode, options)?;
            let started = std::time::Instant::now();
            let outcome = lstar_learn(&mut layer, &alphabet, &config);
            let wall_ms = started.elapsed().as_millis() as u64;
            let witness = layer.last_witness().map(|(x, y)| {
                (
                    format_rule_word(&alphabet, x),
                    format_rule_word(&alphabet, y),
                )
            });
            let (learned, stats) = outcome?;
            Ok(LearnOutcome {
                automaton_text: serialize_dfa(&learned),
                record_line: record_line(
                    target_name,
                    &mode_label,
                    settings,
                    stats,
                    learned.state_count(),
                    wall_ms,
                    layer.shadow_mismatches(),
                ),
                learned_states: learned.state_count(),
                shadow_mismatches: layer.shadow_mismatches(),
                witness,
            })
        }
        LoadedAutomaton::Mealy(machine) => {
            let srs = match (settings.mode, advice) {
                (ModeFlag::None, _) => None,
                (ModeFlag::TwoSided, Some(LoadedAdvice::Plain(srs))) => Some(srs),
                (ModeFlag::TwoSided, _) => {
                    return Err(Error::InvalidInput(
                        "two-sided mode expects a plain rewriting system".into(),
                    ))
                }
                (other, _) => {
                    return Err(Error::AdviceRejected(format!(
                        "mode {other:?} is not defined for Mealy targets"
                    )))
                }
            };
            let mode_label = if srs.is_some() { "two-sided" } else { "none" };
            let alphabet = machine.input_alphabet().clone();
            let teacher = SimulatedMealyTeacher::new(machine);
            let mut layer = MealyAdviceLayer::new(teacher, alphabet.clone(), srs, options)?;
            let started = std::time::Instant::now();
            let outcome = lstar_mealy(&mut layer, &alphabet, &config);
            let wall_ms = started.elapsed().as_millis() as u64;
            let witness = layer.last_witness().map(|(x, y)| {
                (
                    format_rule_word(&alphabet, x),
                    format_rule_word(&alphabet, y),
                )
            });
            let (learned, stats) = outcome?;
            Ok(LearnOutcome {
                automaton_text: serialize_mealy(&learned),
                record_line: record_line(
                    target_name,
                    mode_label,
                    settings,
                    stats,
                    learned.state_count(),
                    wall_ms,
                    layer.shadow_mismatches(),
                ),
                learned_states: learned.state_count(),
                shadow_mismatches: layer.shadow_mismatches(),
                witness,
            })
        }
    }
}

/// The consistency check behind `check`: prints Consistent or the witness
/// pair; the caller maps the verdict to the exit code.
pub fn check(
    advice: LoadedAdvice,
    target: LoadedAutomaton,
    polarity: Option<Polarity>,
) -> Result<ConsistencyVerdict> {
    let LoadedAutomaton::Dfa(dfa) = target else {
        return Err(Error::InvalidInput(
            "consistency checks need a complete DFA target".into(),
        ));
    };
    match (advice, polarity) {
        (LoadedAdvice::Plain(srs), None) => check_consistency(&srs, &dfa),
        (LoadedAdvice::Plain(srs), Some(p)) => check_consistency_one_sided(&srs, &dfa, p),
        (LoadedAdvice::Controlled(csrs), None) => check_consistency_csrs(&csrs, &dfa),
        (LoadedAdvice::Controlled(_), Some(_)) => Err(Error::InvalidInput(
            "one-sided checks take a plain rewriting system".into(),
        )),
    }
}

type TracedReduction =
    Box<dyn Fn(&srslearn::automata::Word) -> Result<(srslearn::automata::Word, Vec<RewriteStep>)>>;

/// Normal form plus the printable rewrite trace.
pub fn normalize(advice: &LoadedAdvice, word_text: &str) -> Result<(String, Vec<String>)> {
    let (alphabet, run): (_, TracedReduction) = match advice {
        LoadedAdvice::Plain(srs) => {
            let srs = srs.clone();
            (
                srs.alphabet().clone(),
                Box::new(move |w| srs.normal_form_traced(w, srs.default_step_budget(w))),
            )
        }
        LoadedAdvice::Controlled(csrs) => {
            let csrs = csrs.clone();
            (
                csrs.alphabet().clone(),
                Box::new(move |w| csrs.normal_form_traced(w, csrs.default_step_budget(w))),
            )
        }
    };
    let word = parse_rule_word(&alphabet, word_text)?;
    let (nf, trace) = run(&word)?;
    let mut lines = Vec::with_capacity(trace.len());
    let mut current = word;
    for step in trace {
        lines.push(format!(
            "{} -> {}  (rule {} at position {})",
            format_rule_word(&alphabet, &current),
            format_rule_word(&alphabet, &step.result),
            step.rule,
            step.position
        ));
        current = step.result;
    }
    Ok((format_rule_word(&alphabet, &nf), lines))
}

pub const CSV_HEADER: &str = "scenario,trial,seed,target_states,mq_plain,eq_plain,mq_advice_asked,mq_advice_inferred,eq_advice_asked,eq_advice_inferred,mq_decrease_pct,eq_decrease_pct,wall_ms";

fn csv_row(t: &PairedTrial) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{:.2},{:.2},{}",
        t.scenario,
        t.trial,
        t.seed,
        t.target_states,
        t.plain.stats.mq_asked,
        t.plain.stats.eq_asked,
        t.advised.stats.mq_asked,
        t.advised.stats.mq_inferred,
        t.advised.stats.eq_asked,
        t.advised.stats.eq_inferred,
        t.mq_decrease_pct(),
        t.eq_decrease_pct(),
        t.plain.wall_ms + t.advised.wall_ms,
    )
}

/// Runs a scenario and renders the CSV: one row per trial plus three
/// summary rows (`trial` = min/max/mean) aggregating each numeric column.
pub fn bench(scenario: BenchScenario, config: &ScenarioConfig) -> Result<String> {
    let trials = run_scenario(scenario, config)?;
    let mut out = String::new();
    let _ = writeln!(out, "{CSV_HEADER}");
    for t in &trials {
        let _ = writeln!(out, "{}", csv_row(t));
    }
    let summary = summarize(&trials);
    type Selector = fn(&SummaryStats) -> f64;
    let selectors: [(&str, Selector); 3] =
        [("min", |s| s.min), ("max", |s| s.max), ("mean", |s| s.mean)];
    for (name, sel) in selectors {
        let col = |f: &dyn Fn(&PairedTrial) -> f64| sel(&summarize_by(&trials, f));
        let _ = writeln!(
            out,
            "{},{},{},{:.0},{:.0},{:.0},{:.0},{:.0},{:.0},{:.0},{:.2},{:.2},{:.0}",
            scenario,
            name,
            config.seed_base,
            col(&|t| t.target_states as f64),
            col(&|t| t.plain.stats.mq_asked as f64),
            col(&|t| t.plain.stats.eq_asked as f64),
            col(&|t| t.advised.stats.mq_asked as f64),
            col(&|t| t.advised.stats.mq_inferred as f64),
            col(&|t| t.advised.stats.eq_asked as f64),
            col(&|t| t.advised.stats.eq_inferred as f64),
            sel(&summary.mq),
            sel(&summary.eq),
            col(&|t| (t.plain.wall_ms + t.advised.wall_ms) as f64),
        );
    }
    Ok(out)
}

fn summarize_by(trials: &[PairedTrial], f: &dyn Fn(&PairedTrial) -> f64) -> SummaryStats {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for t in trials {
        let v = f(t);
        min = min.min(v);
        max = max.max(v);
        sum += v;
    }
    if trials.is_empty() {
        return SummaryStats::default();
    }
    SummaryStats {
        min,
        max,
        mean: sum / trials.len() as f64,
    }
}
