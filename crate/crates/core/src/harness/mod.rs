//! The benchmark harness: paired learning runs (no advice / with advice) on
//! generated targets, with per-trial records and summary statistics of the
//! query savings.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::advice::{
    check_consistency, check_consistency_csrs, check_consistency_one_sided, AdviceLayer,
    AdviceMode, AdviceOptions, Polarity,
};
use crate::automata::{Alphabet, Dfa, Word};
use crate::generators::{
    bitadd_dfa, bitadd_srs, convolution, convolution_srs, encode_partial_dfa, idempotent_srs,
    make_letter_idempotent, pattern_dfa, prune_transitions, random_dfa, upward_closure_srs,
    PatternMode, SplitMix64,
};
use crate::learner::{lstar_learn, LearnerConfig, Oracle, QueryStats};
use crate::oracle::SimulatedTeacher;
use crate::{Error, Result};

/// The built-in experiment families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BenchScenario {
    /// Random DFAs with an idempotent letter, `{aa -> a}` advice.
    Idempotent,
    /// Convolutions of two pattern DFAs over disjoint alphabets.
    ConvPattern,
    /// Convolutions of two random DFAs over disjoint alphabets.
    ConvRandom,
    /// Convolutions of two random DFAs sharing most of their letters.
    ConvShared,
    /// The bit-wise addition language with the track-swap advice.
    Bitadd,
    /// Random DFAs with a pruned partial copy encoded as controlled advice.
    PartialCsrs,
}

impl BenchScenario {
    pub const ALL: [BenchScenario; 6] = [
        BenchScenario::Idempotent,
        BenchScenario::ConvPattern,
        BenchScenario::ConvRandom,
        BenchScenario::ConvShared,
        BenchScenario::Bitadd,
        BenchScenario::PartialCsrs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchScenario::Idempotent => "idempotent",
            BenchScenario::ConvPattern => "conv-pattern",
            BenchScenario::ConvRandom => "conv-random",
            BenchScenario::ConvShared => "conv-shared",
            BenchScenario::Bitadd => "bitadd",
            BenchScenario::PartialCsrs => "partial-csrs",
        }
    }
}

impl fmt::Display for BenchScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BenchScenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scenario `{s}`")))
    }
}

/// One learning run, fully described.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub target: String,
    pub mode: String,
    pub seed: u64,
    pub config: LearnerConfig,
    pub stats: QueryStats,
    pub learned_states: usize,
    pub wall_ms: u64,
    pub shadow_mismatches: u64,
}

/// A matched pair of runs on the same target with the same seed and
/// configuration; only the advice differs.
#[derive(Clone, Debug)]
pub struct PairedTrial {
    pub scenario: BenchScenario,
    pub trial: usize,
    pub seed: u64,
    pub target_states: usize,
    pub plain: RunRecord,
    pub advised: RunRecord,
}

impl PairedTrial {
    /// Percentage decrease of membership queries actually asked. Negative
    /// when advice made things worse (which happens, and is data, not an
    /// error).
    pub fn mq_decrease_pct(&self) -> f64 {
        decrease_pct(self.plain.stats.mq_asked, self.advised.stats.mq_asked)
    }

    pub fn eq_decrease_pct(&self) -> f64 {
        decrease_pct(self.plain.stats.eq_asked, self.advised.stats.eq_asked)
    }
}

fn decrease_pct(plain: u64, advised: u64) -> f64 {
    if plain == 0 {
        return 0.0;
    }
    (plain as f64 - advised as f64) / plain as f64 * 100.0
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SummaryStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

fn summarize_values(values: impl Iterator<Item = f64> + Clone) -> SummaryStats {
    let mut count = 0usize;
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        count += 1;
        sum += v;
        min = min.min(v);
        max = max.max(v);
    }
    if count == 0 {
        return SummaryStats::default();
    }
    SummaryStats {
        min,
        max,
        mean: sum / count as f64,
    }
}

/// Min/max/mean percentage decreases over a scenario's trials.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScenarioSummary {
    pub mq: SummaryStats,
    pub eq: SummaryStats,
}

pub fn summarize(trials: &[PairedTrial]) -> ScenarioSummary {
    ScenarioSummary {
        mq: summarize_values(trials.iter().map(PairedTrial::mq_decrease_pct)),
        eq: summarize_values(trials.iter().map(PairedTrial::eq_decrease_pct)),
    }
}

/// Options for a scenario run. State bounds apply to the scenarios that
/// draw random targets.
#[derive(Clone, Copy, Debug)]
pub struct ScenarioConfig {
    pub trials: usize,
    pub seed_base: u64,
    pub min_states: usize,
    pub max_states: usize,
    pub shadow: bool,
    pub learner: LearnerConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            trials: 10,
            seed_base: 1,
            min_states: 100,
            max_states: 300,
            shadow: false,
            learner: LearnerConfig::default(),
        }
    }
}

/// Runs one learning attempt against a simulated teacher for `target`,
/// through an advice layer in the given mode. Returns the learned DFA and
/// the run record (stats are the advice layer's view: asked plus inferred).
pub fn run_advised_learning(
    target: &Dfa,
    mode: AdviceMode,
    learner_config: &LearnerConfig,
    options: AdviceOptions,
    seed: u64,
    descriptor: &str,
) -> Result<(Dfa, RunRecord)> {
    let teacher = SimulatedTeacher::new(target.clone());
    let mode_label = mode.label().to_string();
    let mut layer = AdviceLayer::new(teacher, target.alphabet().clone(), mode, options)?;
    let started = Instant::now();
    let (learned, stats) = lstar_learn(&mut layer, target.alphabet(), learner_config)?;
    let wall_ms = started.elapsed().as_millis() as u64;
    let record = RunRecord {
        target: descriptor.to_string(),
        mode: mode_label,
        seed,
        config: *learner_config,
        stats,
        learned_states: learned.state_count(),
        wall_ms,
        shadow_mismatches: layer.shadow_mismatches(),
    };
    Ok((learned, record))
}

/// Fails fast when scenario advice is inconsistent with its target; a
/// generator bug would otherwise surface as baffling divergence later.
pub fn validate_advice(mode: &AdviceMode, target: &Dfa) -> Result<()> {
    let verdict = match mode {
        AdviceMode::None => return Ok(()),
        AdviceMode::TwoSided(srs) => check_consistency(srs, target)?,
        AdviceMode::TwoSidedControlled(csrs) => check_consistency_csrs(csrs, target)?,
        AdviceMode::Positive(srs) => check_consistency_one_sided(srs, target, Polarity::Positive)?,
        AdviceMode::Negative(srs) => check_consistency_one_sided(srs, target, Polarity::Negative)?,
        AdviceMode::UpwardClosed => check_consistency_one_sided(
            &upward_closure_srs(target.alphabet()),
            target,
            Polarity::Positive,
        )?,
    };
    match verdict {
        crate::advice::ConsistencyVerdict::Consistent => Ok(()),
        crate::advice::ConsistencyVerdict::Witness(x, y) => Err(Error::AdviceRejected(format!(
            "scenario advice is inconsistent with its own target (witness pair {} / {})",
            target.alphabet().format_word(&x),
            target.alphabet().format_word(&y),
        ))),
    }
}

/// One scenario trial: the generated target, its advice, and a descriptor.
pub struct TrialSetup {
    pub target: Dfa,
    pub mode: AdviceMode,
    pub descriptor: String,
}

fn four_letters(prefix: &str) -> Alphabet {
    let names: Vec<String> = (0..4).map(|i| format!("{prefix}{i}")).collect();
    Alphabet::new(names).expect("distinct tokens")
}

/// Draws a random DFA whose minimized size lands in `[lo, hi]`, re-sampling
/// with fresh sub-seeds until it does. Random DFAs with a 1/10 acceptance
/// probability occasionally have an empty language; those minimize to one
/// state and are rejected here.
fn random_component(
    alphabet: &Alphabet,
    lo: usize,
    hi: usize,
    rng: &mut SplitMix64,
) -> Result<Dfa> {
    for _ in 0..1000 {
        let n = lo as u64 + rng.next_below((hi - lo + 1) as u64);
        let d = random_dfa(n as usize, alphabet, 0.1, rng.next_u64())?;
        let m = d.minimize();
        if (lo..=hi).contains(&m.state_count()) {
            return Ok(m);
        }
    }
    Err(Error::InvalidInput(format!(
        "could not draw a component with {lo}..={hi} minimized states"
    )))
}

fn random_word(alphabet: &Alphabet, len: usize, rng: &mut SplitMix64) -> Word {
    let mut w = Word::empty();
    for _ in 0..len {
        let idx = rng.next_below(alphabet.len() as u64) as u32;
        w.push(crate::automata::Symbol(idx));
    }
    w
}

/// Builds the target and advice for one trial of a scenario. All
/// randomness comes from `seed`, so a (scenario, seed) pair pins the trial.
pub fn build_trial(
    scenario: BenchScenario,
    seed: u64,
    config: &ScenarioConfig,
) -> Result<TrialSetup> {
    let mut rng = SplitMix64::new(seed);
    match scenario {
        BenchScenario::Idempotent => {
            let alphabet = four_letters("");
            let span = (config.max_states - config.min_states + 1) as u64;
            let n = config.min_states as u64 + rng.next_below(span);
            let base = random_dfa(n as usize, &alphabet, 0.1, rng.next_u64())?;
            let letter = alphabet.symbols().next().expect("non-empty alphabet");
            let target = make_letter_idempotent(&base, letter)?;
            let srs = idempotent_srs(&alphabet, &Word::singleton(letter))?;
            Ok(TrialSetup {
                descriptor: format!("random-idempotent-{n}"),
                target,
                mode: AdviceMode::TwoSided(srs),
            })
        }
        BenchScenario::ConvPattern => {
            let a1 = four_letters("a");
            let a2 = four_letters("b");
            let component = |alphabet: &Alphabet, rng: &mut SplitMix64| -> Result<Dfa> {
                let p1 = random_word(alphabet, 10, rng);
                let p2 = random_word(alphabet, 10, rng);
                pattern_dfa(&[p1, p2], PatternMode::Any, alphabet)
            };
            let d1 = component(&a1, &mut rng)?;
            let d2 = component(&a2, &mut rng)?;
            let target = convolution(&d1, &d2);
            let srs = convolution_srs(&a1, &a2)?;
            Ok(TrialSetup {
                descriptor: format!("conv-pattern-{}x{}", d1.state_count(), d2.state_count()),
                target,
                mode: AdviceMode::TwoSided(srs),
            })
        }
        BenchScenario::ConvRandom => {
            let a1 = four_letters("a");
            let a2 = four_letters("b");
            let d1 = random_component(&a1, 15, 30, &mut rng)?;
            let d2 = random_component(&a2, 15, 30, &mut rng)?;
            let target = convolution(&d1, &d2);
            let srs = convolution_srs(&a1, &a2)?;
            Ok(TrialSetup {
                descriptor: format!("conv-random-{}x{}", d1.state_count(), d2.state_count()),
                target,
                mode: AdviceMode::TwoSided(srs),
            })
        }
        BenchScenario::ConvShared => {
            // Four shared letters plus one private letter per component.
            let shared: Vec<String> = (0..4).map(|i| format!("s{i}")).collect();
            let mut t1 = shared.clone();
            t1.push("p".into());
            let mut t2 = shared;
            t2.push("q".into());
            let a1 = Alphabet::new(t1).expect("distinct tokens");
            let a2 = Alphabet::new(t2).expect("distinct tokens");
            let d1 = random_component(&a1, 15, 30, &mut rng)?;
            let d2 = random_component(&a2, 15, 30, &mut rng)?;
            let target = convolution(&d1, &d2);
            let srs = convolution_srs(&a1, &a2)?;
            Ok(TrialSetup {
                descriptor: format!("conv-shared-{}x{}", d1.state_count(), d2.state_count()),
                target,
                mode: AdviceMode::TwoSided(srs),
            })
        }
        BenchScenario::Bitadd => Ok(TrialSetup {
            descriptor: "bitadd".into(),
            target: bitadd_dfa(),
            mode: AdviceMode::TwoSided(bitadd_srs()),
        }),
        BenchScenario::PartialCsrs => {
            let alphabet = four_letters("");
            let span = (config.max_states - config.min_states + 1) as u64;
            let n = config.min_states as u64 + rng.next_below(span);
            let target = random_dfa(n as usize, &alphabet, 0.1, rng.next_u64())?;
            let keep = 10 + rng.next_below(11) as usize;
            let partial = prune_transitions(&target, keep, rng.next_u64())?;
            let csrs = encode_partial_dfa(&partial)?;
            Ok(TrialSetup {
                descriptor: format!("partial-csrs-{n}-keep{keep}"),
                target,
                mode: AdviceMode::TwoSidedControlled(csrs),
            })
        }
    }
}

/// Runs a full scenario: per trial, one plain and one advised learning run
/// on the identical target and seed. The advice is consistency-checked
/// against the target before any run starts.
pub fn run_scenario(scenario: BenchScenario, config: &ScenarioConfig) -> Result<Vec<PairedTrial>> {
    let mut out = Vec::with_capacity(config.trials);
    for trial in 0..config.trials {
        let seed = config.seed_base.wrapping_add(trial as u64);
        out.push(run_trial(scenario, trial, seed, config)?);
    }
    Ok(out)
}

/// One paired trial of a scenario.
pub fn run_trial(
    scenario: BenchScenario,
    trial: usize,
    seed: u64,
    config: &ScenarioConfig,
) -> Result<PairedTrial> {
    let setup = build_trial(scenario, seed, config)?;
    validate_advice(&setup.mode, &setup.target)?;
    let options = AdviceOptions {
        shadow: config.shadow,
        ..AdviceOptions::default()
    };
    let target_states = setup.target.minimize().state_count();
    let (plain_learned, plain) = run_advised_learning(
        &setup.target,
        AdviceMode::None,
        &config.learner,
        options,
        seed,
        &setup.descriptor,
    )?;
    let (advised_learned, advised) = run_advised_learning(
        &setup.target,
        setup.mode,
        &config.learner,
        options,
        seed,
        &setup.descriptor,
    )?;
    debug_assert_eq!(plain_learned.state_count(), target_states);
    debug_assert_eq!(advised_learned.state_count(), target_states);
    Ok(PairedTrial {
        scenario,
        trial,
        seed,
        target_states,
        plain,
        advised,
    })
}

/// Sanity wrapper used by tests: learn with no advice directly against a
/// teacher, returning the learned DFA and the teacher's stats.
pub fn learn_plain(target: &Dfa, config: &LearnerConfig) -> Result<(Dfa, QueryStats)> {
    let mut teacher = SimulatedTeacher::new(target.clone());
    let (d, _) = lstar_learn(&mut teacher, target.alphabet(), config)?;
    let stats = teacher.query_stats();
    Ok((d, stats))
}
