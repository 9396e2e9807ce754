//! Session and experiment execution.
//!
//! A *session* is one agent playing one wheel round by round, either to a
//! fixed horizon `T` or until bankruptcy. An *experiment* runs many
//! independent sessions per policy. Session `j` of policy `p` draws all of
//! its randomness from an RNG seeded with
//! [`crate::seed::session_seed`]`(base_seed, p, j)`, so experiment results
//! are a pure function of the config — thread count and completion order are
//! unobservable in the output.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{Agent, PolicySpec};
use crate::seed::session_seed;
use crate::wheel::{presets, BetSpec, RoundOutcome, ScheduleOverride, WheelModel, ZeroPayoutConvention};

pub const DEFAULT_INITIAL_BANKROLL: i64 = 100;
pub const DEFAULT_ROUND_CAP: u64 = 1_000_000;
pub const DEFAULT_SESSIONS_PER_POLICY: u64 = 10_000;

fn default_initial_bankroll() -> i64 {
    DEFAULT_INITIAL_BANKROLL
}

fn default_round_cap() -> u64 {
    DEFAULT_ROUND_CAP
}

fn default_sessions_per_policy() -> u64 {
    DEFAULT_SESSIONS_PER_POLICY
}

/// How a session ends.
///
/// `horizon` sessions track pure cumulative net balance starting at $0 —
/// the balance may go negative mid-session and success is judged only at
/// round `T`. `bankruptcy` sessions start at `initial_bankroll` and stop
/// the first time the balance reaches $0 or below, or at `round_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SessionConfig {
    Horizon {
        horizon: u64,
    },
    Bankruptcy {
        #[serde(default = "default_initial_bankroll")]
        initial_bankroll: i64,
        #[serde(default = "default_round_cap")]
        round_cap: u64,
    },
}

/// Summary of one finished session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionResult {
    pub rounds_played: u64,
    pub final_balance: i64,
    /// Balance reached $0 or below (bankruptcy mode only).
    pub bankrupt: bool,
    /// Session hit the round cap while still solvent (bankruptcy mode only).
    pub capped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_round_trace: Option<Vec<RoundOutcome>>,
}

/// Inclusive round window over which arm-selection frequencies are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundWindow {
    pub from: u64,
    pub to: u64,
}

/// Wheel description inside an experiment config: either a named preset or
/// an explicit arm list with an optional schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WheelConfig {
    Preset {
        preset: String,
        #[serde(default)]
        zero_payout_convention: ZeroPayoutConvention,
    },
    Explicit {
        bets: Vec<BetSpec>,
        #[serde(default)]
        schedule: Vec<ScheduleOverride>,
    },
}

impl WheelConfig {
    pub fn build(&self) -> Result<WheelModel, ConfigError> {
        match self {
            WheelConfig::Preset { preset, zero_payout_convention } => {
                presets::by_name(preset, *zero_payout_convention).ok_or_else(|| {
                    ConfigError::new(
                        "wheel.preset",
                        format!(
                            "unknown preset `{preset}` (expected one of fair, skewed, nonstationary)"
                        ),
                    )
                })
            }
            WheelConfig::Explicit { bets, schedule } => {
                WheelModel::new(bets.clone(), schedule.clone())
                    .map_err(|e| ConfigError::new("wheel", e.to_string()))
            }
        }
    }
}

/// A full experiment: wheel, session mode, policy list, and seeding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub wheel: WheelConfig,
    pub session: SessionConfig,
    pub policies: Vec<PolicySpec>,
    #[serde(default = "default_sessions_per_policy")]
    pub sessions_per_policy: u64,
    pub base_seed: u64,
    /// Keep per-round traces in every session result (large!).
    #[serde(default)]
    pub trace: bool,
    /// Count only strictly positive final balances as horizon-mode successes
    /// (the default counts balance >= 0).
    #[serde(default)]
    pub strict_success: bool,
    /// Round windows for per-window arm-selection frequencies. Defaults to
    /// the wheel's schedule-override windows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<RoundWindow>>,
}

/// Validation failure, pointing at the offending config field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("config error at `{path}`: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

/// A validated, ready-to-run experiment.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub wheel: WheelModel,
    pub session: SessionConfig,
    pub policies: Vec<PolicySpec>,
    pub sessions_per_policy: u64,
    pub base_seed: u64,
    pub trace: bool,
    pub strict_success: bool,
    pub windows: Vec<RoundWindow>,
}

impl ExperimentConfig {
    /// Checks every invariant and resolves presets and defaults.
    pub fn validate(&self) -> Result<Experiment, ConfigError> {
        let wheel = self.wheel.build()?;

        match self.session {
            SessionConfig::Horizon { horizon } => {
                if horizon == 0 {
                    return Err(ConfigError::new("session.horizon", "must be >= 1"));
                }
            }
            SessionConfig::Bankruptcy { initial_bankroll, round_cap } => {
                if initial_bankroll < 1 {
                    return Err(ConfigError::new(
                        "session.initial_bankroll",
                        format!("must be >= 1, got {initial_bankroll}"),
                    ));
                }
                if round_cap == 0 {
                    return Err(ConfigError::new("session.round_cap", "must be >= 1"));
                }
            }
        }

        if self.policies.is_empty() {
            return Err(ConfigError::new("policies", "must list at least one policy"));
        }
        for (i, policy) in self.policies.iter().enumerate() {
            policy
                .validate()
                .map_err(|e| ConfigError::new(format!("policies[{i}]"), e.to_string()))?;
            if self.policies[..i].contains(policy) {
                return Err(ConfigError::new(
                    format!("policies[{i}]"),
                    "duplicate policy: kind and parameters repeat an earlier entry",
                ));
            }
        }

        if self.sessions_per_policy == 0 {
            return Err(ConfigError::new("sessions_per_policy", "must be >= 1"));
        }

        let windows = match &self.windows {
            Some(windows) => {
                for (i, w) in windows.iter().enumerate() {
                    if w.from == 0 {
                        return Err(ConfigError::new(format!("windows[{i}].from"), "must be >= 1"));
                    }
                    if w.from > w.to {
                        return Err(ConfigError::new(
                            format!("windows[{i}]"),
                            format!("window start {} exceeds window end {}", w.from, w.to),
                        ));
                    }
                }
                windows.clone()
            }
            None => {
                let mut derived: Vec<RoundWindow> = Vec::new();
                for ov in wheel.schedule() {
                    let w = RoundWindow { from: ov.from_round, to: ov.to_round };
                    if !derived.contains(&w) {
                        derived.push(w);
                    }
                }
                derived
            }
        };

        Ok(Experiment {
            wheel,
            session: self.session,
            policies: self.policies.clone(),
            sessions_per_policy: self.sessions_per_policy,
            base_seed: self.base_seed,
            trace: self.trace,
            strict_success: self.strict_success,
            windows,
        })
    }
}

/// Per-session arm-selection counts, merged order-independently into the
/// policy summary.
#[derive(Debug, Clone)]
struct SessionTally {
    arm_counts: Vec<u64>,
    window_counts: Vec<Vec<u64>>,
    window_rounds: Vec<u64>,
}

impl SessionTally {
    fn new(arm_count: usize, window_count: usize) -> Self {
        Self {
            arm_counts: vec![0; arm_count],
            window_counts: vec![vec![0; arm_count]; window_count],
            window_rounds: vec![0; window_count],
        }
    }

    fn merge(&mut self, other: &SessionTally) {
        for (a, b) in self.arm_counts.iter_mut().zip(&other.arm_counts) {
            *a += b;
        }
        for (ws, wo) in self.window_counts.iter_mut().zip(&other.window_counts) {
            for (a, b) in ws.iter_mut().zip(wo) {
                *a += b;
            }
        }
        for (a, b) in self.window_rounds.iter_mut().zip(&other.window_rounds) {
            *a += b;
        }
    }
}

fn run_session_inner<R: Rng + ?Sized>(
    wheel: &WheelModel,
    policy: &PolicySpec,
    config: &SessionConfig,
    rng: &mut R,
    trace: bool,
    windows: &[RoundWindow],
) -> (SessionResult, SessionTally) {
    let mut agent = Agent::from_spec(policy, &wheel.payouts());
    let mut tally = SessionTally::new(wheel.arm_count(), windows.len());
    let mut balance: i64 = match config {
        SessionConfig::Horizon { .. } => 0,
        SessionConfig::Bankruptcy { initial_bankroll, .. } => *initial_bankroll,
    };
    let mut trace_buf = trace.then(Vec::new);

    let mut t: u64 = 0;
    loop {
        t += 1;
        let arm = agent.select(rng);
        let outcome = wheel.spin(t, arm, rng);
        agent.update(&outcome);
        balance += outcome.net_reward;

        tally.arm_counts[arm] += 1;
        for (wi, w) in windows.iter().enumerate() {
            if w.from <= t && t <= w.to {
                tally.window_counts[wi][arm] += 1;
                tally.window_rounds[wi] += 1;
            }
        }
        if let Some(buf) = trace_buf.as_mut() {
            buf.push(outcome);
        }

        match config {
            SessionConfig::Horizon { horizon } => {
                if t == *horizon {
                    let result = SessionResult {
                        rounds_played: t,
                        final_balance: balance,
                        bankrupt: false,
                        capped: false,
                        per_round_trace: trace_buf,
                    };
                    return (result, tally);
                }
            }
            SessionConfig::Bankruptcy { round_cap, .. } => {
                if balance <= 0 || t == *round_cap {
                    let result = SessionResult {
                        rounds_played: t,
                        final_balance: balance,
                        bankrupt: balance <= 0,
                        capped: balance > 0,
                        per_round_trace: trace_buf,
                    };
                    return (result, tally);
                }
            }
        }
    }
}

/// Runs one session with a caller-supplied random source.
///
/// # Panics
/// If the policy spec or session config is invalid.
pub fn run_session_with_rng<R: Rng + ?Sized>(
    wheel: &WheelModel,
    policy: &PolicySpec,
    config: &SessionConfig,
    rng: &mut R,
    trace: bool,
) -> SessionResult {
    policy.validate().expect("policy spec must be valid");
    match config {
        SessionConfig::Horizon { horizon } => assert!(*horizon >= 1, "horizon must be >= 1"),
        SessionConfig::Bankruptcy { initial_bankroll, round_cap } => {
            assert!(*initial_bankroll >= 1, "initial_bankroll must be >= 1");
            assert!(*round_cap >= 1, "round_cap must be >= 1");
        }
    }
    run_session_inner(wheel, policy, config, rng, trace, &[]).0
}

/// Runs one seeded session (no per-round trace).
pub fn run_session(
    wheel: &WheelModel,
    policy: &PolicySpec,
    config: &SessionConfig,
    seed: u64,
) -> SessionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_session_with_rng(wheel, policy, config, &mut rng, false)
}

/// Runs one seeded session keeping the full per-round trace.
pub fn run_session_traced(
    wheel: &WheelModel,
    policy: &PolicySpec,
    config: &SessionConfig,
    seed: u64,
) -> SessionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_session_with_rng(wheel, policy, config, &mut rng, true)
}

/// Arm-selection frequencies, overall and per configured round window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmFrequencies {
    pub overall: Vec<f64>,
    #[serde(default)]
    pub windows: Vec<WindowFrequencies>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowFrequencies {
    pub from: u64,
    pub to: u64,
    pub frequencies: Vec<f64>,
}

/// Aggregates over one policy's sessions. Success fields are present in
/// horizon mode, survival fields in bankruptcy mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub sessions: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survival_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub survival_median: Option<f64>,
    pub capped_count: u64,
    pub arm_selection_frequencies: ArmFrequencies,
}

/// One policy's full experiment output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyResult {
    pub label: String,
    pub spec: PolicySpec,
    pub summary: PolicySummary,
    pub sessions: Vec<SessionResult>,
}

/// Output of [`run_experiment`]: one [`PolicyResult`] per configured policy,
/// in config order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub session: SessionConfig,
    pub arm_labels: Vec<String>,
    #[serde(default)]
    pub windows: Vec<RoundWindow>,
    pub policies: Vec<PolicyResult>,
}

fn median_of_rounds(values: &[u64]) -> f64 {
    debug_assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

impl Experiment {
    /// Runs every session of every policy. Sessions run in parallel on the
    /// ambient rayon thread pool; output is identical for any thread count.
    pub fn run(&self) -> ExperimentResult {
        let arm_count = self.wheel.arm_count();
        let policies = self
            .policies
            .iter()
            .enumerate()
            .map(|(policy_index, spec)| {
                let per_session: Vec<(SessionResult, SessionTally)> = (0..self.sessions_per_policy)
                    .into_par_iter()
                    .map(|session_index| {
                        let seed = session_seed(self.base_seed, policy_index as u64, session_index);
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        run_session_inner(
                            &self.wheel,
                            spec,
                            &self.session,
                            &mut rng,
                            self.trace,
                            &self.windows,
                        )
                    })
                    .collect();

                let mut tally = SessionTally::new(arm_count, self.windows.len());
                let mut sessions = Vec::with_capacity(per_session.len());
                for (result, session_tally) in per_session {
                    tally.merge(&session_tally);
                    sessions.push(result);
                }
                let summary = self.summarize(&sessions, &tally);
                PolicyResult { label: spec.label(), spec: spec.clone(), summary, sessions }
            })
            .collect();

        ExperimentResult {
            session: self.session,
            arm_labels: self.wheel.bets().iter().map(|b| b.label.clone()).collect(),
            windows: self.windows.clone(),
            policies,
        }
    }

    fn summarize(&self, sessions: &[SessionResult], tally: &SessionTally) -> PolicySummary {
        let n = sessions.len() as u64;
        let capped_count = sessions.iter().filter(|s| s.capped).count() as u64;

        let (success_count, success_rate, survival_mean, survival_median) = match self.session {
            SessionConfig::Horizon { .. } => {
                let count = sessions
                    .iter()
                    .filter(|s| {
                        if self.strict_success {
                            s.final_balance > 0
                        } else {
                            s.final_balance >= 0
                        }
                    })
                    .count() as u64;
                (Some(count), Some(count as f64 / n as f64), None, None)
            }
            SessionConfig::Bankruptcy { .. } => {
                let rounds: Vec<u64> = sessions.iter().map(|s| s.rounds_played).collect();
                let mean = rounds.iter().sum::<u64>() as f64 / n as f64;
                (None, None, Some(mean), Some(median_of_rounds(&rounds)))
            }
        };

        let total_rounds: u64 = tally.arm_counts.iter().sum();
        let overall = tally
            .arm_counts
            .iter()
            .map(|&c| if total_rounds == 0 { 0.0 } else { c as f64 / total_rounds as f64 })
            .collect();
        let windows = self
            .windows
            .iter()
            .enumerate()
            .map(|(wi, w)| WindowFrequencies {
                from: w.from,
                to: w.to,
                frequencies: tally.window_counts[wi]
                    .iter()
                    .map(|&c| {
                        if tally.window_rounds[wi] == 0 {
                            0.0
                        } else {
                            c as f64 / tally.window_rounds[wi] as f64
                        }
                    })
                    .collect(),
            })
            .collect();

        PolicySummary {
            sessions: n,
            success_count,
            success_rate,
            survival_mean,
            survival_median,
            capped_count,
            arm_selection_frequencies: ArmFrequencies { overall, windows },
        }
    }
}

/// Validates the config and runs the full experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult, ConfigError> {
    Ok(config.validate()?.run())
}

/// Misuse of the per-session metric helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("need at least one session result")]
    Empty,
    #[error(
        "success rate is defined for horizon-mode results; session {index} is bankrupt or capped"
    )]
    NotHorizonMode { index: usize },
    #[error(
        "survival rounds are defined for bankruptcy-mode results; session {index} is neither \
         bankrupt nor capped"
    )]
    NotBankruptcyMode { index: usize },
}

/// Fraction of horizon-mode sessions that ended with a nonnegative balance.
pub fn success_rate(results: &[SessionResult]) -> Result<f64, MetricError> {
    if results.is_empty() {
        return Err(MetricError::Empty);
    }
    for (index, r) in results.iter().enumerate() {
        if r.bankrupt || r.capped {
            return Err(MetricError::NotHorizonMode { index });
        }
    }
    let successes = results.iter().filter(|r| r.final_balance >= 0).count();
    Ok(successes as f64 / results.len() as f64)
}

/// Rounds survived per bankruptcy-mode session, capped sessions included at
/// the cap value (their `capped` flag is preserved in the results).
pub fn survival_rounds(results: &[SessionResult]) -> Result<Vec<u64>, MetricError> {
    if results.is_empty() {
        return Err(MetricError::Empty);
    }
    for (index, r) in results.iter().enumerate() {
        if !r.bankrupt && !r.capped {
            return Err(MetricError::NotBankruptcyMode { index });
        }
    }
    Ok(results.iter().map(|r| r.rounds_played).collect())
}
