//! Monte Carlo harness for benchmarking sequential decision policies against
//! a uniform-random baseline on configurable roulette-style betting wheels.
//!
//! The library is organized around five pieces:
//!
//! * [`wheel`] — the stochastic environment: bet economics, fair/skewed
//!   probabilities, time-varying schedules, and single-round outcome sampling.
//! * [`agents`] — the decision policies: uniform random, epsilon-greedy,
//!   Thompson sampling, and TD(0)/TD(1), behind a common select/update
//!   interface.
//! * [`engine`] — session and experiment execution with deterministic
//!   per-session seeding, so results are independent of thread count.
//! * [`stats`] — a self-contained statistics kernel: one-way ANOVA with exact
//!   F-distribution p-values via the regularized incomplete beta function.
//! * [`analysis`] — the closed-form distribution of which arm yields the
//!   highest realized payout, plus an exhaustive enumeration oracle for it.

pub mod agents;
pub mod analysis;
pub mod engine;
pub mod seed;
pub mod stats;
#[cfg(test)]
pub(crate) mod test_support;
pub mod wheel;

pub use agents::{Agent, ArmStats, PolicySpec, TdState, TdVariant, ThompsonState, TsObjective};
pub use analysis::{top_reward_brute_force, top_reward_closed_form, TopRewardDistribution};
pub use engine::{
    run_experiment, run_session, success_rate, survival_rounds, ConfigError, Experiment,
    ExperimentConfig, ExperimentResult, PolicyResult, PolicySummary, RoundWindow, SessionConfig,
    SessionResult, WheelConfig,
};
pub use stats::{one_way_anova, pairwise_vs_control, AnovaResult, SampleGroup, StatsError};
pub use wheel::{
    presets, BetSpec, RoundOutcome, ScheduleOverride, WheelError, WheelModel, ZeroPayoutConvention,
};
