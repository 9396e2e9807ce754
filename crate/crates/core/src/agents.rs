//! Decision policies: uniform random, epsilon-greedy, Thompson sampling, and
//! TD(0)/TD(1), each reduced to the same two-call interface — `select` an arm,
//! then `update` on the observed outcome.
//!
//! Selection never mutates learning state (it borrows `&self` and only the
//! RNG mutably) and updates never select. Ties in greedy argmaxes are broken
//! uniformly at random from the session RNG; Thompson sampling's ties are
//! measure-zero and resolved toward the lowest index.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wheel::RoundOutcome;

/// Which statistic a Thompson agent maximizes over its posterior samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TsObjective {
    /// Argmax of the sampled expected net reward `theta * (r + 1) - 1`.
    #[default]
    ExpectedReward,
    /// Argmax of the sampled win probability alone. Under unequal payouts
    /// this collapses onto the most frequently winning arm.
    WinProb,
}

/// TD flavor: exponential moving average versus full empirical average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TdVariant {
    Td0,
    Td1,
}

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_LEARNING_RATE: f64 = 0.1;

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

/// Declarative description of a policy, as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicySpec {
    /// Uniform over all arms, every round.
    Random,
    /// Greedy on empirical mean reward with probability `1 - epsilon`,
    /// uniform over all arms (greedy one included) otherwise.
    EpsilonGreedy {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
    },
    /// Beta-posterior sampling per arm, argmax of the sampled objective.
    Thompson {
        #[serde(default)]
        ts_objective: TsObjective,
    },
    /// Greedy on per-arm Q-values; `td0` updates by `Q += alpha * (r - Q)`,
    /// `td1` keeps the exact empirical average.
    Td {
        lambda_variant: TdVariant,
        /// Step size for `td0` (defaults to 0.1); not accepted for `td1`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        learning_rate: Option<f64>,
    },
}

/// Parameter violation in a [`PolicySpec`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("epsilon: must lie in [0, 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("learning_rate: must lie in (0, 1], got {0}")]
    LearningRateOutOfRange(f64),
    #[error("learning_rate: not a td1 parameter (td1 always uses the exact empirical average)")]
    LearningRateOnTd1,
}

impl PolicySpec {
    pub fn validate(&self) -> Result<(), PolicyError> {
        match self {
            PolicySpec::Random | PolicySpec::Thompson { .. } => Ok(()),
            PolicySpec::EpsilonGreedy { epsilon } => {
                if (0.0..=1.0).contains(epsilon) {
                    Ok(())
                } else {
                    Err(PolicyError::EpsilonOutOfRange(*epsilon))
                }
            }
            PolicySpec::Td { lambda_variant, learning_rate } => match (lambda_variant, learning_rate) {
                (TdVariant::Td1, Some(_)) => Err(PolicyError::LearningRateOnTd1),
                (TdVariant::Td1, None) => Ok(()),
                (TdVariant::Td0, rate) => {
                    let rate = rate.unwrap_or(DEFAULT_LEARNING_RATE);
                    if rate > 0.0 && rate <= 1.0 {
                        Ok(())
                    } else {
                        Err(PolicyError::LearningRateOutOfRange(rate))
                    }
                }
            },
        }
    }

    /// Stable display label used in results files and tables.
    pub fn label(&self) -> String {
        match self {
            PolicySpec::Random => "random".to_string(),
            PolicySpec::EpsilonGreedy { epsilon } => format!("epsilon_greedy[{epsilon}]"),
            PolicySpec::Thompson { ts_objective: TsObjective::ExpectedReward } => {
                "thompson".to_string()
            }
            PolicySpec::Thompson { ts_objective: TsObjective::WinProb } => {
                "thompson[win_prob]".to_string()
            }
            PolicySpec::Td { lambda_variant: TdVariant::Td0, learning_rate } => {
                format!("td0[{}]", learning_rate.unwrap_or(DEFAULT_LEARNING_RATE))
            }
            PolicySpec::Td { lambda_variant: TdVariant::Td1, .. } => "td1".to_string(),
        }
    }
}

/// Per-arm pull/win/reward bookkeeping shared by the learning policies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmStats {
    pub pulls: u64,
    pub wins: u64,
    /// Sum of net rewards over the rounds this arm was chosen, in dollars.
    pub reward_sum: i64,
}

impl ArmStats {
    /// Empirical mean net reward; unpulled arms score 0.
    pub fn mean_reward(&self) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            self.reward_sum as f64 / self.pulls as f64
        }
    }

    pub fn record(&mut self, outcome: &RoundOutcome) {
        self.pulls += 1;
        if outcome.won {
            self.wins += 1;
        }
        self.reward_sum += outcome.net_reward;
    }
}

/// Beta-posterior state for Thompson sampling: unit priors by default, plus
/// the shared per-arm counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ThompsonState {
    pub prior_alpha: Vec<f64>,
    pub prior_beta: Vec<f64>,
    pub stats: Vec<ArmStats>,
}

impl ThompsonState {
    /// Unit Beta(1, 1) priors on every arm.
    pub fn new(arm_count: usize) -> Self {
        Self {
            prior_alpha: vec![1.0; arm_count],
            prior_beta: vec![1.0; arm_count],
            stats: vec![ArmStats::default(); arm_count],
        }
    }

    pub fn arm_count(&self) -> usize {
        self.stats.len()
    }

    /// Posterior parameters `(alpha + S, beta + (N - S))` for one arm.
    pub fn posterior_params(&self, arm: usize) -> (f64, f64) {
        let s = &self.stats[arm];
        (
            self.prior_alpha[arm] + s.wins as f64,
            self.prior_beta[arm] + (s.pulls - s.wins) as f64,
        )
    }

    /// Posterior mean win probability of one arm.
    pub fn posterior_mean(&self, arm: usize) -> f64 {
        let s = &self.stats[arm];
        thompson_posterior_mean(self.prior_alpha[arm], self.prior_beta[arm], s.wins, s.pulls)
    }
}

/// Q-value state for the TD policies.
#[derive(Debug, Clone, PartialEq)]
pub struct TdState {
    pub q_values: Vec<f64>,
    pub stats: Vec<ArmStats>,
}

impl TdState {
    /// Q-values initialized to zero.
    pub fn new(arm_count: usize) -> Self {
        Self { q_values: vec![0.0; arm_count], stats: vec![ArmStats::default(); arm_count] }
    }
}

/// Streaming argmax with uniform random tie-breaking: among `m` tied maxima
/// each index is returned with probability `1/m`. Consumes randomness only
/// when a tie is actually present.
fn greedy_over<R, I>(scores: I, rng: &mut R) -> usize
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = f64>,
{
    let mut best = f64::NEG_INFINITY;
    let mut chosen = usize::MAX;
    let mut ties = 0u64;
    for (i, score) in scores.into_iter().enumerate() {
        if score > best || chosen == usize::MAX {
            best = score;
            chosen = i;
            ties = 1;
        } else if score == best {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                chosen = i;
            }
        }
    }
    assert!(chosen != usize::MAX, "argmax over no arms");
    chosen
}

/// Uniform choice over `arm_count` arms.
pub fn select_random<R: Rng + ?Sized>(arm_count: usize, rng: &mut R) -> usize {
    assert!(arm_count >= 1);
    rng.random_range(0..arm_count)
}

/// Epsilon-greedy selection over empirical mean rewards. With probability
/// `epsilon` the choice is uniform over all arms (the greedy arm included);
/// otherwise the argmax of [`ArmStats::mean_reward`], ties broken uniformly.
pub fn select_epsilon_greedy<R: Rng + ?Sized>(
    stats: &[ArmStats],
    epsilon: f64,
    rng: &mut R,
) -> usize {
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        return select_random(stats.len(), rng);
    }
    greedy_over(stats.iter().map(ArmStats::mean_reward), rng)
}

/// Posterior mean `(alpha + wins) / (alpha + beta + pulls)` of a Beta-
/// Bernoulli arm.
pub fn thompson_posterior_mean(alpha: f64, beta: f64, wins: u64, pulls: u64) -> f64 {
    debug_assert!(alpha > 0.0 && beta > 0.0 && wins <= pulls);
    (alpha + wins as f64) / (alpha + beta + pulls as f64)
}

/// The scalar a Thompson agent maximizes, given a sampled win probability.
pub fn thompson_score(theta: f64, net_payout: i64, objective: TsObjective) -> f64 {
    match objective {
        TsObjective::ExpectedReward => theta * (net_payout as f64 + 1.0) - 1.0,
        TsObjective::WinProb => theta,
    }
}

/// Deterministic part of Thompson selection: argmax of the objective over
/// already-drawn posterior samples, lowest index on (measure-zero) ties.
pub fn select_thompson_from_samples(
    samples: &[f64],
    payouts: &[i64],
    objective: TsObjective,
) -> usize {
    assert_eq!(samples.len(), payouts.len());
    assert!(!samples.is_empty());
    let mut best = f64::NEG_INFINITY;
    let mut arm = 0;
    for (i, (&theta, &payout)) in samples.iter().zip(payouts).enumerate() {
        let score = thompson_score(theta, payout, objective);
        if score > best {
            best = score;
            arm = i;
        }
    }
    arm
}

/// Thompson selection: draws one Beta-posterior sample per arm and returns
/// the argmax of the configured objective.
pub fn select_thompson<R: Rng + ?Sized>(
    state: &ThompsonState,
    payouts: &[i64],
    objective: TsObjective,
    rng: &mut R,
) -> usize {
    assert_eq!(state.arm_count(), payouts.len());
    let mut best = f64::NEG_INFINITY;
    let mut arm = 0;
    for i in 0..state.arm_count() {
        let (alpha, beta) = state.posterior_params(i);
        let theta = Beta::new(alpha, beta).expect("posterior parameters are positive").sample(rng);
        let score = thompson_score(theta, payouts[i], objective);
        if score > best {
            best = score;
            arm = i;
        }
    }
    arm
}

/// Greedy selection over Q-values, ties broken uniformly at random.
pub fn select_td<R: Rng + ?Sized>(state: &TdState, rng: &mut R) -> usize {
    greedy_over(state.q_values.iter().copied(), rng)
}

/// A policy bound to its mutable learning state for one session.
#[derive(Debug, Clone)]
pub enum Agent {
    Random { arm_count: usize },
    EpsilonGreedy { epsilon: f64, stats: Vec<ArmStats> },
    Thompson { objective: TsObjective, payouts: Vec<i64>, state: ThompsonState },
    Td { variant: TdVariant, learning_rate: f64, state: TdState },
}

impl Agent {
    /// Builds fresh learning state for a validated spec on a wheel with the
    /// given net payouts (one per arm).
    pub fn from_spec(spec: &PolicySpec, payouts: &[i64]) -> Self {
        let arm_count = payouts.len();
        assert!(arm_count >= 1);
        match spec {
            PolicySpec::Random => Agent::Random { arm_count },
            PolicySpec::EpsilonGreedy { epsilon } => Agent::EpsilonGreedy {
                epsilon: *epsilon,
                stats: vec![ArmStats::default(); arm_count],
            },
            PolicySpec::Thompson { ts_objective } => Agent::Thompson {
                objective: *ts_objective,
                payouts: payouts.to_vec(),
                state: ThompsonState::new(arm_count),
            },
            PolicySpec::Td { lambda_variant, learning_rate } => Agent::Td {
                variant: *lambda_variant,
                learning_rate: learning_rate.unwrap_or(DEFAULT_LEARNING_RATE),
                state: TdState::new(arm_count),
            },
        }
    }

    pub fn arm_count(&self) -> usize {
        match self {
            Agent::Random { arm_count } => *arm_count,
            Agent::EpsilonGreedy { stats, .. } => stats.len(),
            Agent::Thompson { state, .. } => state.arm_count(),
            Agent::Td { state, .. } => state.q_values.len(),
        }
    }

    /// Chooses the arm to play this round. Never mutates learning state.
    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            Agent::Random { arm_count } => select_random(*arm_count, rng),
            Agent::EpsilonGreedy { epsilon, stats } => select_epsilon_greedy(stats, *epsilon, rng),
            Agent::Thompson { objective, payouts, state } => {
                select_thompson(state, payouts, *objective, rng)
            }
            Agent::Td { state, .. } => select_td(state, rng),
        }
    }

    /// Folds one observed outcome into the learning state.
    pub fn update(&mut self, outcome: &RoundOutcome) {
        match self {
            Agent::Random { .. } => {}
            Agent::EpsilonGreedy { stats, .. } => stats[outcome.arm].record(outcome),
            Agent::Thompson { state, .. } => state.stats[outcome.arm].record(outcome),
            Agent::Td { variant, learning_rate, state } => {
                state.stats[outcome.arm].record(outcome);
                let q = &mut state.q_values[outcome.arm];
                match variant {
                    TdVariant::Td0 => *q += *learning_rate * (outcome.net_reward as f64 - *q),
                    TdVariant::Td1 => *q = state.stats[outcome.arm].mean_reward(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wheel::presets;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn outcome(arm: usize, won: bool, net_reward: i64) -> RoundOutcome {
        RoundOutcome { round: 1, arm, won, net_reward }
    }

    fn stats_with(values: &[(u64, u64, i64)]) -> Vec<ArmStats> {
        values
            .iter()
            .map(|&(pulls, wins, reward_sum)| ArmStats { pulls, wins, reward_sum })
            .collect()
    }

    #[test]
    fn select_random_single_arm() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(select_random(1, &mut rng), 0);
        }
    }

    #[test]
    fn select_random_is_close_to_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = [0u32; 3];
        let n = 30_000;
        for _ in 0..n {
            counts[select_random(3, &mut rng)] += 1;
        }
        for c in counts {
            // binomial 4-sigma band around 1/3
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.02, "counts {counts:?}");
        }
    }

    #[test]
    fn select_random_is_reproducible_per_seed() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| select_random(5, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn epsilon_greedy_unpulled_arms_tie_uniformly() {
        let stats = stats_with(&[(0, 0, 0); 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[select_epsilon_greedy(&stats, 0.0, &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.02, "counts {counts:?}");
        }
    }

    #[test]
    fn epsilon_greedy_exploits_the_unique_argmax() {
        // means: -1, +0.5, -0.2
        let stats = stats_with(&[(2, 0, -2), (2, 1, 1), (5, 1, -1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            assert_eq!(select_epsilon_greedy(&stats, 0.0, &mut rng), 1);
        }
    }

    #[test]
    fn epsilon_one_explores_uniformly_regardless_of_stats() {
        let stats = stats_with(&[(2, 0, -2), (2, 1, 1), (5, 1, -1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[select_epsilon_greedy(&stats, 1.0, &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.02, "counts {counts:?}");
        }
    }

    #[test]
    fn greedy_argmax_is_invariant_under_constant_shifts() {
        let base = [(4, 1, -1i64), (3, 2, 2), (9, 3, -5)];
        let stats = stats_with(&base);
        // shift every mean by +7 by scaling sums with a common pull count
        // trick is unavailable for integers, so compare via raw score argmax
        let means: Vec<f64> = stats.iter().map(ArmStats::mean_reward).collect();
        for shift in [-3.0, 0.0, 7.5] {
            let a = greedy_over(means.iter().copied(), &mut ChaCha8Rng::seed_from_u64(9));
            let b = greedy_over(
                means.iter().map(|m| m + shift),
                &mut ChaCha8Rng::seed_from_u64(9),
            );
            assert_eq!(a, b);
        }
    }

    #[test]
    fn posterior_mean_matches_closed_form() {
        assert_eq!(thompson_posterior_mean(1.0, 1.0, 0, 0), 0.5);
        assert_eq!(thompson_posterior_mean(1.0, 1.0, 3, 10), 4.0 / 12.0);
        assert_eq!(thompson_posterior_mean(2.0, 5.0, 10, 20), 12.0 / 27.0);
    }

    #[test]
    fn posterior_mean_matches_closed_form_on_a_grid() {
        // Drive a ThompsonState through win/loss sequences and compare the
        // incremental counts against the closed form.
        for wins in 0..=12u64 {
            for losses in 0..=12u64 {
                let mut state = ThompsonState::new(1);
                for i in 0..(wins + losses) {
                    let won = i < wins;
                    state.stats[0].record(&outcome(0, won, if won { 1 } else { -1 }));
                }
                let expected = (1.0 + wins as f64) / (2.0 + (wins + losses) as f64);
                assert_eq!(state.posterior_mean(0), expected);
                let (a, b) = state.posterior_params(0);
                assert!(a >= 1.0 && b >= 1.0);
            }
        }
    }

    #[test]
    fn thompson_sample_argmax_examples() {
        let payouts = [35, 8, 1];
        // 0.9 * 36 - 1 dominates both alternatives
        let arm = select_thompson_from_samples(&[0.9, 0.1, 0.1], &payouts, TsObjective::ExpectedReward);
        assert_eq!(arm, 0);
        // win-prob objective ignores payouts
        let arm = select_thompson_from_samples(&[0.2, 0.25, 0.6], &payouts, TsObjective::WinProb);
        assert_eq!(arm, 2);
        // exact tie resolves to the lowest index
        let arm = select_thompson_from_samples(&[0.5, 0.5], &[2, 1], TsObjective::WinProb);
        assert_eq!(arm, 0);
        // single arm
        assert_eq!(select_thompson_from_samples(&[0.01], &[35], TsObjective::ExpectedReward), 0);
    }

    #[test]
    fn select_thompson_single_arm() {
        let state = ThompsonState::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(select_thompson(&state, &[35], TsObjective::ExpectedReward, &mut rng), 0);
    }

    #[test]
    fn select_td_examples() {
        let mut state = TdState::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);

        // all-zero init: uniform over the three-way tie
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[select_td(&state, &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.02, "counts {counts:?}");
        }

        // two-way tie between arms 1 and 2
        state.q_values = vec![-0.1, 0.0, 0.0];
        let mut counts = [0u32; 3];
        for _ in 0..20_000 {
            counts[select_td(&state, &mut rng)] += 1;
        }
        assert_eq!(counts[0], 0);
        assert!((counts[1] as f64 / 20_000.0 - 0.5).abs() < 0.03);

        // unique argmax
        state.q_values = vec![3.5, -1.0, 0.0];
        for _ in 0..50 {
            assert_eq!(select_td(&state, &mut rng), 0);
        }
    }

    #[test]
    fn update_rules_match_their_definitions() {
        let payouts = [35, 8, 1];

        // random: no state at all
        let mut random = Agent::from_spec(&PolicySpec::Random, &payouts);
        random.update(&outcome(0, true, 35));

        // td0: Q = 0, alpha = 0.1, reward -1 -> -0.1; then reward +8 -> 0.71
        let td0_spec =
            PolicySpec::Td { lambda_variant: TdVariant::Td0, learning_rate: None };
        let mut td0 = Agent::from_spec(&td0_spec, &payouts);
        td0.update(&outcome(1, false, -1));
        if let Agent::Td { state, .. } = &td0 {
            assert!((state.q_values[1] - (-0.1)).abs() < 1e-15);
        } else {
            unreachable!()
        }
        td0.update(&outcome(1, true, 8));
        if let Agent::Td { state, .. } = &td0 {
            assert!((state.q_values[1] - 0.71).abs() < 1e-12);
        } else {
            unreachable!()
        }

        // td1: rewards (-1, -1, +8) -> exact mean 2
        let td1_spec = PolicySpec::Td { lambda_variant: TdVariant::Td1, learning_rate: None };
        let mut td1 = Agent::from_spec(&td1_spec, &payouts);
        td1.update(&outcome(2, false, -1));
        td1.update(&outcome(2, false, -1));
        td1.update(&outcome(2, true, 8));
        if let Agent::Td { state, .. } = &td1 {
            assert_eq!(state.q_values[2], 2.0);
            assert_eq!(state.stats[2], ArmStats { pulls: 3, wins: 1, reward_sum: 6 });
        } else {
            unreachable!()
        }

        // thompson: wins/pulls counted, losses reflected in beta
        let mut ts = Agent::from_spec(&PolicySpec::Thompson { ts_objective: TsObjective::default() }, &payouts);
        ts.update(&outcome(0, true, 35));
        ts.update(&outcome(0, false, -1));
        ts.update(&outcome(0, false, -1));
        if let Agent::Thompson { state, .. } = &ts {
            assert_eq!(state.posterior_params(0), (2.0, 3.0));
        } else {
            unreachable!()
        }
    }

    #[test]
    fn td0_converges_geometrically_to_a_constant_reward() {
        let alpha = 0.1f64;
        let c = 5.0f64;
        let mut q = 0.0f64;
        for n in 1..=40i32 {
            q += alpha * (c - q);
            let expected_gap = (1.0 - alpha).powi(n) * c;
            assert!(
                ((c - q) - expected_gap).abs() < 1e-12,
                "n={n}: gap {} vs {}",
                c - q,
                expected_gap
            );
        }
    }

    #[test]
    fn td1_q_value_is_the_exact_mean_after_every_update() {
        let spec = PolicySpec::Td { lambda_variant: TdVariant::Td1, learning_rate: None };
        let mut agent = Agent::from_spec(&spec, &[35, 8, 1]);
        let rewards = [-1i64, 8, -1, -1, 35, -1, 1, 1, -1, 8];
        let mut sum = 0i64;
        for (i, &r) in rewards.iter().enumerate() {
            sum += r;
            agent.update(&outcome(0, r > 0, r));
            if let Agent::Td { state, .. } = &agent {
                assert_eq!(state.q_values[0], sum as f64 / (i + 1) as f64);
            }
        }
    }

    #[test]
    fn arm_stats_reward_sum_identity() {
        // reward_sum == wins * r - (pulls - wins) when every win pays r
        let r = 8i64;
        let mut stats = ArmStats::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let won = rng.random::<f64>() < 0.3;
            stats.record(&outcome(0, won, if won { r } else { -1 }));
        }
        assert_eq!(stats.reward_sum, stats.wins as i64 * r - (stats.pulls - stats.wins) as i64);
    }

    #[test]
    fn win_prob_thompson_rarely_plays_the_zero_arm_long_run() {
        // One long fair-wheel session: under the win-probability objective
        // the posterior locks onto the most frequent winner (even), so the
        // zero arm's selection share must fall well below even's.
        let wheel = presets::fair();
        let spec = PolicySpec::Thompson { ts_objective: TsObjective::WinProb };
        let mut agent = Agent::from_spec(&spec, &wheel.payouts());
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let mut counts = [0u64; 3];
        for t in 1..=10_000 {
            let arm = agent.select(&mut rng);
            counts[arm] += 1;
            let outcome = wheel.spin(t, arm, &mut rng);
            agent.update(&outcome);
        }
        let zero = wheel.arm_index("zero").unwrap();
        let even = wheel.arm_index("even").unwrap();
        assert!(
            counts[zero] < counts[even],
            "zero chosen {} times vs even {}",
            counts[zero],
            counts[even]
        );
    }

    #[test]
    fn policy_spec_validation() {
        assert!(PolicySpec::Random.validate().is_ok());
        assert!(PolicySpec::EpsilonGreedy { epsilon: 0.0 }.validate().is_ok());
        assert!(PolicySpec::EpsilonGreedy { epsilon: 1.0 }.validate().is_ok());
        assert_eq!(
            PolicySpec::EpsilonGreedy { epsilon: 1.5 }.validate(),
            Err(PolicyError::EpsilonOutOfRange(1.5))
        );
        assert_eq!(
            PolicySpec::Td { lambda_variant: TdVariant::Td0, learning_rate: Some(0.0) }.validate(),
            Err(PolicyError::LearningRateOutOfRange(0.0))
        );
        assert!(PolicySpec::Td { lambda_variant: TdVariant::Td0, learning_rate: Some(1.0) }
            .validate()
            .is_ok());
        assert_eq!(
            PolicySpec::Td { lambda_variant: TdVariant::Td1, learning_rate: Some(0.1) }.validate(),
            Err(PolicyError::LearningRateOnTd1)
        );
    }

    #[test]
    fn policy_spec_serde_and_labels() {
        let parsed: PolicySpec = serde_json::from_str(r#"{"kind":"random"}"#).unwrap();
        assert_eq!(parsed, PolicySpec::Random);
        assert_eq!(parsed.label(), "random");

        let parsed: PolicySpec = serde_json::from_str(r#"{"kind":"epsilon_greedy"}"#).unwrap();
        assert_eq!(parsed, PolicySpec::EpsilonGreedy { epsilon: 0.1 });
        assert_eq!(parsed.label(), "epsilon_greedy[0.1]");

        let parsed: PolicySpec =
            serde_json::from_str(r#"{"kind":"thompson","ts_objective":"win_prob"}"#).unwrap();
        assert_eq!(parsed.label(), "thompson[win_prob]");
        let parsed: PolicySpec = serde_json::from_str(r#"{"kind":"thompson"}"#).unwrap();
        assert_eq!(parsed.label(), "thompson");

        let parsed: PolicySpec =
            serde_json::from_str(r#"{"kind":"td","lambda_variant":"td0","learning_rate":0.1}"#)
                .unwrap();
        assert_eq!(parsed.label(), "td0[0.1]");
        let parsed: PolicySpec =
            serde_json::from_str(r#"{"kind":"td","lambda_variant":"td1"}"#).unwrap();
        assert_eq!(parsed.label(), "td1");

        // round-trip
        for spec in [
            PolicySpec::Random,
            PolicySpec::EpsilonGreedy { epsilon: 0.25 },
            PolicySpec::Thompson { ts_objective: TsObjective::WinProb },
            PolicySpec::Td { lambda_variant: TdVariant::Td0, learning_rate: Some(0.2) },
            PolicySpec::Td { lambda_variant: TdVariant::Td1, learning_rate: None },
        ] {
            let json = serde_json::to_string(&spec).unwrap();
            let back: PolicySpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn beta_sampler_matches_the_beta_cdf() {
        // Kolmogorov-Smirnov-style check of the sampling backend against the
        // in-repo regularized incomplete beta (the Beta CDF).
        for &(alpha, beta) in &[(1.0, 1.0), (2.0, 5.0), (5.0, 1.5), (30.0, 70.0)] {
            let dist = Beta::new(alpha, beta).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            let n = 20_000;
            let mut draws: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
            draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut ks: f64 = 0.0;
            for (i, &x) in draws.iter().enumerate() {
                let cdf = crate::stats::regularized_incomplete_beta(x, alpha, beta).unwrap();
                let hi = (i + 1) as f64 / n as f64 - cdf;
                let lo = cdf - i as f64 / n as f64;
                ks = ks.max(hi.max(lo));
            }
            // K-S acceptance band at ~alpha = 0.001 for n = 20k is 0.0138;
            // leave margin for the fixed seed.
            assert!(ks < 0.016, "alpha={alpha} beta={beta}: KS statistic {ks}");
        }
    }
}
