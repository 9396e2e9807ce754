//! The betting environment: arm economics, fair/skewed win probabilities,
//! time-varying schedules, and single-round outcome sampling.
//!
//! A [`WheelModel`] is a fixed, ordered set of bet types ([`BetSpec`]) plus an
//! optional schedule of time-windowed probability overrides
//! ([`ScheduleOverride`]). The model is immutable after construction and can
//! be shared freely across concurrent sessions; randomness is always supplied
//! by the caller.
//!
//! Each round stakes exactly $1 on one arm: a win pays the arm's `net_payout`
//! on top of the returned stake, a loss costs the dollar. Only the chosen
//! arm's outcome is ever observed, so arms are sampled as independent
//! Bernoulli draws rather than as a single pocket-level wheel; this is what
//! lets a skewed wheel raise one arm's probability without touching the
//! others.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One arm's economics: how often it wins and what a win pays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetSpec {
    /// Short identifier, unique within a wheel.
    pub label: String,
    /// Probability of winning a round on this arm, strictly inside (0, 1).
    pub win_prob: f64,
    /// Dollars gained on a win in addition to keeping the $1 stake.
    /// A loss always costs exactly $1.
    pub net_payout: i64,
}

impl BetSpec {
    pub fn new(label: impl Into<String>, win_prob: f64, net_payout: i64) -> Self {
        Self { label: label.into(), win_prob, net_payout }
    }

    /// Expected net dollars per round: `win_prob * (net_payout + 1) - 1`.
    pub fn expected_value(&self) -> f64 {
        self.win_prob * (self.net_payout as f64 + 1.0) - 1.0
    }
}

/// Replaces one arm's win probability inside an inclusive round window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOverride {
    /// First round (1-based, inclusive) the override applies to.
    #[serde(rename = "from")]
    pub from_round: u64,
    /// Last round (inclusive) the override applies to.
    #[serde(rename = "to")]
    pub to_round: u64,
    /// Label of the arm whose probability changes.
    #[serde(rename = "arm")]
    pub arm_label: String,
    /// Win probability inside the window, strictly inside (0, 1).
    pub win_prob: f64,
}

/// Outcome of a single $1 bet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    /// Round number, starting at 1.
    pub round: u64,
    /// Index of the arm that was played.
    pub arm: usize,
    pub won: bool,
    /// `+net_payout` of the arm if won, `-1` otherwise.
    pub net_reward: i64,
}

/// Constraint violation found while building a [`WheelModel`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WheelError {
    #[error("bets: wheel must define at least one bet")]
    NoBets,
    #[error("bets[{index}].win_prob: must lie strictly inside (0, 1), got {value}")]
    WinProbOutOfRange { index: usize, value: f64 },
    #[error("bets[{index}].net_payout: must be an integer >= 1, got {value}")]
    NetPayoutOutOfRange { index: usize, value: i64 },
    #[error("bets[{index}].label: duplicate label `{label}`")]
    DuplicateLabel { index: usize, label: String },
    #[error("bets[{index}].net_payout: payouts must be pairwise distinct, {value} appears twice")]
    DuplicatePayout { index: usize, value: i64 },
    #[error("schedule[{index}]: window start {from} exceeds window end {to}")]
    EmptyWindow { index: usize, from: u64, to: u64 },
    #[error("schedule[{index}]: window start must be >= 1")]
    WindowStartsAtZero { index: usize },
    #[error("schedule[{index}].arm: no bet labelled `{label}`")]
    UnknownArm { index: usize, label: String },
    #[error("schedule[{index}].win_prob: must lie strictly inside (0, 1), got {value}")]
    OverrideProbOutOfRange { index: usize, value: f64 },
    #[error("schedule[{index}]: overlaps an earlier override for arm `{label}`")]
    OverlappingOverrides { index: usize, label: String },
}

/// An override with its arm label resolved to an index.
#[derive(Debug, Clone, PartialEq)]
struct ResolvedOverride {
    from_round: u64,
    to_round: u64,
    arm: usize,
    win_prob: f64,
}

/// The arm set plus a time-indexed probability-override schedule.
///
/// Immutable after construction; all invariants are checked by
/// [`WheelModel::new`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WheelModel {
    bets: Vec<BetSpec>,
    schedule: Vec<ScheduleOverride>,
    #[serde(skip)]
    resolved: Vec<ResolvedOverride>,
}

impl WheelModel {
    /// Validates the arm set and schedule and builds the model.
    pub fn new(bets: Vec<BetSpec>, schedule: Vec<ScheduleOverride>) -> Result<Self, WheelError> {
        if bets.is_empty() {
            return Err(WheelError::NoBets);
        }
        for (index, bet) in bets.iter().enumerate() {
            if !(bet.win_prob > 0.0 && bet.win_prob < 1.0) {
                return Err(WheelError::WinProbOutOfRange { index, value: bet.win_prob });
            }
            if bet.net_payout < 1 {
                return Err(WheelError::NetPayoutOutOfRange { index, value: bet.net_payout });
            }
            if bets[..index].iter().any(|b| b.label == bet.label) {
                return Err(WheelError::DuplicateLabel { index, label: bet.label.clone() });
            }
            if bets[..index].iter().any(|b| b.net_payout == bet.net_payout) {
                return Err(WheelError::DuplicatePayout { index, value: bet.net_payout });
            }
        }

        let mut resolved = Vec::with_capacity(schedule.len());
        for (index, ov) in schedule.iter().enumerate() {
            if ov.from_round == 0 {
                return Err(WheelError::WindowStartsAtZero { index });
            }
            if ov.from_round > ov.to_round {
                return Err(WheelError::EmptyWindow {
                    index,
                    from: ov.from_round,
                    to: ov.to_round,
                });
            }
            if !(ov.win_prob > 0.0 && ov.win_prob < 1.0) {
                return Err(WheelError::OverrideProbOutOfRange { index, value: ov.win_prob });
            }
            let arm = bets
                .iter()
                .position(|b| b.label == ov.arm_label)
                .ok_or_else(|| WheelError::UnknownArm { index, label: ov.arm_label.clone() })?;
            let overlaps = resolved.iter().any(|r: &ResolvedOverride| {
                r.arm == arm && ov.from_round <= r.to_round && r.from_round <= ov.to_round
            });
            if overlaps {
                return Err(WheelError::OverlappingOverrides {
                    index,
                    label: ov.arm_label.clone(),
                });
            }
            resolved.push(ResolvedOverride {
                from_round: ov.from_round,
                to_round: ov.to_round,
                arm,
                win_prob: ov.win_prob,
            });
        }

        Ok(Self { bets, schedule, resolved })
    }

    /// Number of arms `K`.
    pub fn arm_count(&self) -> usize {
        self.bets.len()
    }

    pub fn bets(&self) -> &[BetSpec] {
        &self.bets
    }

    pub fn schedule(&self) -> &[ScheduleOverride] {
        &self.schedule
    }

    /// Index of the arm with the given label.
    pub fn arm_index(&self, label: &str) -> Option<usize> {
        self.bets.iter().position(|b| b.label == label)
    }

    /// Net payouts in arm order.
    pub fn payouts(&self) -> Vec<i64> {
        self.bets.iter().map(|b| b.net_payout).collect()
    }

    /// Win probability of `arm` at round `t` (1-based): the override value if
    /// some schedule window covers `(t, arm)`, the base value otherwise.
    ///
    /// # Panics
    /// If `t == 0` or `arm` is out of range.
    pub fn theta_at(&self, t: u64, arm: usize) -> f64 {
        assert!(t >= 1, "round numbers start at 1");
        assert!(arm < self.bets.len(), "arm index {arm} out of range for {} arms", self.bets.len());
        for ov in &self.resolved {
            if ov.arm == arm && ov.from_round <= t && t <= ov.to_round {
                return ov.win_prob;
            }
        }
        self.bets[arm].win_prob
    }

    /// Plays one $1 round on `arm` at round `t`: an independent Bernoulli
    /// draw with success probability [`WheelModel::theta_at`].
    pub fn spin<R: Rng + ?Sized>(&self, t: u64, arm: usize, rng: &mut R) -> RoundOutcome {
        let theta = self.theta_at(t, arm);
        let won = rng.random::<f64>() < theta;
        let net_reward = if won { self.bets[arm].net_payout } else { -1 };
        RoundOutcome { round: t, arm, won, net_reward }
    }
}

/// Which payout Table convention the `zero` preset arm uses.
///
/// European tables quote the zero bet as 36:1; read as a *gross* return
/// (stake included) that is a net payout of 35 and makes every preset arm's
/// expected value exactly -1/37. Read literally as a *net* payout of 36 the
/// zero arm becomes a fair coin on the fair wheel and worth exactly +$1.00
/// per round on the skewed wheel. `Net35` is the default; the distinction
/// only moves the zero arm's expected value, never the analysis-module
/// top-reward distribution (which depends on the payout ordering alone).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroPayoutConvention {
    /// 36:1 read as gross return: net payout 35.
    #[default]
    Net35,
    /// 36:1 read as net payout: net payout 36.
    Net36,
}

impl ZeroPayoutConvention {
    fn zero_net_payout(self) -> i64 {
        match self {
            ZeroPayoutConvention::Net35 => 35,
            ZeroPayoutConvention::Net36 => 36,
        }
    }
}

/// The standard three-arm wheels: `fair`, `skewed`, and `nonstationary`.
///
/// All probabilities are exact integer ratios over 37 evaluated in double
/// precision. The arms are, in order: `zero` (1/37), `corner` (4/37), and
/// `even` (18/37), with net payouts 35 (see [`ZeroPayoutConvention`]), 8,
/// and 1.
pub mod presets {
    use super::*;

    pub const FAIR: &str = "fair";
    pub const SKEWED: &str = "skewed";
    pub const NONSTATIONARY: &str = "nonstationary";

    fn bets(convention: ZeroPayoutConvention, zero_prob: f64) -> Vec<BetSpec> {
        vec![
            BetSpec::new("zero", zero_prob, convention.zero_net_payout()),
            BetSpec::new("corner", 4.0 / 37.0, 8),
            BetSpec::new("even", 18.0 / 37.0, 1),
        ]
    }

    /// All arms share the expected value -1/37 (under `Net35`).
    pub fn fair_with(convention: ZeroPayoutConvention) -> WheelModel {
        WheelModel::new(bets(convention, 1.0 / 37.0), Vec::new()).expect("preset is valid")
    }

    /// The zero arm's win probability is doubled for every round, giving it
    /// a positive expected value.
    pub fn skewed_with(convention: ZeroPayoutConvention) -> WheelModel {
        WheelModel::new(bets(convention, 2.0 / 37.0), Vec::new()).expect("preset is valid")
    }

    /// Fair wheel, except the zero arm's win probability is doubled during
    /// rounds 100..=200.
    pub fn nonstationary_with(convention: ZeroPayoutConvention) -> WheelModel {
        let schedule = vec![ScheduleOverride {
            from_round: 100,
            to_round: 200,
            arm_label: "zero".to_string(),
            win_prob: 2.0 / 37.0,
        }];
        WheelModel::new(bets(convention, 1.0 / 37.0), schedule).expect("preset is valid")
    }

    pub fn fair() -> WheelModel {
        fair_with(ZeroPayoutConvention::default())
    }

    pub fn skewed() -> WheelModel {
        skewed_with(ZeroPayoutConvention::default())
    }

    pub fn nonstationary() -> WheelModel {
        nonstationary_with(ZeroPayoutConvention::default())
    }

    /// Looks a preset up by name.
    pub fn by_name(name: &str, convention: ZeroPayoutConvention) -> Option<WheelModel> {
        match name {
            FAIR => Some(fair_with(convention)),
            SKEWED => Some(skewed_with(convention)),
            NONSTATIONARY => Some(nonstationary_with(convention)),
            _ => None,
        }
    }
}
