//! Which arm yields the single highest realized payout?
//!
//! Draw every arm's win/loss independently in one joint realization and
//! condition on at least one arm winning; the winner of the realization is
//! the winning arm with the largest payout (all payouts are positive, so a
//! loss can never top a win). [`top_reward_closed_form`] evaluates the
//! resulting per-arm probabilities directly:
//!
//! ```text
//! P_k = theta_k / (1 - prod_j (1 - theta_j)) * prod_{i: r_i > r_k} (1 - theta_i)
//! ```
//!
//! [`top_reward_brute_force`] enumerates all `2^K` joint outcomes instead and
//! must agree to within 1e-12; it exists as an independent check of the
//! closed form. Both depend only on the payout *ordering*, never on payout
//! magnitudes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-arm probabilities of providing the highest realized reward, aligned
/// with the input arm order. Sums to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopRewardDistribution {
    pub probabilities: Vec<f64>,
}

impl TopRewardDistribution {
    pub fn max_abs_diff(&self, other: &TopRewardDistribution) -> f64 {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("need at least one arm")]
    NoArms,
    #[error("got {thetas} win probabilities but {payouts} payouts")]
    LengthMismatch { thetas: usize, payouts: usize },
    #[error("win probability at arm {index} must lie strictly inside (0, 1), got {value}")]
    ThetaOutOfRange { index: usize, value: f64 },
    #[error("payouts must be pairwise distinct, {value} appears more than once")]
    DuplicatePayout { value: i64 },
    #[error("brute-force enumeration supports at most {max} arms, got {got}")]
    TooManyArms { max: usize, got: usize },
}

/// Largest arm count the `2^K` enumeration accepts.
pub const BRUTE_FORCE_MAX_ARMS: usize = 20;

fn validate(thetas: &[f64], payouts: &[i64]) -> Result<(), AnalysisError> {
    if thetas.is_empty() {
        return Err(AnalysisError::NoArms);
    }
    if thetas.len() != payouts.len() {
        return Err(AnalysisError::LengthMismatch { thetas: thetas.len(), payouts: payouts.len() });
    }
    for (index, &value) in thetas.iter().enumerate() {
        if !(value > 0.0 && value < 1.0) {
            return Err(AnalysisError::ThetaOutOfRange { index, value });
        }
    }
    for (i, &p) in payouts.iter().enumerate() {
        if payouts[..i].contains(&p) {
            return Err(AnalysisError::DuplicatePayout { value: p });
        }
    }
    Ok(())
}

/// Closed-form per-arm probability of providing the highest realized reward,
/// conditioned on at least one arm winning.
pub fn top_reward_closed_form(
    thetas: &[f64],
    payouts: &[i64],
) -> Result<TopRewardDistribution, AnalysisError> {
    validate(thetas, payouts)?;
    let none_wins: f64 = thetas.iter().map(|t| 1.0 - t).product();
    let denom = 1.0 - none_wins;
    let probabilities = thetas
        .iter()
        .zip(payouts)
        .map(|(&theta_k, &r_k)| {
            let all_richer_lose: f64 = thetas
                .iter()
                .zip(payouts)
                .filter(|&(_, &r_i)| r_i > r_k)
                .map(|(&theta_i, _)| 1.0 - theta_i)
                .product();
            // the K = 1 ratio theta / (1 - (1 - theta)) can land one ulp
            // above 1
            (theta_k / denom * all_richer_lose).min(1.0)
        })
        .collect();
    Ok(TopRewardDistribution { probabilities })
}

/// Exhaustive `2^K` enumeration of independent joint win/loss outcomes.
///
/// Each outcome's probability is the product of per-arm `theta` or
/// `1 - theta` factors; outcomes with at least one win are assigned to the
/// winning arm with the largest payout, and the resulting mass is normalized
/// by the probability that anyone wins at all.
pub fn top_reward_brute_force(
    thetas: &[f64],
    payouts: &[i64],
) -> Result<TopRewardDistribution, AnalysisError> {
    validate(thetas, payouts)?;
    let k = thetas.len();
    if k > BRUTE_FORCE_MAX_ARMS {
        return Err(AnalysisError::TooManyArms { max: BRUTE_FORCE_MAX_ARMS, got: k });
    }

    let mut mass = vec![0.0f64; k];
    let mut any_win_mass = 0.0f64;
    for outcome in 1u64..(1 << k) {
        let mut prob = 1.0;
        let mut top: Option<usize> = None;
        for arm in 0..k {
            if outcome & (1 << arm) != 0 {
                prob *= thetas[arm];
                top = match top {
                    Some(best) if payouts[best] > payouts[arm] => Some(best),
                    _ => Some(arm),
                };
            } else {
                prob *= 1.0 - thetas[arm];
            }
        }
        any_win_mass += prob;
        mass[top.expect("outcome has at least one win")] += prob;
    }

    let probabilities = mass.into_iter().map(|m| m / any_win_mass).collect();
    Ok(TopRewardDistribution { probabilities })
}
