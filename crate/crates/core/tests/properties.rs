//! Property tests for the cross-cutting invariants: dual-route agreement of
//! the top-reward distribution, incomplete-beta identities, ANOVA invariance,
//! and session accounting.

use banditbench::agents::{PolicySpec, TdVariant, TsObjective};
use banditbench::analysis::{top_reward_brute_force, top_reward_closed_form};
use banditbench::engine::{run_session_traced, SessionConfig};
use banditbench::stats::{one_way_anova, regularized_incomplete_beta, SampleGroup};
use banditbench::wheel::{presets, BetSpec, ScheduleOverride, WheelModel};
use proptest::prelude::*;

/// Up to eight arms with win probabilities inside (0.01, 0.99) and pairwise
/// distinct payouts in shuffled order.
fn arm_sets() -> impl Strategy<Value = (Vec<f64>, Vec<i64>)> {
    (1usize..=8).prop_flat_map(|k| {
        let thetas = prop::collection::vec(0.01f64..0.99, k);
        let payouts = prop::collection::btree_set(1i64..500, k)
            .prop_map(|set| set.into_iter().collect::<Vec<_>>())
            .prop_shuffle();
        (thetas, payouts)
    })
}

fn sample_groups() -> impl Strategy<Value = Vec<SampleGroup>> {
    prop::collection::vec(prop::collection::vec(-50.0f64..50.0, 3..=10), 2..=4).prop_map(
        |groups| {
            groups
                .into_iter()
                .enumerate()
                .map(|(i, values)| SampleGroup::new(format!("g{i}"), values))
                .collect()
        },
    )
}

proptest! {
    #[test]
    fn closed_form_equals_brute_force((thetas, payouts) in arm_sets()) {
        let closed = top_reward_closed_form(&thetas, &payouts).unwrap();
        let brute = top_reward_brute_force(&thetas, &payouts).unwrap();
        prop_assert!(closed.max_abs_diff(&brute) < 1e-12);

        let total: f64 = closed.probabilities.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        // strictly interior for K >= 2, up to f64 saturation near 1
        prop_assert!(closed.probabilities.iter().all(|&p| p > 0.0 && p <= 1.0));
        if thetas.len() >= 2 {
            prop_assert!(closed.probabilities.iter().all(|&p| p < 1.0));
        }
    }

    #[test]
    fn top_reward_is_monotone_in_each_theta(
        (thetas, payouts) in arm_sets(),
        arm_choice in any::<prop::sample::Index>(),
    ) {
        // a single arm sits at P = 1 regardless of theta
        prop_assume!(thetas.len() >= 2);
        let arm = arm_choice.index(thetas.len());
        let before = top_reward_closed_form(&thetas, &payouts).unwrap();
        let mut bumped = thetas.clone();
        bumped[arm] = (bumped[arm] + 0.005).min(0.995);
        prop_assume!(bumped[arm] > thetas[arm]);
        let after = top_reward_closed_form(&bumped, &payouts).unwrap();
        prop_assert!(
            after.probabilities[arm] >= before.probabilities[arm] - 1e-12,
            "arm {arm}: {} -> {}", before.probabilities[arm], after.probabilities[arm]
        );
        // strict growth except where f64 already saturates near 1
        if before.probabilities[arm] < 0.99 {
            prop_assert!(after.probabilities[arm] > before.probabilities[arm]);
        }
    }

    #[test]
    fn top_reward_commutes_with_arm_relabeling((thetas, payouts) in arm_sets()) {
        let base = top_reward_closed_form(&thetas, &payouts).unwrap();
        // rotate the arms by one position
        let k = thetas.len();
        let rotated_thetas: Vec<f64> = (0..k).map(|i| thetas[(i + 1) % k]).collect();
        let rotated_payouts: Vec<i64> = (0..k).map(|i| payouts[(i + 1) % k]).collect();
        let rotated = top_reward_closed_form(&rotated_thetas, &rotated_payouts).unwrap();
        for i in 0..k {
            prop_assert!((rotated.probabilities[i] - base.probabilities[(i + 1) % k]).abs() < 1e-12);
        }
    }

    #[test]
    fn incomplete_beta_complement_identity(
        x in 0.001f64..0.999,
        a in 0.1f64..80.0,
        b in 0.1f64..80.0,
    ) {
        let lhs = regularized_incomplete_beta(x, a, b).unwrap();
        let rhs = regularized_incomplete_beta(1.0 - x, b, a).unwrap();
        prop_assert!((lhs + rhs - 1.0).abs() < 1e-10, "I_{x}({a},{b}) identity: {lhs} + {rhs}");
    }

    #[test]
    fn anova_is_invariant_under_affine_maps(
        groups in sample_groups(),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let original = one_way_anova(&groups).unwrap();
        let mapped: Vec<SampleGroup> = groups
            .iter()
            .map(|g| SampleGroup::new(
                g.label.clone(),
                g.values.iter().map(|v| scale * v + shift).collect(),
            ))
            .collect();
        let transformed = one_way_anova(&mapped).unwrap();
        let tol = 1e-9 * original.f_statistic.abs().max(1.0);
        prop_assert!((original.f_statistic - transformed.f_statistic).abs() < tol);
        prop_assert!((original.p_value - transformed.p_value).abs() < 1e-9);
        prop_assert_eq!(original.df_between, transformed.df_between);
        prop_assert_eq!(original.df_within, transformed.df_within);
    }

    #[test]
    fn session_balance_accounting_is_exact(
        policy_index in 0usize..5,
        horizon_mode in any::<bool>(),
        size in 1u64..60,
        seed in any::<u64>(),
    ) {
        let policies = [
            PolicySpec::Random,
            PolicySpec::EpsilonGreedy { epsilon: 0.1 },
            PolicySpec::Thompson { ts_objective: TsObjective::ExpectedReward },
            PolicySpec::Td { lambda_variant: TdVariant::Td0, learning_rate: None },
            PolicySpec::Td { lambda_variant: TdVariant::Td1, learning_rate: None },
        ];
        let policy = &policies[policy_index];
        let wheel = presets::nonstationary();
        let (config, start) = if horizon_mode {
            (SessionConfig::Horizon { horizon: size }, 0)
        } else {
            (SessionConfig::Bankruptcy { initial_bankroll: size as i64, round_cap: 3_000 }, size as i64)
        };
        let result = run_session_traced(&wheel, policy, &config, seed);
        let trace = result.per_round_trace.as_ref().unwrap();
        let reward_sum: i64 = trace.iter().map(|o| o.net_reward).sum();
        prop_assert_eq!(result.final_balance, start + reward_sum);
        prop_assert_eq!(trace.len() as u64, result.rounds_played);
        // round numbers are 1..=n in order
        for (i, o) in trace.iter().enumerate() {
            prop_assert_eq!(o.round, i as u64 + 1);
        }
        if horizon_mode {
            prop_assert_eq!(result.rounds_played, size);
            prop_assert!(!result.bankrupt && !result.capped);
        } else {
            prop_assert!(result.bankrupt ^ result.capped);
            if result.bankrupt {
                prop_assert!(result.final_balance <= 0);
                // solvent after every earlier round
                let mut balance = start;
                for o in &trace[..trace.len() - 1] {
                    balance += o.net_reward;
                    prop_assert!(balance > 0);
                }
            } else {
                prop_assert_eq!(result.rounds_played, 3_000);
            }
        }
    }

    #[test]
    fn deeper_bankrolls_never_shorten_sessions(
        bankroll in 1i64..40,
        extra in 1i64..40,
        seed in any::<u64>(),
    ) {
        let wheel = presets::fair();
        let policy = PolicySpec::EpsilonGreedy { epsilon: 0.1 };
        let shallow = banditbench::engine::run_session(
            &wheel,
            &policy,
            &SessionConfig::Bankruptcy { initial_bankroll: bankroll, round_cap: 5_000 },
            seed,
        );
        let deep = banditbench::engine::run_session(
            &wheel,
            &policy,
            &SessionConfig::Bankruptcy { initial_bankroll: bankroll + extra, round_cap: 5_000 },
            seed,
        );
        prop_assert!(deep.rounds_played >= shallow.rounds_played);
    }

    #[test]
    fn theta_at_is_the_base_probability_outside_overrides(
        from in 1u64..500,
        width in 0u64..200,
        t in 1u64..1000,
        arm_choice in any::<prop::sample::Index>(),
    ) {
        let bets = vec![
            BetSpec::new("a", 0.25, 3),
            BetSpec::new("b", 0.5, 1),
        ];
        let schedule = vec![ScheduleOverride {
            from_round: from,
            to_round: from + width,
            arm_label: "a".to_string(),
            win_prob: 0.75,
        }];
        let wheel = WheelModel::new(bets, schedule).unwrap();
        let arm = arm_choice.index(2);
        let inside_window = arm == 0 && from <= t && t <= from + width;
        let expected = if inside_window { 0.75 } else if arm == 0 { 0.25 } else { 0.5 };
        prop_assert_eq!(wheel.theta_at(t, arm), expected);
    }
}
