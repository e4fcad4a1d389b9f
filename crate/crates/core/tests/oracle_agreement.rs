//! Fast paths against the brute-force oracles.

mod common;

use common::{promise_game, random_correlated, random_dense_game, random_mixed, rng};
use two_cycle_core::equilibria::{
    bayesian_ne_regret, ce_regret, ne_regret, rule_ce_regret, EVAL_TOLERANCE,
};
use two_cycle_core::game::WinLoseGame;
use two_cycle_core::oracle::{
    definition_eval_bayesian, dense_ce_regret, enumerate_pure_nash, exhaustive_rule_regret,
    DenseWinLoseGame,
};
use two_cycle_core::{BayesianTwoCycleGame, BitVector};

#[test]
fn swap_regret_matches_dense_oracle_on_game_instances() {
    let mut rng = rng(0xA11CE);
    for (case, n) in [3usize, 5, 8, 16].into_iter().enumerate() {
        let game = promise_game(n, case as u64 * 31 + 7);
        let dense = DenseWinLoseGame::from_game(&game);
        for rep in 0..25 {
            let mu = random_correlated(game.num_actions(), &mut rng);
            let fast = ce_regret(&game, &mu).unwrap().value;
            let oracle = dense_ce_regret(&dense, &mu);
            assert!(
                (fast - oracle).abs() <= EVAL_TOLERANCE,
                "n={n} rep={rep}: fast {fast} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn rule_regret_matches_exhaustive_enumeration_on_generic_games() {
    let mut rng = rng(0xB0B);
    for case in 0..50 {
        let n = 2 + case % 4; // 2..=5 actions
        let game = random_dense_game(n, &mut rng);
        let mu = random_correlated(n, &mut rng);
        let fast = rule_ce_regret(&game, &mu).unwrap().value;
        let oracle = exhaustive_rule_regret(&game, &mu).unwrap();
        assert!(
            (fast - oracle).abs() <= EVAL_TOLERANCE,
            "case {case} (n={n}): fast {fast} vs oracle {oracle}"
        );
    }
}

#[test]
fn swap_regret_matches_dense_oracle_on_generic_games() {
    let mut rng = rng(0xC0FFEE);
    for case in 0..50 {
        let n = 2 + case % 5;
        let game = random_dense_game(n, &mut rng);
        let mu = random_correlated(n, &mut rng);
        let fast = ce_regret(&game, &mu).unwrap().value;
        let oracle = dense_ce_regret(&game, &mu);
        assert!((fast - oracle).abs() <= EVAL_TOLERANCE, "case {case}");
    }
}

#[test]
fn bayesian_regret_matches_definitional_evaluation() {
    let mut rng = rng(0xBEEF);
    let x = BitVector::parse("11001000000000000000").unwrap();
    let y = BitVector::parse("10011000000000000000").unwrap();
    for t in [2usize, 4] {
        let bgame = BayesianTwoCycleGame::build(&x, &y, t).unwrap();
        let subs: Vec<_> = bgame
            .sub_games()
            .iter()
            .map(DenseWinLoseGame::from_game)
            .collect();
        for case in 0..25 {
            let profiles: Vec<_> = (0..t)
                .map(|_| {
                    (
                        random_mixed(bgame.num_actions(), &mut rng),
                        random_mixed(bgame.num_actions(), &mut rng),
                    )
                })
                .collect();
            let fast = bayesian_ne_regret(&bgame, &profiles).unwrap().value;
            let oracle = definition_eval_bayesian(&subs, &profiles);
            assert!(
                (fast - oracle).abs() <= EVAL_TOLERANCE,
                "T={t} case={case}: fast {fast} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn single_type_reduction_equals_plain_nash_regret() {
    let mut rng = rng(0xD00D);
    // two identical sub-games collapse to the per-type quantity
    let x = BitVector::parse("1100110010").unwrap();
    let y = BitVector::parse("1001110011").unwrap();
    let bgame = BayesianTwoCycleGame::build(&x, &y, 2).unwrap();
    for _ in 0..10 {
        let a = random_mixed(20, &mut rng);
        let b = random_mixed(20, &mut rng);
        let profiles = vec![(a.clone(), b.clone()), (a.clone(), b.clone())];
        let fast = bayesian_ne_regret(&bgame, &profiles).unwrap().value;
        let per_type = ne_regret(bgame.sub_game(1), &a, &b)
            .unwrap()
            .value
            .max(ne_regret(bgame.sub_game(2), &a, &b).unwrap().value);
        assert!((fast - per_type).abs() <= EVAL_TOLERANCE);
    }
}

#[test]
fn pure_nash_enumeration_agrees_with_key_vertices() {
    for case in 0..60u64 {
        let n = 3 + (case as usize % 30);
        let game = promise_game(n, 1000 + case);
        let key = game.key_vertices().unwrap();
        let found = enumerate_pure_nash(&DenseWinLoseGame::from_game(&game));
        assert_eq!(
            found,
            vec![(game.index(key.u_star), game.index(key.v0))],
            "n={n} case={case}"
        );
    }
}

#[test]
fn sparse_distributions_agree_with_oracles() {
    let mut rng = rng(0x5BA);
    for case in 0..40u64 {
        let n = 3 + (case as usize % 10);
        let game = promise_game(n, 600 + case);
        let dense = DenseWinLoseGame::from_game(&game);
        let n_actions = game.num_actions();
        let support = 1 + (case as usize % (n_actions * n_actions / 4));
        let mu = common::random_sparse_correlated(n_actions, support, &mut rng);
        assert!(!mu.is_dense() || support > n_actions * n_actions / 4);
        let fast = ce_regret(&game, &mu).unwrap().value;
        let oracle = dense_ce_regret(&dense, &mu);
        assert!(
            (fast - oracle).abs() <= EVAL_TOLERANCE,
            "case {case}: fast {fast} vs oracle {oracle}"
        );
    }
    // switching rules on tiny games, sparse support
    for case in 0..30u64 {
        let n = 2 + (case as usize % 4);
        let game = random_dense_game(n, &mut rng);
        let support = 1 + (case as usize % (n * n / 2).max(1));
        let mu = common::random_sparse_correlated(n, support, &mut rng);
        let fast = rule_ce_regret(&game, &mu).unwrap().value;
        let oracle = exhaustive_rule_regret(&game, &mu).unwrap();
        assert!(
            (fast - oracle).abs() <= EVAL_TOLERANCE,
            "rule case {case}: fast {fast} vs oracle {oracle}"
        );
    }
}
