//! Protocol sweeps, structural diagnostics, information isolation, and
//! transcript determinism at the library level.

mod common;

use rand::Rng;

use common::rng;
use two_cycle_core::equilibria::{ce_regret, ne_regret, wsne_regret, MixedStrategy};
use two_cycle_core::game::WinLoseGame;
use two_cycle_core::generators::{
    cycle_ne, gen_instance, perturbed_ce, perturbed_ne, InstanceOptions,
};
use two_cycle_core::recovery::diagnostics::{non_increasing, slowly_increasing};
use two_cycle_core::recovery::{
    ceil_log2, end_to_end_disjointness, extract_slowly_increasing, is_non_increasing,
    is_slowly_increasing, recover_bayesian, recover_from_correlated, recover_from_nash,
    recover_from_wsne, run_algorithm1, run_algorithm2, PartyViewA, PartyViewB, RecoveryKind,
};
use two_cycle_core::{BayesianTwoCycleGame, BitVector, TwoCycleGame};

fn views(game: &TwoCycleGame) -> (PartyViewA, PartyViewB) {
    (
        PartyViewA::from_bits(game.x()),
        PartyViewB::from_bits(game.y()),
    )
}

#[test]
fn correlated_pipeline_with_diagnostics() {
    let mut rng = rng(0x51EE7);
    for case in 0..25u64 {
        let n = 3 + (case as usize * 7) % 30;
        let (x, y) = gen_instance(&InstanceOptions::new(n, 400 + case)).unwrap();
        let game = TwoCycleGame::build(x, y, true).unwrap();
        let big_n = game.num_actions() as f64;
        let eta = rng.gen::<f64>() / (100.0 * big_n);
        let mu = perturbed_ce(&game, eta).unwrap();
        let epsilon = ce_regret(&game, &mu).unwrap().value;
        assert!(
            epsilon <= 1.0 / (24.0 * big_n.powi(3)),
            "n={n} eps={epsilon}"
        );

        let (view_a, view_b) = views(&game);
        let pair = extract_slowly_increasing(&view_a, &view_b, &mu).unwrap();
        let delta = 3.0 * epsilon;
        assert!(is_slowly_increasing(&game, &pair, delta), "n={n}");
        assert!(pair.b_total() >= 3.0 / (4.0 * big_n), "n={n}");
        assert!(slowly_increasing::back_edge_bound(&game, &pair, delta));
        assert!(slowly_increasing::midway_layer_bound(&game, &pair, delta));
        assert!(slowly_increasing::undisputed_bound(&game, &pair, delta));
        assert!(slowly_increasing::concentration_dichotomy(
            &game, &pair, delta
        ));

        let key = game.key_vertices().unwrap();
        let out = run_algorithm1(&view_a, &view_b, &pair, delta).unwrap();
        assert_eq!((out.u, out.v), (key.u_star, key.v0), "n={n}");
        assert!(out.transcript.total_bits <= 3 + ceil_log2(n), "n={n}");
    }
}

#[test]
fn nash_pipeline_with_diagnostics() {
    let mut rng = rng(0x7E57);
    for case in 0..25u64 {
        let n = 3 + (case as usize * 5) % 30;
        let (x, y) = gen_instance(&InstanceOptions::new(n, 900 + case)).unwrap();
        let game = TwoCycleGame::build(x, y, true).unwrap();
        let big_n = game.num_actions() as f64;
        let scale = rng.gen::<f64>() / (32.0 * big_n * big_n);
        let (a, b) = perturbed_ne(&game, scale).unwrap();
        let epsilon = ne_regret(&game, &a, &b).unwrap().value;
        assert!(epsilon <= 1.0 / (16.0 * big_n * big_n), "n={n}");

        let p = 1.0 / (4.0 * big_n);
        assert!(is_non_increasing(&game, &a, &b, p), "n={n}");
        assert!(non_increasing::back_edge_bound(&game, &a, &b, p));
        assert!(non_increasing::midway_layer_bound(&game, &a, &b, p));
        assert!(non_increasing::undisputed_bound(&game, &a, &b, p));
        assert!(non_increasing::concentration_dichotomy(&game, &a, &b, p));

        let (view_a, view_b) = views(&game);
        let key = game.key_vertices().unwrap();
        let out = run_algorithm2(&view_a, &view_b, &a, &b, p).unwrap();
        assert_eq!((out.u, out.v), (key.u_star, key.v0), "n={n}");
        assert!(out.transcript.total_bits <= 1 + ceil_log2(n), "n={n}");
    }
}

#[test]
fn exact_cycle_profiles_recover_through_nash_pipeline() {
    // exact mixed equilibria whose support can sit far from the pure pair
    for case in 0..20u64 {
        let n = 4 + (case as usize * 3) % 24;
        let (x, y) = gen_instance(&InstanceOptions::new(n, 4242 + case)).unwrap();
        let game = TwoCycleGame::build(x, y, true).unwrap();
        let (a, b) = cycle_ne(&game);
        let epsilon = ne_regret(&game, &a, &b).unwrap().value;
        assert!(
            epsilon <= 1e-12,
            "cycle profile should be exact, got {epsilon}"
        );
        let (view_a, view_b) = views(&game);
        let key = game.key_vertices().unwrap();
        let out = recover_from_nash(&view_a, &view_b, &a, &b, epsilon).unwrap();
        assert_eq!((out.u, out.v), (key.u_star, key.v0), "n={n} case={case}");
    }
}

#[test]
fn wsne_pipeline_on_supported_profiles() {
    for case in 0..25u64 {
        let n = 3 + (case as usize * 4) % 30;
        let (x, y) = gen_instance(&InstanceOptions::new(n, 1300 + case)).unwrap();
        let game = TwoCycleGame::build(x, y, true).unwrap();
        let key = game.key_vertices().unwrap();
        let a = MixedStrategy::point_mass(game.num_actions(), game.index(key.u_star));
        let b = MixedStrategy::point_mass(game.num_actions(), game.index(key.v0));
        let epsilon = wsne_regret(&game, &a, &b).unwrap().value;
        assert!(epsilon <= 1.0 / game.num_actions() as f64);
        assert!(is_non_increasing(&game, &a, &b, 0.0));
        let (view_a, view_b) = views(&game);
        let out = recover_from_wsne(&view_a, &view_b, &a, &b).unwrap();
        assert_eq!((out.u, out.v), (key.u_star, key.v0));
        assert!(out.transcript.total_bits <= 1 + ceil_log2(n));
    }
}

#[test]
fn bayesian_pipeline_across_type_counts() {
    for (case, t) in (0..30u64).zip([2usize, 4, 8].into_iter().cycle()) {
        let n = if case % 2 == 0 { 12 } else { 16 };
        let (x, y) = gen_instance(&InstanceOptions::new(t * n, 2000 + case)).unwrap();
        let bgame = BayesianTwoCycleGame::build(&x, &y, t).unwrap();
        let profiles: Vec<_> = bgame.sub_games().iter().map(cycle_ne).collect();
        let views_a: Vec<_> = bgame
            .sub_games()
            .iter()
            .map(|g| PartyViewA::from_bits(g.x()))
            .collect();
        let views_b: Vec<_> = bgame
            .sub_games()
            .iter()
            .map(|g| PartyViewB::from_bits(g.y()))
            .collect();
        let epsilon = two_cycle_core::equilibria::bayesian_ne_regret(&bgame, &profiles)
            .unwrap()
            .value;
        let truth = bgame.disputed_type();
        // strategies of sub-games without a pure equilibrium cannot look
        // concentrated at the classification threshold, on either side
        let p = 1.0 / (4.0 * bgame.num_actions() as f64);
        for (i, (a, b)) in profiles.iter().enumerate() {
            if i + 1 == truth {
                continue;
            }
            for v in 0..bgame.num_actions() {
                let label = |side: &str| format!("type {} side {side} on {v}", i + 1);
                assert!(
                    !two_cycle_core::recovery::is_concentrated(a.probs(), v, p),
                    "{}",
                    label("A")
                );
                assert!(
                    !two_cycle_core::recovery::is_concentrated(b.probs(), v, p),
                    "{}",
                    label("B")
                );
            }
        }
        let out = recover_bayesian(&views_a, &views_b, &profiles, epsilon).unwrap();
        let key = bgame.sub_game(truth).key_vertices().unwrap();
        assert_eq!(out.game_type, Some(truth), "T={t} n={n} case={case}");
        assert_eq!((out.u, out.v), (key.u_star, key.v0));
        assert!(
            out.transcript.total_bits <= ceil_log2(t) + 1 + ceil_log2(n),
            "T={t} n={n}: {} bits",
            out.transcript.total_bits
        );
    }
}

/// Builds A's view from the x string alone; y never enters this function.
fn isolated_view_a(x: &str) -> PartyViewA {
    PartyViewA::from_bits(&BitVector::parse(x).unwrap())
}

/// Builds B's view from the y string alone.
fn isolated_view_b(y: &str) -> PartyViewB {
    PartyViewB::from_bits(&BitVector::parse(y).unwrap())
}

#[test]
fn views_are_isolated_and_protocols_run_on_them() {
    let view_a = isolated_view_a("11001");
    let view_b = isolated_view_b("10011");

    // shared inputs for every protocol
    let game = TwoCycleGame::build(view_a.x().clone(), view_b.y().clone(), true).unwrap();
    let key = game.key_vertices().unwrap();
    let mu = perturbed_ce(&game, 1.0 / 4000.0).unwrap();
    let epsilon = ce_regret(&game, &mu).unwrap().value;
    let out1 = recover_from_correlated(&view_a, &view_b, &mu, epsilon).unwrap();
    assert_eq!((out1.u, out1.v), (key.u_star, key.v0));

    let (a, b) = perturbed_ne(&game, 1.0 / 12800.0).unwrap();
    let eps2 = ne_regret(&game, &a, &b).unwrap().value;
    let out2 = recover_from_nash(&view_a, &view_b, &a, &b, eps2).unwrap();
    assert_eq!((out2.u, out2.v), (key.u_star, key.v0));

    let pa = MixedStrategy::point_mass(20, game.index(key.u_star));
    let pb = MixedStrategy::point_mass(20, game.index(key.v0));
    let out3 = recover_from_wsne(&view_a, &view_b, &pa, &pb).unwrap();
    assert_eq!((out3.u, out3.v), (key.u_star, key.v0));
}

#[test]
fn identical_inputs_give_byte_identical_transcripts() {
    let (x, y) = gen_instance(&InstanceOptions::new(17, 5)).unwrap();
    let run = || {
        let (i, transcript) =
            end_to_end_disjointness(&x, &y, RecoveryKind::Correlated, 99).unwrap();
        (i, serde_json::to_string(&transcript).unwrap())
    };
    let (i1, t1) = run();
    let (i2, t2) = run();
    assert_eq!(i1, i2);
    assert_eq!(t1, t2);
}

#[test]
fn end_to_end_sweep_recovers_disputed_index() {
    for case in 0..60u64 {
        let n = 3 + (case as usize) % 28;
        let (x, y) = gen_instance(&InstanceOptions::new(n, 7000 + case)).unwrap();
        let expected = two_cycle_core::disputed_indices(&x, &y).unwrap()[0];
        let kind = match case % 3 {
            0 => RecoveryKind::Correlated,
            1 => RecoveryKind::Nash,
            _ => RecoveryKind::Wsne,
        };
        let (found, _) = end_to_end_disjointness(&x, &y, kind, case).unwrap();
        assert_eq!(found, expected, "n={n} case={case} kind={kind:?}");
    }
}

#[test]
fn correlated_recovery_from_exact_cycle_products() {
    // products of exact cycle equilibria have zero swap regret; when the
    // cycle is not the pure pair itself, B sees the disputed layer directly
    // and Algorithm 1 finishes on its first message
    for case in 0..20u64 {
        let n = 4 + (case as usize * 5) % 26;
        let (x, y) = gen_instance(&InstanceOptions::new(n, 8800 + case)).unwrap();
        let game = TwoCycleGame::build(x, y, true).unwrap();
        let (a, b) = cycle_ne(&game);
        let mu = two_cycle_core::equilibria::product_distribution(&a, &b).unwrap();
        let epsilon = ce_regret(&game, &mu).unwrap().value;
        assert!(epsilon <= 1e-12, "product of exact profile, got {epsilon}");
        let (view_a, view_b) = views(&game);
        let pair = extract_slowly_increasing(&view_a, &view_b, &mu).unwrap();
        let delta = 3.0 * epsilon;
        assert!(is_slowly_increasing(&game, &pair, delta));
        assert!(slowly_increasing::back_edge_bound(&game, &pair, delta));
        assert!(slowly_increasing::midway_layer_bound(&game, &pair, delta));
        assert!(slowly_increasing::undisputed_bound(&game, &pair, delta));
        // cycles through the disputed tag-1 vertex land in the other branch
        // of the dichotomy than the concentrated perturbed families do
        assert!(slowly_increasing::concentration_dichotomy(
            &game, &pair, delta
        ));
        let key = game.key_vertices().unwrap();
        let out = recover_from_correlated(&view_a, &view_b, &mu, epsilon).unwrap();
        assert_eq!((out.u, out.v), (key.u_star, key.v0), "n={n} case={case}");
        assert!(out.transcript.total_bits <= 3 + ceil_log2(n));
    }
}
