//! Exact regret measurement for every equilibrium notion the crate handles.
//!
//! Every verifier returns the optimal deviation value together with a witness
//! that attains it; "is an eps-approximate X" is simply `regret <= eps`. The
//! self-deviation (doing nothing) is always among the candidates, so reported
//! values are never negative and no post-hoc clamping happens anywhere.
//!
//! Values are exact maxima of linear expressions in the input distribution:
//!
//! * `ce_regret`: best single-action swap, conditioned on the drawn action;
//! * `rule_ce_regret`: best simultaneous remap of all actions; computed
//!   per-action, which is exact because the slices `mu(u, .)` are disjoint;
//! * `cce_regret`: best constant action played regardless of the draw;
//! * `ne_regret` / `wsne_regret`: best pure deviation against the opponent's
//!   mixture, in expectation resp. per supported action;
//! * `bayesian_ne_regret`: per-type Nash regret; with the uniform diagonal
//!   prior the type conditionals collapse, so the per-type maximum equals the
//!   full definition (the oracle module checks the equality literally).

mod dist;

use serde::{Deserialize, Serialize};

pub use dist::{
    CorrelatedDistribution, DistError, MixedStrategy, EVAL_TOLERANCE, MASS_TOLERANCE,
    SUPPORT_EPSILON,
};

use crate::game::{BayesianTwoCycleGame, WinLoseGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

/// A deviation that witnesses a regret value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Deviation {
    /// Replace `from` with `to` when `from` is drawn (correlated / well
    /// supported notions).
    Swap { from: usize, to: usize },
    /// Always play `to` (coarse correlated / Nash notions).
    Constant { to: usize },
    /// Remap every action through `map` (rule correlated notion).
    Rule { map: Vec<usize> },
    /// Keep following the drawn recommendation unchanged. The zero-gain
    /// deviation that is always available; it witnesses a regret of zero
    /// when every constant deviation loses strictly (no constant action is
    /// its own "self-deviation", so the coarse notion needs this case).
    Stay,
    /// A deviation inside one sub-game of a Bayesian game (1-based type).
    Typed {
        game_type: usize,
        inner: Box<Deviation>,
    },
}

/// The measured regret of one input: the best deviation value over both
/// players, with the player and deviation that attain it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretReport {
    pub player: Player,
    pub value: f64,
    pub witness: Deviation,
}

fn check_actions(expected: usize, got: usize) -> Result<(), DistError> {
    if expected == got {
        Ok(())
    } else {
        Err(DistError::WrongActionCount { expected, got })
    }
}

fn pick_side(a: (f64, Deviation), b: (f64, Deviation)) -> RegretReport {
    if b.0 > a.0 {
        RegretReport {
            player: Player::B,
            value: b.0,
            witness: b.1,
        }
    } else {
        RegretReport {
            player: Player::A,
            value: a.0,
            witness: a.1,
        }
    }
}

/// Best single-action swap for player A: conditioned on drawing `u`, switch
/// to the `u'` maximizing the slice mass `mu(u, wins(u'))`.
fn best_swap_rows(game: &impl WinLoseGame, mu: &CorrelatedDistribution) -> (f64, Deviation) {
    let n = game.num_actions();
    let mut best = (0.0, Deviation::Swap { from: 0, to: 0 });
    for u in 0..n {
        if mu.marginal_a()[u] <= 0.0 {
            continue;
        }
        let base = mu.row_mass_over(u, game.a_wins(u));
        for to in 0..n {
            let gain = mu.row_mass_over(u, game.a_wins(to)) - base;
            if gain > best.0 {
                best = (gain, Deviation::Swap { from: u, to });
            }
        }
    }
    best
}

fn best_swap_cols(game: &impl WinLoseGame, mu: &CorrelatedDistribution) -> (f64, Deviation) {
    let n = game.num_actions();
    let mut best = (0.0, Deviation::Swap { from: 0, to: 0 });
    for v in 0..n {
        if mu.marginal_b()[v] <= 0.0 {
            continue;
        }
        let base = mu.col_mass_over(game.b_wins(v), v);
        for to in 0..n {
            let gain = mu.col_mass_over(game.b_wins(to), v) - base;
            if gain > best.0 {
                best = (gain, Deviation::Swap { from: v, to });
            }
        }
    }
    best
}

/// Regret against single-action swaps.
pub fn ce_regret(
    game: &impl WinLoseGame,
    mu: &CorrelatedDistribution,
) -> Result<RegretReport, DistError> {
    check_actions(game.num_actions(), mu.n())?;
    Ok(pick_side(
        best_swap_rows(game, mu),
        best_swap_cols(game, mu),
    ))
}

fn best_rule_rows(game: &impl WinLoseGame, mu: &CorrelatedDistribution) -> (f64, Deviation) {
    let n = game.num_actions();
    let mut total = 0.0;
    let mut map: Vec<usize> = (0..n).collect();
    for (u, remap) in map.iter_mut().enumerate() {
        if mu.marginal_a()[u] <= 0.0 {
            continue;
        }
        let base = mu.row_mass_over(u, game.a_wins(u));
        let mut best_gain = 0.0;
        let mut best_to = u;
        for to in 0..n {
            let gain = mu.row_mass_over(u, game.a_wins(to)) - base;
            if gain > best_gain {
                best_gain = gain;
                best_to = to;
            }
        }
        total += best_gain;
        *remap = best_to;
    }
    (total, Deviation::Rule { map })
}

fn best_rule_cols(game: &impl WinLoseGame, mu: &CorrelatedDistribution) -> (f64, Deviation) {
    let n = game.num_actions();
    let mut total = 0.0;
    let mut map: Vec<usize> = (0..n).collect();
    for (v, remap) in map.iter_mut().enumerate() {
        if mu.marginal_b()[v] <= 0.0 {
            continue;
        }
        let base = mu.col_mass_over(game.b_wins(v), v);
        let mut best_gain = 0.0;
        let mut best_to = v;
        for to in 0..n {
            let gain = mu.col_mass_over(game.b_wins(to), v) - base;
            if gain > best_gain {
                best_gain = gain;
                best_to = to;
            }
        }
        total += best_gain;
        *remap = best_to;
    }
    (total, Deviation::Rule { map })
}

/// Regret against switching rules. Each action's remap is chosen
/// independently; the `u`-slices of `mu` are disjoint, so the sum of
/// per-action optima is the exact optimum over all `N^N` rules.
pub fn rule_ce_regret(
    game: &impl WinLoseGame,
    mu: &CorrelatedDistribution,
) -> Result<RegretReport, DistError> {
    check_actions(game.num_actions(), mu.n())?;
    Ok(pick_side(
        best_rule_rows(game, mu),
        best_rule_cols(game, mu),
    ))
}

fn expected_utility_a(game: &impl WinLoseGame, mu: &CorrelatedDistribution) -> f64 {
    (0..game.num_actions())
        .map(|u| mu.row_mass_over(u, game.a_wins(u)))
        .sum()
}

fn expected_utility_b(game: &impl WinLoseGame, mu: &CorrelatedDistribution) -> f64 {
    (0..game.num_actions())
        .map(|v| mu.col_mass_over(game.b_wins(v), v))
        .sum()
}

/// Regret against constant deviations: ignore the draw and always play `to`.
/// This is the standard coarse notion (restriction of switching rules to
/// constant maps), adopted here as the definition.
pub fn cce_regret(
    game: &impl WinLoseGame,
    mu: &CorrelatedDistribution,
) -> Result<RegretReport, DistError> {
    check_actions(game.num_actions(), mu.n())?;
    let n = game.num_actions();

    let base_a = expected_utility_a(game, mu);
    let mut best_a = (0.0, Deviation::Stay);
    for to in 0..n {
        let val: f64 = game.a_wins(to).iter().map(|&v| mu.marginal_b()[v]).sum();
        let gain = val - base_a;
        if gain > best_a.0 {
            best_a = (gain, Deviation::Constant { to });
        }
    }

    let base_b = expected_utility_b(game, mu);
    let mut best_b = (0.0, Deviation::Stay);
    for to in 0..n {
        let val: f64 = game.b_wins(to).iter().map(|&u| mu.marginal_a()[u]).sum();
        let gain = val - base_b;
        if gain > best_b.0 {
            best_b = (gain, Deviation::Constant { to });
        }
    }
    Ok(pick_side(best_a, best_b))
}

/// Nash regret of a strategy profile: best pure deviation in expectation.
/// Pure deviations suffice because the payoff is linear in the deviator's
/// mixture.
pub fn ne_regret(
    game: &impl WinLoseGame,
    a: &MixedStrategy,
    b: &MixedStrategy,
) -> Result<RegretReport, DistError> {
    check_actions(game.num_actions(), a.n())?;
    check_actions(game.num_actions(), b.n())?;
    let n = game.num_actions();

    let response_a: Vec<f64> = (0..n).map(|u| b.mass_over(game.a_wins(u))).collect();
    let base_a: f64 = (0..n).map(|u| a.prob(u) * response_a[u]).sum();
    let mut best_a = (0.0, Deviation::Stay);
    for (to, &response) in response_a.iter().enumerate() {
        let gain = response - base_a;
        if gain > best_a.0 {
            best_a = (gain, Deviation::Constant { to });
        }
    }

    let response_b: Vec<f64> = (0..n).map(|v| a.mass_over(game.b_wins(v))).collect();
    let base_b: f64 = (0..n).map(|v| b.prob(v) * response_b[v]).sum();
    let mut best_b = (0.0, Deviation::Stay);
    for (to, &response) in response_b.iter().enumerate() {
        let gain = response - base_b;
        if gain > best_b.0 {
            best_b = (gain, Deviation::Constant { to });
        }
    }
    Ok(pick_side(best_a, best_b))
}

/// Well-supported regret: the worst gap between any supported action and the
/// best response, per player.
pub fn wsne_regret(
    game: &impl WinLoseGame,
    a: &MixedStrategy,
    b: &MixedStrategy,
) -> Result<RegretReport, DistError> {
    check_actions(game.num_actions(), a.n())?;
    check_actions(game.num_actions(), b.n())?;
    let n = game.num_actions();

    let response_a: Vec<f64> = (0..n).map(|u| b.mass_over(game.a_wins(u))).collect();
    let mut best_a = (0.0, Deviation::Stay);
    for &from in &a.support() {
        for to in 0..n {
            let gain = response_a[to] - response_a[from];
            if gain > best_a.0 {
                best_a = (gain, Deviation::Swap { from, to });
            }
        }
    }

    let response_b: Vec<f64> = (0..n).map(|v| a.mass_over(game.b_wins(v))).collect();
    let mut best_b = (0.0, Deviation::Stay);
    for &from in &b.support() {
        for to in 0..n {
            let gain = response_b[to] - response_b[from];
            if gain > best_b.0 {
                best_b = (gain, Deviation::Swap { from, to });
            }
        }
    }
    Ok(pick_side(best_a, best_b))
}

/// Bayesian Nash regret: the prior is uniform on matched types, so the
/// conditional over the opponent's type is a point mass and the overall
/// regret is the maximum per-type Nash regret.
pub fn bayesian_ne_regret(
    bgame: &BayesianTwoCycleGame,
    profiles: &[(MixedStrategy, MixedStrategy)],
) -> Result<RegretReport, DistError> {
    if profiles.len() != bgame.num_types() {
        return Err(DistError::WrongProfileCount {
            expected: bgame.num_types(),
            got: profiles.len(),
        });
    }
    let mut best: Option<RegretReport> = None;
    for (i, (a, b)) in profiles.iter().enumerate() {
        let sub = ne_regret(bgame.sub_game(i + 1), a, b)?;
        if best.as_ref().is_none_or(|cur| sub.value > cur.value) {
            best = Some(RegretReport {
                player: sub.player,
                value: sub.value,
                witness: Deviation::Typed {
                    game_type: i + 1,
                    inner: Box::new(sub.witness),
                },
            });
        }
    }
    Ok(best.expect("at least two types"))
}

/// The uniform distribution over all action pairs of a game.
pub fn uniform_correlated(game: &impl WinLoseGame) -> CorrelatedDistribution {
    CorrelatedDistribution::uniform(game.num_actions())
}

/// The product distribution of a strategy profile.
pub fn product_distribution(
    a: &MixedStrategy,
    b: &MixedStrategy,
) -> Result<CorrelatedDistribution, DistError> {
    CorrelatedDistribution::product(a, b)
}

/// Re-evaluates a witness produced by `ce_regret`, `rule_ce_regret` or
/// `cce_regret` against the same distribution.
pub fn replay_correlated_witness(
    game: &impl WinLoseGame,
    mu: &CorrelatedDistribution,
    report: &RegretReport,
) -> f64 {
    let n = game.num_actions();
    match (&report.witness, report.player) {
        (Deviation::Swap { from, to }, Player::A) => {
            mu.row_mass_over(*from, game.a_wins(*to)) - mu.row_mass_over(*from, game.a_wins(*from))
        }
        (Deviation::Swap { from, to }, Player::B) => {
            mu.col_mass_over(game.b_wins(*to), *from) - mu.col_mass_over(game.b_wins(*from), *from)
        }
        (Deviation::Rule { map }, Player::A) => (0..n)
            .map(|u| mu.row_mass_over(u, game.a_wins(map[u])) - mu.row_mass_over(u, game.a_wins(u)))
            .sum(),
        (Deviation::Rule { map }, Player::B) => (0..n)
            .map(|v| mu.col_mass_over(game.b_wins(map[v]), v) - mu.col_mass_over(game.b_wins(v), v))
            .sum(),
        (Deviation::Constant { to }, Player::A) => {
            let val: f64 = game.a_wins(*to).iter().map(|&v| mu.marginal_b()[v]).sum();
            val - expected_utility_a(game, mu)
        }
        (Deviation::Constant { to }, Player::B) => {
            let val: f64 = game.b_wins(*to).iter().map(|&u| mu.marginal_a()[u]).sum();
            val - expected_utility_b(game, mu)
        }
        (Deviation::Stay, _) => 0.0,
        (Deviation::Typed { .. }, _) => panic!("typed witness on a correlated input"),
    }
}

/// Re-evaluates a witness produced by `ne_regret` or `wsne_regret`.
pub fn replay_profile_witness(
    game: &impl WinLoseGame,
    a: &MixedStrategy,
    b: &MixedStrategy,
    report: &RegretReport,
) -> f64 {
    let n = game.num_actions();
    match (&report.witness, report.player) {
        (Deviation::Constant { to }, Player::A) => {
            let base: f64 = (0..n)
                .map(|u| a.prob(u) * b.mass_over(game.a_wins(u)))
                .sum();
            b.mass_over(game.a_wins(*to)) - base
        }
        (Deviation::Constant { to }, Player::B) => {
            let base: f64 = (0..n)
                .map(|v| b.prob(v) * a.mass_over(game.b_wins(v)))
                .sum();
            a.mass_over(game.b_wins(*to)) - base
        }
        (Deviation::Swap { from, to }, Player::A) => {
            b.mass_over(game.a_wins(*to)) - b.mass_over(game.a_wins(*from))
        }
        (Deviation::Swap { from, to }, Player::B) => {
            a.mass_over(game.b_wins(*to)) - a.mass_over(game.b_wins(*from))
        }
        (Deviation::Stay, _) => 0.0,
        _ => panic!("unsupported witness for a profile input"),
    }
}

/// Re-evaluates a witness produced by `bayesian_ne_regret`.
pub fn replay_bayesian_witness(
    bgame: &BayesianTwoCycleGame,
    profiles: &[(MixedStrategy, MixedStrategy)],
    report: &RegretReport,
) -> f64 {
    match &report.witness {
        Deviation::Typed { game_type, inner } => {
            let (a, b) = &profiles[*game_type - 1];
            let sub_report = RegretReport {
                player: report.player,
                value: report.value,
                witness: (**inner).clone(),
            };
            replay_profile_witness(bgame.sub_game(*game_type), a, b, &sub_report)
        }
        _ => panic!("bayesian witness must be typed"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVector;
    use crate::game::TwoCycleGame;
    use crate::vertex::{Tag, Vertex};

    fn figure_game() -> TwoCycleGame {
        TwoCycleGame::build(
            BitVector::parse("11001").unwrap(),
            BitVector::parse("10011").unwrap(),
            true,
        )
        .unwrap()
    }

    fn idx(g: &TwoCycleGame, i: usize, tag: Tag) -> usize {
        Vertex::new(i, tag).linear_index(g.n())
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= EVAL_TOLERANCE, "{a} vs {b}");
    }

    #[test]
    fn ce_zero_on_pure_equilibrium_point_mass() {
        let g = figure_game();
        let mu =
            CorrelatedDistribution::point_mass(20, idx(&g, 1, Tag::One), idx(&g, 2, Tag::Zero));
        close(ce_regret(&g, &mu).unwrap().value, 0.0);
    }

    #[test]
    fn ce_uniform_is_three_over_four_hundred() {
        let g = figure_game();
        let mu = uniform_correlated(&g);
        let r = ce_regret(&g, &mu).unwrap();
        close(r.value, 3.0 / 400.0);
        close(replay_correlated_witness(&g, &mu, &r), r.value);
    }

    #[test]
    fn ce_point_mass_off_equilibrium_is_one() {
        let g = figure_game();
        let v = idx(&g, 3, Tag::Zero);
        let mu = CorrelatedDistribution::point_mass(20, v, v);
        let r = ce_regret(&g, &mu).unwrap();
        close(r.value, 1.0);
        // player A swaps (3,0) for its winning reply (4,0)
        assert_eq!(r.player, Player::A);
        assert_eq!(
            r.witness,
            Deviation::Swap {
                from: v,
                to: idx(&g, 4, Tag::Zero)
            }
        );
    }

    #[test]
    fn rule_zero_on_pure_equilibrium_point_mass() {
        let g = figure_game();
        let mu =
            CorrelatedDistribution::point_mass(20, idx(&g, 1, Tag::One), idx(&g, 2, Tag::Zero));
        close(rule_ce_regret(&g, &mu).unwrap().value, 0.0);
    }

    #[test]
    fn rule_uniform_is_one_tenth() {
        let g = figure_game();
        let mu = uniform_correlated(&g);
        let r = rule_ce_regret(&g, &mu).unwrap();
        close(r.value, 0.1);
        close(replay_correlated_witness(&g, &mu, &r), r.value);
    }

    #[test]
    fn cce_uniform_is_one_tenth_for_a() {
        let g = figure_game();
        let mu = uniform_correlated(&g);
        let r = cce_regret(&g, &mu).unwrap();
        close(r.value, 0.1);
        assert_eq!(r.player, Player::A);
        close(replay_correlated_witness(&g, &mu, &r), r.value);
    }

    #[test]
    fn cce_zero_on_pure_point_mass() {
        let g = figure_game();
        let mu =
            CorrelatedDistribution::point_mass(20, idx(&g, 1, Tag::One), idx(&g, 2, Tag::Zero));
        close(cce_regret(&g, &mu).unwrap().value, 0.0);
    }

    #[test]
    fn ne_zero_on_pure_equilibrium() {
        let g = figure_game();
        let a = MixedStrategy::point_mass(20, idx(&g, 1, Tag::One));
        let b = MixedStrategy::point_mass(20, idx(&g, 2, Tag::Zero));
        close(ne_regret(&g, &a, &b).unwrap().value, 0.0);
    }

    #[test]
    fn ne_uniform_profile_is_one_tenth() {
        let g = figure_game();
        let u = MixedStrategy::uniform(20);
        let r = ne_regret(&g, &u, &u).unwrap();
        close(r.value, 0.1);
        close(replay_profile_witness(&g, &u, &u, &r), r.value);
    }

    #[test]
    fn wsne_uniform_profile_is_three_twentieths() {
        let g = figure_game();
        let u = MixedStrategy::uniform(20);
        let r = wsne_regret(&g, &u, &u).unwrap();
        close(r.value, 3.0 / 20.0);
        close(replay_profile_witness(&g, &u, &u, &r), r.value);
    }

    #[test]
    fn wsne_zero_on_pure_equilibrium() {
        let g = figure_game();
        let a = MixedStrategy::point_mass(20, idx(&g, 1, Tag::One));
        let b = MixedStrategy::point_mass(20, idx(&g, 2, Tag::Zero));
        close(wsne_regret(&g, &a, &b).unwrap().value, 0.0);
    }

    #[test]
    fn wsne_ignores_sub_epsilon_support() {
        // mass below the support cutoff must not open a deviation gap
        let g = figure_game();
        let mut probs = vec![0.0; 20];
        probs[idx(&g, 1, Tag::One)] = 1.0 - 1e-13;
        probs[idx(&g, 3, Tag::Zero)] = 1e-13;
        let a = MixedStrategy::new(probs).unwrap();
        let b = MixedStrategy::point_mass(20, idx(&g, 2, Tag::Zero));
        let r = wsne_regret(&g, &a, &b).unwrap();
        assert!(r.value <= 1e-9, "got {}", r.value);
    }

    #[test]
    fn uniform_correlated_support_is_full() {
        let g = figure_game();
        assert_eq!(uniform_correlated(&g).support_size(), 400);
    }

    #[test]
    fn bayesian_regret_is_max_over_types() {
        let x = BitVector::parse("1100100000").unwrap();
        let y = BitVector::parse("1001100000").unwrap();
        let bg = BayesianTwoCycleGame::build(&x, &y, 2).unwrap();
        let g1 = bg.sub_game(1);
        let pure_a = MixedStrategy::point_mass(20, idx(g1, 1, Tag::One));
        let pure_b = MixedStrategy::point_mass(20, idx(g1, 2, Tag::Zero));
        let unif = MixedStrategy::uniform(20);
        let profiles = vec![(pure_a, pure_b), (unif.clone(), unif.clone())];
        let r = bayesian_ne_regret(&bg, &profiles).unwrap();
        let expect = ne_regret(bg.sub_game(2), &unif, &unif).unwrap().value;
        close(r.value, expect);
        match &r.witness {
            Deviation::Typed { game_type, .. } => assert_eq!(*game_type, 2),
            other => panic!("unexpected witness {other:?}"),
        }
        close(replay_bayesian_witness(&bg, &profiles, &r), r.value);
    }

    #[test]
    fn bayesian_profile_count_checked() {
        let x = BitVector::parse("1100100000").unwrap();
        let y = BitVector::parse("1001100000").unwrap();
        let bg = BayesianTwoCycleGame::build(&x, &y, 2).unwrap();
        let unif = MixedStrategy::uniform(20);
        assert!(matches!(
            bayesian_ne_regret(&bg, &[(unif.clone(), unif)]),
            Err(DistError::WrongProfileCount { .. })
        ));
    }

    #[test]
    fn coarse_regret_reports_stay_when_correlation_beats_every_constant() {
        // perfectly correlated play on a coordination game: following the
        // draw wins 1, every constant action wins 1/2, so the only
        // non-losing deviation is to stay put
        let g = crate::oracle::DenseWinLoseGame::new(
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 0], vec![0, 1]],
        );
        let mu = CorrelatedDistribution::from_entries(2, [((0, 0), 0.5), ((1, 1), 0.5)]).unwrap();
        let r = cce_regret(&g, &mu).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.witness, Deviation::Stay);
        assert_eq!(replay_correlated_witness(&g, &mu, &r), 0.0);
        // swap regret is zero here too, via ordinary self-swaps
        assert_eq!(ce_regret(&g, &mu).unwrap().value, 0.0);
    }

    #[test]
    fn report_serialization_shape() {
        let r = RegretReport {
            player: Player::A,
            value: 0.5,
            witness: Deviation::Swap { from: 1, to: 2 },
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"player":"A","value":0.5,"witness":{"kind":"swap","from":1,"to":2}}"#
        );
    }
}
