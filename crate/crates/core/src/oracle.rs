//! Brute-force reference implementations.
//!
//! Everything here evaluates a definition literally, with no shortcuts and no
//! helpers shared with the fast paths in `equilibria`. These functions exist
//! to pin expected values and to cross-check the fast implementations; they
//! are deliberately slow and deliberately plain.

// plain index loops keep these transcriptions of the definitions readable
#![allow(clippy::needless_range_loop)]

use thiserror::Error;

use crate::equilibria::{CorrelatedDistribution, MixedStrategy};
use crate::game::WinLoseGame;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive rule enumeration capped at {max} actions (got {n})")]
    TooManyActions { n: usize, max: usize },
}

/// A win-lose game held as two explicit truth tables.
#[derive(Debug, Clone)]
pub struct DenseWinLoseGame {
    n: usize,
    ua: Vec<Vec<u8>>,
    ub: Vec<Vec<u8>>,
    wins_a: Vec<Vec<usize>>,
    wins_b: Vec<Vec<usize>>,
}

impl DenseWinLoseGame {
    pub fn new(ua: Vec<Vec<u8>>, ub: Vec<Vec<u8>>) -> Self {
        let n = ua.len();
        assert!(ua.iter().all(|row| row.len() == n));
        assert_eq!(ub.len(), n);
        assert!(ub.iter().all(|row| row.len() == n));
        let wins_a = (0..n)
            .map(|u| (0..n).filter(|&v| ua[u][v] == 1).collect())
            .collect();
        let wins_b = (0..n)
            .map(|v| (0..n).filter(|&u| ub[u][v] == 1).collect())
            .collect();
        Self {
            n,
            ua,
            ub,
            wins_a,
            wins_b,
        }
    }

    /// Tabulates any game into truth tables.
    pub fn from_game(game: &impl WinLoseGame) -> Self {
        let n = game.num_actions();
        let ua = (0..n)
            .map(|u| (0..n).map(|v| game.utility_a(u, v) as u8).collect())
            .collect();
        let ub = (0..n)
            .map(|u| (0..n).map(|v| game.utility_b(u, v) as u8).collect())
            .collect();
        Self::new(ua, ub)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl WinLoseGame for DenseWinLoseGame {
    fn num_actions(&self) -> usize {
        self.n
    }

    fn utility_a(&self, u: usize, v: usize) -> f64 {
        self.ua[u][v] as f64
    }

    fn utility_b(&self, u: usize, v: usize) -> f64 {
        self.ub[u][v] as f64
    }

    fn a_wins(&self, u: usize) -> &[usize] {
        &self.wins_a[u]
    }

    fn b_wins(&self, v: usize) -> &[usize] {
        &self.wins_b[v]
    }
}

/// Single-swap regret by the definition: every `(u, u')` pair for A, every
/// `(v, v')` pair for B, each evaluated as a full sum over the opponent.
pub fn dense_ce_regret(game: &DenseWinLoseGame, mu: &CorrelatedDistribution) -> f64 {
    let n = game.n;
    let mut m = vec![vec![0.0f64; n]; n];
    for u in 0..n {
        for v in 0..n {
            m[u][v] = mu.mass(u, v);
        }
    }
    let mut worst = 0.0f64;
    for u in 0..n {
        for u2 in 0..n {
            let mut gain = 0.0;
            for v in 0..n {
                gain += m[u][v] * (game.ua[u2][v] as f64 - game.ua[u][v] as f64);
            }
            worst = worst.max(gain);
        }
    }
    for v in 0..n {
        for v2 in 0..n {
            let mut gain = 0.0;
            for u in 0..n {
                gain += m[u][v] * (game.ub[u][v2] as f64 - game.ub[u][v] as f64);
            }
            worst = worst.max(gain);
        }
    }
    worst
}

/// Switching-rule regret by literal enumeration of all `N^N` rules per
/// player. Only feasible for tiny games.
pub fn exhaustive_rule_regret(
    game: &DenseWinLoseGame,
    mu: &CorrelatedDistribution,
) -> Result<f64, OracleError> {
    let n = game.n;
    const MAX: usize = 6;
    if n > MAX {
        return Err(OracleError::TooManyActions { n, max: MAX });
    }
    let mut m = vec![vec![0.0f64; n]; n];
    for u in 0..n {
        for v in 0..n {
            m[u][v] = mu.mass(u, v);
        }
    }
    let mut worst = 0.0f64;

    let mut rule = vec![0usize; n];
    loop {
        let mut gain = 0.0;
        for u in 0..n {
            for v in 0..n {
                gain += m[u][v] * (game.ua[rule[u]][v] as f64 - game.ua[u][v] as f64);
            }
        }
        worst = worst.max(gain);
        if !advance(&mut rule, n) {
            break;
        }
    }

    let mut rule = vec![0usize; n];
    loop {
        let mut gain = 0.0;
        for u in 0..n {
            for v in 0..n {
                gain += m[u][v] * (game.ub[u][rule[v]] as f64 - game.ub[u][v] as f64);
            }
        }
        worst = worst.max(gain);
        if !advance(&mut rule, n) {
            break;
        }
    }
    Ok(worst)
}

fn advance(rule: &mut [usize], base: usize) -> bool {
    for digit in rule.iter_mut() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}

/// All pure Nash equilibria by full scan: `(u, v)` such that `u` maximizes
/// column `v` of A's table and `v` maximizes row `u` of B's table.
pub fn enumerate_pure_nash(game: &DenseWinLoseGame) -> Vec<(usize, usize)> {
    let n = game.n;
    let mut col_max_a = vec![0u8; n];
    for v in 0..n {
        for u in 0..n {
            col_max_a[v] = col_max_a[v].max(game.ua[u][v]);
        }
    }
    let mut row_max_b = vec![0u8; n];
    for u in 0..n {
        for v in 0..n {
            row_max_b[u] = row_max_b[u].max(game.ub[u][v]);
        }
    }
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if game.ua[u][v] == col_max_a[v] && game.ub[u][v] == row_max_b[u] {
                out.push((u, v));
            }
        }
    }
    out
}

/// Bayesian Nash regret by the definition: for every type of the deviating
/// player, take the conditional expectation over the opponent's type under a
/// uniform prior on matched type pairs, and maximize over pure deviations.
pub fn definition_eval_bayesian(
    sub_games: &[DenseWinLoseGame],
    profiles: &[(MixedStrategy, MixedStrategy)],
) -> f64 {
    let t = sub_games.len();
    assert_eq!(profiles.len(), t);
    let n = sub_games[0].n;
    // prior phi(i, j) = 1/T on i == j, 0 elsewhere
    let phi = |i: usize, j: usize| if i == j { 1.0 / t as f64 } else { 0.0 };
    let mut worst = 0.0f64;

    for ta in 0..t {
        let row_mass: f64 = (0..t).map(|tb| phi(ta, tb)).sum();
        let cond = |tb: usize| phi(ta, tb) / row_mass;
        let mut base = 0.0;
        for tb in 0..t {
            for u in 0..n {
                for v in 0..n {
                    base += cond(tb)
                        * profiles[ta].0.prob(u)
                        * profiles[tb].1.prob(v)
                        * sub_games[ta].ua[u][v] as f64;
                }
            }
        }
        for u2 in 0..n {
            let mut dev = 0.0;
            for tb in 0..t {
                for v in 0..n {
                    dev += cond(tb) * profiles[tb].1.prob(v) * sub_games[ta].ua[u2][v] as f64;
                }
            }
            worst = worst.max(dev - base);
        }
    }

    for tb in 0..t {
        let col_mass: f64 = (0..t).map(|ta| phi(ta, tb)).sum();
        let cond = |ta: usize| phi(ta, tb) / col_mass;
        let mut base = 0.0;
        for ta in 0..t {
            for u in 0..n {
                for v in 0..n {
                    base += cond(ta)
                        * profiles[ta].0.prob(u)
                        * profiles[tb].1.prob(v)
                        * sub_games[tb].ub[u][v] as f64;
                }
            }
        }
        for v2 in 0..n {
            let mut dev = 0.0;
            for ta in 0..t {
                for u in 0..n {
                    dev += cond(ta) * profiles[ta].0.prob(u) * sub_games[tb].ub[u][v2] as f64;
                }
            }
            worst = worst.max(dev - base);
        }
    }
    worst
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

    #[test]
    fn dense_ce_on_uniform_matches_closed_form() {
        let g = DenseWinLoseGame::from_game(&figure_game());
        let mu = CorrelatedDistribution::uniform(20);
        let r = dense_ce_regret(&g, &mu);
        assert!((r - 3.0 / 400.0).abs() < 1e-15);
    }

    #[test]
    fn dense_ce_zero_on_pure_point_mass() {
        let fig = figure_game();
        let g = DenseWinLoseGame::from_game(&fig);
        let u = Vertex::new(1, Tag::One).linear_index(5);
        let v = Vertex::new(2, Tag::Zero).linear_index(5);
        let mu = CorrelatedDistribution::point_mass(20, u, v);
        assert_eq!(dense_ce_regret(&g, &mu), 0.0);
    }

    #[test]
    fn rule_enumeration_hand_case() {
        // one nonzero A-utility at (1,1) in a 3-action game
        let mut ua = vec![vec![0u8; 3]; 3];
        ua[1][1] = 1;
        let ub = vec![vec![0u8; 3]; 3];
        let g = DenseWinLoseGame::new(ua, ub);
        let mu = CorrelatedDistribution::uniform(3);
        let r = exhaustive_rule_regret(&g, &mu).unwrap();
        assert!((r - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rule_enumeration_identity_is_zero() {
        let ua = vec![vec![1u8; 2]; 2];
        let ub = vec![vec![1u8; 2]; 2];
        let g = DenseWinLoseGame::new(ua, ub);
        let mu = CorrelatedDistribution::uniform(2);
        // every rule has zero gain when utilities are constant
        assert_eq!(exhaustive_rule_regret(&g, &mu).unwrap(), 0.0);
    }

    #[test]
    fn rule_enumeration_rejects_large_games() {
        let g = DenseWinLoseGame::new(vec![vec![0u8; 7]; 7], vec![vec![0u8; 7]; 7]);
        let mu = CorrelatedDistribution::uniform(7);
        assert!(matches!(
            exhaustive_rule_regret(&g, &mu),
            Err(OracleError::TooManyActions { n: 7, .. })
        ));
    }

    #[test]
    fn pure_nash_on_figure_game() {
        let fig = figure_game();
        let g = DenseWinLoseGame::from_game(&fig);
        let u = Vertex::new(1, Tag::One).linear_index(5);
        let v = Vertex::new(2, Tag::Zero).linear_index(5);
        assert_eq!(enumerate_pure_nash(&g), vec![(u, v)]);
    }

    #[test]
    fn pure_nash_absent_without_dispute() {
        let z = BitVector::parse("00000").unwrap();
        let g = TwoCycleGame::build(z.clone(), z, false).unwrap();
        assert_eq!(
            enumerate_pure_nash(&DenseWinLoseGame::from_game(&g)),
            vec![]
        );
    }
}
