//! Exhaustive structural checks on scalar pairs and profiles.
//!
//! These predicates verify, per instance, the intermediate bounds that make
//! the recovery protocols correct. They exist for the test and acceptance
//! suites; the protocols themselves never call them.
//!
//! All of them require a promise instance and panic otherwise.

use crate::bits::wrap_index;
use crate::equilibria::MixedStrategy;
use crate::game::{KeyVertices, TwoCycleGame};
use crate::recovery::{is_concentrated, ScalarPair};
use crate::vertex::{Tag, Vertex};

fn keys(game: &TwoCycleGame) -> KeyVertices {
    game.key_vertices()
        .expect("diagnostics require a promise instance")
}

/// Checks on slowly increasing pairs.
pub mod slowly_increasing {
    use super::*;

    /// Back-edges inflate a vertex by at most one extra `delta`:
    /// `a(u) <= b(forward in-neighbors of u) + 2 delta` for every `u = (i, z)`
    /// with `z` a plain bit and `i + 1` not the disputed layer.
    pub fn back_edge_bound(game: &TwoCycleGame, pair: &ScalarPair, delta: f64) -> bool {
        let k = keys(game);
        let n = game.n();
        (1..=n)
            .filter(|&i| wrap_index(i as i64 + 1, n) != k.disputed_index)
            .all(|i| {
                [Tag::Zero, Tag::One].iter().all(|&tag| {
                    let u = Vertex::new(i, tag).linear_index(n);
                    let fwd: f64 = game.in_a_forward_slice(u).iter().map(|&w| pair.b[w]).sum();
                    pair.a[u] <= fwd + 2.0 * delta
                })
            })
    }

    /// Layer mass is controlled by midway-layer mass:
    /// `a(L_i) + b(L_i) <= a(L^m_i) + b(L^m_i) + 3 delta` away from the layer
    /// preceding the dispute.
    pub fn midway_layer_bound(game: &TwoCycleGame, pair: &ScalarPair, delta: f64) -> bool {
        let k = keys(game);
        let n = game.n();
        let sum = |vals: &[f64], vs: &[Vertex]| -> f64 {
            vs.iter().map(|v| vals[v.linear_index(n)]).sum()
        };
        (1..=n)
            .filter(|&i| wrap_index(i as i64 + 1, n) != k.disputed_index)
            .all(|i| {
                let layer = game.layer(i);
                let midway = game.midway_layer(i);
                sum(&pair.a, &layer) + sum(&pair.b, &layer)
                    <= sum(&pair.a, &midway) + sum(&pair.b, &midway) + 3.0 * delta
            })
    }

    /// Undisputed layers with `y_i = 0` carry at most `3 delta` on `(i, 1)`.
    pub fn undisputed_bound(game: &TwoCycleGame, pair: &ScalarPair, delta: f64) -> bool {
        let k = keys(game);
        let n = game.n();
        (1..=n)
            .filter(|&i| i != k.disputed_index && game.y().bit(i) == 0)
            .all(|i| pair.b[Vertex::new(i, Tag::One).linear_index(n)] <= 3.0 * delta)
    }

    /// Either the disputed layer's tag-1 vertex carries more than `3 delta`
    /// on B's side, or both fields are `5 N delta`-concentrated on the pure
    /// equilibrium pair.
    pub fn concentration_dichotomy(game: &TwoCycleGame, pair: &ScalarPair, delta: f64) -> bool {
        let k = keys(game);
        let n = game.n();
        let p = 5.0 * (4 * n) as f64 * delta;
        pair.b[k.v1.linear_index(n)] > 3.0 * delta
            || (is_concentrated(&pair.a, k.u_star.linear_index(n), p)
                && is_concentrated(&pair.b, k.v0.linear_index(n), p))
    }
}

/// Checks on non-increasing profiles.
pub mod non_increasing {
    use super::*;

    /// Back-edges can be ignored: for every back-edge target `u` whose source
    /// is not the disputed `(i*, 0)`, a cap on the forward in-neighbors of `u`
    /// caps `a(u)` itself.
    pub fn back_edge_bound(
        game: &TwoCycleGame,
        a: &MixedStrategy,
        b: &MixedStrategy,
        p: f64,
    ) -> bool {
        let k = keys(game);
        let n = game.n();
        let v0_idx = k.v0.linear_index(n);
        (0..4 * n)
            .filter(|&src| game.back_edge_from_idx(src) && src != v0_idx)
            .all(|src| {
                let u = game.out_a_idx(src);
                let fwd_max = game
                    .in_a_forward_slice(u)
                    .iter()
                    .map(|&w| b.prob(w))
                    .fold(0.0f64, f64::max);
                fwd_max > p || a.prob(u) <= p
            })
    }

    /// Capping a midway layer caps the corresponding tag-1 vertices.
    pub fn midway_layer_bound(
        game: &TwoCycleGame,
        a: &MixedStrategy,
        b: &MixedStrategy,
        p: f64,
    ) -> bool {
        let k = keys(game);
        let n = game.n();
        (1..=n)
            .filter(|&i| wrap_index(i as i64 + 1, n) != k.disputed_index)
            .all(|i| {
                let capped = game.midway_layer(i).iter().all(|v| {
                    let idx = v.linear_index(n);
                    a.prob(idx) <= p && b.prob(idx) <= p
                });
                let one = Vertex::new(i, Tag::One).linear_index(n);
                !capped || (a.prob(one) <= p && b.prob(one) <= p)
            })
    }

    /// Undisputed layers with `y_i = 0` carry at most `p` on `(i, 1)`.
    pub fn undisputed_bound(
        game: &TwoCycleGame,
        _a: &MixedStrategy,
        b: &MixedStrategy,
        p: f64,
    ) -> bool {
        let k = keys(game);
        let n = game.n();
        (1..=n)
            .filter(|&i| i != k.disputed_index && game.y().bit(i) == 0)
            .all(|i| b.prob(Vertex::new(i, Tag::One).linear_index(n)) <= p)
    }

    /// Either `b` exceeds `p` on the disputed tag-1 vertex, or both strategies
    /// are `p`-concentrated on the pure equilibrium pair.
    pub fn concentration_dichotomy(
        game: &TwoCycleGame,
        a: &MixedStrategy,
        b: &MixedStrategy,
        p: f64,
    ) -> bool {
        let k = keys(game);
        let n = game.n();
        b.prob(k.v1.linear_index(n)) > p
            || (is_concentrated(a.probs(), k.u_star.linear_index(n), p)
                && is_concentrated(b.probs(), k.v0.linear_index(n), p))
    }
}
