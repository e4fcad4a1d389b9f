//! Seeded instance generation and explicit equilibrium constructions.
//!
//! The `trivial_*` constructions are the zero-communication baselines: they
//! are honest approximate equilibria whose support deliberately avoids the
//! disputed structure, so nothing about the disputed index can be read off
//! them. Their measured regrets sit above the recovery thresholds, which the
//! acceptance suite verifies. The `perturbed_*` and `cycle_ne` families are
//! the opposite: equilibria tight enough for the recovery protocols to work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits::BitVector;
use crate::equilibria::{CorrelatedDistribution, DistError, MixedStrategy};
use crate::game::{GameError, TwoCycleGame, WinLoseGame};
use crate::vertex::{Tag, Vertex};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("infeasible constraints: {0}")]
    Infeasible(String),
    #[error("construction precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Options for seeded promise-instance generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOptions {
    pub n: usize,
    pub seed: u64,
    /// Force `x_i = y_i = 0` for all `i <= zero_prefix`.
    pub zero_prefix: Option<usize>,
    /// Pin the disputed index; otherwise drawn uniformly past the prefix.
    pub disputed_position: Option<usize>,
}

impl InstanceOptions {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            zero_prefix: None,
            disputed_position: None,
        }
    }
}

/// Generates a promise instance: exactly one disputed index, `x_i <= y_i`
/// everywhere else, deterministic per options.
pub fn gen_instance(options: &InstanceOptions) -> Result<(BitVector, BitVector), GenError> {
    let n = options.n;
    if n < 3 {
        return Err(GenError::Infeasible(format!(
            "n must be at least 3, got {n}"
        )));
    }
    let prefix = options.zero_prefix.unwrap_or(0);
    if prefix >= n {
        return Err(GenError::Infeasible(format!(
            "zero prefix {prefix} leaves no room for a disputed index in {n} bits"
        )));
    }
    if let Some(d) = options.disputed_position {
        if d < 1 || d > n {
            return Err(GenError::Infeasible(format!(
                "disputed position {d} outside 1..={n}"
            )));
        }
        if d <= prefix {
            return Err(GenError::Infeasible(format!(
                "disputed position {d} lies inside the zero prefix {prefix}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let disputed = match options.disputed_position {
        Some(d) => d,
        None => rng.gen_range(prefix + 1..=n),
    };
    let mut x = vec![0u8; n];
    let mut y = vec![0u8; n];
    for i in 1..=n {
        if i <= prefix {
            continue;
        }
        if i == disputed {
            x[i - 1] = 1;
            y[i - 1] = 0;
        } else {
            // undisputed: x_i <= y_i
            match rng.gen_range(0u8..3) {
                0 => {}
                1 => y[i - 1] = 1,
                _ => {
                    x[i - 1] = 1;
                    y[i - 1] = 1;
                }
            }
        }
    }
    Ok((BitVector::new(x)?, BitVector::new(y)?))
}

/// Mixes the pure-equilibrium point mass with the uniform distribution:
/// `mu = (1 - eta) * point + eta * uniform`. Swap regret scales linearly,
/// so `ce_regret(mu) <= eta * ce_regret(uniform)`.
pub fn perturbed_ce(game: &TwoCycleGame, eta: f64) -> Result<CorrelatedDistribution, GenError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(GenError::Precondition(format!("eta {eta} outside [0, 1]")));
    }
    let k = game.key_vertices().map_err(|_| {
        GenError::Precondition("game has no pure Nash equilibrium to perturb".into())
    })?;
    let n_actions = game.num_actions();
    let (us, vs) = (game.index(k.u_star), game.index(k.v0));
    if eta == 0.0 {
        return Ok(CorrelatedDistribution::point_mass(n_actions, us, vs));
    }
    let background = eta / (n_actions * n_actions) as f64;
    let entries = (0..n_actions).flat_map(|u| {
        (0..n_actions).map(move |v| {
            let spike = if (u, v) == (us, vs) { 1.0 - eta } else { 0.0 };
            ((u, v), background + spike)
        })
    });
    Ok(CorrelatedDistribution::from_entries_unchecked(
        n_actions, entries,
    ))
}

/// Mixes the pure-equilibrium point masses with uniform strategies:
/// `a = (1 - scale) * point(u*) + scale * uniform`, mirrored for `b`.
pub fn perturbed_ne(
    game: &TwoCycleGame,
    scale: f64,
) -> Result<(MixedStrategy, MixedStrategy), GenError> {
    if !(0.0..=1.0).contains(&scale) {
        return Err(GenError::Precondition(format!(
            "scale {scale} outside [0, 1]"
        )));
    }
    let k = game.key_vertices().map_err(|_| {
        GenError::Precondition("game has no pure Nash equilibrium to perturb".into())
    })?;
    let n_actions = game.num_actions();
    let background = scale / n_actions as f64;
    let mut a = vec![background; n_actions];
    let mut b = vec![background; n_actions];
    a[game.index(k.u_star)] += 1.0 - scale;
    b[game.index(k.v0)] += 1.0 - scale;
    Ok((
        MixedStrategy::new_unchecked(a),
        MixedStrategy::new_unchecked(b),
    ))
}

/// An exact mixed Nash equilibrium supported on a cycle of the composed
/// best-response map `v -> out_B(out_A(v))`.
///
/// B plays uniformly on the cycle, A uniformly on its image under `out_A`.
/// The composed map permutes the cycle, which forces `out_A` to be injective
/// on it; from there both players are exactly indifferent across their
/// supports and strictly worse off outside, so the profile has zero regret.
/// Works for promise and no-promise instances alike; on a fixed point the
/// construction degenerates to the pure equilibrium.
pub fn cycle_ne(game: &TwoCycleGame) -> (MixedStrategy, MixedStrategy) {
    let n_actions = game.num_actions();
    let step = |v: usize| game.out_b_idx(game.out_a_idx(v));
    let mut first_seen = vec![usize::MAX; n_actions];
    let mut order = Vec::new();
    let mut v = 0usize;
    let cycle: Vec<usize> = loop {
        if first_seen[v] != usize::MAX {
            break order[first_seen[v]..].to_vec();
        }
        first_seen[v] = order.len();
        order.push(v);
        v = step(v);
    };
    let mass = 1.0 / cycle.len() as f64;
    let mut b = vec![0.0; n_actions];
    let mut a = vec![0.0; n_actions];
    for &c in &cycle {
        b[c] = mass;
        a[game.out_a_idx(c)] = mass;
    }
    (
        MixedStrategy::new_unchecked(a),
        MixedStrategy::new_unchecked(b),
    )
}

/// The banded correlated construction over `(i, 0) x (j, 0)` pairs on
/// instances whose first `n/2 + 3` bits are all zero: a flat square block,
/// two flat strips, and two linear ramps along the first off-diagonals, all
/// scaled by a numerically computed normalizer `alpha`.
///
/// Its swap regret measures `64 alpha / n^3` while its support stays far
/// from every disputed layer.
pub fn trivial_ace(
    x: &BitVector,
    y: &BitVector,
) -> Result<(CorrelatedDistribution, f64), GenError> {
    let n = x.n();
    if y.n() != n {
        return Err(GameError::LengthMismatch { x: n, y: y.n() }.into());
    }
    if !n.is_multiple_of(4) || n < 16 {
        return Err(GenError::Precondition(format!(
            "need n divisible by 4 and at least 16, got {n}"
        )));
    }
    let q = n / 4;
    let h = n / 2;
    for i in 1..=h + 3 {
        if x.bit(i) != 0 || y.bit(i) != 0 {
            return Err(GenError::Precondition(format!(
                "bits up to {} must all be zero (violated at {i})",
                h + 3
            )));
        }
    }
    let nn = (n * n) as f64;
    let nnn = (n * n * n) as f64;
    let flat = 16.0 / nn;
    let weight = |i: usize, j: usize| -> f64 {
        let band = |k: usize| q + 4 <= k && k <= h + 2;
        let strip = |k: usize| q + 2 <= k && k <= h + 2;
        let ramp = |k: usize| 2 <= k && k <= q + 2;
        // flat square block plus the two flat strips hanging off it
        if (band(i) && band(j)) || (i == q + 3 && strip(j)) || (j == q + 3 && strip(i)) {
            flat
        } else if ramp(i) && ramp(j) && i == j + 1 {
            flat - 64.0 * (q + 3 - i) as f64 / nnn
        } else if ramp(i) && ramp(j) && j == i + 1 {
            flat - 64.0 * (q + 3 - j) as f64 / nnn
        } else {
            0.0
        }
    };
    let mut raw = Vec::new();
    let mut total = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            let w = weight(i, j);
            if w > 0.0 {
                let u = Vertex::new(i, Tag::Zero).linear_index(n);
                let v = Vertex::new(j, Tag::Zero).linear_index(n);
                raw.push(((u, v), w));
                total += w;
            }
        }
    }
    let alpha = 1.0 / total;
    assert!(
        alpha > 0.0 && alpha < 2.0,
        "normalizer {alpha} escaped (0, 2)"
    );
    let entries = raw.into_iter().map(|(cell, w)| (cell, w * alpha));
    Ok((CorrelatedDistribution::from_entries(4 * n, entries)?, alpha))
}

/// The flat strategy pair with mass `2/n` on `(i, 0)` for
/// `2 <= i <= n/2 + 1`, on instances whose first `n/2 + 2` bits are zero.
/// Measures Nash regret `64/N^2`: low, but above the Nash recovery
/// threshold, and supported entirely away from the disputed layers.
pub fn trivial_ane(
    x: &BitVector,
    y: &BitVector,
) -> Result<(MixedStrategy, MixedStrategy), GenError> {
    let n = x.n();
    if y.n() != n {
        return Err(GameError::LengthMismatch { x: n, y: y.n() }.into());
    }
    if !n.is_multiple_of(2) {
        return Err(GenError::Precondition(format!("need even n, got {n}")));
    }
    let h = n / 2;
    for i in 1..=h + 2 {
        if x.bit(i) != 0 || y.bit(i) != 0 {
            return Err(GenError::Precondition(format!(
                "bits up to {} must all be zero (violated at {i})",
                h + 2
            )));
        }
    }
    let mut probs = vec![0.0; 4 * n];
    for i in 2..=h + 1 {
        probs[Vertex::new(i, Tag::Zero).linear_index(n)] = 2.0 / n as f64;
    }
    let a = MixedStrategy::new_unchecked(probs.clone());
    let b = MixedStrategy::new_unchecked(probs);
    Ok((a, b))
}

/// A strategy profile renormalized from per-layer masses, with the applied
/// scales recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct RenormalizedProfile {
    pub a: MixedStrategy,
    pub b: MixedStrategy,
    pub scale_a: f64,
    pub scale_b: f64,
}

/// The layer-wise strategy pair: `1/n` on `(i, 0)` when `x_i = 0`, and `1/n`
/// on both `(i, 1)` and the midway vertex `(i, x_{i-1} 1)` when `x_i = 1`;
/// mirrored for `b` with `y`. Raw mass is `(n + #ones)/n`, so each side is
/// scaled back to a distribution by `n/(n + #ones)`; the scales are returned.
/// Measures well-supported regret at most `12/N`.
pub fn trivial_wsne(x: &BitVector, y: &BitVector) -> Result<RenormalizedProfile, GenError> {
    let n = x.n();
    if y.n() != n {
        return Err(GameError::LengthMismatch { x: n, y: y.n() }.into());
    }
    let side = |bits: &BitVector| -> (MixedStrategy, f64) {
        let base = 1.0 / n as f64;
        let mut probs = vec![0.0; 4 * n];
        for i in 1..=n {
            if bits.bit(i) == 0 {
                probs[Vertex::new(i, Tag::Zero).linear_index(n)] = base;
            } else {
                probs[Vertex::new(i, Tag::One).linear_index(n)] = base;
                let midway = Tag::midway_from_bit(bits.bit_wrapped(i as i64 - 1));
                probs[Vertex::new(i, midway).linear_index(n)] = base;
            }
        }
        let raw_mass: f64 = probs.iter().sum();
        let scale = 1.0 / raw_mass;
        for p in &mut probs {
            *p *= scale;
        }
        (MixedStrategy::new_unchecked(probs), scale)
    };
    let (a, scale_a) = side(x);
    let (b, scale_b) = side(y);
    Ok(RenormalizedProfile {
        a,
        b,
        scale_a,
        scale_b,
    })
}

/// An exact coarse correlated equilibrium on two cells: half the mass on
/// `(v1, u1)` for an A-edge `u1 -> v1`, half on `(u2, v2)` for a B-edge
/// `u2 -> v2`, where the edges are chosen (first valid pair in linear-index
/// order) so that neither player's constant deviation can beat the draw.
pub fn exact_cce(game: &TwoCycleGame) -> Result<CorrelatedDistribution, GenError> {
    let n_actions = game.num_actions();
    for u1 in 0..n_actions {
        let v1 = game.out_a_idx(u1);
        for u2 in 0..n_actions {
            let v2 = game.out_b_idx(u2);
            if game.out_a_idx(v2) != v1 && game.out_b_idx(v1) != v2 {
                return Ok(CorrelatedDistribution::from_entries_unchecked(
                    n_actions,
                    [((v1, u1), 0.5), ((u2, v2), 0.5)],
                ));
            }
        }
    }
    Err(GenError::Infeasible(
        "no qualifying edge pair exists".into(),
    ))
}
