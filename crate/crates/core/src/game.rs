//! The 2-cycle game family.
//!
//! A game is built from two equal-length bit strings `x` and `y`. Each string
//! induces a functional digraph on the vertex set `V = {1..n} x {0,1,01,11}`:
//! side A's graph depends on `x` only, side B's on `y` only. Utilities are
//! win-lose: A earns 1 on `(u, v)` exactly when `v -> u` is an A-edge, and B
//! earns 1 exactly when `u -> v` is a B-edge. A *promise* instance has exactly
//! one disputed index (`x_i = 1, y_i = 0`); the resulting game then has a
//! unique 2-cycle, which is also its unique pure Nash equilibrium, and that
//! pair pins down the disputed index.
//!
//! Side A's graph has one irregularity: when `x_i = 1`, the vertex `(i, 0)`
//! points *backwards* to `(i-1, x_{i-1})`. These back-edges are tagged on the
//! game and drive everything interesting downstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{disputed_indices, wrap_index, BitVector};
use crate::vertex::{Tag, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("bit strings must have equal length (got {x} and {y})")]
    LengthMismatch { x: usize, y: usize },
    #[error("need at least 3 bits per string (got {n})")]
    TooShort { n: usize },
    #[error("bit value {value} is not 0 or 1")]
    BadBit { value: u8 },
    #[error("character {ch:?} is not '0' or '1'")]
    BadBitChar { ch: char },
    #[error("promise instance requires exactly one disputed index (found {found})")]
    PromiseViolated { found: usize },
    #[error("at most one disputed index allowed (found {found})")]
    TooManyDisputed { found: usize },
    #[error("game has no disputed index")]
    NoDisputedIndex,
    #[error("type count must be at least 2 (got {t})")]
    TooFewTypes { t: usize },
    #[error("string length {k} is not divisible by type count {t}")]
    NotDivisible { k: usize, t: usize },
    #[error("expected exactly one disputed index across all blocks (found {found})")]
    BayesianDisputeCount { found: usize },
}

/// Access to a win-lose `N x N` game in the form the regret computations
/// need: point utilities plus, per action, the slice of opposing actions it
/// wins against.
pub trait WinLoseGame {
    fn num_actions(&self) -> usize;
    /// Utility of player A at `(u, v)`, in `{0.0, 1.0}`.
    fn utility_a(&self, u: usize, v: usize) -> f64;
    /// Utility of player B at `(u, v)`, in `{0.0, 1.0}`.
    fn utility_b(&self, u: usize, v: usize) -> f64;
    /// All `v` with `utility_a(u, v) = 1`, ascending.
    fn a_wins(&self, u: usize) -> &[usize];
    /// All `u` with `utility_b(u, v) = 1`, ascending.
    fn b_wins(&self, v: usize) -> &[usize];
}

/// Out-neighbor table for side A, plus the back-edge markers.
/// Returned vectors are indexed by linear vertex index.
pub(crate) fn build_side_a(x: &BitVector) -> (Vec<usize>, Vec<bool>) {
    let n = x.n();
    let mut out = vec![0usize; 4 * n];
    let mut back = vec![false; 4 * n];
    let idx = |i: usize, t: Tag| Vertex::new(i, t).linear_index(n);
    for i in 1..=n {
        let succ = wrap_index(i as i64 + 1, n);
        // (i,1) -> (i+1, 0 or 11) depending on x_{i+1}
        out[idx(i, Tag::One)] = idx(
            succ,
            if x.bit(succ) == 0 {
                Tag::Zero
            } else {
                Tag::OneOne
            },
        );
        // (i,0): forward when x_i = 0, back-edge to (i-1, x_{i-1}) when x_i = 1
        if x.bit(i) == 0 {
            out[idx(i, Tag::Zero)] = idx(
                succ,
                if x.bit(succ) == 0 {
                    Tag::Zero
                } else {
                    Tag::ZeroOne
                },
            );
        } else {
            let pred = wrap_index(i as i64 - 1, n);
            out[idx(i, Tag::Zero)] = idx(pred, Tag::from_bit(x.bit(pred)));
            back[idx(i, Tag::Zero)] = true;
        }
        // (i,01) and (i,11) -> (i,1)
        out[idx(i, Tag::ZeroOne)] = idx(i, Tag::One);
        out[idx(i, Tag::OneOne)] = idx(i, Tag::One);
    }
    (out, back)
}

/// Out-neighbor table for side B. B's graph never has back-edges and its
/// `(i,0)` rule carries no condition on `y_i`.
pub(crate) fn build_side_b(y: &BitVector) -> Vec<usize> {
    let n = y.n();
    let mut out = vec![0usize; 4 * n];
    let idx = |i: usize, t: Tag| Vertex::new(i, t).linear_index(n);
    for i in 1..=n {
        let succ = wrap_index(i as i64 + 1, n);
        out[idx(i, Tag::One)] = idx(
            succ,
            if y.bit(succ) == 0 {
                Tag::Zero
            } else {
                Tag::OneOne
            },
        );
        out[idx(i, Tag::Zero)] = idx(
            succ,
            if y.bit(succ) == 0 {
                Tag::Zero
            } else {
                Tag::ZeroOne
            },
        );
        out[idx(i, Tag::ZeroOne)] = idx(i, Tag::One);
        out[idx(i, Tag::OneOne)] = idx(i, Tag::One);
    }
    out
}

/// Inverse adjacency of an out-neighbor table; each in-list ascending.
pub(crate) fn invert(out: &[usize]) -> Vec<Vec<usize>> {
    let mut incoming = vec![Vec::new(); out.len()];
    for (src, &dst) in out.iter().enumerate() {
        incoming[dst].push(src);
    }
    incoming
}

/// The distinguished vertices of a promise instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyVertices {
    pub disputed_index: usize,
    pub u_star: Vertex,
    pub v0: Vertex,
    pub v1: Vertex,
    pub v01: Vertex,
    pub v11: Vertex,
}

/// A 2-cycle game instance. Immutable after construction.
#[derive(Debug, Clone)]
pub struct TwoCycleGame {
    x: BitVector,
    y: BitVector,
    n: usize,
    promise: bool,
    disputed: Option<usize>,
    out_a: Vec<usize>,
    out_b: Vec<usize>,
    in_a: Vec<Vec<usize>>,
    in_b: Vec<Vec<usize>>,
    in_a_forward: Vec<Vec<usize>>,
    back_edge_from: Vec<bool>,
}

impl TwoCycleGame {
    /// Builds the game from its two strings. With `promise = true` the
    /// instance must have exactly one disputed index; otherwise at most one.
    pub fn build(x: BitVector, y: BitVector, promise: bool) -> Result<Self, GameError> {
        if x.n() != y.n() {
            return Err(GameError::LengthMismatch { x: x.n(), y: y.n() });
        }
        let disputed = disputed_indices(&x, &y)?;
        if promise && disputed.len() != 1 {
            return Err(GameError::PromiseViolated {
                found: disputed.len(),
            });
        }
        if !promise && disputed.len() > 1 {
            return Err(GameError::TooManyDisputed {
                found: disputed.len(),
            });
        }
        let n = x.n();
        let (out_a, back_edge_from) = build_side_a(&x);
        let out_b = build_side_b(&y);
        let in_a = invert(&out_a);
        let in_b = invert(&out_b);
        let in_a_forward = in_a
            .iter()
            .map(|srcs| {
                srcs.iter()
                    .copied()
                    .filter(|&s| !back_edge_from[s])
                    .collect()
            })
            .collect();
        Ok(Self {
            x,
            y,
            n,
            promise,
            disputed: disputed.first().copied(),
            out_a,
            out_b,
            in_a,
            in_b,
            in_a_forward,
            back_edge_from,
        })
    }

    pub fn x(&self) -> &BitVector {
        &self.x
    }

    pub fn y(&self) -> &BitVector {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn promise(&self) -> bool {
        self.promise
    }

    /// The disputed layer index, when the instance has one.
    pub fn disputed_index(&self) -> Option<usize> {
        self.disputed
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        Vertex::from_linear(idx, self.n)
    }

    pub fn index(&self, v: Vertex) -> usize {
        v.linear_index(self.n)
    }

    pub fn out_neighbor_a(&self, v: Vertex) -> Vertex {
        self.vertex(self.out_a[self.index(v)])
    }

    pub fn out_neighbor_b(&self, v: Vertex) -> Vertex {
        self.vertex(self.out_b[self.index(v)])
    }

    pub(crate) fn out_a_idx(&self, v: usize) -> usize {
        self.out_a[v]
    }

    pub(crate) fn out_b_idx(&self, v: usize) -> usize {
        self.out_b[v]
    }

    pub fn in_neighbors_a(&self, v: Vertex) -> Vec<Vertex> {
        self.in_a[self.index(v)]
            .iter()
            .map(|&i| self.vertex(i))
            .collect()
    }

    pub fn in_neighbors_b(&self, v: Vertex) -> Vec<Vertex> {
        self.in_b[self.index(v)]
            .iter()
            .map(|&i| self.vertex(i))
            .collect()
    }

    /// In-neighbors of `v` in A's graph, excluding back-edges.
    pub fn forward_in_neighbors_a(&self, v: Vertex) -> Vec<Vertex> {
        self.in_a_forward[self.index(v)]
            .iter()
            .map(|&i| self.vertex(i))
            .collect()
    }

    pub fn in_a_slice(&self, v: usize) -> &[usize] {
        &self.in_a[v]
    }

    pub fn in_b_slice(&self, v: usize) -> &[usize] {
        &self.in_b[v]
    }

    pub fn in_a_forward_slice(&self, v: usize) -> &[usize] {
        &self.in_a_forward[v]
    }

    /// True when the out-edge of `v` in A's graph is a back-edge.
    pub fn is_back_edge_source(&self, v: Vertex) -> bool {
        self.back_edge_from[self.index(v)]
    }

    pub(crate) fn back_edge_from_idx(&self, v: usize) -> bool {
        self.back_edge_from[v]
    }

    pub fn degree_a(&self, v: Vertex) -> usize {
        self.in_a[self.index(v)].len()
    }

    pub fn degree_b(&self, v: Vertex) -> usize {
        self.in_b[self.index(v)].len()
    }

    /// Layer `L_i = {(i,0), (i,1)}`.
    pub fn layer(&self, i: usize) -> [Vertex; 2] {
        [Vertex::new(i, Tag::Zero), Vertex::new(i, Tag::One)]
    }

    /// Midway layer `L^m_i = {(i,01), (i,11), (i,0)}`.
    pub fn midway_layer(&self, i: usize) -> [Vertex; 3] {
        [
            Vertex::new(i, Tag::ZeroOne),
            Vertex::new(i, Tag::OneOne),
            Vertex::new(i, Tag::Zero),
        ]
    }

    /// The distinguished vertices; errors when the instance has no disputed
    /// index.
    pub fn key_vertices(&self) -> Result<KeyVertices, GameError> {
        let i = self.disputed.ok_or(GameError::NoDisputedIndex)?;
        let prev = wrap_index(i as i64 - 1, self.n);
        Ok(KeyVertices {
            disputed_index: i,
            u_star: Vertex::new(prev, Tag::from_bit(self.x.bit(prev))),
            v0: Vertex::new(i, Tag::Zero),
            v1: Vertex::new(i, Tag::One),
            v01: Vertex::new(i, Tag::ZeroOne),
            v11: Vertex::new(i, Tag::OneOne),
        })
    }

    /// All pairs `(u, v)` with `u_A(u,v) = u_B(u,v) = 1`, as linear indices.
    /// Promise instances have exactly one.
    pub fn two_cycles(&self) -> Vec<(usize, usize)> {
        (0..self.num_actions())
            .filter_map(|v| {
                let u = self.out_a[v];
                (self.out_b[u] == v).then_some((u, v))
            })
            .collect()
    }
}

impl WinLoseGame for TwoCycleGame {
    fn num_actions(&self) -> usize {
        4 * self.n
    }

    fn utility_a(&self, u: usize, v: usize) -> f64 {
        if self.out_a[v] == u {
            1.0
        } else {
            0.0
        }
    }

    fn utility_b(&self, u: usize, v: usize) -> f64 {
        if self.out_b[u] == v {
            1.0
        } else {
            0.0
        }
    }

    fn a_wins(&self, u: usize) -> &[usize] {
        &self.in_a[u]
    }

    fn b_wins(&self, v: usize) -> &[usize] {
        &self.in_b[v]
    }
}

/// A collection of `T` no-promise sub-games built from consecutive length-`n`
/// blocks of two `T*n`-bit strings, with a uniform common prior over matched
/// types. Exactly one block carries the disputed index, so exactly one
/// sub-game has a pure Nash equilibrium.
#[derive(Debug, Clone)]
pub struct BayesianTwoCycleGame {
    t: usize,
    n: usize,
    sub_games: Vec<TwoCycleGame>,
}

impl BayesianTwoCycleGame {
    pub fn build(x: &BitVector, y: &BitVector, t: usize) -> Result<Self, GameError> {
        if x.n() != y.n() {
            return Err(GameError::LengthMismatch { x: x.n(), y: y.n() });
        }
        if t < 2 {
            return Err(GameError::TooFewTypes { t });
        }
        let k = x.n();
        if !k.is_multiple_of(t) {
            return Err(GameError::NotDivisible { k, t });
        }
        let n = k / t;
        if n < 3 {
            return Err(GameError::TooShort { n });
        }
        let total_disputed = disputed_indices(x, y)?.len();
        if total_disputed != 1 {
            return Err(GameError::BayesianDisputeCount {
                found: total_disputed,
            });
        }
        let block = |bits: &BitVector, i: usize| {
            BitVector::new(bits.as_slice()[n * (i - 1)..n * i].to_vec())
        };
        let sub_games = (1..=t)
            .map(|i| TwoCycleGame::build(block(x, i)?, block(y, i)?, false))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { t, n, sub_games })
    }

    pub fn num_types(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_actions(&self) -> usize {
        4 * self.n
    }

    pub fn sub_games(&self) -> &[TwoCycleGame] {
        &self.sub_games
    }

    pub fn sub_game(&self, t: usize) -> &TwoCycleGame {
        &self.sub_games[t - 1]
    }

    /// The unique 1-based type whose sub-game has a pure Nash equilibrium.
    pub fn disputed_type(&self) -> usize {
        self.sub_games
            .iter()
            .position(|g| g.disputed_index().is_some())
            .expect("construction guarantees one disputed block")
            + 1
    }
}
