//! Two-party recovery protocols.
//!
//! Given an approximate equilibrium of a promise instance, the parties can
//! locate the unique pure Nash equilibrium, and hence the disputed index,
//! with a handful of bits. This module implements the two protocols behind
//! that claim plus the Bayesian composition:
//!
//! * **Algorithm 1** works from a *slowly increasing* scalar pair, extracted
//!   from a low-regret correlated distribution. Worst case
//!   `3 + ceil(log2 n)` bits.
//! * **Algorithm 2** works from a *non-increasing* strategy profile, the
//!   shape any low-regret Nash or well-supported profile takes. Worst case
//!   `1 + ceil(log2 n)` bits.
//! * **Bayesian recovery** classifies which sub-game hides the dispute from
//!   B's strategies alone, sends the type index, then runs Algorithm 2
//!   inside that sub-game.
//!
//! Protocols are simulated in-process as alternating party steps. Each step
//! is a pure function of one [`PartyViewA`]/[`PartyViewB`] and the shared
//! inputs, so the sequential driver here could be replaced by a two-process
//! harness without changing any output. The driver also acts as a referee:
//! it verifies the declared preconditions before stepping and returns an
//! explicit error instead of a silently wrong pair when they fail.

mod party;
mod transcript;

pub mod diagnostics;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use party::{PartyViewA, PartyViewB};
pub use transcript::{ceil_log2, Message, MessageKind, Sender, Transcript};

use crate::bits::{wrap_index, BitVector};
use crate::equilibria::{
    ce_regret, ne_regret, wsne_regret, CorrelatedDistribution, DistError, MixedStrategy,
    SUPPORT_EPSILON,
};
use crate::game::{GameError, TwoCycleGame};
use crate::generators::{perturbed_ce, perturbed_ne, GenError};
use crate::vertex::{Tag, Vertex};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("protocol precondition violated: {0}")]
    Precondition(String),
    #[error("protocol failure: no qualifying vertex at {step}")]
    ScanFailed { step: &'static str },
    #[error("classification found {found} candidate types instead of exactly one")]
    ClassificationAmbiguous { found: usize },
    #[error(transparent)]
    Distribution(#[from] DistError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Generator(#[from] GenError),
}

/// A pair of vertex-indexed scalar fields, one per party. Not necessarily
/// distributions; only `[0, 1]` values are required.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPair {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ScalarPair {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, ProtocolError> {
        if a.len() != b.len() {
            return Err(ProtocolError::Precondition(format!(
                "scalar fields have different lengths ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        if let Some(bad) = a.iter().chain(b.iter()).find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(ProtocolError::Precondition(format!(
                "scalar value {bad} outside [0, 1]"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn from_strategies(a: &MixedStrategy, b: &MixedStrategy) -> Self {
        Self {
            a: a.probs().to_vec(),
            b: b.probs().to_vec(),
        }
    }

    pub fn a_total(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn b_total(&self) -> f64 {
        self.b.iter().sum()
    }
}

/// The result of one protocol run: A's output, B's output, the optional
/// 1-based sub-game type, and the full transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryOutcome {
    pub u: Vertex,
    pub v: Vertex,
    #[serde(rename = "type")]
    pub game_type: Option<usize>,
    pub transcript: Transcript,
}

fn within_budget(outcome: RecoveryOutcome, budget: u32) -> RecoveryOutcome {
    debug_assert!(
        outcome.transcript.total_bits <= budget,
        "transcript spent {} bits against a budget of {budget}",
        outcome.transcript.total_bits
    );
    outcome
}

/// A's half of the extraction: `a(v)` is the mass the shared distribution
/// puts on `v` paired with any of `v`'s in-neighbors on A's side.
pub fn extract_a_side(view_a: &PartyViewA, mu: &CorrelatedDistribution) -> Vec<f64> {
    (0..view_a.num_actions())
        .map(|v| mu.row_mass_over(v, view_a.incoming(v)))
        .collect()
}

/// B's half of the extraction, mirrored through B's in-neighbors.
pub fn extract_b_side(view_b: &PartyViewB, mu: &CorrelatedDistribution) -> Vec<f64> {
    (0..view_b.num_actions())
        .map(|v| mu.col_mass_over(view_b.incoming(v), v))
        .collect()
}

/// Extracts the scalar pair both parties compute locally from a shared
/// correlated distribution. When the distribution is an eps-approximate
/// correlated equilibrium with `eps <= 1/(24 N^3)`, the result is
/// `3 eps`-slowly increasing and B's field has total mass at least `3/(4N)`.
pub fn extract_slowly_increasing(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    mu: &CorrelatedDistribution,
) -> Result<ScalarPair, ProtocolError> {
    if mu.n() != view_a.num_actions() || mu.n() != view_b.num_actions() {
        return Err(DistError::WrongActionCount {
            expected: view_a.num_actions(),
            got: mu.n(),
        }
        .into());
    }
    ScalarPair::new(extract_a_side(view_a, mu), extract_b_side(view_b, mu))
}

fn slowly_increasing_core(
    n_actions: usize,
    in_a: impl Fn(usize) -> Vec<usize>,
    in_b: impl Fn(usize) -> Vec<usize>,
    pair: &ScalarPair,
    delta: f64,
) -> bool {
    (0..n_actions).all(|u| {
        let b_in: f64 = in_a(u).iter().map(|&w| pair.b[w]).sum();
        let a_in: f64 = in_b(u).iter().map(|&w| pair.a[w]).sum();
        pair.a[u] <= b_in + delta && pair.b[u] <= a_in + delta
    })
}

/// Whether `a(u) <= b(N_A(u)) + delta` and `b(u) <= a(N_B(u)) + delta` hold
/// for every vertex. An empty in-neighborhood contributes zero, so isolated
/// vertices must carry at most `delta`.
pub fn is_slowly_increasing(game: &TwoCycleGame, pair: &ScalarPair, delta: f64) -> bool {
    slowly_increasing_core(
        4 * game.n(),
        |u| game.in_a_slice(u).to_vec(),
        |u| game.in_b_slice(u).to_vec(),
        pair,
        delta,
    )
}

fn slowly_increasing_views(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    pair: &ScalarPair,
    delta: f64,
) -> bool {
    slowly_increasing_core(
        view_a.num_actions(),
        |u| view_a.incoming(u).to_vec(),
        |u| view_b.incoming(u).to_vec(),
        pair,
        delta,
    )
}

fn non_increasing_core(
    n_actions: usize,
    in_a: impl Fn(usize) -> Vec<usize>,
    in_b: impl Fn(usize) -> Vec<usize>,
    a: &[f64],
    b: &[f64],
    p: f64,
) -> bool {
    (0..n_actions).all(|u| {
        let max_b_in = in_a(u).iter().map(|&w| b[w]).fold(0.0f64, f64::max);
        let max_a_in = in_b(u).iter().map(|&w| a[w]).fold(0.0f64, f64::max);
        (max_b_in > p || a[u] <= p) && (max_a_in > p || b[u] <= p)
    })
}

/// Whether low mass on a vertex's in-neighborhood forces low mass on the
/// vertex itself, on both sides: if `max_{v in N_A(u)} b(v) <= p` then
/// `a(u) <= p`, and the mirror condition. Empty in-neighborhoods have
/// maximum zero.
pub fn is_non_increasing(
    game: &TwoCycleGame,
    a: &MixedStrategy,
    b: &MixedStrategy,
    p: f64,
) -> bool {
    non_increasing_core(
        4 * game.n(),
        |u| game.in_a_slice(u).to_vec(),
        |u| game.in_b_slice(u).to_vec(),
        a.probs(),
        b.probs(),
        p,
    )
}

fn non_increasing_views(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    a: &[f64],
    b: &[f64],
    p: f64,
) -> bool {
    non_increasing_core(
        view_a.num_actions(),
        |u| view_a.incoming(u).to_vec(),
        |u| view_b.incoming(u).to_vec(),
        a,
        b,
        p,
    )
}

/// Whether `values` is at most `p` everywhere except possibly at `u`.
pub fn is_concentrated(values: &[f64], u: usize, p: f64) -> bool {
    values.iter().enumerate().all(|(v, &x)| v == u || x <= p)
}

/// Algorithm 1: recovers the pure Nash equilibrium from a `delta`-slowly
/// increasing scalar pair with `delta < max(a(V), b(V)) / (5 N^2)`.
///
/// Steps: (1) B scans for a layer with `y_i = 0` and `b(i,1) > 3 delta` and
/// sends it if found; (2) otherwise, if `delta < a(V)/(5N^2)`, A sends the
/// layer of the first vertex with `a(u) > 5 N delta`; (3) otherwise B sends
/// the layer of the first vertex with `b(v) > 5 N delta`. All scans ascend
/// and take the first strict hit.
pub fn run_algorithm1(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    pair: &ScalarPair,
    delta: f64,
) -> Result<RecoveryOutcome, ProtocolError> {
    let n = view_a.n();
    if view_b.n() != n || pair.a.len() != 4 * n {
        return Err(ProtocolError::Precondition(
            "mismatched view or pair sizes".into(),
        ));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(ProtocolError::Precondition(format!(
            "delta {delta} outside [0, 1]"
        )));
    }
    if !slowly_increasing_views(view_a, view_b, pair, delta) {
        return Err(ProtocolError::Precondition(format!(
            "pair is not {delta}-slowly increasing"
        )));
    }
    let big_n = (4 * n) as f64;
    let a_total = pair.a_total();
    let b_total = pair.b_total();
    if delta >= a_total.max(b_total) / (5.0 * big_n * big_n) {
        return Err(ProtocolError::Precondition(format!(
            "delta {delta} is not below max(a(V), b(V)) / (5 N^2)"
        )));
    }

    let budget = 3 + ceil_log2(n);
    let mut transcript = Transcript::new();

    // B: disputed layer visible directly on its tag-1 vertex?
    if let Some(i) = view_b.scan_tag_one_above(&pair.b, 3.0 * delta) {
        transcript.push(Message::layer_index(Sender::B, i, n));
        return Ok(within_budget(
            RecoveryOutcome {
                u: view_a.output_for_layer(i),
                v: Vertex::new(i, Tag::Zero),
                game_type: None,
                transcript,
            },
            budget,
        ));
    }
    transcript.push(Message::flag(Sender::B));

    // A: its field is concentrated when its total is large enough.
    let spike = 5.0 * big_n * delta;
    if delta < a_total / (5.0 * big_n * big_n) {
        let u_idx = view_a
            .first_above(&pair.a, spike)
            .ok_or(ProtocolError::ScanFailed { step: "step 2" })?;
        let u = view_a.vertex(u_idx);
        transcript.push(Message::layer_index(Sender::A, u.layer, n));
        return Ok(within_budget(
            RecoveryOutcome {
                u,
                v: Vertex::new(wrap_index(u.layer as i64 + 1, n), Tag::Zero),
                game_type: None,
                transcript,
            },
            budget,
        ));
    }
    transcript.push(Message::flag(Sender::A));

    // B: fall back to its own concentrated field.
    let v_idx = view_b
        .first_above(&pair.b, spike)
        .ok_or(ProtocolError::ScanFailed { step: "step 3" })?;
    let v = view_b.vertex(v_idx);
    transcript.push(Message::layer_index(Sender::B, v.layer, n));
    Ok(within_budget(
        RecoveryOutcome {
            u: view_a.output_for_layer(v.layer),
            v,
            game_type: None,
            transcript,
        },
        budget,
    ))
}

/// The message-passing part of Algorithm 2, appending onto an existing
/// transcript. Scans use `thr` strictly.
fn algorithm2_steps(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    a: &[f64],
    b: &[f64],
    thr: f64,
    transcript: &mut Transcript,
) -> Result<(Vertex, Vertex), ProtocolError> {
    let n = view_b.n();
    if let Some(i) = view_b.scan_tag_one_above(b, thr) {
        transcript.push(Message::layer_index(Sender::B, i, n));
        return Ok((view_a.output_for_layer(i), Vertex::new(i, Tag::Zero)));
    }
    transcript.push(Message::flag(Sender::B));
    let u_idx = view_a
        .first_above(a, thr)
        .ok_or(ProtocolError::ScanFailed {
            step: "player A's local output",
        })?;
    let v_idx = view_b
        .first_above(b, thr)
        .ok_or(ProtocolError::ScanFailed {
            step: "player B's local output",
        })?;
    Ok((view_a.vertex(u_idx), view_b.vertex(v_idx)))
}

/// Algorithm 2: recovers the pure Nash equilibrium from a `p`-non-increasing
/// strategy profile with `p < 1/N`.
///
/// B scans for a layer with `y_i = 0` and `b(i,1) > p`; if none exists it
/// sends one flag bit and both parties output their first vertex above `p`
/// locally. The `p = 0` case tests support membership, i.e. scans strictly
/// above [`SUPPORT_EPSILON`].
pub fn run_algorithm2(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    a: &MixedStrategy,
    b: &MixedStrategy,
    p: f64,
) -> Result<RecoveryOutcome, ProtocolError> {
    let n = view_a.n();
    if view_b.n() != n || a.n() != 4 * n || b.n() != 4 * n {
        return Err(ProtocolError::Precondition(
            "mismatched view or profile sizes".into(),
        ));
    }
    let big_n = (4 * n) as f64;
    if !(0.0 <= p && p < 1.0 / big_n) {
        return Err(ProtocolError::Precondition(format!(
            "p {p} outside [0, 1/N)"
        )));
    }
    if !non_increasing_views(view_a, view_b, a.probs(), b.probs(), p) {
        return Err(ProtocolError::Precondition(format!(
            "profile is not {p}-non-increasing"
        )));
    }
    let thr = if p == 0.0 { SUPPORT_EPSILON } else { p };
    let mut transcript = Transcript::new();
    let (u, v) = algorithm2_steps(view_a, view_b, a.probs(), b.probs(), thr, &mut transcript)?;
    Ok(within_budget(
        RecoveryOutcome {
            u,
            v,
            game_type: None,
            transcript,
        },
        1 + ceil_log2(n),
    ))
}

fn rebuild_promise_game(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
) -> Result<TwoCycleGame, ProtocolError> {
    Ok(TwoCycleGame::build(
        view_a.x().clone(),
        view_b.y().clone(),
        true,
    )?)
}

/// Full correlated pipeline: verify `ce_regret(mu) <= eps <= 1/(24 N^3)`,
/// extract the scalar pair, and run Algorithm 1 at `delta = 3 eps`.
pub fn recover_from_correlated(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    mu: &CorrelatedDistribution,
    epsilon: f64,
) -> Result<RecoveryOutcome, ProtocolError> {
    let big_n = view_a.num_actions() as f64;
    let threshold = 1.0 / (24.0 * big_n.powi(3));
    if !(0.0..=threshold).contains(&epsilon) {
        return Err(ProtocolError::Precondition(format!(
            "epsilon {epsilon} above the recovery threshold {threshold}"
        )));
    }
    let game = rebuild_promise_game(view_a, view_b)?;
    let measured = ce_regret(&game, mu)?.value;
    if measured > epsilon {
        return Err(ProtocolError::Precondition(format!(
            "measured swap regret {measured} exceeds claimed epsilon {epsilon}"
        )));
    }
    let pair = extract_slowly_increasing(view_a, view_b, mu)?;
    run_algorithm1(view_a, view_b, &pair, 3.0 * epsilon)
}

/// Full Nash pipeline: verify `ne_regret(a, b) <= eps <= 1/(16 N^2)` and run
/// Algorithm 2 at `p = 1/(4N)`.
pub fn recover_from_nash(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    a: &MixedStrategy,
    b: &MixedStrategy,
    epsilon: f64,
) -> Result<RecoveryOutcome, ProtocolError> {
    let big_n = view_a.num_actions() as f64;
    let threshold = 1.0 / (16.0 * big_n * big_n);
    if !(0.0..=threshold).contains(&epsilon) {
        return Err(ProtocolError::Precondition(format!(
            "epsilon {epsilon} above the recovery threshold {threshold}"
        )));
    }
    let game = rebuild_promise_game(view_a, view_b)?;
    let measured = ne_regret(&game, a, b)?.value;
    if measured > epsilon {
        return Err(ProtocolError::Precondition(format!(
            "measured Nash regret {measured} exceeds claimed epsilon {epsilon}"
        )));
    }
    run_algorithm2(view_a, view_b, a, b, 1.0 / (4.0 * big_n))
}

/// Full well-supported pipeline: verify `wsne_regret(a, b) <= 1/N` and run
/// Algorithm 2 at `p = 0`.
pub fn recover_from_wsne(
    view_a: &PartyViewA,
    view_b: &PartyViewB,
    a: &MixedStrategy,
    b: &MixedStrategy,
) -> Result<RecoveryOutcome, ProtocolError> {
    let big_n = view_a.num_actions() as f64;
    let game = rebuild_promise_game(view_a, view_b)?;
    let measured = wsne_regret(&game, a, b)?.value;
    if measured > 1.0 / big_n {
        return Err(ProtocolError::Precondition(format!(
            "measured well-supported regret {measured} exceeds 1/N"
        )));
    }
    run_algorithm2(view_a, view_b, a, b, 0.0)
}

/// B-side test for whether one sub-game has a pure Nash equilibrium, from
/// B's strategy in that sub-game alone. True when either the disputed layer
/// shows directly (`y_j = 0` and `b(j,1) > p`) or `b` is concentrated on a
/// single vertex `(j, 0)` with `y_j = 0`.
pub fn classify_subgame(view_b: &PartyViewB, b: &MixedStrategy, p: f64) -> bool {
    if view_b.scan_tag_one_above(b.probs(), p).is_some() {
        return true;
    }
    let above: Vec<usize> = (0..view_b.num_actions())
        .filter(|&v| b.prob(v) > p)
        .collect();
    match above.as_slice() {
        [w] => {
            let v = view_b.vertex(*w);
            v.tag == Tag::Zero && view_b.y().bit(v.layer) == 0
        }
        _ => false,
    }
}

/// Bayesian recovery: B classifies every sub-game, sends the unique type
/// holding a pure Nash equilibrium, then the parties run Algorithm 2 inside
/// that sub-game. Costs at most `ceil(log2 T) + 1 + ceil(log2 n)` bits.
pub fn recover_bayesian(
    views_a: &[PartyViewA],
    views_b: &[PartyViewB],
    profiles: &[(MixedStrategy, MixedStrategy)],
    epsilon: f64,
) -> Result<RecoveryOutcome, ProtocolError> {
    let t = views_a.len();
    if t < 2 {
        return Err(ProtocolError::Precondition(format!(
            "need at least 2 types, got {t}"
        )));
    }
    if views_b.len() != t || profiles.len() != t {
        return Err(ProtocolError::Precondition(
            "per-type inputs have unequal lengths".into(),
        ));
    }
    let n = views_a[0].n();
    if views_a.iter().any(|v| v.n() != n) || views_b.iter().any(|v| v.n() != n) {
        return Err(ProtocolError::Precondition(
            "sub-games have unequal sizes".into(),
        ));
    }
    let big_n = (4 * n) as f64;
    if big_n < 12.0 {
        return Err(ProtocolError::Precondition(format!(
            "need at least 12 actions per sub-game, got {big_n}"
        )));
    }
    let threshold = 1.0 / (16.0 * big_n * big_n);
    if !(0.0..=threshold).contains(&epsilon) {
        return Err(ProtocolError::Precondition(format!(
            "epsilon {epsilon} above the recovery threshold {threshold}"
        )));
    }
    // referee: the claimed regret must hold in every sub-game
    for i in 0..t {
        let sub = TwoCycleGame::build(views_a[i].x().clone(), views_b[i].y().clone(), false)?;
        let measured = ne_regret(&sub, &profiles[i].0, &profiles[i].1)?.value;
        if measured > epsilon {
            return Err(ProtocolError::Precondition(format!(
                "measured Nash regret {measured} in sub-game {} exceeds epsilon {epsilon}",
                i + 1
            )));
        }
    }

    let p = 1.0 / (4.0 * big_n);
    let candidates: Vec<usize> = (0..t)
        .filter(|&i| classify_subgame(&views_b[i], &profiles[i].1, p))
        .collect();
    let &chosen = match candidates.as_slice() {
        [one] => one,
        _ => {
            return Err(ProtocolError::ClassificationAmbiguous {
                found: candidates.len(),
            })
        }
    };

    let mut transcript = Transcript::new();
    transcript.push(Message::type_index(Sender::B, chosen + 1, t));
    let (a, b) = &profiles[chosen];
    if !non_increasing_views(&views_a[chosen], &views_b[chosen], a.probs(), b.probs(), p) {
        return Err(ProtocolError::Precondition(format!(
            "profile of sub-game {} is not {p}-non-increasing",
            chosen + 1
        )));
    }
    let (u, v) = algorithm2_steps(
        &views_a[chosen],
        &views_b[chosen],
        a.probs(),
        b.probs(),
        p,
        &mut transcript,
    )?;
    Ok(within_budget(
        RecoveryOutcome {
            u,
            v,
            game_type: Some(chosen + 1),
            transcript,
        },
        ceil_log2(t) + 1 + ceil_log2(n),
    ))
}

/// Which equilibrium family feeds the end-to-end pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryKind {
    Correlated,
    Nash,
    Wsne,
}

/// End-to-end run on one instance: construct an equilibrium of the requested
/// kind (seeded perturbation scale), recover the pure Nash equilibrium
/// through the matching protocol, and return the disputed index it encodes.
pub fn end_to_end_disjointness(
    x: &BitVector,
    y: &BitVector,
    kind: RecoveryKind,
    seed: u64,
) -> Result<(usize, Transcript), ProtocolError> {
    use rand::{Rng, SeedableRng};
    let game = TwoCycleGame::build(x.clone(), y.clone(), true)?;
    let view_a = PartyViewA::from_bits(x);
    let view_b = PartyViewB::from_bits(y);
    let big_n = (4 * game.n()) as f64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let outcome = match kind {
        RecoveryKind::Correlated => {
            let eta = rng.gen::<f64>() / (100.0 * big_n);
            let mu = perturbed_ce(&game, eta)?;
            let epsilon = ce_regret(&game, &mu)?.value;
            recover_from_correlated(&view_a, &view_b, &mu, epsilon)?
        }
        RecoveryKind::Nash => {
            let scale = rng.gen::<f64>() / (32.0 * big_n * big_n);
            let (a, b) = perturbed_ne(&game, scale)?;
            let epsilon = ne_regret(&game, &a, &b)?.value;
            recover_from_nash(&view_a, &view_b, &a, &b, epsilon)?
        }
        RecoveryKind::Wsne => {
            let k = game.key_vertices()?;
            let a = MixedStrategy::point_mass(4 * game.n(), game.index(k.u_star));
            let b = MixedStrategy::point_mass(4 * game.n(), game.index(k.v0));
            recover_from_wsne(&view_a, &view_b, &a, &b)?
        }
    };
    Ok((outcome.v.layer, outcome.transcript))
}
