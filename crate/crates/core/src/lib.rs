//! 2-cycle games: construction, equilibrium regret measurement, and
//! low-communication recovery of the hidden disputed index.
//!
//! A promise instance is a pair of `n`-bit strings `x`, `y` with exactly one
//! index where `x` has a 1 against a 0 in `y`. The induced win-lose game on
//! `N = 4n` actions per player has a unique pure Nash equilibrium, and that
//! equilibrium encodes the disputed index. The crate provides:
//!
//! * [`game`]: the game construction, its Bayesian multi-type variant, and
//!   the [`game::WinLoseGame`] interface consumed by the verifiers;
//! * [`equilibria`]: exact regret computation (with witnesses) for
//!   correlated, rule-correlated, coarse correlated, Nash, well-supported
//!   and Bayesian Nash notions;
//! * [`recovery`]: the two-party protocols that extract the pure Nash
//!   equilibrium from approximate equilibria, with bit-exact transcripts;
//! * [`generators`]: seeded instances and every explicit equilibrium
//!   construction used by the test and acceptance suites;
//! * [`oracle`]: brute-force reference implementations that every fast path
//!   is checked against;
//! * [`files`]: the JSON schemas shared with the CLI.

pub mod bits;
pub mod equilibria;
pub mod files;
pub mod game;
pub mod generators;
pub mod oracle;
pub mod recovery;
pub mod vertex;

pub use bits::{disputed_indices, wrap_index, BitVector};
pub use game::{BayesianTwoCycleGame, GameError, KeyVertices, TwoCycleGame, WinLoseGame};
pub use vertex::{Tag, Vertex};
