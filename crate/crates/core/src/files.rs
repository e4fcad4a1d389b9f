//! On-disk JSON schemas for instances and distributions.
//!
//! Instance files carry only the strings; edges are always rederived.
//! Distribution files carry sparse `entries` lists (omitted cells are zero)
//! whose `n` field is the *action count*, i.e. `4 * n_layers`. Strategy
//! profiles and per-type Bayesian profiles extend the same shape.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitVector;
use crate::equilibria::{CorrelatedDistribution, DistError, MixedStrategy};
use crate::game::{GameError, TwoCycleGame};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("distribution file is a {found}, expected {expected}")]
    WrongKind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("bayesian profile file declares {t} types but holds {found} profiles")]
    ProfileCount { t: usize, found: usize },
}

/// `{"n": .., "x": "..", "y": "..", "promise": ..}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub x: BitVector,
    pub y: BitVector,
    pub promise: bool,
}

impl InstanceFile {
    pub fn from_game(game: &TwoCycleGame) -> Self {
        Self {
            n: game.n(),
            x: game.x().clone(),
            y: game.y().clone(),
            promise: game.promise(),
        }
    }

    pub fn from_strings(x: BitVector, y: BitVector, promise: bool) -> Self {
        Self {
            n: x.n(),
            x,
            y,
            promise,
        }
    }

    pub fn to_game(&self) -> Result<TwoCycleGame, GameError> {
        if self.n != self.x.n() {
            return Err(GameError::LengthMismatch {
                x: self.n,
                y: self.x.n(),
            });
        }
        TwoCycleGame::build(self.x.clone(), self.y.clone(), self.promise)
    }
}

/// Construction-specific constants recorded next to a generated distribution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scale_b: Option<f64>,
}

impl Meta {
    pub fn is_empty(&self) -> bool {
        self.alpha.is_none() && self.scale_a.is_none() && self.scale_b.is_none()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub a: Vec<(usize, f64)>,
    pub b: Vec<(usize, f64)>,
}

/// A distribution file. `n` is the action count of the game the entries
/// index into.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistributionFile {
    Mixed {
        n: usize,
        entries: Vec<(usize, f64)>,
        #[serde(skip_serializing_if = "Meta::is_empty", default)]
        meta: Meta,
    },
    Correlated {
        n: usize,
        entries: Vec<(usize, usize, f64)>,
        #[serde(skip_serializing_if = "Meta::is_empty", default)]
        meta: Meta,
    },
    Profile {
        n: usize,
        a: Vec<(usize, f64)>,
        b: Vec<(usize, f64)>,
        #[serde(skip_serializing_if = "Meta::is_empty", default)]
        meta: Meta,
    },
    BayesianProfile {
        t: usize,
        n: usize,
        profiles: Vec<ProfileEntry>,
    },
}

fn sparse_entries(probs: &[f64]) -> Vec<(usize, f64)> {
    probs
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p > 0.0)
        .map(|(i, &p)| (i, p))
        .collect()
}

fn strategy_from_entries(n: usize, entries: &[(usize, f64)]) -> Result<MixedStrategy, DistError> {
    let mut probs = vec![0.0; n];
    for &(i, p) in entries {
        if i >= n {
            return Err(DistError::IndexOutOfRange { index: i, n });
        }
        probs[i] += p;
    }
    MixedStrategy::new(probs)
}

impl DistributionFile {
    pub fn kind(&self) -> &'static str {
        match self {
            DistributionFile::Mixed { .. } => "mixed",
            DistributionFile::Correlated { .. } => "correlated",
            DistributionFile::Profile { .. } => "profile",
            DistributionFile::BayesianProfile { .. } => "bayesian_profile",
        }
    }

    pub fn from_mixed(m: &MixedStrategy) -> Self {
        DistributionFile::Mixed {
            n: m.n(),
            entries: sparse_entries(m.probs()),
            meta: Meta::default(),
        }
    }

    pub fn from_correlated(mu: &CorrelatedDistribution) -> Self {
        DistributionFile::Correlated {
            n: mu.n(),
            entries: mu.entries(),
            meta: Meta::default(),
        }
    }

    pub fn from_profile(a: &MixedStrategy, b: &MixedStrategy) -> Self {
        DistributionFile::Profile {
            n: a.n(),
            a: sparse_entries(a.probs()),
            b: sparse_entries(b.probs()),
            meta: Meta::default(),
        }
    }

    pub fn from_bayesian_profiles(profiles: &[(MixedStrategy, MixedStrategy)]) -> Self {
        DistributionFile::BayesianProfile {
            t: profiles.len(),
            n: profiles.first().map_or(0, |(a, _)| a.n()),
            profiles: profiles
                .iter()
                .map(|(a, b)| ProfileEntry {
                    a: sparse_entries(a.probs()),
                    b: sparse_entries(b.probs()),
                })
                .collect(),
        }
    }

    pub fn with_meta(mut self, new_meta: Meta) -> Self {
        match &mut self {
            DistributionFile::Mixed { meta, .. }
            | DistributionFile::Correlated { meta, .. }
            | DistributionFile::Profile { meta, .. } => *meta = new_meta,
            DistributionFile::BayesianProfile { .. } => {}
        }
        self
    }

    pub fn to_correlated(&self, expect_n: usize) -> Result<CorrelatedDistribution, FormatError> {
        match self {
            DistributionFile::Correlated { n, entries, .. } => {
                if *n != expect_n {
                    return Err(DistError::WrongActionCount {
                        expected: expect_n,
                        got: *n,
                    }
                    .into());
                }
                Ok(CorrelatedDistribution::from_entries(
                    *n,
                    entries.iter().map(|&(u, v, p)| ((u, v), p)),
                )?)
            }
            other => Err(FormatError::WrongKind {
                expected: "correlated",
                found: other.kind(),
            }),
        }
    }

    pub fn to_mixed(&self, expect_n: usize) -> Result<MixedStrategy, FormatError> {
        match self {
            DistributionFile::Mixed { n, entries, .. } => {
                if *n != expect_n {
                    return Err(DistError::WrongActionCount {
                        expected: expect_n,
                        got: *n,
                    }
                    .into());
                }
                Ok(strategy_from_entries(*n, entries)?)
            }
            other => Err(FormatError::WrongKind {
                expected: "mixed",
                found: other.kind(),
            }),
        }
    }

    pub fn to_profile(
        &self,
        expect_n: usize,
    ) -> Result<(MixedStrategy, MixedStrategy), FormatError> {
        match self {
            DistributionFile::Profile { n, a, b, .. } => {
                if *n != expect_n {
                    return Err(DistError::WrongActionCount {
                        expected: expect_n,
                        got: *n,
                    }
                    .into());
                }
                Ok((strategy_from_entries(*n, a)?, strategy_from_entries(*n, b)?))
            }
            other => Err(FormatError::WrongKind {
                expected: "profile",
                found: other.kind(),
            }),
        }
    }

    pub fn to_bayesian_profiles(
        &self,
        expect_t: usize,
        expect_n: usize,
    ) -> Result<Vec<(MixedStrategy, MixedStrategy)>, FormatError> {
        match self {
            DistributionFile::BayesianProfile { t, n, profiles } => {
                if *t != expect_t || profiles.len() != *t {
                    return Err(FormatError::ProfileCount {
                        t: expect_t,
                        found: profiles.len(),
                    });
                }
                if *n != expect_n {
                    return Err(DistError::WrongActionCount {
                        expected: expect_n,
                        got: *n,
                    }
                    .into());
                }
                profiles
                    .iter()
                    .map(|p| {
                        Ok((
                            strategy_from_entries(*n, &p.a)?,
                            strategy_from_entries(*n, &p.b)?,
                        ))
                    })
                    .collect()
            }
            other => Err(FormatError::WrongKind {
                expected: "bayesian_profile",
                found: other.kind(),
            }),
        }
    }
}
