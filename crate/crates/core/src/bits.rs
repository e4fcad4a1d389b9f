//! Bit strings and 1-based layer-index arithmetic.
//!
//! Layers are numbered `1..=n` and all layer arithmetic wraps modulo `n`
//! through [`wrap_index`]; nothing else in the crate computes a raw modulus
//! on a layer.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::game::GameError;

/// Wraps an arbitrary (possibly zero or negative) layer index into `1..=n`.
pub fn wrap_index(i: i64, n: usize) -> usize {
    debug_assert!(n >= 1);
    ((i - 1).rem_euclid(n as i64) + 1) as usize
}

/// A fixed-length string of bits, indexed 1-based like the layers it drives.
///
/// Instances must have at least 3 bits; shorter strings cannot produce a
/// well-formed game.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<u8>,
}

impl BitVector {
    pub fn new(bits: Vec<u8>) -> Result<Self, GameError> {
        if bits.len() < 3 {
            return Err(GameError::TooShort { n: bits.len() });
        }
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(GameError::BadBit { value: bad });
        }
        Ok(Self { bits })
    }

    /// Parses a string of `0`/`1` characters, e.g. `"11001"`.
    pub fn parse(s: &str) -> Result<Self, GameError> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(GameError::BadBitChar { ch: c }),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Self::new(bits)
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// The bit at 1-based position `i`.
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.bits.len(), "bit index {i} out of range");
        self.bits[i - 1]
    }

    /// The bit at position `i`, wrapped into `1..=n` first.
    pub fn bit_wrapped(&self, i: i64) -> u8 {
        self.bits[wrap_index(i, self.bits.len()) - 1]
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVector::parse(&s).map_err(D::Error::custom)
    }
}

/// All layer indices `i` with `x_i = 1` and `y_i = 0`, ascending.
pub fn disputed_indices(x: &BitVector, y: &BitVector) -> Result<Vec<usize>, GameError> {
    if x.n() != y.n() {
        return Err(GameError::LengthMismatch { x: x.n(), y: y.n() });
    }
    Ok((1..=x.n())
        .filter(|&i| x.bit(i) == 1 && y.bit(i) == 0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_past_upper_end() {
        assert_eq!(wrap_index(6, 5), 1);
    }

    #[test]
    fn wrap_below_one() {
        assert_eq!(wrap_index(0, 5), 5);
        assert_eq!(wrap_index(-4, 5), 1);
    }

    #[test]
    fn wrap_identity_inside_range() {
        assert_eq!(wrap_index(3, 5), 3);
        for i in 1..=7 {
            assert_eq!(wrap_index(i as i64, 7), i);
        }
    }

    #[test]
    fn disputed_from_figure_strings() {
        let x = BitVector::parse("11001").unwrap();
        let y = BitVector::parse("10011").unwrap();
        assert_eq!(disputed_indices(&x, &y).unwrap(), vec![2]);
    }

    #[test]
    fn disputed_identical_strings_is_empty() {
        let x = BitVector::parse("000").unwrap();
        assert_eq!(disputed_indices(&x, &x).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn disputed_single_position() {
        let x = BitVector::parse("101").unwrap();
        let y = BitVector::parse("001").unwrap();
        assert_eq!(disputed_indices(&x, &y).unwrap(), vec![1]);
    }

    #[test]
    fn disputed_length_mismatch_errors() {
        let x = BitVector::parse("101").unwrap();
        let y = BitVector::parse("0011").unwrap();
        assert!(disputed_indices(&x, &y).is_err());
    }

    #[test]
    fn too_short_rejected() {
        assert!(BitVector::parse("11").is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BitVector::parse("10x").is_err());
    }

    #[test]
    fn serde_round_trip_is_string() {
        let x = BitVector::parse("11001").unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, "\"11001\"");
        let back: BitVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
