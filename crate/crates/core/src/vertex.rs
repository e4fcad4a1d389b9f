//! Vertices of the game graphs: a layer in `1..=n` paired with one of the
//! four tags `0`, `1`, `01`, `11`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// The four per-layer tags. `ZeroOne` and `OneOne` are the two "midway" tags
/// written `01` and `11` on the wire.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "01")]
    ZeroOne,
    #[serde(rename = "11")]
    OneOne,
}

impl Tag {
    pub const ALL: [Tag; 4] = [Tag::Zero, Tag::One, Tag::ZeroOne, Tag::OneOne];

    pub fn ordinal(self) -> usize {
        match self {
            Tag::Zero => 0,
            Tag::One => 1,
            Tag::ZeroOne => 2,
            Tag::OneOne => 3,
        }
    }

    pub fn from_ordinal(o: usize) -> Tag {
        Tag::ALL[o]
    }

    /// The tag named by a plain bit: `0 -> Zero`, `1 -> One`.
    pub fn from_bit(b: u8) -> Tag {
        if b == 0 {
            Tag::Zero
        } else {
            Tag::One
        }
    }

    /// The midway tag written `b1`: `0 -> ZeroOne` (`01`), `1 -> OneOne` (`11`).
    pub fn midway_from_bit(b: u8) -> Tag {
        if b == 0 {
            Tag::ZeroOne
        } else {
            Tag::OneOne
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tag::Zero => "0",
            Tag::One => "1",
            Tag::ZeroOne => "01",
            Tag::OneOne => "11",
        }
    }
}

/// A vertex `(i, z)`: layer `i` in `1..=n`, tag `z`.
///
/// Vertices map bijectively onto linear indices `0..4n` via
/// `4*(layer-1) + tag ordinal`; that index is the action number used by every
/// dense table in the crate.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    #[serde(rename = "i")]
    pub layer: usize,
    #[serde(rename = "z")]
    pub tag: Tag,
}

impl Vertex {
    pub fn new(layer: usize, tag: Tag) -> Self {
        Self { layer, tag }
    }

    pub fn linear_index(self, n: usize) -> usize {
        debug_assert!(self.layer >= 1 && self.layer <= n);
        4 * (self.layer - 1) + self.tag.ordinal()
    }

    pub fn from_linear(idx: usize, n: usize) -> Self {
        assert!(idx < 4 * n, "linear index {idx} out of range for n={n}");
        Vertex {
            layer: idx / 4 + 1,
            tag: Tag::from_ordinal(idx % 4),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.layer, self.tag.label())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.layer, self.tag.label())
    }
}
