//! Protocol transcripts with exact bit accounting.
//!
//! Message framing: every flag or layer-index message starts with a 1-bit
//! tag (0 = "nothing found", 1 = "index follows"); a layer index is then
//! `ceil(log2 n)` bits encoding `i - 1`. Type indices are always sent, so
//! they carry no tag and cost `ceil(log2 T)` bits.

use serde::{Deserialize, Serialize};

/// `ceil(log2 n)`; zero for `n <= 1`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sender {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Flag,
    LayerIndex,
    TypeIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub sender: Sender,
    pub kind: MessageKind,
    pub payload: Option<u32>,
    pub bits: u32,
}

impl Message {
    /// A bare "nothing found" tag bit.
    pub fn flag(sender: Sender) -> Self {
        Message {
            sender,
            kind: MessageKind::Flag,
            payload: None,
            bits: 1,
        }
    }

    /// Tag bit plus a 1-based layer index in `ceil(log2 n)` bits.
    pub fn layer_index(sender: Sender, i: usize, n: usize) -> Self {
        debug_assert!(i >= 1 && i <= n);
        Message {
            sender,
            kind: MessageKind::LayerIndex,
            payload: Some(i as u32),
            bits: 1 + ceil_log2(n),
        }
    }

    /// A 1-based type index in `ceil(log2 T)` bits, no tag.
    pub fn type_index(sender: Sender, t: usize, num_types: usize) -> Self {
        debug_assert!(t >= 1 && t <= num_types);
        Message {
            sender,
            kind: MessageKind::TypeIndex,
            payload: Some(t as u32),
            bits: ceil_log2(num_types),
        }
    }
}

/// The ordered messages of one protocol run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Transcript {
    pub messages: Vec<Message>,
    pub total_bits: u32,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, msg: Message) {
        self.total_bits += msg.bits;
        self.messages.push(msg);
    }
}
