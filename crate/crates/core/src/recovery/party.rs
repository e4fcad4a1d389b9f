//! One party's private view of the game.
//!
//! `PartyViewA` is built from `x` alone and `PartyViewB` from `y` alone; each
//! holds only its own side's adjacency. Protocol steps take exactly one view,
//! so a step can never read the other party's string by construction.

use crate::bits::BitVector;
use crate::game;
use crate::vertex::{Tag, Vertex};

/// Player A's side: the string `x` and the graph it induces.
#[derive(Debug, Clone)]
pub struct PartyViewA {
    x: BitVector,
    out: Vec<usize>,
    incoming: Vec<Vec<usize>>,
    back_edge_from: Vec<bool>,
}

impl PartyViewA {
    pub fn from_bits(x: &BitVector) -> Self {
        let (out, back_edge_from) = game::build_side_a(x);
        let incoming = game::invert(&out);
        Self {
            x: x.clone(),
            out,
            incoming,
            back_edge_from,
        }
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn num_actions(&self) -> usize {
        4 * self.x.n()
    }

    pub fn x(&self) -> &BitVector {
        &self.x
    }

    pub fn out_neighbor(&self, v: usize) -> usize {
        self.out[v]
    }

    /// In-neighbors of `v` in A's graph (ascending).
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn is_back_edge_source(&self, v: usize) -> bool {
        self.back_edge_from[v]
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        Vertex::from_linear(idx, self.n())
    }

    pub fn index(&self, v: Vertex) -> usize {
        v.linear_index(self.n())
    }

    /// The vertex `(i-1, x_{i-1})` A outputs after learning a layer index.
    pub fn output_for_layer(&self, i: usize) -> Vertex {
        let prev = crate::bits::wrap_index(i as i64 - 1, self.n());
        Vertex::new(prev, Tag::from_bit(self.x.bit(prev)))
    }

    /// First vertex (ascending linear index) with value strictly above `thr`.
    pub fn first_above(&self, values: &[f64], thr: f64) -> Option<usize> {
        (0..self.num_actions()).find(|&v| values[v] > thr)
    }
}

/// Player B's side: the string `y` and the graph it induces.
#[derive(Debug, Clone)]
pub struct PartyViewB {
    y: BitVector,
    out: Vec<usize>,
    incoming: Vec<Vec<usize>>,
}

impl PartyViewB {
    pub fn from_bits(y: &BitVector) -> Self {
        let out = game::build_side_b(y);
        let incoming = game::invert(&out);
        Self {
            y: y.clone(),
            out,
            incoming,
        }
    }

    pub fn n(&self) -> usize {
        self.y.n()
    }

    pub fn num_actions(&self) -> usize {
        4 * self.y.n()
    }

    pub fn y(&self) -> &BitVector {
        &self.y
    }

    pub fn out_neighbor(&self, v: usize) -> usize {
        self.out[v]
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        Vertex::from_linear(idx, self.n())
    }

    pub fn index(&self, v: Vertex) -> usize {
        v.linear_index(self.n())
    }

    /// First layer `i` (ascending) with `y_i = 0` and `values[(i,1)] > thr`.
    pub fn scan_tag_one_above(&self, values: &[f64], thr: f64) -> Option<usize> {
        (1..=self.n()).find(|&i| {
            self.y.bit(i) == 0 && values[Vertex::new(i, Tag::One).linear_index(self.n())] > thr
        })
    }

    pub fn first_above(&self, values: &[f64], thr: f64) -> Option<usize> {
        (0..self.num_actions()).find(|&v| values[v] > thr)
    }
}
