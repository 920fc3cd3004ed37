//! graph6 codec.
//!
//! Layout: `N(n)` followed by the upper triangle of the adjacency matrix in
//! column-major order (`(0,1), (0,2), (1,2), (0,3), ...`), packed six bits per
//! byte, most significant bit first, each byte offset by 63. Padding bits in
//! the last byte must be zero.
//!
//! Orders up to 62 use the one-byte short form. The four-byte long form
//! (`~` followed by 18 bits) is only accepted or produced by a codec built
//! with [`Graph6Codec::long_form`].

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, MAX_VERTICES};

/// Largest order encoded with the one-byte size prefix.
pub const SHORT_FORM_MAX: usize = 62;
const LONG_FORM_MAX: usize = 258_047;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} outside the graph6 range 63..=126")]
    CharOutOfRange { offset: usize, byte: u8 },
    #[error("order {0} needs the long size form, which is disabled")]
    LongFormDisabled(usize),
    #[error("order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("expected {expected} data bytes for order {n}, found {found}")]
    Length {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("nonzero padding bits in final byte")]
    TrailingBits,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Graph6Codec {
    long_form: bool,
}

impl Graph6Codec {
    /// Short form only: 1 <= n <= 62.
    pub const fn short_form() -> Self {
        Self { long_form: false }
    }

    /// Also accepts and emits the 4-byte size prefix for 63 <= n <= 2^16.
    pub const fn long_form() -> Self {
        Self { long_form: true }
    }

    pub fn encode(&self, g: &Graph) -> Result<String, Graph6Error> {
        let n = g.n();
        let mut out = Vec::with_capacity(4 + data_len(n));
        if n <= SHORT_FORM_MAX {
            out.push(n as u8 + 63);
        } else if !self.long_form {
            return Err(Graph6Error::LongFormDisabled(n));
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 0x3f) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | g.has_edge(i, j) as u8;
                filled += 1;
                if filled == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((acc << (6 - filled)) + 63);
        }
        Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
    }

    pub fn decode(&self, s: &str) -> Result<Graph, Graph6Error> {
        let bytes = s.as_bytes();
        if bytes.is_empty() {
            return Err(Graph6Error::Empty);
        }
        for (offset, &byte) in bytes.iter().enumerate() {
            if !(63..=126).contains(&byte) {
                return Err(Graph6Error::CharOutOfRange { offset, byte });
            }
        }
        let (n, body) = if bytes[0] != 126 {
            ((bytes[0] - 63) as usize, &bytes[1..])
        } else {
            if bytes.len() >= 2 && bytes[1] == 126 {
                // 8-byte form: 36-bit sizes, beyond any order we store.
                return Err(Graph6Error::UnsupportedOrder(LONG_FORM_MAX + 1));
            }
            if bytes.len() < 4 {
                return Err(Graph6Error::Length {
                    n: 0,
                    expected: 3,
                    found: bytes.len() - 1,
                });
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if !self.long_form {
                return Err(Graph6Error::LongFormDisabled(n));
            }
            (n, &bytes[4..])
        };
        if n == 0 || n > MAX_VERTICES {
            return Err(Graph6Error::UnsupportedOrder(n));
        }
        let expected = data_len(n);
        if body.len() != expected {
            return Err(Graph6Error::Length {
                n,
                expected,
                found: body.len(),
            });
        }
        let total_bits = n * (n - 1) / 2;
        if total_bits % 6 != 0 {
            let pad = 6 - total_bits % 6;
            if (body[expected - 1] - 63) & ((1 << pad) - 1) != 0 {
                return Err(Graph6Error::TrailingBits);
            }
        }
        let mut b = GraphBuilder::new(n).expect("order checked");
        let mut bit = 0usize;
        for j in 1..n {
            for i in 0..j {
                let chunk = body[bit / 6] - 63;
                if chunk >> (5 - bit % 6) & 1 == 1 {
                    b.add_edge(i, j).expect("in range");
                }
                bit += 1;
            }
        }
        Ok(b.build())
    }
}

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Short-form graph6 encoding.
pub fn encode_graph6(g: &Graph) -> Result<String, Graph6Error> {
    Graph6Codec::short_form().encode(g)
}

/// Short-form graph6 decoding.
pub fn decode_graph6(s: &str) -> Result<Graph, Graph6Error> {
    Graph6Codec::short_form().decode(s)
}
