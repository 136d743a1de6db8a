//! graph6 serialization.
//!
//! Layout: one byte `n + 63`, then the upper triangle of the adjacency
//! matrix in column order `x(0,1), x(0,2), x(1,2), x(0,3), ...`, packed
//! big-endian into 6-bit groups (zero padded), each group offset by 63.

use crate::graph::{Graph, GraphError, MAX_VERTICES};

/// Upper-triangle pairs `(i, j)` with `i < j`, in graph6 bit order.
pub fn bit_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = vec![(n as u8) + 63];
    let mut acc = 0u8;
    let mut filled = 0;
    for (i, j) in bit_pairs(n) {
        acc = acc << 1 | g.has_edge(i, j) as u8;
        filled += 1;
        if filled == 6 {
            out.push(acc + 63);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

pub fn decode(bytes: &[u8]) -> Result<Graph, GraphError> {
    let err = |m: String| GraphError::Graph6(m);
    let bytes = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let (&first, body) = bytes.split_first().ok_or_else(|| err("empty input".into()))?;
    if !(63..=126).contains(&first) {
        return Err(err(format!("byte {first} outside 63..=126")));
    }
    if first == 126 {
        return Err(err("only n < 63 is supported".into()));
    }
    let n = (first - 63) as usize;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(err(format!(
            "expected {expected} data bytes for n={n}, found {}",
            body.len()
        )));
    }
    let mut values = Vec::with_capacity(expected);
    for &b in body {
        if !(63..=126).contains(&b) {
            return Err(err(format!("byte {b} outside 63..=126")));
        }
        values.push(b - 63);
    }
    let bit = |k: usize| values[k / 6] >> (5 - k % 6) & 1 == 1;
    for k in bits..expected * 6 {
        if bit(k) {
            return Err(err("nonzero padding bits".into()));
        }
    }
    let mut g = Graph::empty(n)?;
    for (k, (i, j)) in bit_pairs(n).enumerate() {
        if bit(k) {
            g.add_edge(i, j)?;
        }
    }
    Ok(g)
}
