//! graph6 text encoding (short form, `n <= 62`).
//!
//! graph6 lists the upper triangle column by column (`(0,1), (0,2), (1,2),
//! (0,3), …`), unlike the row-major order of edge vectors, so both
//! directions go through explicit vertex pairs.

use super::{pair_index, LabeledGraph, MAX_VERTICES};
use crate::{Error, Result};

const OFFSET: u8 = 63;
const HEADER: &str = ">>graph6<<";

fn error(offset: usize, message: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        message: message.into(),
    }
}

/// Parses one graph6 line. Trailing `\r`/`\n` and an optional `>>graph6<<`
/// header are accepted.
pub fn parse_graph6(text: &str) -> Result<LabeledGraph> {
    let line = text.trim_end_matches(['\n', '\r']);
    let (skip, body) = match line.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, line.as_bytes()),
    };
    let Some(&head) = body.first() else {
        return Err(error(skip, "empty input"));
    };
    if !(OFFSET..=126).contains(&head) {
        return Err(error(skip, format!("invalid size byte 0x{head:02x}")));
    }
    if head == 126 {
        return Err(error(skip, "long-form header (n > 62) is not supported"));
    }
    let n = (head - OFFSET) as usize;
    if n == 0 {
        return Err(error(skip, "graphs must have at least one vertex"));
    }
    debug_assert!(n <= MAX_VERTICES);

    let m = n * (n - 1) / 2;
    let data = &body[1..];
    let expected = m.div_ceil(6);
    if data.len() != expected {
        return Err(error(
            skip + 1 + data.len().min(expected),
            format!("expected {expected} data bytes for n = {n}, found {}", data.len()),
        ));
    }

    let mut g = LabeledGraph::empty(n)?;
    let mut bit = 0;
    for (k, &byte) in data.iter().enumerate() {
        if !(OFFSET..=126).contains(&byte) {
            return Err(error(skip + 1 + k, format!("invalid data byte 0x{byte:02x}")));
        }
        let value = byte - OFFSET;
        for shift in (0..6).rev() {
            let set = value >> shift & 1 == 1;
            if bit < m {
                if set {
                    let (u, v) = column_pair(bit);
                    g.set_pair(pair_index(u, v, n)?, true);
                }
            } else if set {
                return Err(error(skip + 1 + k, "non-zero padding bits"));
            }
            bit += 1;
        }
    }
    Ok(g)
}

/// Encodes `g` as a graph6 string (without header or newline).
pub fn write_graph6(g: &LabeledGraph) -> String {
    let n = g.n();
    let m = g.pair_count();
    let mut out = String::with_capacity(1 + m.div_ceil(6));
    out.push((n as u8 + OFFSET) as char);
    let mut value = 0u8;
    let mut filled = 0;
    for bit in 0..m {
        let (u, v) = column_pair(bit);
        let set = g.pair(pair_index(u, v, n).expect("pair in range"));
        value = value << 1 | set as u8;
        filled += 1;
        if filled == 6 {
            out.push((value + OFFSET) as char);
            value = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push(((value << (6 - filled)) + OFFSET) as char);
    }
    out
}

/// The `bit`-th pair in graph6 column order.
fn column_pair(bit: usize) -> (usize, usize) {
    let mut v = 1;
    let mut start = 0;
    while start + v <= bit {
        start += v;
        v += 1;
    }
    (bit - start, v)
}
