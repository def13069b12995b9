//! graph6 encoding.
//!
//! The order is written as one byte `n + 63` for `n <= 62`, as `~` plus
//! three six-bit groups for `n <= 258047`, and as `~~` plus six groups
//! beyond that. The upper triangle follows column by column, packed six bits
//! per byte with zero padding.

use super::Graph;
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_order(n, &mut out);
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
    String::from_utf8(out).expect("graph6 is ASCII")
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    let groups = |k: usize, out: &mut Vec<u8>| {
        for s in (0..k).rev() {
            out.push(((n >> (6 * s)) & 63) as u8 + 63);
        }
    };
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        groups(3, out);
    } else {
        out.push(126);
        out.push(126);
        groups(6, out);
    }
}

/// Parses one graph6 line. An optional `>>graph6<<` header and a trailing
/// newline are accepted.
pub fn decode(text: &str) -> Result<Graph> {
    let mut base = 0;
    let mut s = text.as_bytes();
    if s.starts_with(HEADER.as_bytes()) {
        base = HEADER.len();
        s = &s[base..];
    }
    while let Some((&last, rest)) = s.split_last() {
        if last == b'\n' || last == b'\r' {
            s = rest;
        } else {
            break;
        }
    }
    let err = |offset: usize, message: &str| Error::Graph6 {
        offset: base + offset,
        message: message.to_string(),
    };
    for (i, &c) in s.iter().enumerate() {
        if !(63..=126).contains(&c) {
            return Err(err(i, "byte outside the printable graph6 range"));
        }
    }
    let (n, mut pos) = match s {
        [] => return Err(err(0, "missing order")),
        [126, 126, ..] => (read_groups(s, 2, 6).ok_or_else(|| err(s.len(), "truncated order"))?, 8),
        [126, ..] => (read_groups(s, 1, 3).ok_or_else(|| err(s.len(), "truncated order"))?, 4),
        [c, ..] => ((*c - 63) as usize, 1),
    };
    if (pos == 4 && n <= 62) || (pos == 8 && n <= 258_047) {
        return Err(err(0, "order is not minimally encoded"));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    let body = &s[pos..];
    if body.len() < need {
        return Err(err(s.len(), "adjacency data truncated"));
    }
    if body.len() > need {
        return Err(err(pos + need, "unexpected trailing bytes"));
    }
    let mut edges = Vec::new();
    let mut k = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
            if k == bits {
                break 'outer;
            }
        }
    }
    if bits % 6 != 0 {
        let last = body[need - 1] - 63;
        if last & ((1u8 << (6 - bits % 6)) - 1) != 0 {
            return Err(err(pos + need - 1, "nonzero padding bits"));
        }
    }
    pos += need;
    debug_assert_eq!(pos, s.len());
    Graph::from_edges(n, edges)
}

fn read_groups(s: &[u8], skip: usize, k: usize) -> Option<usize> {
    let g = s.get(skip..skip + k)?;
    Some(g.iter().fold(0usize, |acc, &c| (acc << 6) | (c - 63) as usize))
}
