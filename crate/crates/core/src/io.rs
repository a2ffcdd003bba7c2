//! Text formats: graph6 for simple graphs and a plain `u v` edge list for
//! multigraphs.

use crate::error::{Error, Result};
use crate::graph::Multigraph;

const GRAPH6_HEADER: &[u8] = b">>graph6<<";

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

/// Decodes a single graph6 record. A leading `>>graph6<<` header and
/// trailing line terminators are accepted.
pub fn parse_graph6(text: &[u8]) -> Result<Multigraph> {
    let mut end = text.len();
    while end > 0 && matches!(text[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    let mut pos = if text.starts_with(GRAPH6_HEADER) {
        GRAPH6_HEADER.len()
    } else {
        0
    };

    let byte_at = |pos: usize| -> Result<u64> {
        if pos >= end {
            return Err(parse_err(pos, "truncated input"));
        }
        let b = text[pos];
        if !(63..=126).contains(&b) {
            return Err(parse_err(pos, format!("byte {b:#04x} outside graph6 range")));
        }
        Ok(u64::from(b - 63))
    };

    let header_start = pos;
    let first = byte_at(pos)?;
    let n: usize;
    if first < 63 {
        n = first as usize;
        pos += 1;
    } else {
        let second = byte_at(pos + 1)?;
        if second < 63 {
            let mut v = 0u64;
            for i in 0..3 {
                v = (v << 6) | byte_at(pos + 1 + i)?;
            }
            n = v as usize;
            pos += 4;
        } else {
            let mut v = 0u64;
            for i in 0..6 {
                v = (v << 6) | byte_at(pos + 2 + i)?;
            }
            n = v as usize;
            pos += 8;
        }
        if n < 63 {
            return Err(parse_err(header_start, "non-minimal vertex count encoding"));
        }
    }

    let bits = n * n.saturating_sub(1) / 2;
    let needed = bits.div_ceil(6);
    if end - pos < needed {
        return Err(parse_err(end, format!("truncated payload: need {needed} bytes")));
    }
    if end - pos > needed {
        return Err(parse_err(pos + needed, "trailing bytes after payload"));
    }

    let mut edges = Vec::new();
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = byte_at(pos + k / 6)?;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    // padding bits must be zero
    if needed > 0 {
        let last = byte_at(pos + needed - 1)?;
        let pad = needed * 6 - bits;
        if last & ((1 << pad) - 1) != 0 {
            return Err(parse_err(pos + needed - 1, "non-zero padding bits"));
        }
    }
    Multigraph::from_edges(n, edges)
}

/// Encodes a simple graph as graph6 (no header, no newline).
pub fn write_graph6(g: &Multigraph) -> Result<String> {
    if !g.is_simple() {
        return Err(Error::InvalidArgument(
            "graph6 cannot encode parallel edges".into(),
        ));
    }
    let n = g.vertex_count();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut adj = vec![false; n * n];
    for &(u, v) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut acc = 0u8;
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(adj[i * n + j]);
            k += 1;
            if k.is_multiple_of(6) {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if !k.is_multiple_of(6) {
        acc <<= 6 - k % 6;
        out.push(acc + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

/// Parses `u v` lines (0-based). Blank lines and `#` comments are skipped.
/// The vertex count is one more than the largest index seen.
pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
    let mut edges = Vec::new();
    let mut offset = 0usize;
    let mut max_vertex: Option<usize> = None;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut col = 0usize;
        for tok in body.split_whitespace() {
            let at = body[col..].find(tok).map(|p| p + col).unwrap_or(col);
            col = at + tok.len();
            let value: usize = tok
                .parse()
                .map_err(|_| parse_err(offset + at, format!("line {}: bad token {tok:?}", lineno + 1)))?;
            tokens.push(value);
        }
        offset += line.len();
        match tokens.as_slice() {
            [] => continue,
            &[u, v] => {
                if u == v {
                    return Err(Error::Loop {
                        line: lineno + 1,
                        vertex: u,
                    });
                }
                max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
                edges.push((u, v));
            }
            _ => {
                return Err(parse_err(
                    offset - line.len(),
                    format!("line {}: expected two vertex indices", lineno + 1),
                ))
            }
        }
    }
    Multigraph::from_edges(max_vertex.map_or(0, |m| m + 1), edges)
}

pub fn write_edge_list(g: &Multigraph) -> String {
    let mut s = String::new();
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Decides the format from the first non-whitespace byte: digits and `#`
/// mean edge list, anything in the graph6 alphabet means graph6.
pub fn parse_graph(text: &[u8]) -> Result<Multigraph> {
    let start = text
        .iter()
        .position(|b| !b.is_ascii_whitespace())
        .ok_or_else(|| parse_err(0, "empty input"))?;
    match text[start] {
        b'0'..=b'9' | b'#' => {
            let s = std::str::from_utf8(text).map_err(|e| parse_err(e.valid_up_to(), "invalid UTF-8"))?;
            parse_edge_list(s)
        }
        _ => parse_graph6(&text[start..]),
    }
}

/// Every non-empty line of a graph6 file.
pub fn parse_graph6_lines(text: &[u8]) -> Result<Vec<Multigraph>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split(|&b| b == b'\n') {
        let trimmed = line.strip_suffix(b"\r").unwrap_or(line);
        if !trimmed.is_empty() {
            let g = parse_graph6(trimmed).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse {
                    offset: offset + o,
                    message,
                },
                other => other,
            })?;
            out.push(g);
        }
        offset += line.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph6_examples() {
        let g = parse_graph6(b"D??").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 0));
        let k4 = parse_graph6(b"C~\n").unwrap();
        assert_eq!((k4.vertex_count(), k4.edge_count()), (4, 6));
        let p = parse_graph6(b">>graph6<<IheA@GUAo").unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(p.is_cubic());
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        assert!(matches!(parse_graph6(b"C"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(parse_graph6(b"C\x20"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(parse_graph6(b"IheA@G"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph6(b"C~~"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_graph6(b""), Err(Error::Parse { offset: 0, .. })));
    }

    #[test]
    fn graph6_large_header() {
        let n = 70;
        let g = Multigraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
        let s = write_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        let back = parse_graph6(s.as_bytes()).unwrap();
        assert_eq!(back.vertex_count(), n);
        assert_eq!(back.edge_count(), n);
    }

    #[test]
    fn edge_list_examples() {
        let c3 = parse_edge_list("0 1\n1 2\n2 0").unwrap();
        assert_eq!((c3.vertex_count(), c3.edge_count()), (3, 3));
        let digon = parse_edge_list("0 1\n0 1\n").unwrap();
        assert_eq!(digon.edges(), &[(0, 1), (0, 1)]);
        assert!(matches!(parse_edge_list("0 0"), Err(Error::Loop { line: 1, vertex: 0 })));
        assert!(matches!(parse_edge_list("0 x"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_edge_list("0 1\n1 2 3\n"), Err(Error::Parse { offset: 4, .. })));
    }

    #[test]
    fn autodetect() {
        assert_eq!(parse_graph(b"0 1\n1 2\n2 0\n").unwrap().edge_count(), 3);
        assert_eq!(parse_graph(b"C~").unwrap().edge_count(), 6);
        assert_eq!(parse_graph(b"# header\n0 1\n0 1\n").unwrap().edge_count(), 2);
    }

    #[test]
    fn graph6_rejects_multigraphs() {
        let digon = parse_edge_list("0 1\n0 1\n").unwrap();
        assert!(write_graph6(&digon).is_err());
    }

    fn edge_multiset(g: &Multigraph) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort_unstable();
        v
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(raw in proptest::collection::vec((0usize..8, 0usize..8), 1..30)) {
            let edges: Vec<_> = raw.into_iter().filter(|(u, v)| u != v).collect();
            prop_assume!(!edges.is_empty());
            let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
            let g = Multigraph::from_edges(n, edges).unwrap();
            let back = parse_edge_list(&write_edge_list(&g)).unwrap();
            prop_assert_eq!(back.edges(), g.edges());
        }

        #[test]
        fn graph6_round_trip(n in 1usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
            let mut edges = Vec::new();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] { edges.push((i, j)); }
                    k += 1;
                }
            }
            let g = Multigraph::from_edges(n, edges).unwrap();
            let back = parse_graph6(write_graph6(&g).unwrap().as_bytes()).unwrap();
            prop_assert_eq!(back.vertex_count(), n);
            prop_assert_eq!(edge_multiset(&back), edge_multiset(&g));
        }
    }
}
