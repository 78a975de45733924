//! Line-oriented text formats for graphs, correspondences, k-graph
//! presentations, and skeletons.
//!
//! Five headers are recognized, all at version v1: `kgc-graph`,
//! `kgc-corr`, `kgc-2graph`, `kgc-kgraph`, and `kgc-skeleton`. Lines
//! are sequences of whitespace-separated tokens; `#` starts a comment
//! running to end of line; blank lines are ignored. Color indices in
//! files are 1-based (matching the Y₁..Y_k naming), vertex indices
//! 0-based. Complex entries are written `<re><sign><im>i`, e.g.
//! `0.5-0.5i`, with shortest round-trip float formatting.
//!
//! Serialization is canonical: `parse(serialize(x)) = x` and
//! serializing the parsed value reproduces the canonical bytes.
//! Labels must be single tokens (no whitespace, not starting with
//! `#`) for output to re-parse.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::correspondences::{tensor, CorrMorphism, Correspondence};
use crate::graphs::{fibred_product, DirectedGraph, Edge, KGraphPresentation, Square};
use crate::linalg::CMatrix;
use crate::product_systems::Skeleton;

#[derive(Debug, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A token with its 1-based line and column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

/// Tokenized input: one entry per non-blank line after comment
/// stripping.
struct Cursor<'a> {
    lines: Vec<Vec<Token<'a>>>,
    pos: usize,
    total_lines: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut total_lines = 0;
        for (idx, raw) in text.lines().enumerate() {
            total_lines = idx + 1;
            let body = match raw.find('#') {
                Some(h) => &raw[..h],
                None => raw,
            };
            let mut toks = Vec::new();
            let mut col = 0;
            for chunk in body.split_inclusive(char::is_whitespace) {
                let trimmed = chunk.trim_end_matches(char::is_whitespace);
                if !trimmed.is_empty() {
                    toks.push(Token {
                        text: trimmed,
                        line: idx + 1,
                        column: col + 1,
                    });
                }
                col += chunk.chars().count();
            }
            if !toks.is_empty() {
                lines.push(toks);
            }
        }
        Cursor {
            lines,
            pos: 0,
            total_lines,
        }
    }

    fn next_line(&mut self, what: &str) -> Result<&[Token<'a>], ParseError> {
        if self.pos >= self.lines.len() {
            return Err(ParseError::new(
                self.total_lines + 1,
                1,
                format!("unexpected end of input: expected {what}"),
            ));
        }
        self.pos += 1;
        Ok(&self.lines[self.pos - 1])
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l[0].text)
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.pos < self.lines.len() {
            let t = self.lines[self.pos][0];
            return Err(ParseError::new(
                t.line,
                t.column,
                format!("unexpected trailing content '{}'", t.text),
            ));
        }
        Ok(())
    }
}

fn expect_len(toks: &[Token], len: usize, shape: &str) -> Result<(), ParseError> {
    if toks.len() != len {
        let t = toks[0];
        return Err(ParseError::new(
            t.line,
            t.column,
            format!("expected '{shape}', got {} tokens", toks.len()),
        ));
    }
    Ok(())
}

fn expect_keyword(tok: Token, kw: &str) -> Result<(), ParseError> {
    if tok.text != kw {
        return Err(ParseError::new(
            tok.line,
            tok.column,
            format!("expected '{kw}', got '{}'", tok.text),
        ));
    }
    Ok(())
}

fn parse_usize(tok: Token) -> Result<usize, ParseError> {
    tok.text.parse().map_err(|_| {
        ParseError::new(
            tok.line,
            tok.column,
            format!("expected a nonnegative integer, got '{}'", tok.text),
        )
    })
}

/// Parses `key=<value>` into the integer value.
fn parse_kv(tok: Token, key: &str) -> Result<usize, ParseError> {
    let err = || {
        ParseError::new(
            tok.line,
            tok.column,
            format!("expected '{key}=<integer>', got '{}'", tok.text),
        )
    };
    let rest = tok.text.strip_prefix(key).ok_or_else(err)?;
    let rest = rest.strip_prefix('=').ok_or_else(err)?;
    rest.parse().map_err(|_| err())
}

fn parse_complex(tok: Token) -> Result<Complex64, ParseError> {
    let err = || {
        ParseError::new(
            tok.line,
            tok.column,
            format!("expected a complex entry like '0.5-0.5i', got '{}'", tok.text),
        )
    };
    let body = tok.text.strip_suffix('i').ok_or_else(err)?;
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let idx = split.ok_or_else(err)?;
    let re: f64 = body[..idx].parse().map_err(|_| err())?;
    let im: f64 = body[idx + 1..].parse().map_err(|_| err())?;
    let sign = if bytes[idx] == b'-' { -1.0 } else { 1.0 };
    Ok(Complex64::new(re, sign * im))
}

/// Canonical complex formatting: `<re><sign><im>i`, shortest
/// round-trip floats.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_header(cursor: &mut Cursor, expected_tag: &str) -> Result<(), ParseError> {
    let toks = cursor.next_line("a format header")?;
    expect_len(toks, 2, &format!("{expected_tag} v1"))?;
    expect_keyword(toks[0], expected_tag)?;
    expect_keyword(toks[1], "v1")?;
    Ok(())
}

fn parse_vertices(cursor: &mut Cursor) -> Result<usize, ParseError> {
    let toks = cursor.next_line("'vertices <n>'")?;
    expect_len(toks, 2, "vertices <n>")?;
    expect_keyword(toks[0], "vertices")?;
    let n = parse_usize(toks[1])?;
    if n == 0 {
        return Err(ParseError::new(
            toks[1].line,
            toks[1].column,
            "vertex count must be positive",
        ));
    }
    Ok(n)
}

fn parse_vertex_index(tok: Token, key: &str, n: usize) -> Result<usize, ParseError> {
    let v = parse_kv(tok, key)?;
    if v >= n {
        return Err(ParseError::new(
            tok.line,
            tok.column,
            format!("vertex {v} out of range for {n} vertices"),
        ));
    }
    Ok(v)
}

/// Parses the edge-list body shared by `kgc-graph` files and the
/// inline `graph <i> … end` blocks.
fn parse_edge_list(
    cursor: &mut Cursor,
    n: usize,
) -> Result<Vec<Edge>, ParseError> {
    let toks = cursor.next_line("'edges <m>'")?;
    expect_len(toks, 2, "edges <m>")?;
    expect_keyword(toks[0], "edges")?;
    let m = parse_usize(toks[1])?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let toks = cursor.next_line("'<label> r=<v> s=<w>'")?;
        expect_len(toks, 3, "<label> r=<v> s=<w>")?;
        let label = toks[0].text.to_owned();
        let r = parse_vertex_index(toks[1], "r", n)?;
        let s = parse_vertex_index(toks[2], "s", n)?;
        edges.push(Edge::new(label, r, s));
    }
    Ok(edges)
}

fn build_graph(n: usize, edges: Vec<Edge>, line: usize) -> Result<DirectedGraph, ParseError> {
    DirectedGraph::new(n, edges).map_err(|e| ParseError::new(line, 1, e.to_string()))
}

/// Parses a `kgc-graph v1` document.
pub fn parse_graph(text: &str) -> Result<DirectedGraph, ParseError> {
    let mut cursor = Cursor::new(text);
    parse_header(&mut cursor, "kgc-graph")?;
    let n = parse_vertices(&mut cursor)?;
    let edges = parse_edge_list(&mut cursor, n)?;
    let g = build_graph(n, edges, 1)?;
    cursor.expect_end()?;
    Ok(g)
}

fn push_edge_list(out: &mut String, g: &DirectedGraph) {
    out.push_str(&format!("edges {}\n", g.edge_count()));
    for e in g.edges() {
        out.push_str(&format!("{} r={} s={}\n", e.label, e.range, e.source));
    }
}

/// Canonical `kgc-graph v1` bytes.
pub fn serialize_graph(g: &DirectedGraph) -> String {
    let mut out = String::from("kgc-graph v1\n");
    out.push_str(&format!("vertices {}\n", g.vertex_count()));
    push_edge_list(&mut out, g);
    out
}

/// Parses a `kgc-corr v1` document.
pub fn parse_correspondence(text: &str) -> Result<Correspondence, ParseError> {
    let mut cursor = Cursor::new(text);
    parse_header(&mut cursor, "kgc-corr")?;
    let n = parse_vertices(&mut cursor)?;
    let toks = cursor.next_line("'dim'")?;
    expect_len(toks, 1, "dim")?;
    expect_keyword(toks[0], "dim")?;
    let dims = parse_usize_matrix(&mut cursor, n, n)?;
    cursor.expect_end()?;
    Correspondence::new(n, dims).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

fn parse_usize_matrix(
    cursor: &mut Cursor,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let toks = cursor.next_line("a matrix row")?;
        expect_len(toks, cols, &format!("{cols} integers"))?;
        out.push(toks.iter().map(|&t| parse_usize(t)).collect::<Result<_, _>>()?);
    }
    Ok(out)
}

/// Canonical `kgc-corr v1` bytes.
pub fn serialize_correspondence(x: &Correspondence) -> String {
    let mut out = String::from("kgc-corr v1\n");
    out.push_str(&format!("vertices {}\n", x.vertex_count()));
    out.push_str("dim\n");
    for row in x.dims() {
        let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a `kgc-2graph v1` or `kgc-kgraph v1` document. The 2-graph
/// tag additionally requires k = 2.
pub fn parse_kgraph(text: &str) -> Result<KGraphPresentation, ParseError> {
    let mut cursor = Cursor::new(text);
    let toks = cursor.next_line("a format header")?;
    expect_len(toks, 2, "kgc-kgraph v1")?;
    let tag = toks[0].text;
    if tag != "kgc-kgraph" && tag != "kgc-2graph" {
        return Err(ParseError::new(
            toks[0].line,
            toks[0].column,
            format!("expected header 'kgc-kgraph' or 'kgc-2graph', got '{tag}'"),
        ));
    }
    let header_line = toks[0].line;
    expect_keyword(toks[1], "v1")?;
    let two_graph = tag == "kgc-2graph";
    let n = parse_vertices(&mut cursor)?;
    let toks = cursor.next_line("'k <k>'")?;
    expect_len(toks, 2, "k <k>")?;
    expect_keyword(toks[0], "k")?;
    let k = parse_usize(toks[1])?;
    if k == 0 {
        return Err(ParseError::new(toks[1].line, toks[1].column, "rank must be positive"));
    }
    if two_graph && k != 2 {
        return Err(ParseError::new(
            toks[1].line,
            toks[1].column,
            format!("kgc-2graph requires k = 2, got {k}"),
        ));
    }
    let mut graphs = Vec::with_capacity(k);
    for i in 0..k {
        let toks = cursor.next_line("'graph <i>'")?;
        expect_len(toks, 2, "graph <i>")?;
        expect_keyword(toks[0], "graph")?;
        let got = parse_usize(toks[1])?;
        if got != i + 1 {
            return Err(ParseError::new(
                toks[1].line,
                toks[1].column,
                format!("expected graph {} (colors are 1-based and in order), got {got}", i + 1),
            ));
        }
        let line = toks[0].line;
        let edges = parse_edge_list(&mut cursor, n)?;
        let toks = cursor.next_line("'end'")?;
        expect_len(toks, 1, "end")?;
        expect_keyword(toks[0], "end")?;
        graphs.push(build_graph(n, edges, line)?);
    }
    let mut squares = BTreeMap::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let toks = cursor.next_line("'squares <i> <j>'")?;
            expect_len(toks, 3, "squares <i> <j>")?;
            expect_keyword(toks[0], "squares")?;
            let gi = parse_usize(toks[1])?;
            let gj = parse_usize(toks[2])?;
            if gi != i + 1 || gj != j + 1 {
                return Err(ParseError::new(
                    toks[1].line,
                    toks[1].column,
                    format!(
                        "expected squares {} {} (pairs are in lexicographic order), got {gi} {gj}",
                        i + 1,
                        j + 1
                    ),
                ));
            }
            let sq = parse_square_block(&mut cursor, &graphs[i], &graphs[j], i + 1, j + 1)?;
            squares.insert((i, j), sq);
        }
    }
    cursor.expect_end()?;
    KGraphPresentation::new(graphs, squares).map_err(|e| ParseError::new(header_line, 1, e.to_string()))
}

fn parse_square_block(
    cursor: &mut Cursor,
    ei: &DirectedGraph,
    ej: &DirectedGraph,
    ci: usize,
    cj: usize,
) -> Result<Square, ParseError> {
    let forward = fibred_product(ei, ej)
        .expect("skeleton graphs share a vertex count");
    let backward = fibred_product(ej, ei)
        .expect("skeleton graphs share a vertex count");
    let mut square = vec![usize::MAX; forward.edge_count()];
    loop {
        if cursor.peek_keyword() == Some("end") {
            cursor.next_line("'end'")?;
            break;
        }
        let toks = cursor.next_line("'<e> <f> -> <ftilde> <etilde>' or 'end'")?;
        expect_len(toks, 5, "<e> <f> -> <ftilde> <etilde>")?;
        expect_keyword(toks[2], "->")?;
        let lookup = |tok: Token, g: &DirectedGraph, color: usize| {
            g.edge_by_label(tok.text).ok_or_else(|| {
                ParseError::new(
                    tok.line,
                    tok.column,
                    format!("no edge '{}' in graph {color}", tok.text),
                )
            })
        };
        let e = lookup(toks[0], ei, ci)?;
        let f = lookup(toks[1], ej, cj)?;
        let ft = lookup(toks[3], ej, cj)?;
        let et = lookup(toks[4], ei, ci)?;
        let src = forward.index_of(e, f).ok_or_else(|| {
            ParseError::new(
                toks[0].line,
                toks[0].column,
                format!("pair ({}, {}) is not composable", toks[0].text, toks[1].text),
            )
        })?;
        let dst = backward.index_of(ft, et).ok_or_else(|| {
            ParseError::new(
                toks[3].line,
                toks[3].column,
                format!("pair ({}, {}) is not composable", toks[3].text, toks[4].text),
            )
        })?;
        if square[src] != usize::MAX {
            return Err(ParseError::new(
                toks[0].line,
                toks[0].column,
                format!("pair ({}, {}) mapped twice", toks[0].text, toks[1].text),
            ));
        }
        square[src] = dst;
    }
    if let Some(missing) = square.iter().position(|&d| d == usize::MAX) {
        let (e, f) = forward.pair(missing);
        return Err(ParseError::new(
            cursor.total_lines + 1,
            1,
            format!(
                "squares {ci} {cj}: pair ({}, {}) has no image",
                ei.edges()[e].label,
                ej.edges()[f].label
            ),
        ));
    }
    Ok(square)
}

/// Canonical `kgc-2graph v1` (k = 2) or `kgc-kgraph v1` (k ≠ 2) bytes.
pub fn serialize_kgraph(p: &KGraphPresentation) -> String {
    let k = p.rank();
    let tag = if k == 2 { "kgc-2graph" } else { "kgc-kgraph" };
    let mut out = format!("{tag} v1\n");
    out.push_str(&format!("vertices {}\n", p.vertex_count()));
    out.push_str(&format!("k {k}\n"));
    for i in 0..k {
        out.push_str(&format!("graph {}\n", i + 1));
        push_edge_list(&mut out, p.skeleton_graph(i));
        out.push_str("end\n");
    }
    for i in 0..k {
        for j in (i + 1)..k {
            out.push_str(&format!("squares {} {}\n", i + 1, j + 1));
            let forward = p.forward_product(i, j);
            let backward = p.backward_product(i, j);
            let (ei, ej) = (p.skeleton_graph(i), p.skeleton_graph(j));
            for (idx, &dst) in p.square(i, j).iter().enumerate() {
                let (e, f) = forward.pair(idx);
                let (ft, et) = backward.pair(dst);
                out.push_str(&format!(
                    "{} {} -> {} {}\n",
                    ei.edges()[e].label,
                    ej.edges()[f].label,
                    ej.edges()[ft].label,
                    ei.edges()[et].label
                ));
            }
            out.push_str("end\n");
        }
    }
    out
}

/// Parses a `kgc-skeleton v1` document.
pub fn parse_skeleton(text: &str) -> Result<Skeleton, ParseError> {
    let mut cursor = Cursor::new(text);
    parse_header(&mut cursor, "kgc-skeleton")?;
    let n = parse_vertices(&mut cursor)?;
    let toks = cursor.next_line("'k <k>'")?;
    expect_len(toks, 2, "k <k>")?;
    expect_keyword(toks[0], "k")?;
    let k = parse_usize(toks[1])?;
    if k == 0 {
        return Err(ParseError::new(toks[1].line, toks[1].column, "rank must be positive"));
    }
    let mut fibers = Vec::with_capacity(k);
    for i in 0..k {
        let toks = cursor.next_line("'dim Y<i>'")?;
        expect_len(toks, 2, "dim Y<i>")?;
        expect_keyword(toks[0], "dim")?;
        expect_keyword(toks[1], &format!("Y{}", i + 1))?;
        let line = toks[0].line;
        let dims = parse_usize_matrix(&mut cursor, n, n)?;
        fibers.push(
            Correspondence::new(n, dims).map_err(|e| ParseError::new(line, 1, e.to_string()))?,
        );
    }
    let mut braids = BTreeMap::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let toks = cursor.next_line("'T <i> <j>'")?;
            expect_len(toks, 3, "T <i> <j>")?;
            expect_keyword(toks[0], "T")?;
            let gi = parse_usize(toks[1])?;
            let gj = parse_usize(toks[2])?;
            if gi != i + 1 || gj != j + 1 {
                return Err(ParseError::new(
                    toks[1].line,
                    toks[1].column,
                    format!(
                        "expected T {} {} (pairs are in lexicographic order), got {gi} {gj}",
                        i + 1,
                        j + 1
                    ),
                ));
            }
            let line = toks[0].line;
            let (source, _) = tensor(&fibers[i], &fibers[j])
                .map_err(|e| ParseError::new(line, 1, e.to_string()))?;
            let (target, _) = tensor(&fibers[j], &fibers[i])
                .map_err(|e| ParseError::new(line, 1, e.to_string()))?;
            let mut blocks: Vec<CMatrix> = (0..n * n)
                .map(|b| CMatrix::zeros(target.dim(b / n, b % n), source.dim(b / n, b % n)))
                .collect();
            while cursor.peek_keyword() == Some("block") {
                let toks = cursor.next_line("'block r=<v> s=<w>'")?;
                expect_len(toks, 3, "block r=<v> s=<w>")?;
                let v = parse_vertex_index(toks[1], "r", n)?;
                let w = parse_vertex_index(toks[2], "s", n)?;
                let rows = target.dim(v, w);
                let cols = source.dim(v, w);
                if rows == 0 || cols == 0 {
                    return Err(ParseError::new(
                        toks[0].line,
                        toks[0].column,
                        format!("block r={v} s={w} is {rows}x{cols} and carries no entries"),
                    ));
                }
                for r in 0..rows {
                    let row = cursor.next_line("a complex matrix row")?;
                    expect_len(row, cols, &format!("{cols} complex entries"))?;
                    for (c, &tok) in row.iter().enumerate() {
                        blocks[v * n + w][(r, c)] = parse_complex(tok)?;
                    }
                }
            }
            let t = CorrMorphism::new(source, target, blocks)
                .map_err(|e| ParseError::new(line, 1, e.to_string()))?;
            braids.insert((i, j), t);
        }
    }
    cursor.expect_end()?;
    Skeleton::new(fibers, braids).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// Canonical `kgc-skeleton v1` bytes. Blocks with no rows or no
/// columns are omitted; all other blocks are written in (r, s) order.
pub fn serialize_skeleton(s: &Skeleton) -> String {
    let n = s.vertex_count();
    let k = s.rank();
    let mut out = String::from("kgc-skeleton v1\n");
    out.push_str(&format!("vertices {n}\n"));
    out.push_str(&format!("k {k}\n"));
    for (i, y) in s.fibers().iter().enumerate() {
        out.push_str(&format!("dim Y{}\n", i + 1));
        for row in y.dims() {
            let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            out.push_str(&format!("T {} {}\n", i + 1, j + 1));
            let t = s.braid(i, j);
            for v in 0..n {
                for w in 0..n {
                    let m = t.block(v, w);
                    if m.nrows() == 0 || m.ncols() == 0 {
                        continue;
                    }
                    out.push_str(&format!("block r={v} s={w}\n"));
                    for r in 0..m.nrows() {
                        let cells: Vec<String> =
                            (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
                        out.push_str(&cells.join(" "));
                        out.push('\n');
                    }
                }
            }
        }
    }
    out
}
