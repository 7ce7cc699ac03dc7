//! Text formats.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` with `0 <= u < v < n`,
//! ASCII, every line newline-terminated. Edges are written in row-major order.
//!
//! DIMACS: optional `c` comment lines, a `p edge n m` header (`p col` is also
//! read), then `e u v` lines with 1-based labels. Conversion to and from the
//! 0-based edge list is `label - 1` / `label + 1`, nothing else. On input,
//! `m` must equal the number of `e` lines; pairs listed in both directions
//! collapse to one edge.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::{EdgeSet, Graph};
use crate::error::{Error, Result};

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.edge_count());
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    w.write_all(to_edge_list(g).as_bytes())?;
    Ok(())
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} `{tok}`"),
    })
}

fn expect_end<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::Parse {
            line,
            msg: format!("unexpected trailing token `{t}`"),
        }),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    read_edge_list(text.as_bytes())
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(l) if l.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let header = header?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(toks.next(), hline, "vertex count")?;
    let m = parse_usize(toks.next(), hline, "edge count")?;
    expect_end(toks, hline)?;

    let mut g = Graph::empty(n);
    let mut found = 0;
    for (lineno, line) in lines {
        let line = line?;
        let mut toks = line.split_whitespace();
        let u = parse_usize(toks.next(), lineno, "endpoint")?;
        let v = parse_usize(toks.next(), lineno, "endpoint")?;
        expect_end(toks, lineno)?;
        if u >= v || v >= n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("edge `{u} {v}` violates 0 <= u < v < {n}"),
            });
        }
        if !g.set_edge(u, v) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("duplicate edge `{u} {v}`"),
            });
        }
        found += 1;
    }
    if found != m {
        return Err(Error::HeaderMismatch { declared: m, found });
    }
    Ok(g)
}

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = String::with_capacity(24 + 14 * g.edge_count());
    writeln!(out, "p edge {} {}", g.n(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    read_dimacs(text.as_bytes())
}

pub fn read_dimacs<R: BufRead>(r: R) -> Result<Graph> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut found = 0;
    for (i, line) in r.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "second problem line".into(),
                    });
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("unsupported problem type {other:?}"),
                        })
                    }
                }
                let n = parse_usize(toks.next(), lineno, "vertex count")?;
                let m = parse_usize(toks.next(), lineno, "edge count")?;
                expect_end(toks, lineno)?;
                graph = Some((Graph::empty(n), m));
            }
            Some("e") => {
                let (g, _) = graph.as_mut().ok_or(Error::Parse {
                    line: lineno,
                    msg: "edge before problem line".into(),
                })?;
                let u = parse_usize(toks.next(), lineno, "endpoint")?;
                let v = parse_usize(toks.next(), lineno, "endpoint")?;
                expect_end(toks, lineno)?;
                if u == 0 || v == 0 || u > g.n() || v > g.n() || u == v {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("edge `{u} {v}` invalid for 1-based labels up to {}", g.n()),
                    });
                }
                g.set_edge(u - 1, v - 1);
                found += 1;
            }
            Some(t) => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown line type `{t}`"),
                })
            }
        }
    }
    let (g, m) = graph.ok_or(Error::Parse {
        line: 1,
        msg: "missing problem line".into(),
    })?;
    if found != m {
        return Err(Error::HeaderMismatch { declared: m, found });
    }
    Ok(g)
}

/// Writes an edge set in the edge-list format for a host on `n` vertices.
pub fn edge_set_to_edge_list(e: &EdgeSet, n: usize) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", n, e.len()).unwrap();
    for (u, v) in e.iter() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
