//! Plain-text edge lists: a header line `n m`, then `m` lines `u v`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::{edges, EdgeKey, ExplicitGraph, GraphView};
use crate::error::{Error, Result};

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<ExplicitGraph> {
    let mut lines = reader
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing header".into(),
    })?;
    let header = header?;
    let (n, m) = parse_pair(&header, line_no + 1)?;
    let mut list = Vec::with_capacity(m as usize);
    for (i, line) in lines {
        let line = line?;
        let (u, v) = parse_pair(&line, i + 1)?;
        if u > u32::MAX as u64 || v > u32::MAX as u64 {
            return Err(Error::Parse {
                line: i + 1,
                reason: "vertex id exceeds 32 bits".into(),
            });
        }
        list.push(EdgeKey {
            u: u as u32,
            v: v as u32,
        });
    }
    if list.len() as u64 != m {
        return Err(Error::Parse {
            line: line_no + 1,
            reason: format!("header announces {m} edges, found {}", list.len()),
        });
    }
    ExplicitGraph::from_edges(n as usize, &list)
}

fn parse_pair(line: &str, line_no: usize) -> Result<(u64, u64)> {
    let mut it = line.split_whitespace().map(str::parse::<u64>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line: line_no,
            reason: format!("expected two integers, got {line:?}"),
        }),
    }
}

pub fn write_edge_list<G: GraphView + ?Sized, W: Write>(g: &G, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    let mut buf = String::new();
    for e in edges(g) {
        buf.clear();
        let _ = writeln!(buf, "{} {}", e.u, e.v);
        out.write_all(buf.as_bytes())?;
    }
    Ok(())
}
