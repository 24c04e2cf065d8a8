//! Plain-text colouring files.
//!
//! ```text
//! # comments and blank lines are ignored
//! 5 3                        <- "n k", optionally followed by complete-red-default
//! 0 1 2 R
//! 1 2 4 B
//! ```
//!
//! Unlisted `k`-sets are Absent, or Red when the header carries
//! `complete-red-default`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kgraph::{ColouredKGraph, Colour, KEdge};

pub const RED_DEFAULT_FLAG: &str = "complete-red-default";

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("line {line}: {msg}"))
}

pub fn parse_colouring(text: &str) -> Result<ColouredKGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty colouring file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, k, default) = match fields.as_slice() {
        [n, k] => (*n, *k, None),
        [n, k, flag] if *flag == RED_DEFAULT_FLAG => (*n, *k, Some(Colour::Red)),
        _ => return Err(parse_err(hline, format!("expected \"n k [{RED_DEFAULT_FLAG}]\", got {header:?}"))),
    };
    let n: usize = n.parse().map_err(|e| parse_err(hline, format!("bad n: {e}")))?;
    let k: usize = k.parse().map_err(|e| parse_err(hline, format!("bad k: {e}")))?;
    let mut graph = ColouredKGraph::from_edges(n, k, default, std::iter::empty())?;
    let mut seen = vec![false; graph.slot_count()];

    for (lno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != k + 1 {
            return Err(parse_err(lno, format!("expected {k} vertices and a colour")));
        }
        let mut verts = fields[..k]
            .iter()
            .map(|f| f.parse::<usize>().map_err(|e| parse_err(lno, format!("bad vertex {f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        verts.sort_unstable();
        let edge = KEdge::new(&verts, n, k).map_err(|e| parse_err(lno, e))?;
        let colour = match fields[k] {
            "R" | "r" => Colour::Red,
            "B" | "b" => Colour::Blue,
            other => return Err(parse_err(lno, format!("colour must be R or B, got {other:?}"))),
        };
        let rank = graph.rank(edge);
        if std::mem::replace(&mut seen[rank], true) {
            return Err(parse_err(lno, format!("edge {edge} listed twice")));
        }
        graph.set_slot(rank, Some(colour));
    }
    Ok(graph)
}

/// Writes every present edge explicitly, in colex order.
pub fn write_colouring(graph: &ColouredKGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", graph.n(), graph.k()).unwrap();
    for (_, e, c) in graph.edges() {
        for v in e.iter() {
            write!(out, "{v} ").unwrap();
        }
        writeln!(out, "{}", c.letter()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_explicit_and_default_forms() {
        let g = parse_colouring("# tiny\n4 3\n0 1 2 B\n3 1 0 B\n0 2 3 B\n1 2 3 R\n").unwrap();
        assert!(g.is_complete());
        assert_eq!(g.colour(KEdge::from_mask(0b1110)).unwrap(), Colour::Red);

        let d = parse_colouring("5 3 complete-red-default\n0 1 2 B\n").unwrap();
        assert!(d.is_complete());
        assert_eq!(d.edges().filter(|(_, _, c)| *c == Colour::Blue).count(), 1);

        let sparse = parse_colouring("5 3\n0 1 2 B\n").unwrap();
        assert_eq!(sparse.edge_count(), 1);
    }

    #[test]
    fn round_trip() {
        let g = parse_colouring("6 3\n0 1 2 B\n1 4 5 R\n2 3 5 R\n").unwrap();
        assert_eq!(parse_colouring(&write_colouring(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            "",
            "4",
            "4 3 extra-flag",
            "4 3\n0 1 B",
            "4 3\n0 1 4 R",
            "4 3\n0 1 1 R",
            "4 3\n0 1 2 G",
            "4 3\n0 1 2 R\n2 1 0 B",
            "4 1",
        ] {
            assert!(parse_colouring(bad).is_err(), "{bad:?} accepted");
        }
    }
}
