//! Text and JSON graph files.
//!
//! Text format: a header line `digraph <n>`, `graph <n>` or
//! `bipartite <nL> <nR>`, then one `u v` pair per line (0-based). `#`
//! starts a comment; blank lines are ignored. Serialization emits the
//! canonical form: edges sorted lexicographically, undirected edges once
//! with `u < v`.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{AnyGraph, BipartiteGraph, Digraph, UndirectedGraph};
use crate::error::{Error, Result};

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a non-negative integer, found `{tok}`")))
}

/// Parses either format; input whose first non-blank character is `{` is
/// read as JSON.
pub fn parse_graph(text: &str) -> Result<AnyGraph> {
    if text.trim_start().starts_with('{') {
        return parse_graph_json(text);
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    enum Kind {
        Directed(usize),
        Undirected(usize),
        Bipartite(usize, usize),
    }
    let kind = match head.as_slice() {
        ["digraph", n] => Kind::Directed(parse_usize(n, hline)?),
        ["graph", n] => Kind::Undirected(parse_usize(n, hline)?),
        ["bipartite", l, r] => Kind::Bipartite(parse_usize(l, hline)?, parse_usize(r, hline)?),
        _ => {
            return Err(syntax(
                hline,
                "header must be `digraph <n>`, `graph <n>` or `bipartite <nL> <nR>`",
            ))
        }
    };

    let mut pairs = Vec::new();
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, format!("expected `u v`, found `{l}`")));
        }
        pairs.push((parse_usize(toks[0], ln)?, parse_usize(toks[1], ln)?));
    }

    Ok(match kind {
        Kind::Directed(n) => AnyGraph::Directed(Digraph::new(n, &pairs)?),
        Kind::Undirected(n) => AnyGraph::Undirected(UndirectedGraph::new(n, &pairs)?),
        Kind::Bipartite(l, r) => AnyGraph::Bipartite(BipartiteGraph::new(l, r, &pairs)?),
    })
}

pub fn serialize_graph(g: &AnyGraph) -> String {
    let mut out = String::new();
    let pairs: Vec<(usize, usize)> = match g {
        AnyGraph::Directed(d) => {
            writeln!(out, "digraph {}", d.n()).unwrap();
            d.arcs().collect()
        }
        AnyGraph::Undirected(u) => {
            writeln!(out, "graph {}", u.n()).unwrap();
            u.edges().collect()
        }
        AnyGraph::Bipartite(b) => {
            writeln!(out, "bipartite {} {}", b.left(), b.right()).unwrap();
            b.edges().collect()
        }
    };
    for (u, v) in pairs {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum GraphJson {
    Digraph {
        n: usize,
        arcs: Vec<[usize; 2]>,
    },
    Graph {
        n: usize,
        edges: Vec<[usize; 2]>,
    },
    Bipartite {
        left: usize,
        right: usize,
        edges: Vec<[usize; 2]>,
    },
}

fn tuples(v: &[[usize; 2]]) -> Vec<(usize, usize)> {
    v.iter().map(|&[a, b]| (a, b)).collect()
}

pub fn parse_graph_json(text: &str) -> Result<AnyGraph> {
    let parsed: GraphJson = serde_json::from_str(text).map_err(|e| syntax(e.line(), e.to_string()))?;
    Ok(match parsed {
        GraphJson::Digraph { n, arcs } => AnyGraph::Directed(Digraph::new(n, &tuples(&arcs))?),
        GraphJson::Graph { n, edges } => {
            AnyGraph::Undirected(UndirectedGraph::new(n, &tuples(&edges))?)
        }
        GraphJson::Bipartite { left, right, edges } => {
            AnyGraph::Bipartite(BipartiteGraph::new(left, right, &tuples(&edges))?)
        }
    })
}

pub fn serialize_graph_json(g: &AnyGraph) -> String {
    let pairs = |it: &mut dyn Iterator<Item = (usize, usize)>| it.map(|(a, b)| [a, b]).collect();
    let j = match g {
        AnyGraph::Directed(d) => GraphJson::Digraph {
            n: d.n(),
            arcs: pairs(&mut d.arcs()),
        },
        AnyGraph::Undirected(u) => GraphJson::Graph {
            n: u.n(),
            edges: pairs(&mut u.edges()),
        },
        AnyGraph::Bipartite(b) => GraphJson::Bipartite {
            left: b.left(),
            right: b.right(),
            edges: pairs(&mut b.edges()),
        },
    };
    serde_json::to_string(&j).expect("graph JSON is always serializable")
}
