//! Edge-list, JSON and DOT encodings.
//!
//! Edge list: first line is the dimension, then one `i j` line per edge with
//! `i < j`, ASCII decimal, single space, `\n` terminated. Blank lines are
//! ignored on read. JSON: `{"dimension": D, "edges": [[i, j], ...]}` with
//! sorted edges. DOT is write-only.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
    Dot,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "edges" => Ok(Self::EdgeList),
            "json" => Ok(Self::Json),
            "dot" => Ok(Self::Dot),
            other => Err(Error::InvalidArgument(format!("unknown graph format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    dimension: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            dimension: self.dim(),
            edges: self.edges().map(|(i, j)| [i, j]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        graph_from_json(raw).map_err(serde::de::Error::custom)
    }
}

fn graph_from_json(raw: GraphJson) -> Result<Graph> {
    let mut g = Graph::empty(raw.dimension)?;
    for (idx, [i, j]) in raw.edges.into_iter().enumerate() {
        if i > j {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("edge [{i}, {j}] must satisfy i < j"),
            });
        }
        g.add_edge(i, j)?;
    }
    Ok(g)
}

pub fn serialize_graph(g: &Graph, format: GraphFormat) -> Vec<u8> {
    let mut out = String::new();
    match format {
        GraphFormat::EdgeList => {
            out.push_str(&format!("{}\n", g.dim()));
            for (i, j) in g.edges() {
                out.push_str(&format!("{i} {j}\n"));
            }
        }
        GraphFormat::Json => {
            out = serde_json::to_string(g).expect("graph serialization is infallible");
            out.push('\n');
        }
        GraphFormat::Dot => {
            out.push_str("graph G {\n");
            for v in 0..g.dim() {
                out.push_str(&format!("  {v};\n"));
            }
            for (i, j) in g.edges() {
                out.push_str(&format!("  {i} -- {j};\n"));
            }
            out.push_str("}\n");
        }
    }
    out.into_bytes()
}

pub fn parse_graph(bytes: &[u8], format: GraphFormat) -> Result<Graph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("input is not UTF-8: {e}"),
    })?;
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Json => {
            let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
                line: e.line(),
                msg: e.to_string(),
            })?;
            graph_from_json(raw)
        }
        GraphFormat::Dot => Err(Error::InvalidArgument("DOT input is not supported".into())),
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            line,
            msg: format!("expected a decimal index, got `{tok}`"),
        });
    }
    tok.parse().map_err(|e| Error::Parse {
        line,
        msg: format!("`{tok}`: {e}"),
    })
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.is_empty());

    let (first, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing dimension line".into(),
    })?;
    let dim = parse_index(header, first)?;
    let mut g = Graph::empty(dim)?;

    for (line, l) in lines {
        let mut toks = l.split(' ');
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::Parse {
                line,
                msg: format!("expected `i j`, got `{l}`"),
            });
        };
        let (i, j) = (parse_index(a, line)?, parse_index(b, line)?);
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if i > j {
            return Err(Error::Parse {
                line,
                msg: format!("edge `{l}` must satisfy i < j"),
            });
        }
        g.add_edge(i, j)?;
    }
    Ok(g)
}
