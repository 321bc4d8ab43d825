//! Plain-text graph and partition formats.
//!
//! Graph: a header line `n m`, then `m` lines `u v [w]`.
//! Partition: one line per part, listing whitespace-separated node IDs.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError, NodeId, Partition, PartitionError, Weight};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn number<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing `n m` header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(syntax(hl + 1, "header must be `n m`"));
    }
    let n: usize = number(head[0], hl + 1, "node count")?;
    let m: usize = number(head[1], hl + 1, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let weight: Option<Weight> = match tokens.len() {
            2 => None,
            3 => Some(number(tokens[2], i + 1, "weight")?),
            _ => return Err(syntax(i + 1, "edge line must be `u v [w]`")),
        };
        let u: NodeId = number(tokens[0], i + 1, "node")?;
        let v: NodeId = number(tokens[1], i + 1, "node")?;
        edges.push((u, v, weight));
    }
    if edges.len() != m {
        return Err(syntax(hl + 1, format!("header declares {m} edges, found {}", edges.len())));
    }
    Ok(Graph::new(n, edges)?)
}

pub fn write_graph(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.node_count(), graph.edge_count());
    for e in graph.edges() {
        match e.weight {
            Some(w) => writeln!(out, "{} {} {}", e.u, e.v, w),
            None => writeln!(out, "{} {}", e.u, e.v),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn parse_partition(text: &str, graph: &Graph) -> Result<Partition, ParseError> {
    let mut parts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let part = line
            .split_whitespace()
            .map(|t| number::<NodeId>(t, i + 1, "node"))
            .collect::<Result<Vec<_>, _>>()?;
        parts.push(part);
    }
    Ok(Partition::new(graph, parts)?)
}

pub fn write_partition(partition: &Partition) -> String {
    let mut out = String::new();
    for part in partition.parts() {
        let line: Vec<String> = part.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
