use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::Graph;
use crate::error::{Error, Result};

/// On-disk text formats for graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// Header `n m`, then one `u v w` line per undirected edge, 0-based ids.
    EdgeList,
    /// DIMACS shortest-path `.gr`: `p sp n m` header and `a u v w` arcs, 1-based ids.
    Dimacs,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edge-list" | "el" => Ok(GraphFormat::EdgeList),
            "dimacs" | "dimacs-gr" | "gr" => Ok(GraphFormat::Dimacs),
            other => Err(format!("unknown graph format '{other}'")),
        }
    }
}

pub fn load_graph(path: impl AsRef<Path>, format: GraphFormat) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        GraphFormat::EdgeList => parse_edge_list(&text),
        GraphFormat::Dimacs => parse_dimacs(&text),
    }
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>, format: GraphFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Dimacs => write_dimacs(g),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_field<T: FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    let field = field.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} '{field}'"),
    })
}

fn parse_weight(field: Option<&str>, line: usize, u: usize, v: usize) -> Result<f64> {
    let weight: f64 = parse_field(field, line, "weight")?;
    if !weight.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("weight {weight} is not finite"),
        });
    }
    if weight < 0.0 {
        return Err(Error::NegativeWeight { line, u, v, weight });
    }
    Ok(weight)
}

fn no_trailing<'a>(mut fields: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match fields.next() {
        None => Ok(()),
        Some(extra) => Err(Error::Parse {
            line,
            message: format!("unexpected trailing field '{extra}'"),
        }),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut fields = content.split_whitespace();
        let Some((n, _)) = header else {
            let n = parse_field(fields.next(), line, "vertex count")?;
            let m = parse_field(fields.next(), line, "edge count")?;
            no_trailing(fields, line)?;
            header = Some((n, m));
            continue;
        };
        let u: usize = parse_field(fields.next(), line, "source vertex")?;
        let v: usize = parse_field(fields.next(), line, "target vertex")?;
        let w = parse_weight(fields.next(), line, u, v)?;
        no_trailing(fields, line)?;
        for x in [u, v] {
            if x >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex {x} out of range for n={n}"),
                });
            }
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        if seen.insert((u.min(v), u.max(v)), line).is_some() {
            return Err(Error::Asymmetric { line, u, v });
        }
        edges.push((u, v, w));
    }

    let (n, m) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing 'n m' header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("header declares {m} edges but {} were listed", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

/// Parses DIMACS `.gr` text. Arcs are merged per unordered pair keeping the
/// minimum weight, so directed files become undirected graphs.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut best: HashMap<(usize, usize), f64> = HashMap::new();
    let mut arcs = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        match fields.next() {
            Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(Error::Parse {
                        line,
                        message: "duplicate problem line".into(),
                    });
                }
                let kind: String = parse_field(fields.next(), line, "problem type")?;
                if kind != "sp" {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected problem type 'sp', found '{kind}'"),
                    });
                }
                let n = parse_field(fields.next(), line, "vertex count")?;
                let m = parse_field(fields.next(), line, "arc count")?;
                no_trailing(fields, line)?;
                header = Some((n, m));
            }
            Some("a") => {
                let Some((n, _)) = header else {
                    return Err(Error::Parse {
                        line,
                        message: "arc before problem line".into(),
                    });
                };
                let u: usize = parse_field(fields.next(), line, "arc tail")?;
                let v: usize = parse_field(fields.next(), line, "arc head")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(Error::Parse {
                            line,
                            message: format!("vertex {x} out of range 1..={n}"),
                        });
                    }
                }
                let (u, v) = (u - 1, v - 1);
                let w = parse_weight(fields.next(), line, u, v)?;
                no_trailing(fields, line)?;
                arcs += 1;
                if u == v {
                    return Err(Error::Parse {
                        line,
                        message: format!("self-loop at vertex {}", u + 1),
                    });
                }
                best.entry((u.min(v), u.max(v)))
                    .and_modify(|cur| *cur = cur.min(w))
                    .or_insert(w);
            }
            Some(tag) => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown line type '{tag}'"),
                })
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    let (n, m) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing 'p sp n m' line".into(),
    })?;
    if arcs != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("problem line declares {m} arcs but {arcs} were listed"),
        });
    }
    let mut edges: Vec<_> = best.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    edges.sort_by_key(|a| (a.0, a.1));
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}

/// Writes both arcs of every undirected edge.
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p sp {} {}", g.n(), 2 * g.m()).unwrap();
    for (u, v, w) in g.edges() {
        writeln!(out, "a {} {} {w}", u + 1, v + 1).unwrap();
        writeln!(out, "a {} {} {w}", v + 1, u + 1).unwrap();
    }
    out
}
