//! Extended edge list reading and writing.
//!
//! The on-disk format is one edge per line:
//!
//! ```text
//! layer_id node_a node_b [weight]
//! ```
//!
//! Fields are whitespace-separated; `#` starts a comment that runs to the end
//! of the line; blank lines are ignored. Layer and node ids are arbitrary
//! tokens and are mapped to dense indices in first-seen order. A file is
//! weighted as soon as any line carries a fourth field; in a weighted file,
//! lines without one default to weight 1. Duplicate edges collapse to a
//! single edge, summing weights in weighted files. Self-loop lines are
//! skipped: several public multiplex datasets contain them, and no analysis
//! here gives them meaning.

use crate::error::{Error, Result};
use crate::graph::{LayerGraph, MultiplexNetwork};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

struct Interner {
    ids: HashMap<String, usize>,
    labels: Vec<String>,
}

impl Interner {
    fn new() -> Self {
        Interner {
            ids: HashMap::new(),
            labels: Vec::new(),
        }
    }

    fn intern(&mut self, token: &str) -> usize {
        if let Some(&id) = self.ids.get(token) {
            return id;
        }
        let id = self.labels.len();
        self.ids.insert(token.to_string(), id);
        self.labels.push(token.to_string());
        id
    }
}

/// Parses a multiplex network from extended edge list text.
pub fn read_multiplex<R: BufRead>(reader: R) -> Result<MultiplexNetwork> {
    let mut layers = Interner::new();
    let mut nodes = Interner::new();
    // (layer, u, v, explicit weight)
    let mut records: Vec<(usize, usize, usize, Option<f64>)> = Vec::new();
    let mut weighted = false;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = match line.split_once('#') {
            Some((head, _)) => head,
            None => line.as_str(),
        };
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.len() {
            0 => continue,
            3 | 4 => {
                let layer = layers.intern(fields[0]);
                let u = nodes.intern(fields[1]);
                let v = nodes.intern(fields[2]);
                let w = if fields.len() == 4 {
                    let w: f64 = fields[3].parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("invalid weight `{}`", fields[3]),
                    })?;
                    if !(w > 0.0) || !w.is_finite() {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("weight must be positive, got {w}"),
                        });
                    }
                    weighted = true;
                    Some(w)
                } else {
                    None
                };
                if u == v {
                    continue;
                }
                records.push((layer, u, v, w));
            }
            n => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 3 or 4 fields, found {n}"),
                });
            }
        }
    }

    if layers.labels.is_empty() {
        return Err(Error::validation("edge list contains no edges"));
    }

    let n = nodes.labels.len();
    let mut per_layer: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); layers.labels.len()];
    for (layer, u, v, w) in records {
        per_layer[layer].push((u, v, w.unwrap_or(1.0)));
    }
    let built: Result<Vec<LayerGraph>> = per_layer
        .into_iter()
        .map(|edges| LayerGraph::accumulate(n, edges, weighted))
        .collect();
    let mut net = MultiplexNetwork::with_names(built?, layers.labels)?;
    net.set_node_labels(nodes.labels)?;
    Ok(net)
}

/// Reads a multiplex network from a file.
pub fn load_multiplex(path: impl AsRef<Path>) -> Result<MultiplexNetwork> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    read_multiplex(BufReader::new(file))
}

/// Writes a multiplex network in extended edge list format. Weight columns
/// appear only for weighted layers, so unweighted networks round-trip without
/// spurious `1` fields.
pub fn write_multiplex<W: Write>(net: &MultiplexNetwork, mut out: W) -> Result<()> {
    let labels = net.node_labels();
    for (li, layer) in net.layers().iter().enumerate() {
        let name = &net.layer_names()[li];
        for e in layer.edges() {
            if layer.is_weighted() {
                writeln!(out, "{name} {} {} {}", labels[e.u], labels[e.v], e.w)?;
            } else {
                writeln!(out, "{name} {} {}", labels[e.u], labels[e.v])?;
            }
        }
    }
    Ok(())
}

/// Writes a multiplex network to a file.
pub fn save_multiplex(net: &MultiplexNetwork, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_multiplex(net, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
