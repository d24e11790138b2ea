//! Per-layer node embeddings.
//!
//! [`embed_layer`] turns one layer into an `n x dim` matrix of node vectors:
//! biased random walks ([`walks`]) feed a skip-gram model with negative
//! sampling ([`skipgram`]). The whole pipeline is deterministic: calling it
//! twice with equal graphs and an equal [`EmbedConfig`] produces
//! bit-identical matrices, which downstream similarity scores rely on.

pub mod skipgram;
pub mod walks;

use crate::error::{Error, Result};
use crate::graph::LayerGraph;
use crate::rng::{substream, Fnv64, Stream};
use rand::Rng;
use std::io::{BufRead, Write};
use std::path::Path;

pub use walks::{generate_walks, random_walk, WalkCorpus};

/// Walk and training hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    /// Embedding dimensionality.
    pub dim: usize,
    pub walks_per_node: usize,
    pub walk_length: usize,
    /// Context window radius around each walk position.
    pub window: usize,
    /// Return bias: higher values discourage stepping back to the previous
    /// node. `p = q = 1` gives plain weight-proportional walks.
    pub p: f64,
    /// In-out bias: higher values keep walks near the previous node.
    pub q: f64,
    pub negative_samples: usize,
    pub epochs: usize,
    /// Peak learning rate; decays linearly to 1% of this value.
    pub initial_lr: f64,
    pub seed: u64,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            dim: 32,
            walks_per_node: 10,
            walk_length: 10,
            window: 10,
            p: 1.0,
            q: 1.0,
            negative_samples: 5,
            epochs: 5,
            initial_lr: 0.025,
            seed: 0,
        }
    }
}

impl EmbedConfig {
    pub fn with_seed(seed: u64) -> Self {
        EmbedConfig {
            seed,
            ..EmbedConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::validation("embedding dimension must be positive"));
        }
        if self.walk_length == 0 || self.walks_per_node == 0 || self.window == 0 {
            return Err(Error::validation(
                "walk length, walks per node, and window must be positive",
            ));
        }
        if !(self.p > 0.0) || !(self.q > 0.0) {
            return Err(Error::validation("walk biases p and q must be positive"));
        }
        if !(self.initial_lr > 0.0) {
            return Err(Error::validation("initial learning rate must be positive"));
        }
        Ok(())
    }

    /// Digest of the configuration combined with a layer's edge set.
    pub fn digest(&self, layer: &LayerGraph) -> u64 {
        let mut h = Fnv64::new();
        h.write(b"embed-config");
        for v in [
            self.dim as u64,
            self.walks_per_node as u64,
            self.walk_length as u64,
            self.window as u64,
            self.negative_samples as u64,
            self.epochs as u64,
            self.seed,
        ] {
            h.write_u64(v);
        }
        h.write_f64(self.p);
        h.write_f64(self.q);
        h.write_f64(self.initial_lr);
        h.write_u64(layer.node_count() as u64);
        for e in layer.edges() {
            h.write_u64(e.u as u64);
            h.write_u64(e.v as u64);
            h.write_f64(e.w);
        }
        h.finish()
    }
}

/// Row-major `n x dim` matrix of node vectors plus the provenance needed to
/// recognize stale files: the seed and a digest of config and edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    n: usize,
    dim: usize,
    data: Vec<f64>,
    seed: u64,
    config_hash: u64,
}

impl EmbeddingMatrix {
    pub fn from_parts(n: usize, dim: usize, data: Vec<f64>, seed: u64, config_hash: u64) -> Self {
        assert_eq!(data.len(), n * dim, "row-major data must be n * dim long");
        EmbeddingMatrix {
            n,
            dim,
            data,
            seed,
            config_hash,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn config_hash(&self) -> u64 {
        self.config_hash
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Rescales so the root-mean-square row norm is 1: embeddings trained on
    /// different layers then live on a common scale, which keeps the distance
    /// losses comparable across inputs. A zero matrix is returned unchanged.
    pub fn rms_normalized(&self) -> EmbeddingMatrix {
        let scale = self.frobenius_norm() / (self.n as f64).sqrt();
        if !(scale > 0.0) {
            return self.clone();
        }
        let data = self.data.iter().map(|x| x / scale).collect();
        EmbeddingMatrix {
            data,
            ..*self
        }
    }
}

/// Seeded uniform initialization in `[-0.5/dim, 0.5/dim]`, row-major.
pub(crate) fn init_matrix(n: usize, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, Stream::EmbedInit, &[]);
    let half = 0.5 / dim as f64;
    (0..n * dim).map(|_| rng.random_range(-half..=half)).collect()
}

/// Trains skip-gram vectors for an externally supplied corpus. Nodes absent
/// from the corpus keep their seeded initialization.
pub fn train_skipgram(
    corpus: &WalkCorpus,
    n_nodes: usize,
    cfg: &EmbedConfig,
) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    let init = init_matrix(n_nodes, cfg.dim, cfg.seed);
    let trained = skipgram::train(corpus, init, n_nodes, cfg)?;
    let mut h = Fnv64::new();
    h.write(b"corpus");
    h.write_u64(n_nodes as u64);
    for walk in &corpus.walks {
        h.write_u64(walk.len() as u64);
        for &tok in walk {
            h.write_u64(tok as u64);
        }
    }
    Ok(EmbeddingMatrix::from_parts(
        n_nodes,
        cfg.dim,
        trained.input,
        cfg.seed,
        h.finish(),
    ))
}

/// Walks a layer and trains its embedding. Deterministic in `(G, cfg)`.
pub fn embed_layer(layer: &LayerGraph, cfg: &EmbedConfig) -> Result<EmbeddingMatrix> {
    cfg.validate()?;
    if layer.node_count() == 0 {
        return Err(Error::validation("cannot embed a graph with no nodes"));
    }
    let corpus = generate_walks(layer, cfg);
    let mut matrix = train_skipgram(&corpus, layer.node_count(), cfg)?;
    matrix.config_hash = cfg.digest(layer);
    Ok(matrix)
}

/// Writes an embedding as text: a two-line header followed by one
/// space-separated row per node. Floats use the shortest representation
/// that round-trips exactly, so write/read is lossless.
pub fn write_embedding<W: Write>(m: &EmbeddingMatrix, mut out: W) -> Result<()> {
    writeln!(out, "eatsim-embedding 1")?;
    writeln!(
        out,
        "nodes {} dim {} seed {} config {:016x}",
        m.n, m.dim, m.seed, m.config_hash
    )?;
    let mut line = String::new();
    for i in 0..m.n {
        line.clear();
        for (j, v) in m.row(i).iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{v}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Parses the format produced by [`write_embedding`].
pub fn read_embedding<R: BufRead>(reader: R) -> Result<EmbeddingMatrix> {
    let mut lines = reader.lines().enumerate();
    let parse_err = |line: usize, msg: String| Error::Parse { line: line + 1, msg };

    let (i, magic) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty embedding file".into()))?;
    let magic = magic?;
    if magic.trim() != "eatsim-embedding 1" {
        return Err(parse_err(i, format!("unrecognized magic line `{magic}`")));
    }

    let (i, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header line".into()))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 8
        || fields[0] != "nodes"
        || fields[2] != "dim"
        || fields[4] != "seed"
        || fields[6] != "config"
    {
        return Err(parse_err(i, format!("malformed header `{header}`")));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(i, "bad node count".into()))?;
    let dim: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(i, "bad dimension".into()))?;
    let seed: u64 = fields[5]
        .parse()
        .map_err(|_| parse_err(i, "bad seed".into()))?;
    let config_hash = u64::from_str_radix(fields[7], 16)
        .map_err(|_| parse_err(i, "bad config digest".into()))?;

    let mut data = Vec::with_capacity(n * dim);
    let mut rows = 0usize;
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = 0usize;
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(i, format!("bad float `{tok}`")))?;
            data.push(v);
            cols += 1;
        }
        if cols != dim {
            return Err(parse_err(i, format!("expected {dim} columns, found {cols}")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::validation(format!(
            "embedding file declares {n} rows but contains {rows}"
        )));
    }
    Ok(EmbeddingMatrix::from_parts(n, dim, data, seed, config_hash))
}

pub fn save_embedding(m: &EmbeddingMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_embedding(m, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

pub fn load_embedding(path: impl AsRef<Path>) -> Result<EmbeddingMatrix> {
    let file = std::fs::File::open(path.as_ref())?;
    read_embedding(std::io::BufReader::new(file))
}
