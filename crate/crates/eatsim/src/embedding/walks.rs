//! Deterministic biased random walks.
//!
//! Each walk owns an RNG substream keyed by `(seed, start_node, walk_index)`,
//! so the corpus is a pure function of the edge set and the configuration:
//! walk order, thread count, and unrelated graph changes cannot perturb it.

use crate::graph::LayerGraph;
use crate::rng::{substream, Stream};
use rand::Rng;

use super::EmbedConfig;

/// All walks of one layer, in start-node-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(|w| w.len()).sum()
    }
}

/// One second-order walk. The next step leaves the current node along an
/// edge weighted by `w * bias`, where the bias is `1/p` for stepping back to
/// the previous node, `1` for moving to a common neighbor of the previous
/// node, and `1/q` otherwise. With `p = q = 1` this collapses to a plain
/// weight-proportional walk. A walk from an isolated node is just `[start]`.
pub fn random_walk(
    layer: &LayerGraph,
    start: usize,
    length: usize,
    p: f64,
    q: f64,
    rng: &mut impl Rng,
) -> Vec<usize> {
    let mut walk = Vec::with_capacity(length);
    walk.push(start);
    if layer.is_isolated(start) {
        return walk;
    }
    let first_order = p == 1.0 && q == 1.0;
    let mut weights: Vec<f64> = Vec::new();
    let mut prev: Option<usize> = None;
    let mut current = start;
    while walk.len() < length {
        let neighbors = layer.neighbors(current);
        weights.clear();
        let mut total = 0.0;
        for &(x, w) in neighbors {
            let biased = if first_order {
                w
            } else {
                match prev {
                    None => w,
                    Some(back) if x == back => w / p,
                    Some(back) if layer.has_edge(back, x) => w,
                    Some(_) => w / q,
                }
            };
            weights.push(biased);
            total += biased;
        }
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = neighbors.len() - 1;
        for (i, &w) in weights.iter().enumerate() {
            pick -= w;
            if pick < 0.0 {
                chosen = i;
                break;
            }
        }
        let next = neighbors[chosen].0;
        walk.push(next);
        prev = Some(current);
        current = next;
    }
    walk
}

/// The full corpus: `walks_per_node` walks from every non-isolated node in
/// ascending id order.
pub fn generate_walks(layer: &LayerGraph, cfg: &EmbedConfig) -> WalkCorpus {
    let mut walks = Vec::new();
    for start in 0..layer.node_count() {
        if layer.is_isolated(start) {
            continue;
        }
        for walk_index in 0..cfg.walks_per_node {
            let mut rng = substream(
                cfg.seed,
                Stream::Walk,
                &[start as u64, walk_index as u64],
            );
            walks.push(random_walk(
                layer,
                start,
                cfg.walk_length,
                cfg.p,
                cfg.q,
                &mut rng,
            ));
        }
    }
    WalkCorpus { walks }
}
