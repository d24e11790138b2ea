//! Skip-gram training with negative sampling over walk corpora.
//!
//! The trainer is deliberately sequential: stochastic gradient updates are
//! applied in corpus order with a learning rate that decays linearly from
//! `initial_lr` to `initial_lr / 100` over all center positions of all
//! epochs. Together with the substream-derived negative-sample stream this
//! makes the returned vectors a pure function of `(corpus, cfg)`.

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};
use rand::Rng;

use super::walks::WalkCorpus;
use super::EmbedConfig;

/// Walker alias table for O(1) draws from a fixed discrete distribution.
struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    /// Returns `None` when every weight is zero.
    fn new(weights: &[f64]) -> Option<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return None;
        }
        let k = weights.len();
        let mut prob = vec![0.0; k];
        let mut alias = vec![0usize; k];
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * k as f64 / total).collect();
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for &i in small.iter().chain(large.iter()) {
            prob[i] = 1.0;
        }
        Some(AliasTable { prob, alias })
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let i = rng.random_range(0..self.prob.len());
        if rng.random::<f64>() < self.prob[i] {
            i
        } else {
            self.alias[i]
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    if x > 40.0 {
        1.0
    } else if x < -40.0 {
        0.0
    } else {
        1.0 / (1.0 + (-x).exp())
    }
}

/// Token counts raised to the 3/4 power: the negative-sampling distribution.
fn negative_weights(corpus: &WalkCorpus, n_nodes: usize) -> Vec<f64> {
    let mut counts = vec![0u64; n_nodes];
    for walk in &corpus.walks {
        for &tok in walk {
            counts[tok] += 1;
        }
    }
    counts.iter().map(|&c| (c as f64).powf(0.75)).collect()
}

pub(super) struct TrainedVectors {
    pub input: Vec<f64>,
    /// Context-side vectors; only the training objective reads them back.
    #[cfg_attr(not(test), allow(dead_code))]
    pub context: Vec<f64>,
}

/// Runs SGD over the corpus starting from `init` (row-major `n_nodes x dim`
/// input vectors; context vectors start at zero). Nodes absent from the
/// corpus keep their initialization.
pub(super) fn train(
    corpus: &WalkCorpus,
    init: Vec<f64>,
    n_nodes: usize,
    cfg: &EmbedConfig,
) -> Result<TrainedVectors> {
    let d = cfg.dim;
    assert_eq!(init.len(), n_nodes * d);
    for walk in &corpus.walks {
        for &tok in walk {
            if tok >= n_nodes {
                return Err(Error::validation(format!(
                    "corpus token {tok} exceeds node count {n_nodes}"
                )));
            }
        }
    }

    let mut input = init;
    let mut context = vec![0.0; n_nodes * d];
    let total_positions = (corpus.token_count() * cfg.epochs) as u64;
    if total_positions == 0 {
        return Ok(TrainedVectors { input, context });
    }
    let negatives = match AliasTable::new(&negative_weights(corpus, n_nodes)) {
        Some(t) => t,
        None => return Ok(TrainedVectors { input, context }),
    };
    let mut neg_rng = substream(cfg.seed, Stream::Negative, &[]);

    let mut grad = vec![0.0; d];
    let mut t = 0u64;
    for _ in 0..cfg.epochs {
        for walk in &corpus.walks {
            for pos in 0..walk.len() {
                let progress = t as f64 / total_positions as f64;
                let lr = cfg.initial_lr * (1.0 - 0.99 * progress);
                t += 1;
                let center = walk[pos];
                let ci = center * d;
                let lo = pos.saturating_sub(cfg.window);
                let hi = (pos + cfg.window).min(walk.len() - 1);
                for cpos in lo..=hi {
                    if cpos == pos {
                        continue;
                    }
                    let positive = walk[cpos];
                    grad.fill(0.0);
                    for k in 0..=cfg.negative_samples {
                        let (target, label) = if k == 0 {
                            (positive, 1.0)
                        } else {
                            let neg = negatives.sample(&mut neg_rng);
                            if neg == positive {
                                // A negative draw that hits the positive node
                                // is skipped, as in standard implementations.
                                continue;
                            }
                            (neg, 0.0)
                        };
                        let ti = target * d;
                        let mut dot = 0.0;
                        for j in 0..d {
                            dot += input[ci + j] * context[ti + j];
                        }
                        let g = lr * (label - sigmoid(dot));
                        for j in 0..d {
                            grad[j] += g * context[ti + j];
                            context[ti + j] += g * input[ci + j];
                        }
                    }
                    for j in 0..d {
                        input[ci + j] += grad[j];
                    }
                }
            }
        }
    }
    Ok(TrainedVectors { input, context })
}

/// Mean negative-sampling objective over the corpus (lower is better), with
/// evaluation negatives drawn from a fixed substream so that before/after
/// comparisons see the same sample.
#[cfg(test)]
pub(super) fn objective(
    corpus: &WalkCorpus,
    input: &[f64],
    context: &[f64],
    n_nodes: usize,
    cfg: &EmbedConfig,
    eval_seed: u64,
) -> f64 {
    let d = cfg.dim;
    let negatives = AliasTable::new(&negative_weights(corpus, n_nodes)).expect("non-empty corpus");
    let mut rng = substream(eval_seed, Stream::Negative, &[u64::MAX]);
    let mut total = 0.0;
    let mut pairs = 0usize;
    for walk in &corpus.walks {
        for pos in 0..walk.len() {
            let ci = walk[pos] * d;
            let lo = pos.saturating_sub(cfg.window);
            let hi = (pos + cfg.window).min(walk.len() - 1);
            for cpos in lo..=hi {
                if cpos == pos {
                    continue;
                }
                let mut loss = 0.0;
                let ti = walk[cpos] * d;
                let mut dot = 0.0;
                for j in 0..d {
                    dot += input[ci + j] * context[ti + j];
                }
                loss -= sigmoid(dot).max(1e-12).ln();
                for _ in 0..cfg.negative_samples {
                    let neg = negatives.sample(&mut rng);
                    if neg == walk[cpos] {
                        continue;
                    }
                    let ni = neg * d;
                    let mut dot = 0.0;
                    for j in 0..d {
                        dot += input[ci + j] * context[ni + j];
                    }
                    loss -= sigmoid(-dot).max(1e-12).ln();
                }
                total += loss;
                pairs += 1;
            }
        }
    }
    total / pairs as f64
}
