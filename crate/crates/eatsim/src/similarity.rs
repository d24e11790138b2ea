//! Interlayer similarity from embeddings.
//!
//! Two layers are compared through their node embeddings in two
//! complementary ways:
//!
//! * **Pairwise embedding distances** ([`ped_loss`]): how differently the two
//!   embeddings spread node pairs, measured without any alignment as the
//!   mean absolute difference of pairwise distances over all node pairs.
//! * **Aligned embedding distances** ([`aed_loss`]): the best orthogonal map
//!   from one embedding onto the other ([`procrustes_align`]) is applied
//!   first, then node-wise displacement is averaged.
//!
//! Both losses are computed on RMS-normalized matrices inside [`eatsim`],
//! blended by a weight `omega`, and flipped into a similarity score
//! `1 - (omega * ped + (1 - omega) * aed)`. High scores mean the layers
//! place nodes in nearly the same geometry; the score of a layer against
//! itself is 1 up to floating-point residue.
//!
//! [`jsd_distance`] provides the spectral baseline used for comparison: the
//! square-root Jensen-Shannon divergence between the layers' Von Neumann
//! density operators.

use crate::embedding::{embed_layer, EmbedConfig, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::graph::{LayerGraph, MultiplexNetwork};
use crate::reducibility::DensityOperator;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Plain Euclidean distance between two equal-length vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_shapes(xa: &EmbeddingMatrix, xb: &EmbeddingMatrix) -> Result<()> {
    if xa.node_count() != xb.node_count() || xa.dim() != xb.dim() {
        return Err(Error::validation(format!(
            "embedding shapes differ: {}x{} vs {}x{}",
            xa.node_count(),
            xa.dim(),
            xb.node_count(),
            xb.dim()
        )));
    }
    if xa.node_count() < 2 {
        return Err(Error::validation(
            "pairwise losses need at least two nodes",
        ));
    }
    Ok(())
}

/// Mean absolute difference of pairwise distances:
/// `2 / (N (N-1)) * sum_{i<j} | |xa_i - xa_j| - |xb_i - xb_j| |`.
///
/// Row sums are reduced in index order, so the result is independent of the
/// number of worker threads.
pub fn ped_loss(xa: &EmbeddingMatrix, xb: &EmbeddingMatrix) -> Result<f64> {
    check_shapes(xa, xb)?;
    let n = xa.node_count();
    let row_sums: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ra = xa.row(i);
            let rb = xb.row(i);
            let mut acc = 0.0;
            for j in (i + 1)..n {
                let da = euclidean_distance(ra, xa.row(j));
                let db = euclidean_distance(rb, xb.row(j));
                acc += (da - db).abs();
            }
            acc
        })
        .collect();
    let total: f64 = row_sums.iter().sum();
    Ok(2.0 * total / (n as f64 * (n as f64 - 1.0)))
}

/// Orthogonal map minimizing `|xa W - xb|_F`, with its residual.
#[derive(Debug, Clone)]
pub struct AlignmentResult {
    /// Row-major `dim x dim` orthogonal matrix.
    pub rotation: Vec<f64>,
    pub dim: usize,
    /// `|xa W - xb|_F` at the optimum.
    pub residual: f64,
}

impl AlignmentResult {
    /// Applies the map to one vector.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|l| (0..d).map(|k| x[k] * self.rotation[k * d + l]).sum())
            .collect()
    }
}

/// Solves the orthogonal Procrustes problem: the minimizer of
/// `|xa W - xb|_F` over orthogonal `W` is `U V^T`, where `U S V^T` is the
/// singular value decomposition of `xa^T xb`. Reflections are allowed; the
/// solution is unique when that cross-covariance has full rank.
pub fn procrustes_align(xa: &EmbeddingMatrix, xb: &EmbeddingMatrix) -> Result<AlignmentResult> {
    check_shapes(xa, xb)?;
    let n = xa.node_count();
    let d = xa.dim();

    let mut cross = DMatrix::<f64>::zeros(d, d);
    for i in 0..n {
        let ra = xa.row(i);
        let rb = xb.row(i);
        for k in 0..d {
            for l in 0..d {
                cross[(k, l)] += ra[k] * rb[l];
            }
        }
    }
    let svd = cross.svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::numeric("SVD of the cross-covariance failed")),
    };
    let w = u * v_t;

    let mut rotation = vec![0.0; d * d];
    for k in 0..d {
        for l in 0..d {
            rotation[k * d + l] = w[(k, l)];
        }
    }
    let result = AlignmentResult {
        rotation,
        dim: d,
        residual: 0.0,
    };
    let mut residual_sq = 0.0;
    for i in 0..n {
        let mapped = result.apply(xa.row(i));
        residual_sq += xb
            .row(i)
            .iter()
            .zip(&mapped)
            .map(|(b, m)| (b - m) * (b - m))
            .sum::<f64>();
    }
    Ok(AlignmentResult {
        residual: residual_sq.sqrt(),
        ..result
    })
}

/// Mean aligned displacement: `1/N * sum_i |xa_i W - xb_i|` with `W` from
/// [`procrustes_align`]. Symmetric in its arguments up to floating-point
/// noise because the optimal map for swapped arguments is the transpose.
pub fn aed_loss(xa: &EmbeddingMatrix, xb: &EmbeddingMatrix) -> Result<f64> {
    let alignment = procrustes_align(xa, xb)?;
    let n = xa.node_count();
    let mut total = 0.0;
    for i in 0..n {
        let mapped = alignment.apply(xa.row(i));
        total += euclidean_distance(&mapped, xb.row(i));
    }
    Ok(total / n as f64)
}

/// The scores produced when comparing two layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityResult {
    /// Pairwise-distance loss on RMS-normalized embeddings.
    pub ped: f64,
    /// Aligned-distance loss on RMS-normalized embeddings.
    pub aed: f64,
    /// Blended distance `omega * ped + (1 - omega) * aed`.
    pub distance: f64,
    /// `1 - distance`.
    pub eatsim: f64,
}

fn validate_omega(omega: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::validation(format!(
            "loss weight omega must lie in [0, 1], got {omega}"
        )));
    }
    Ok(())
}

/// Scores two *already normalized* embeddings. Library users normally go
/// through [`eatsim`] or [`similarity_matrix`], which normalize for you.
pub fn score_embeddings(
    xa: &EmbeddingMatrix,
    xb: &EmbeddingMatrix,
    omega: f64,
) -> Result<SimilarityResult> {
    validate_omega(omega)?;
    let ped = ped_loss(xa, xb)?;
    let aed = aed_loss(xa, xb)?;
    let distance = omega * ped + (1.0 - omega) * aed;
    Ok(SimilarityResult {
        ped,
        aed,
        distance,
        eatsim: 1.0 - distance,
    })
}

/// Embedding-based similarity of two layers over the same node set.
///
/// Both layers are embedded with the same configuration (and therefore the
/// same seed), RMS-normalized, and scored. Identical layers score 1 within
/// numerical precision; the score can drop below 0 only for embeddings whose
/// blended distance exceeds the normalized scale, which does not occur for
/// comparable layers in practice.
pub fn eatsim(
    ga: &LayerGraph,
    gb: &LayerGraph,
    cfg: &EmbedConfig,
    omega: f64,
) -> Result<SimilarityResult> {
    validate_omega(omega)?;
    if ga.node_count() != gb.node_count() {
        return Err(Error::validation(format!(
            "layers have different node counts: {} vs {}",
            ga.node_count(),
            gb.node_count()
        )));
    }
    let xa = embed_layer(ga, cfg)?.rms_normalized();
    let xb = embed_layer(gb, cfg)?.rms_normalized();
    score_embeddings(&xa, &xb, omega)
}

/// All embeddings of a multiplex, normalized, computed in parallel with
/// deterministic ordering.
pub fn embed_all_layers(
    net: &MultiplexNetwork,
    cfg: &EmbedConfig,
) -> Result<Vec<EmbeddingMatrix>> {
    net.layers()
        .par_iter()
        .map(|layer| embed_layer(layer, cfg).map(|m| m.rms_normalized()))
        .collect()
}

/// Full `L x L` similarity table of a multiplex. Each layer is embedded
/// once; every ordered pair shares the unordered pair's result, and the
/// diagonal is computed like any other pair (scoring a layer against itself
/// yields 1 within numerical precision).
pub fn similarity_matrix(
    net: &MultiplexNetwork,
    cfg: &EmbedConfig,
    omega: f64,
) -> Result<Vec<Vec<SimilarityResult>>> {
    validate_omega(omega)?;
    let embeddings = embed_all_layers(net, cfg)?;
    let l = embeddings.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..l {
        for j in i..l {
            pairs.push((i, j));
        }
    }
    let scored: Result<Vec<SimilarityResult>> = pairs
        .par_iter()
        .map(|&(i, j)| score_embeddings(&embeddings[i], &embeddings[j], omega))
        .collect();
    let scored = scored?;
    let placeholder = SimilarityResult {
        ped: 0.0,
        aed: 0.0,
        distance: 0.0,
        eatsim: 1.0,
    };
    let mut matrix = vec![vec![placeholder; l]; l];
    for (&(i, j), &result) in pairs.iter().zip(&scored) {
        matrix[i][j] = result;
        matrix[j][i] = result;
    }
    Ok(matrix)
}

/// Square-root Jensen-Shannon divergence between the Von Neumann density
/// operators of two layers, with entropies normalized by `ln N` so the value
/// lies in `[0, 1]`. Lower means more similar; it is the spectral
/// counterpart to `1 - eatsim`.
pub fn jsd_distance(ga: &LayerGraph, gb: &LayerGraph) -> Result<f64> {
    if ga.node_count() != gb.node_count() {
        return Err(Error::validation(format!(
            "layers have different node counts: {} vs {}",
            ga.node_count(),
            gb.node_count()
        )));
    }
    let n = ga.node_count();
    if n < 2 {
        return Err(Error::validation("JSD needs at least two nodes"));
    }
    let rho_a = DensityOperator::from_layer(ga)?;
    let rho_b = DensityOperator::from_layer(gb)?;
    jsd_from_densities(&rho_a, &rho_b)
}

/// JSD on precomputed density operators; used by the reduction driver to
/// avoid rebuilding operators for every candidate pair.
pub fn jsd_from_densities(rho_a: &DensityOperator, rho_b: &DensityOperator) -> Result<f64> {
    let n = rho_a.node_count();
    let norm = (n as f64).ln();
    let mixture = DensityOperator::mixture(rho_a, rho_b)?;
    let h_mix = mixture.entropy_nats() / norm;
    let h_a = rho_a.entropy_nats() / norm;
    let h_b = rho_b.entropy_nats() / norm;
    let squared = h_mix - 0.5 * (h_a + h_b);
    // Mixing never lowers entropy; tiny negatives are eigensolver noise.
    Ok(squared.max(0.0).sqrt())
}
