//! Structural reducibility of multiplex networks.
//!
//! Some layers of a multiplex carry redundant structure; aggregating them
//! loses nothing. The driver here greedily merges the most similar pair of
//! layer groups and watches a distinguishability score
//!
//! ```text
//! q(state) = 1 - mean_group_entropy / aggregate_entropy
//! ```
//!
//! where entropies are Von Neumann entropies of graph Laplacians (in bits)
//! and `aggregate_entropy` is fixed once from the aggregation of *all*
//! original layers. Merging redundant layers leaves q unchanged or barely
//! lowered; merging genuinely distinct layers pays an entropy cost and drops
//! q. The cut with maximal q is the recommended reduced representation.

use crate::embedding::EmbedConfig;
use crate::error::{Error, Result};
use crate::graph::{LayerGraph, MultiplexNetwork};
use crate::similarity::{embed_all_layers, jsd_from_densities, score_embeddings};
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Dense spectral entropy is quadratic in memory and cubic in time; beyond
/// this many nodes it stops being a desk-scale computation.
pub const MAX_SPECTRAL_NODES: usize = 5000;

/// Trace-normalized graph Laplacian `rho = (D - A) / tr(D - A)`: a positive
/// semidefinite, trace-one operator whose spectrum defines the layer's
/// Von Neumann entropy.
///
/// The spectrum is computed once and memoized, so reduction drivers can keep
/// an operator per group and score many candidate pairs without repeating the
/// cubic eigendecomposition of the operands.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    n: usize,
    rho: DMatrix<f64>,
    spectrum: std::sync::OnceLock<Vec<f64>>,
}

impl DensityOperator {
    /// Builds the operator of one layer, using edge weights as they are.
    pub fn from_layer(layer: &LayerGraph) -> Result<Self> {
        let n = layer.node_count();
        if n > MAX_SPECTRAL_NODES {
            return Err(Error::validation(format!(
                "spectral entropy supports at most {MAX_SPECTRAL_NODES} nodes, got {n}; \
                 an iterative eigensolver would be needed beyond that"
            )));
        }
        if layer.edge_count() == 0 {
            return Err(Error::validation(
                "entropy is undefined for a layer with no edges",
            ));
        }
        let mut rho = DMatrix::<f64>::zeros(n, n);
        let mut trace = 0.0;
        for e in layer.edges() {
            rho[(e.u, e.v)] -= e.w;
            rho[(e.v, e.u)] -= e.w;
            rho[(e.u, e.u)] += e.w;
            rho[(e.v, e.v)] += e.w;
            trace += 2.0 * e.w;
        }
        rho /= trace;
        Ok(DensityOperator {
            n,
            rho,
            spectrum: std::sync::OnceLock::new(),
        })
    }

    /// Equal mixture `(a + b) / 2` of two operators over the same node set.
    pub fn mixture(a: &DensityOperator, b: &DensityOperator) -> Result<Self> {
        if a.n != b.n {
            return Err(Error::validation(format!(
                "cannot mix density operators over {} and {} nodes",
                a.n, b.n
            )));
        }
        Ok(DensityOperator {
            n: a.n,
            rho: (&a.rho + &b.rho) * 0.5,
            spectrum: std::sync::OnceLock::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Eigenvalues clamped to be non-negative. The exact spectrum is
    /// non-negative; anything below a small negative tolerance means the
    /// eigensolver failed. The first call pays the eigendecomposition;
    /// later calls return the memoized spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if let Some(cached) = self.spectrum.get() {
            return Ok(cached.clone());
        }
        let eigs = self.rho.symmetric_eigenvalues();
        let mut out = Vec::with_capacity(self.n);
        for &lambda in eigs.iter() {
            if lambda < -1e-8 {
                return Err(Error::numeric(format!(
                    "density operator produced eigenvalue {lambda}"
                )));
            }
            out.push(lambda.max(0.0));
        }
        // A concurrent first call may have won the race; both computed the
        // same spectrum, so either value is fine to keep.
        let _ = self.spectrum.set(out.clone());
        Ok(out)
    }

    /// `-sum(lambda ln lambda)` with the `0 ln 0 = 0` convention.
    pub fn entropy_nats(&self) -> f64 {
        let eigs = self.eigenvalues().expect("valid density operator");
        -eigs
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum::<f64>()
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entropy_nats() / std::f64::consts::LN_2
    }
}

/// Von Neumann entropy of one layer, in bits. A triangle gives exactly 1 bit
/// (spectrum 0, 1/2, 1/2); a complete graph on `N` nodes gives `log2(N-1)`.
/// The value only depends on relative edge weights: scaling all weights by a
/// constant cancels in the trace normalization.
pub fn von_neumann_entropy(layer: &LayerGraph) -> Result<f64> {
    Ok(DensityOperator::from_layer(layer)?.entropy_bits())
}

/// Sum of adjacencies: one weighted layer whose edge weights add up the
/// members' weights (unweighted members count 1 per edge).
pub fn aggregate(layers: &[&LayerGraph]) -> Result<LayerGraph> {
    let first = layers
        .first()
        .ok_or_else(|| Error::validation("cannot aggregate zero layers"))?;
    let n = first.node_count();
    for l in layers {
        if l.node_count() != n {
            return Err(Error::validation(
                "aggregation requires a shared node count",
            ));
        }
    }
    let all_edges = layers
        .iter()
        .flat_map(|l| l.edges().iter().map(|e| (e.u, e.v, e.w)));
    LayerGraph::accumulate(n, all_edges, true)
}

/// A grouping of the original layers with everything q needs.
#[derive(Debug, Clone)]
pub struct ReductionState {
    /// Current groups as sorted lists of original layer indices.
    pub groups: Vec<Vec<usize>>,
    /// Aggregated layer per group.
    pub layers: Vec<LayerGraph>,
    /// Von Neumann entropy (bits) per aggregated group layer.
    pub entropies: Vec<f64>,
    /// Entropy (bits) of the aggregate of all original layers; fixed for the
    /// whole trajectory.
    pub h_aggregate: f64,
}

/// Distinguishability `q = 1 - mean(entropies) / h_aggregate`. Merging all
/// layers into one group gives exactly 0 because the lone group entropy *is*
/// the aggregate entropy.
pub fn distinguishability_q(state: &ReductionState) -> f64 {
    let mean = state.entropies.iter().sum::<f64>() / state.entropies.len() as f64;
    1.0 - mean / state.h_aggregate
}

/// Which similarity drives the merge order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityMetric {
    /// Embedding-based score; most similar = highest.
    Eatsim,
    /// Spectral Jensen-Shannon distance; most similar = lowest.
    Jsd,
}

/// How scores for merged groups are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    /// Re-embed (or re-diagonalize) the aggregated group layer. Slower and
    /// faithful; the default.
    Recompute,
    /// Average the original layer-pair scores across groups, as in
    /// average-linkage clustering. No recomputation after the initial pass.
    Average,
}

#[derive(Debug, Clone)]
pub struct ReduceOptions {
    pub metric: SimilarityMetric,
    /// Blend weight handed to the embedding score.
    pub omega: f64,
    pub embed: EmbedConfig,
    pub linkage: Linkage,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            metric: SimilarityMetric::Eatsim,
            omega: 0.5,
            embed: EmbedConfig::default(),
            linkage: Linkage::Recompute,
        }
    }
}

/// One greedy merge: the two groups (as original layer index lists) and the
/// similarity score that selected them.
#[derive(Debug, Clone)]
pub struct MergeRecord {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub score: f64,
}

/// Full output of [`greedy_reduce`].
#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub metric: SimilarityMetric,
    /// `q_trajectory[k]` is q after `k` merges, i.e. at `m = L - k` groups.
    pub q_trajectory: Vec<f64>,
    /// The `L - 1` merges in order.
    pub merges: Vec<MergeRecord>,
    /// Groupings after each merge count; `groupings[0]` is all-singletons.
    pub groupings: Vec<Vec<Vec<usize>>>,
    /// Group count maximizing q; ties go to the larger count.
    pub optimal_m: usize,
    pub optimal_q: f64,
    /// Parenthesized merge tree with similarity heights.
    pub dendrogram: String,
    pub layer_names: Vec<String>,
}

impl ReductionReport {
    /// The grouping at the optimal cut.
    pub fn optimal_grouping(&self) -> &Vec<Vec<usize>> {
        &self.groupings[self.layer_names.len() - self.optimal_m]
    }
}

enum Dendro {
    Leaf(usize),
    Node(Box<Dendro>, Box<Dendro>, f64),
}

fn quote_label(label: &str) -> String {
    if label
        .chars()
        .any(|c| c.is_whitespace() || "(),:;'".contains(c))
    {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

fn render_dendro(node: &Dendro, names: &[String], out: &mut String) {
    match node {
        Dendro::Leaf(i) => out.push_str(&quote_label(&names[*i])),
        Dendro::Node(l, r, h) => {
            out.push('(');
            render_dendro(l, names, out);
            out.push(',');
            render_dendro(r, names, out);
            out.push_str(&format!("):{h:.6}"));
        }
    }
}

struct Group {
    members: Vec<usize>,
    layer: LayerGraph,
    entropy_bits: f64,
    embedding: Option<crate::embedding::EmbeddingMatrix>,
    density: Option<DensityOperator>,
    tree: Dendro,
}

/// Aggregated layer for a member list; members are sorted so the aggregation
/// order (and hence every floating-point sum) is canonical. The final merge
/// therefore reproduces the exact layer used for `h_aggregate` and closes
/// the trajectory at q = 0.
fn group_layer(net: &MultiplexNetwork, members: &[usize]) -> Result<LayerGraph> {
    let layers: Vec<&LayerGraph> = members.iter().map(|&i| net.layer(i)).collect();
    aggregate(&layers)
}

fn group_score(a: &Group, b: &Group, opts: &ReduceOptions) -> Result<f64> {
    match opts.metric {
        SimilarityMetric::Eatsim => {
            let xa = a.embedding.as_ref().expect("embedding cached");
            let xb = b.embedding.as_ref().expect("embedding cached");
            Ok(score_embeddings(xa, xb, opts.omega)?.eatsim)
        }
        SimilarityMetric::Jsd => {
            let ra = a.density.as_ref().expect("density cached");
            let rb = b.density.as_ref().expect("density cached");
            jsd_from_densities(ra, rb)
        }
    }
}

/// Is `candidate` more similar than `best` under this metric?
fn better(metric: SimilarityMetric, candidate: f64, best: f64) -> bool {
    match metric {
        SimilarityMetric::Eatsim => candidate > best,
        SimilarityMetric::Jsd => candidate < best,
    }
}

fn build_group(
    net: &MultiplexNetwork,
    members: Vec<usize>,
    tree: Dendro,
    opts: &ReduceOptions,
) -> Result<Group> {
    let layer = group_layer(net, &members)?;
    let density = DensityOperator::from_layer(&layer)?;
    let entropy_bits = density.entropy_bits();
    let embedding = match opts.metric {
        SimilarityMetric::Eatsim => Some(
            crate::embedding::embed_layer(&layer, &opts.embed)?.rms_normalized(),
        ),
        SimilarityMetric::Jsd => None,
    };
    let density = match opts.metric {
        SimilarityMetric::Jsd => Some(density),
        SimilarityMetric::Eatsim => None,
    };
    Ok(Group {
        members,
        layer,
        entropy_bits,
        embedding,
        density,
        tree,
    })
}

/// Greedy agglomerative reduction. Starting from singleton groups, the most
/// similar pair (ties to the earliest pair in scan order) is merged until a
/// single group remains; q is recorded at every stage. Runs the similarity
/// evaluations for fresh pairs in parallel.
pub fn greedy_reduce(net: &MultiplexNetwork, opts: &ReduceOptions) -> Result<ReductionReport> {
    opts.embed.validate()?;
    if !(0.0..=1.0).contains(&opts.omega) {
        return Err(Error::validation(format!(
            "loss weight omega must lie in [0, 1], got {}",
            opts.omega
        )));
    }
    let l = net.layer_count();
    let h_aggregate = {
        let all: Vec<&LayerGraph> = net.layers().iter().collect();
        von_neumann_entropy(&aggregate(&all)?)?
    };

    // Initial singleton groups. Embeddings come from the batch helper so the
    // per-layer work runs in parallel.
    let mut groups: Vec<Group> = Vec::with_capacity(l);
    {
        let embeddings: Vec<Option<crate::embedding::EmbeddingMatrix>> = match opts.metric {
            SimilarityMetric::Eatsim => embed_all_layers(net, &opts.embed)?
                .into_iter()
                .map(Some)
                .collect(),
            SimilarityMetric::Jsd => vec![None; l],
        };
        for (i, embedding) in embeddings.into_iter().enumerate() {
            let layer = group_layer(net, &[i])?;
            let density = DensityOperator::from_layer(&layer)?;
            let entropy_bits = density.entropy_bits();
            groups.push(Group {
                members: vec![i],
                layer,
                entropy_bits,
                embedding,
                density: matches!(opts.metric, SimilarityMetric::Jsd).then_some(density),
                tree: Dendro::Leaf(i),
            });
        }
    }

    let state_of = |groups: &[Group]| ReductionState {
        groups: groups.iter().map(|g| g.members.clone()).collect(),
        layers: groups.iter().map(|g| g.layer.clone()).collect(),
        entropies: groups.iter().map(|g| g.entropy_bits).collect(),
        h_aggregate,
    };

    let mut q_trajectory = vec![distinguishability_q(&state_of(&groups))];
    let mut groupings = vec![groups.iter().map(|g| g.members.clone()).collect::<Vec<_>>()];
    let mut merges = Vec::new();

    // Pair scores, kept consistent with `groups` indices.
    let mut scores: Vec<Vec<f64>> = vec![vec![f64::NAN; l]; l];
    let fresh: Result<Vec<((usize, usize), f64)>> = {
        let mut pairs = Vec::new();
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                pairs.push((i, j));
            }
        }
        pairs
            .par_iter()
            .map(|&(i, j)| Ok(((i, j), group_score(&groups[i], &groups[j], opts)?)))
            .collect()
    };
    for ((i, j), s) in fresh? {
        scores[i][j] = s;
        scores[j][i] = s;
    }
    // Original layer-pair scores for average linkage.
    let base_scores = scores.clone();

    while groups.len() > 1 {
        let m = groups.len();
        let (mut bi, mut bj) = (0, 1);
        let mut best = scores[0][1];
        for i in 0..m {
            for j in (i + 1)..m {
                if better(opts.metric, scores[i][j], best) {
                    best = scores[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }

        let right = groups.remove(bj);
        let left = groups.remove(bi);
        merges.push(MergeRecord {
            left: left.members.clone(),
            right: right.members.clone(),
            score: best,
        });
        let mut members = [left.members.clone(), right.members.clone()].concat();
        members.sort_unstable();
        let tree = Dendro::Node(Box::new(left.tree), Box::new(right.tree), best);

        let merged = match opts.linkage {
            Linkage::Recompute => build_group(net, members, tree, opts)?,
            Linkage::Average => {
                // Entropy still tracks the true aggregate; only the
                // similarity scores fall back to averaging.
                let layer = group_layer(net, &members)?;
                let density = DensityOperator::from_layer(&layer)?;
                let entropy_bits = density.entropy_bits();
                Group {
                    members,
                    layer,
                    entropy_bits,
                    embedding: None,
                    density: None,
                    tree,
                }
            }
        };

        // Drop stale rows/columns, keeping relative order of the survivors.
        let mut keep: Vec<usize> = (0..m).collect();
        keep.remove(bj);
        keep.remove(bi);
        let mut next_scores = vec![vec![f64::NAN; m - 1]; m - 1];
        for (a, &ia) in keep.iter().enumerate() {
            for (b, &ib) in keep.iter().enumerate() {
                next_scores[a][b] = scores[ia][ib];
            }
        }
        scores = next_scores;
        groups.push(merged);
        let new_idx = groups.len() - 1;

        let fresh: Result<Vec<(usize, f64)>> = match opts.linkage {
            Linkage::Recompute => (0..new_idx)
                .into_par_iter()
                .map(|i| Ok((i, group_score(&groups[i], &groups[new_idx], opts)?)))
                .collect(),
            Linkage::Average => (0..new_idx)
                .map(|i| {
                    let mut acc = 0.0;
                    let mut count = 0.0;
                    for &a in &groups[i].members {
                        for &b in &groups[new_idx].members {
                            acc += base_scores[a][b];
                            count += 1.0;
                        }
                    }
                    Ok((i, acc / count))
                })
                .collect(),
        };
        for row in &mut scores {
            row.push(f64::NAN);
        }
        scores.push(vec![f64::NAN; groups.len()]);
        for (i, s) in fresh? {
            scores[i][new_idx] = s;
            scores[new_idx][i] = s;
        }

        q_trajectory.push(distinguishability_q(&state_of(&groups)));
        groupings.push(groups.iter().map(|g| g.members.clone()).collect());
    }

    // Highest q wins; scanning forward keeps the earliest (largest m) on ties.
    let mut best_k = 0;
    for (k, &q) in q_trajectory.iter().enumerate() {
        if q > q_trajectory[best_k] {
            best_k = k;
        }
    }
    let names = net.layer_names().to_vec();
    let mut dendrogram = String::new();
    render_dendro(&groups[0].tree, &names, &mut dendrogram);
    dendrogram.push(';');

    Ok(ReductionReport {
        metric: opts.metric,
        optimal_m: l - best_k,
        optimal_q: q_trajectory[best_k],
        q_trajectory,
        merges,
        groupings,
        dendrogram,
        layer_names: names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{barabasi_albert, rewire_edges};
    use approx::assert_relative_eq;

    fn triangle() -> LayerGraph {
        LayerGraph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn triangle_entropy_is_exactly_one_bit() {
        // Laplacian spectrum {0, 3, 3}, trace 6 -> rho spectrum {0, 1/2, 1/2}.
        let h = von_neumann_entropy(&triangle()).unwrap();
        assert!((h - 1.0).abs() < 1e-12, "triangle entropy {h}");
    }

    #[test]
    fn complete_graph_entropy_is_log2_of_n_minus_one() {
        for n in [4usize, 8, 16] {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    edges.push((i, j));
                }
            }
            let g = LayerGraph::unweighted(n, &edges).unwrap();
            let h = von_neumann_entropy(&g).unwrap();
            assert_relative_eq!(h, ((n - 1) as f64).log2(), epsilon = 1e-10);
        }
    }

    #[test]
    fn entropy_is_scale_invariant() {
        let g = barabasi_albert(50, 2, 3).unwrap();
        let scaled_edges: Vec<(usize, usize, f64)> = g
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.w * 7.25))
            .collect();
        let scaled = LayerGraph::weighted(50, &scaled_edges).unwrap();
        let h1 = von_neumann_entropy(&g).unwrap();
        let h2 = von_neumann_entropy(&scaled).unwrap();
        assert_relative_eq!(h1, h2, epsilon = 1e-10);
    }

    #[test]
    fn entropy_rejects_edgeless_and_oversized_layers() {
        let empty = LayerGraph::unweighted(4, &[]).unwrap();
        assert!(von_neumann_entropy(&empty).is_err());
        let big = LayerGraph::unweighted(MAX_SPECTRAL_NODES + 1, &[(0, 1)]).unwrap();
        assert!(von_neumann_entropy(&big).is_err());
    }

    /// Independent eigensolver: cyclic Jacobi rotations on a dense symmetric
    /// matrix. Slow but obviously correct; used to cross-check entropies.
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-24 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q].abs() < 1e-18 {
                        continue;
                    }
                    let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[i][i]).collect()
    }

    fn entropy_via_jacobi(layer: &LayerGraph) -> f64 {
        let n = layer.node_count();
        let mut lap = vec![vec![0.0; n]; n];
        let mut trace = 0.0;
        for e in layer.edges() {
            lap[e.u][e.v] -= e.w;
            lap[e.v][e.u] -= e.w;
            lap[e.u][e.u] += e.w;
            lap[e.v][e.v] += e.w;
            trace += 2.0 * e.w;
        }
        for row in &mut lap {
            for x in row.iter_mut() {
                *x /= trace;
            }
        }
        let mut h = 0.0;
        for lambda in jacobi_eigenvalues(lap) {
            if lambda > 1e-14 {
                h -= lambda * lambda.log2();
            }
        }
        h
    }

    #[test]
    fn entropy_matches_independent_jacobi_solver() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for case in 0..40 {
            let n = rng.random_range(3..=30usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.3) {
                        let w = if case % 2 == 0 {
                            1.0
                        } else {
                            rng.random_range(0.5..3.0)
                        };
                        edges.push((u, v, w));
                    }
                }
            }
            if edges.is_empty() {
                edges.push((0, 1, 1.0));
            }
            let g = LayerGraph::weighted(n, &edges).unwrap();
            let fast = von_neumann_entropy(&g).unwrap();
            let slow = entropy_via_jacobi(&g);
            assert!(
                (fast - slow).abs() < 1e-8,
                "case {case}: {fast} vs jacobi {slow}"
            );
        }
    }

    #[test]
    fn aggregate_sums_weights() {
        let a = LayerGraph::unweighted(3, &[(0, 1)]).unwrap();
        let b = LayerGraph::weighted(3, &[(0, 1, 2.0), (1, 2, 1.5)]).unwrap();
        let agg = aggregate(&[&a, &b]).unwrap();
        assert!(agg.is_weighted());
        assert_eq!(agg.edge_count(), 2);
        assert_eq!(agg.edges()[0].w, 3.0);
        assert_eq!(agg.edges()[1].w, 1.5);
        assert!(aggregate(&[]).is_err());
    }

    fn identical_net(l: usize) -> MultiplexNetwork {
        let g = barabasi_albert(40, 2, 9).unwrap();
        MultiplexNetwork::new(vec![g; l]).unwrap()
    }

    #[test]
    fn q_is_zero_for_single_group_and_identical_layers() {
        let net = identical_net(3);
        let opts = ReduceOptions {
            metric: SimilarityMetric::Jsd,
            ..Default::default()
        };
        let report = greedy_reduce(&net, &opts).unwrap();
        assert_eq!(report.q_trajectory.len(), 3);
        // Identical layers: aggregation is a pure rescaling, so q stays 0.
        for &q in &report.q_trajectory {
            assert!(q.abs() < 1e-9, "q {q} should vanish for identical layers");
        }
        assert_eq!(*report.q_trajectory.last().unwrap(), 0.0, "m=1 must be exact");
    }

    #[test]
    fn redundant_layer_is_merged_first() {
        // Layers: A, A, and a hub-and-spoke layer whose entropy is well
        // below A's. Both metrics must merge the copies first. Collapsing
        // the redundant pair raises q (the low-entropy group now weighs
        // more in the mean), and the final merge destroys it, so the
        // optimal cut keeps two groups.
        let g = barabasi_albert(60, 2, 4).unwrap();
        let spokes: Vec<(usize, usize)> = (1..60).map(|v| (0, v)).collect();
        let star = LayerGraph::unweighted(60, &spokes).unwrap();
        let h_a = von_neumann_entropy(&g).unwrap();
        let h_star = von_neumann_entropy(&star).unwrap();
        assert!(h_star < h_a, "hub layer must be the low-entropy one");
        let net = MultiplexNetwork::new(vec![g.clone(), g.clone(), star.clone()]).unwrap();
        let h_agg = von_neumann_entropy(&aggregate(&[&g, &g, &star]).unwrap()).unwrap();

        for metric in [SimilarityMetric::Eatsim, SimilarityMetric::Jsd] {
            let opts = ReduceOptions {
                metric,
                embed: EmbedConfig {
                    dim: 12,
                    epochs: 2,
                    ..EmbedConfig::with_seed(3)
                },
                ..Default::default()
            };
            let report = greedy_reduce(&net, &opts).unwrap();
            assert_eq!(
                report.merges[0].left,
                vec![0],
                "{metric:?} merged {:?} first",
                report.merges[0]
            );
            assert_eq!(report.merges[0].right, vec![1]);
            // Doubling every weight of A cancels in the trace
            // normalization, so the merged group keeps entropy h_a.
            assert_relative_eq!(
                report.q_trajectory[1],
                1.0 - (h_a + h_star) / (2.0 * h_agg),
                epsilon = 1e-12
            );
            assert_eq!(report.optimal_m, 2, "{metric:?} optimal_m");
            assert_eq!(report.optimal_grouping().len(), 2);
            assert_eq!(report.q_trajectory.len(), 3);
            assert_relative_eq!(*report.q_trajectory.last().unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn average_linkage_matches_recompute_on_first_merge() {
        let g = barabasi_albert(50, 2, 5).unwrap();
        let near = rewire_edges(&g, 0.1, 1).unwrap();
        let far = rewire_edges(&g, 0.8, 2).unwrap();
        let net = MultiplexNetwork::new(vec![g, near, far]).unwrap();
        let base = ReduceOptions {
            metric: SimilarityMetric::Jsd,
            ..Default::default()
        };
        let avg = ReduceOptions {
            linkage: Linkage::Average,
            ..base.clone()
        };
        let r1 = greedy_reduce(&net, &base).unwrap();
        let r2 = greedy_reduce(&net, &avg).unwrap();
        // The first merge only uses original pair scores, so it must agree.
        assert_eq!(r1.merges[0].left, r2.merges[0].left);
        assert_eq!(r1.merges[0].right, r2.merges[0].right);
        // q is defined by the grouping, not the linkage, so trajectories of
        // equal groupings agree.
        assert_relative_eq!(r1.q_trajectory[1], r2.q_trajectory[1], epsilon = 1e-12);
    }

    #[test]
    fn dendrogram_lists_all_layers_and_quotes_awkward_names() {
        let g = barabasi_albert(30, 2, 6).unwrap();
        let layers = vec![g.clone(), rewire_edges(&g, 0.2, 1).unwrap()];
        let mut net = MultiplexNetwork::new(layers).unwrap();
        net = MultiplexNetwork::with_names(
            net.layers().to_vec(),
            vec!["plain".into(), "with space".into()],
        )
        .unwrap();
        let report = greedy_reduce(
            &net,
            &ReduceOptions {
                metric: SimilarityMetric::Jsd,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.dendrogram.contains("plain"));
        assert!(report.dendrogram.contains("'with space'"));
        assert!(report.dendrogram.ends_with(';'));
        assert!(report.dendrogram.contains("):"));
    }

    #[test]
    fn single_layer_reduces_trivially() {
        let g = barabasi_albert(30, 2, 7).unwrap();
        let net = MultiplexNetwork::new(vec![g]).unwrap();
        let report = greedy_reduce(
            &net,
            &ReduceOptions {
                metric: SimilarityMetric::Jsd,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.q_trajectory, vec![0.0],);
        assert!(report.merges.is_empty());
        assert_eq!(report.optimal_m, 1);
    }
}
