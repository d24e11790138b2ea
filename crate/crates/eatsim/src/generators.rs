//! Synthetic multiplex benchmarks.
//!
//! Three generators cover the experiments in this crate:
//!
//! * [`barabasi_albert`]: preferential-attachment layers with a power-law
//!   degree tail (exponent near 3).
//! * [`rewire_edges`] / [`rewiring_ladder`]: noisy copies of a layer where a
//!   fraction `p` of edges have one endpoint replaced at random, so the
//!   expected edge overlap with the original decays as `1 - p`.
//! * [`geometric_multiplex`]: layers of a popularity-similarity geometric
//!   model on a circle, where hidden-variable correlations across layers are
//!   dialed by an angular knob `g` and a degree-rank knob `v` (0 means
//!   independent, 1 means identical).

use crate::error::{Error, Result};
use crate::graph::{LayerGraph, MultiplexNetwork};
use crate::rng::{substream, Stream};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::collections::HashSet;
use std::f64::consts::PI;

/// Preferential-attachment graph: `m_attach` initial isolated nodes, then
/// each new node attaches to `m_attach` distinct existing nodes chosen with
/// probability proportional to degree. Exactly `m_attach * (n - m_attach)`
/// edges, connected by construction.
pub fn barabasi_albert(n: usize, m_attach: usize, seed: u64) -> Result<LayerGraph> {
    if m_attach == 0 {
        return Err(Error::validation("m_attach must be at least 1"));
    }
    if n <= m_attach {
        return Err(Error::validation(format!(
            "need more than m_attach = {m_attach} nodes, got {n}"
        )));
    }
    let mut rng = substream(seed, Stream::BaAttachment, &[]);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m_attach * (n - m_attach));
    // Endpoint multiset: sampling uniformly from it is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m_attach * (n - m_attach));
    let mut targets: Vec<usize> = (0..m_attach).collect();
    for source in m_attach..n {
        for &t in &targets {
            edges.push((source, t));
            endpoints.push(source);
            endpoints.push(t);
        }
        if source + 1 == n {
            break;
        }
        let mut chosen = HashSet::with_capacity(m_attach);
        while chosen.len() < m_attach {
            chosen.insert(endpoints[rng.random_range(0..endpoints.len())]);
        }
        targets = chosen.into_iter().collect();
        targets.sort_unstable();
    }
    LayerGraph::unweighted(n, &edges)
}

/// Random endpoint rewiring. Each edge is independently selected with
/// probability `p`; a selected edge keeps one uniformly chosen endpoint and
/// moves the other to a uniformly chosen node. Moves that would create a
/// self-loop or a duplicate edge are re-drawn a bounded number of times, and
/// the edge stays in place if every attempt collides. Edge count and weights
/// are preserved.
pub fn rewire_edges(layer: &LayerGraph, p: f64, seed: u64) -> Result<LayerGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(format!(
            "rewiring probability must lie in [0, 1], got {p}"
        )));
    }
    const MAX_RETRIES: usize = 64;
    let n = layer.node_count();
    let mut rng = substream(seed, Stream::Rewire, &[]);
    let mut present: HashSet<(usize, usize)> = layer
        .edges()
        .iter()
        .map(|e| (e.u, e.v))
        .collect();
    let mut edges: Vec<(usize, usize, f64)> =
        layer.edges().iter().map(|e| (e.u, e.v, e.w)).collect();

    for i in 0..edges.len() {
        if !rng.random_bool(p) {
            continue;
        }
        let (u, v, w) = edges[i];
        present.remove(&(u, v));
        let mut placed = false;
        for _ in 0..MAX_RETRIES {
            let kept = if rng.random_bool(0.5) { u } else { v };
            let fresh = rng.random_range(0..n);
            if fresh == kept {
                continue;
            }
            let key = (kept.min(fresh), kept.max(fresh));
            if present.contains(&key) {
                continue;
            }
            present.insert(key);
            edges[i] = (key.0, key.1, w);
            placed = true;
            break;
        }
        if !placed {
            present.insert((u, v));
        }
    }

    if layer.is_weighted() {
        LayerGraph::weighted(n, &edges)
    } else {
        let unweighted: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
        LayerGraph::unweighted(n, &unweighted)
    }
}

/// A multiplex of one preferential-attachment layer plus one rewired copy
/// per entry of `probs`. Layer names record the rewiring probabilities.
pub fn rewiring_ladder(
    n: usize,
    m_attach: usize,
    probs: &[f64],
    seed: u64,
) -> Result<MultiplexNetwork> {
    let base = barabasi_albert(n, m_attach, seed)?;
    let mut layers = vec![base.clone()];
    let mut names = vec!["0.00".to_string()];
    for (i, &p) in probs.iter().enumerate() {
        layers.push(rewire_edges(&base, p, crate::rng::derive_u64(seed, Stream::Rewire, &[i as u64 + 1]))?);
        names.push(format!("{p:.2}"));
    }
    MultiplexNetwork::with_names(layers, names)
}

/// Fraction of shared edges relative to the union of two edge sets.
pub fn edge_jaccard(a: &LayerGraph, b: &LayerGraph) -> f64 {
    let ea: HashSet<(usize, usize)> = a.edges().iter().map(|e| (e.u, e.v)).collect();
    let eb: HashSet<(usize, usize)> = b.edges().iter().map(|e| (e.u, e.v)).collect();
    let inter = ea.intersection(&eb).count();
    let union = ea.len() + eb.len() - inter;
    if union == 0 {
        return 1.0;
    }
    inter as f64 / union as f64
}

/// Parameters of the geometric multiplex model.
#[derive(Debug, Clone)]
pub struct GeometricParams {
    pub n: usize,
    pub mean_degree: f64,
    /// Power-law exponent of the hidden degree distribution.
    pub gamma: f64,
    /// Clustering temperature in (0, 1); lower is more clustered.
    pub temperature: f64,
    /// Angular (similarity) correlation between layers, in [0, 1].
    pub g: f64,
    /// Degree-rank (popularity) correlation between layers, in [0, 1].
    pub v: f64,
    /// Total number of layers; layers beyond the first are independently
    /// correlated copies of layer 1's hidden coordinates.
    pub layers: usize,
}

impl GeometricParams {
    pub fn new(n: usize, mean_degree: f64, gamma: f64, temperature: f64, g: f64, v: f64) -> Self {
        GeometricParams {
            n,
            mean_degree,
            gamma,
            temperature,
            g,
            v,
            layers: 2,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::validation("geometric model needs at least 3 nodes"));
        }
        if !(self.mean_degree > 0.0) {
            return Err(Error::validation("mean_degree must be positive"));
        }
        if !(self.gamma > 1.0) {
            return Err(Error::validation("gamma must exceed 1"));
        }
        if !(self.temperature > 0.0 && self.temperature < 1.0) {
            return Err(Error::validation("temperature must lie in (0, 1)"));
        }
        for (name, x) in [("g", self.g), ("v", self.v)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::validation(format!("{name} must lie in [0, 1], got {x}")));
            }
        }
        if self.layers == 0 {
            return Err(Error::validation("layer count must be at least 1"));
        }
        Ok(())
    }
}

/// Hidden coordinate of one node in one layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenCoord {
    /// Expected-degree variable drawn from the truncated power law.
    pub kappa: f64,
    /// Position on the circle, in [0, 2*pi).
    pub theta: f64,
}

/// A generated geometric multiplex together with the hidden coordinates that
/// produced it (one coordinate list per layer).
#[derive(Debug, Clone)]
pub struct GeometricMultiplex {
    pub network: MultiplexNetwork,
    pub coords: Vec<Vec<HiddenCoord>>,
}

/// Mean of the power law `x^(-gamma)` truncated to `[lo, hi]`.
fn truncated_power_law_mean(lo: f64, hi: f64, gamma: f64) -> f64 {
    let num = if (gamma - 2.0).abs() < 1e-9 {
        (hi / lo).ln()
    } else {
        (hi.powf(2.0 - gamma) - lo.powf(2.0 - gamma)) / (2.0 - gamma)
    };
    let den = (hi.powf(1.0 - gamma) - lo.powf(1.0 - gamma)) / (1.0 - gamma);
    num / den
}

/// Smallest hidden degree such that the truncated power law on
/// `[kappa_min, kappa_min * n^(1/(gamma-1))]` has the requested mean.
/// Solved by bisection to a relative tolerance of 1e-6.
fn solve_kappa_min(n: usize, mean_degree: f64, gamma: f64) -> Result<f64> {
    let cutoff = (n as f64).powf(1.0 / (gamma - 1.0));
    let mean_at = |lo: f64| truncated_power_law_mean(lo, lo * cutoff, gamma);
    let mut lo = mean_degree * 1e-6;
    let mut hi = mean_degree;
    if mean_at(hi) < mean_degree {
        return Err(Error::numeric("hidden-degree bisection failed to bracket"));
    }
    while (hi - lo) / hi > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if mean_at(mid) < mean_degree {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Inverse CDF of the truncated power law.
fn sample_kappa(lo: f64, hi: f64, gamma: f64, u: f64) -> f64 {
    let a = lo.powf(1.0 - gamma);
    let b = hi.powf(1.0 - gamma);
    (a + u * (b - a)).powf(1.0 / (1.0 - gamma))
}

fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta % two_pi;
    if t < 0.0 {
        t += two_pi;
    }
    t
}

/// Draws edges for one layer given hidden coordinates: nodes `i`, `j` link
/// with probability `1 / (1 + (d_ij / (mu k_i k_j))^(1/T))` where `d_ij` is
/// the circle distance scaled to a density of one node per unit length.
fn sample_layer_edges(
    coords: &[HiddenCoord],
    mu: f64,
    temperature: f64,
    rng: &mut impl Rng,
) -> Vec<(usize, usize)> {
    let n = coords.len();
    let scale = n as f64 / (2.0 * PI);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (coords[i].theta - coords[j].theta).abs();
            let angular = PI - (PI - gap).abs();
            let distance = scale * angular;
            let chi = distance / (mu * coords[i].kappa * coords[j].kappa);
            let p = 1.0 / (1.0 + chi.powf(1.0 / temperature));
            // One uniform draw per pair keeps the consumption schedule a pure
            // function of (n, layer), whatever the probabilities are.
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Degree-rank mixing: returns the hidden degrees for a correlated layer.
/// The same multiset of values is reassigned so that each node's new rank
/// sits near its old one; the displacement kernel is a two-sided truncated
/// geometric whose width scales as `n * (1 - v)`. The endpoints short-circuit
/// to exact semantics: `v = 1` keeps every value in place and `v = 0` applies
/// a fresh uniform permutation.
fn mix_degree_ranks(kappas: &[f64], v: f64, rng: &mut impl Rng) -> Vec<f64> {
    let n = kappas.len();
    if v >= 1.0 {
        return kappas.to_vec();
    }
    // Node order by ascending hidden degree (ids break ties).
    let mut by_value: Vec<usize> = (0..n).collect();
    by_value.sort_by(|&a, &b| kappas[a].partial_cmp(&kappas[b]).unwrap().then(a.cmp(&b)));
    let mut rank = vec![0usize; n];
    for (pos, &node) in by_value.iter().enumerate() {
        rank[node] = pos;
    }
    let sorted: Vec<f64> = by_value.iter().map(|&i| kappas[i]).collect();

    let target_rank: Vec<usize> = if v <= 0.0 {
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates.
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        perm
    } else {
        let width = n as f64 * (1.0 - v);
        let rho = width / (1.0 + width);
        let tail = 1.0 - rho.powi(n as i32 + 1);
        let mut keys: Vec<(f64, usize, usize)> = (0..n)
            .map(|node| {
                let u: f64 = rng.random();
                let magnitude = if rho > 0.0 {
                    ((1.0 - u * tail).ln() / rho.ln()).floor()
                } else {
                    0.0
                };
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                (rank[node] as f64 + sign * magnitude, rank[node], node)
            })
            .collect();
        keys.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut target = vec![0usize; n];
        for (new_rank, &(_, _, node)) in keys.iter().enumerate() {
            target[node] = new_rank;
        }
        target
    };

    (0..n).map(|node| sorted[target_rank[node]]).collect()
}

/// Generates a geometric multiplex with tunable interlayer correlations.
///
/// Layer 1 is a plain popularity-similarity layer. Every further layer
/// reuses layer 1's hidden coordinates after two perturbations: angles gain
/// wrapped-Gaussian noise of spread `pi * (1 - g)`, and hidden-degree values
/// are reassigned by [`mix_degree_ranks`] with knob `v`. At `g = v = 1` the
/// hidden coordinates repeat exactly; at 0 they are independent.
pub fn geometric_multiplex(params: &GeometricParams, seed: u64) -> Result<GeometricMultiplex> {
    params.validate()?;
    let n = params.n;
    let gamma = params.gamma;
    let t = params.temperature;
    let kappa_min = solve_kappa_min(n, params.mean_degree, gamma)?;
    let kappa_max = kappa_min * (n as f64).powf(1.0 / (gamma - 1.0));
    let mu = (t * PI).sin() / (2.0 * params.mean_degree * t * PI);

    let mut degree_rng = substream(seed, Stream::GmmDegrees, &[]);
    let mut angle_rng = substream(seed, Stream::GmmAngles, &[]);
    let base: Vec<HiddenCoord> = (0..n)
        .map(|_| {
            let kappa = sample_kappa(kappa_min, kappa_max, gamma, degree_rng.random());
            let theta = angle_rng.random::<f64>() * 2.0 * PI;
            HiddenCoord { kappa, theta }
        })
        .collect();

    let mut coords = vec![base.clone()];
    for layer_idx in 1..params.layers {
        let li = layer_idx as u64;
        let sigma = PI * (1.0 - params.g);
        let mut noise_rng = substream(seed, Stream::GmmAngleNoise, &[li]);
        let mut mix_rng = substream(seed, Stream::GmmRankMix, &[li]);
        let kappas: Vec<f64> = base.iter().map(|c| c.kappa).collect();
        let mixed = mix_degree_ranks(&kappas, params.v, &mut mix_rng);
        let layer_coords: Vec<HiddenCoord> = base
            .iter()
            .zip(&mixed)
            .map(|(c, &kappa)| {
                let z: f64 = StandardNormal.sample(&mut noise_rng);
                HiddenCoord {
                    kappa,
                    theta: wrap_angle(c.theta + sigma * z),
                }
            })
            .collect();
        coords.push(layer_coords);
    }

    let mut layers = Vec::with_capacity(params.layers);
    for (layer_idx, layer_coords) in coords.iter().enumerate() {
        let mut edge_rng = substream(seed, Stream::GmmEdges, &[layer_idx as u64]);
        let edges = sample_layer_edges(layer_coords, mu, t, &mut edge_rng);
        layers.push(LayerGraph::unweighted(n, &edges)?);
    }
    let network = MultiplexNetwork::new(layers)?;
    Ok(GeometricMultiplex { network, coords })
}
