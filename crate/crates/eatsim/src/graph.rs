//! Multiplex network data model.
//!
//! A multiplex network couples `L` undirected layer graphs over one shared
//! node set `0..N`. Nodes are dense internal indices; external string labels
//! from input files live in a side table on [`MultiplexNetwork`] and never
//! enter the algorithms.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// One undirected edge, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// A single undirected layer: no self-loops, no duplicate edges, strictly
/// positive weights. An unweighted layer is one whose edges all carry weight
/// one and which renders without a weight column.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
    weighted: bool,
}

impl LayerGraph {
    /// Builds an unweighted layer; rejects self-loops, out-of-range endpoints
    /// and duplicate edges.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edges.iter().map(|&(u, v)| (u, v, 1.0)), false, false)
    }

    /// Builds a weighted layer; additionally rejects non-positive weights.
    pub fn weighted(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Self::build(n, edges.iter().copied(), true, false)
    }

    /// Builds a layer from a stream that may repeat edges. Duplicates
    /// collapse to a single edge; when `weighted`, their weights are summed.
    pub fn accumulate(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        weighted: bool,
    ) -> Result<Self> {
        Self::build(n, edges, weighted, true)
    }

    fn build(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        weighted: bool,
        merge: bool,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::validation(format!("self-loop on node {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) exceeds node count {n}"
                )));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            let key = (u.min(v), u.max(v));
            match map.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(w);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    if !merge {
                        return Err(Error::validation(format!(
                            "duplicate edge ({}, {})",
                            key.0, key.1
                        )));
                    }
                    if weighted {
                        *e.get_mut() += w;
                    }
                }
            }
        }
        let edges: Vec<Edge> = map
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push((e.v, e.w));
            adj[e.v].push((e.u, e.w));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        Ok(LayerGraph {
            n,
            edges,
            adj,
            weighted,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)`, each with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `u` in ascending id order, with edge weights.
    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn is_isolated(&self, u: usize) -> bool {
        self.adj[u].is_empty()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search_by_key(&v, |&(x, _)| x).is_ok()
    }
}

/// Subset of the shared node set, tracked as a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    mask: Vec<bool>,
    len: usize,
}

impl NodeSet {
    pub fn empty(universe: usize) -> Self {
        NodeSet {
            mask: vec![false; universe],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        NodeSet {
            mask: vec![true; universe],
            len: universe,
        }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = NodeSet::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Size of the underlying universe `0..N`, not of the subset.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, id: usize) -> bool {
        self.mask.get(id).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, id: usize) -> bool {
        let fresh = !self.mask[id];
        if fresh {
            self.mask[id] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, id: usize) -> bool {
        let present = self.mask[id];
        if present {
            self.mask[id] = false;
            self.len -= 1;
        }
        present
    }

    /// Member ids in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }
}

/// `L >= 1` layers over a shared node set.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexNetwork {
    n: usize,
    layers: Vec<LayerGraph>,
    layer_names: Vec<String>,
    node_labels: Vec<String>,
}

impl MultiplexNetwork {
    /// Wraps layers with default names (`"0"`, `"1"`, ...) and labels.
    pub fn new(layers: Vec<LayerGraph>) -> Result<Self> {
        let names = (0..layers.len()).map(|i| i.to_string()).collect();
        Self::with_names(layers, names)
    }

    pub fn with_names(layers: Vec<LayerGraph>, layer_names: Vec<String>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::validation("a multiplex needs at least one layer"));
        }
        if layer_names.len() != layers.len() {
            return Err(Error::validation(format!(
                "{} layers but {} layer names",
                layers.len(),
                layer_names.len()
            )));
        }
        let n = layers[0].node_count();
        for (i, l) in layers.iter().enumerate() {
            if l.node_count() != n {
                return Err(Error::validation(format!(
                    "layer {i} has {} nodes, expected {n}",
                    l.node_count()
                )));
            }
        }
        let node_labels = (0..n).map(|i| i.to_string()).collect();
        Ok(MultiplexNetwork {
            n,
            layers,
            layer_names,
            node_labels,
        })
    }

    pub fn set_node_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.n {
            return Err(Error::validation(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n
            )));
        }
        self.node_labels = labels;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[LayerGraph] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &LayerGraph {
        &self.layers[i]
    }

    pub fn layer_names(&self) -> &[String] {
        &self.layer_names
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    /// Replaces layer `i`, keeping names and labels.
    pub fn replace_layer(&mut self, i: usize, layer: LayerGraph) -> Result<()> {
        if layer.node_count() != self.n {
            return Err(Error::validation("replacement layer has wrong node count"));
        }
        self.layers[i] = layer;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loop_and_duplicate() {
        assert!(LayerGraph::unweighted(3, &[(0, 0)]).is_err());
        assert!(LayerGraph::unweighted(3, &[(0, 1), (1, 0)]).is_err());
        assert!(LayerGraph::unweighted(3, &[(0, 3)]).is_err());
        assert!(LayerGraph::weighted(3, &[(0, 1, -1.0)]).is_err());
        assert!(LayerGraph::weighted(3, &[(0, 1, 0.0)]).is_err());
    }

    #[test]
    fn accumulate_merges_duplicates() {
        let unw = LayerGraph::accumulate(3, [(0, 1, 1.0), (1, 0, 1.0)], false).unwrap();
        assert_eq!(unw.edge_count(), 1);
        assert_eq!(unw.edges()[0].w, 1.0);

        let w = LayerGraph::accumulate(3, [(0, 1, 2.0), (1, 0, 3.0)], true).unwrap();
        assert_eq!(w.edge_count(), 1);
        assert_eq!(w.edges()[0].w, 5.0);
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = LayerGraph::unweighted(4, &[(2, 0), (0, 1), (3, 0)]).unwrap();
        let nbrs: Vec<usize> = g.neighbors(0).iter().map(|&(v, _)| v).collect();
        assert_eq!(nbrs, vec![1, 2, 3]);
        assert!(g.has_edge(2, 0) && g.has_edge(0, 2));
        assert!(!g.has_edge(1, 2));
        assert_eq!(g.degree(0), 3);
        assert!(g.is_isolated(0) == false && g.edge_count() == 3);
    }

    #[test]
    fn node_set_tracks_membership() {
        let mut s = NodeSet::full(5);
        assert_eq!(s.len(), 5);
        assert!(s.remove(2));
        assert!(!s.remove(2));
        assert!(!s.contains(2));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 1, 3, 4]);
        assert!(s.insert(2));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn multiplex_requires_matching_node_counts() {
        let a = LayerGraph::unweighted(3, &[(0, 1)]).unwrap();
        let b = LayerGraph::unweighted(4, &[(0, 1)]).unwrap();
        assert!(MultiplexNetwork::new(vec![a.clone(), b]).is_err());
        assert!(MultiplexNetwork::new(vec![]).is_err());
        let m = MultiplexNetwork::new(vec![a.clone(), a]).unwrap();
        assert_eq!(m.layer_count(), 2);
        assert_eq!(m.layer_names(), &["0".to_string(), "1".to_string()]);
    }
}
