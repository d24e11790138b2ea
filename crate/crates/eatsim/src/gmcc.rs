//! Connected components and the greatest mutually connected component.
//!
//! A set of surviving nodes is *mutually connected* when its induced subgraph
//! is connected in every layer simultaneously. The greatest mutually
//! connected component (GMCC) is the largest such set; it plays the role the
//! giant component plays in single-layer percolation. A single node is
//! mutually connected by convention, so the GMCC of a non-empty surviving
//! set is never empty.

use crate::graph::{LayerGraph, MultiplexNetwork, NodeSet};

/// Connected components of `layer` induced on `restrict`.
///
/// Components are listed by ascending smallest member and each component's
/// nodes are ascending. Isolated members come back as singletons.
pub fn connected_components(layer: &LayerGraph, restrict: &NodeSet) -> Vec<Vec<usize>> {
    let mut seen = vec![false; layer.node_count()];
    let mut out = Vec::new();
    let mut queue = Vec::new();
    for start in restrict.iter() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.clear();
        queue.push(start);
        let mut comp = vec![start];
        while let Some(u) = queue.pop() {
            for &(v, _) in layer.neighbors(u) {
                if !seen[v] && restrict.contains(v) {
                    seen[v] = true;
                    comp.push(v);
                    queue.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Splits `cell` into the connected components of `layer` induced on it.
/// Returns `None` when the cell is already connected (no split happened).
fn split_cell(layer: &LayerGraph, cell: &[usize], in_cell: &mut [bool]) -> Option<Vec<Vec<usize>>> {
    for &u in cell {
        in_cell[u] = true;
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut queue = Vec::new();
    for &start in cell {
        if !in_cell[start] {
            continue;
        }
        in_cell[start] = false;
        queue.clear();
        queue.push(start);
        let mut comp = vec![start];
        while let Some(u) = queue.pop() {
            for &(v, _) in layer.neighbors(u) {
                if in_cell[v] {
                    in_cell[v] = false;
                    comp.push(v);
                    queue.push(v);
                }
            }
        }
        comps.push(comp);
        if comps.len() == 1 && comps[0].len() == cell.len() {
            return None;
        }
    }
    Some(comps)
}

/// Greatest mutually connected component of the survivors.
///
/// Iteratively refines the surviving set: each candidate cell is split into
/// per-layer connected components until every cell is connected in every
/// layer. The largest stable cell wins; on ties, the cell containing the
/// smallest node id. Returns the empty set only for empty `surviving`.
pub fn gmcc(net: &MultiplexNetwork, surviving: &NodeSet) -> NodeSet {
    let n = net.node_count();
    if surviving.is_empty() {
        return NodeSet::empty(n);
    }
    let mut cells: Vec<Vec<usize>> = vec![surviving.iter().collect()];
    let mut in_cell = vec![false; n];
    loop {
        let mut changed = false;
        for layer in net.layers() {
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells.drain(..) {
                if cell.len() <= 1 {
                    next.push(cell);
                    continue;
                }
                match split_cell(layer, &cell, &mut in_cell) {
                    None => next.push(cell),
                    Some(parts) => {
                        changed = true;
                        next.extend(parts);
                    }
                }
            }
            cells = next;
        }
        if !changed {
            break;
        }
    }
    // Largest cell; ties resolve to the cell holding the smallest node id.
    // Cells never share nodes, so comparing minima is unambiguous.
    let best = cells
        .iter()
        .max_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| b.iter().min().cmp(&a.iter().min()))
        })
        .expect("non-empty surviving set yields at least one cell");
    NodeSet::from_ids(n, best.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MultiplexNetwork;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn net(n: usize, layers: &[&[(usize, usize)]]) -> MultiplexNetwork {
        let layers: Vec<LayerGraph> = layers
            .iter()
            .map(|e| LayerGraph::unweighted(n, e).unwrap())
            .collect();
        MultiplexNetwork::new(layers).unwrap()
    }

    /// Exhaustive reference: the largest subset of `surviving` whose induced
    /// subgraph is connected in every layer. Max-size mutually connected
    /// subsets are pairwise disjoint, so tie-breaking on the smallest member
    /// id is well defined.
    fn gmcc_oracle(net: &MultiplexNetwork, surviving: &NodeSet) -> Vec<usize> {
        let ids: Vec<usize> = surviving.iter().collect();
        let mut best: Vec<usize> = Vec::new();
        for mask in 1u32..(1 << ids.len()) {
            let subset: Vec<usize> = (0..ids.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| ids[i])
                .collect();
            let sub = NodeSet::from_ids(net.node_count(), subset.iter().copied());
            let connected_everywhere = net
                .layers()
                .iter()
                .all(|l| connected_components(l, &sub).len() == 1);
            if !connected_everywhere {
                continue;
            }
            if subset.len() > best.len()
                || (subset.len() == best.len() && subset.first() < best.first())
            {
                best = subset;
            }
        }
        best
    }

    #[test]
    fn components_split_on_restriction() {
        let g = LayerGraph::unweighted(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let all = NodeSet::full(5);
        assert_eq!(
            connected_components(&g, &all),
            vec![vec![0, 1, 2], vec![3, 4]]
        );
        // Dropping the middle node splits the path.
        let restricted = NodeSet::from_ids(5, [0, 2, 3, 4]);
        assert_eq!(
            connected_components(&g, &restricted),
            vec![vec![0], vec![2], vec![3, 4]]
        );
    }

    #[test]
    fn gmcc_requires_simultaneous_connectivity() {
        // Layer 0 connects {0,1,2} and {3,4}; layer 1 connects {0,1} and {2,3,4}.
        // Mutually connected: {0,1} and {3,4}; tie of size 2 goes to {0,1}.
        let m = net(5, &[&[(0, 1), (1, 2), (3, 4)], &[(0, 1), (2, 3), (3, 4)]]);
        let got = gmcc(&m, &NodeSet::full(5));
        assert_eq!(got.iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn gmcc_of_empty_surviving_is_empty() {
        let m = net(3, &[&[(0, 1), (1, 2)]]);
        assert!(gmcc(&m, &NodeSet::empty(3)).is_empty());
    }

    #[test]
    fn isolated_survivors_form_singleton_gmcc() {
        // No edges at all: every survivor is a size-1 mutually connected
        // component; the smallest id wins.
        let m = net(4, &[&[], &[]]);
        let surviving = NodeSet::from_ids(4, [1, 2, 3]);
        assert_eq!(gmcc(&m, &surviving).iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn identical_layers_reduce_to_single_layer_component() {
        let edges: &[(usize, usize)] = &[(0, 1), (1, 2), (2, 3), (4, 5)];
        let m = net(6, &[edges, edges]);
        let got = gmcc(&m, &NodeSet::full(6));
        assert_eq!(got.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn matches_exhaustive_oracle_on_random_multiplexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for case in 0..300 {
            let n = rng.random_range(1..=9usize);
            let n_layers = rng.random_range(1..=3usize);
            let p = rng.random_range(0.1..0.6f64);
            let layers: Vec<LayerGraph> = (0..n_layers)
                .map(|_| {
                    let mut edges = Vec::new();
                    for u in 0..n {
                        for v in (u + 1)..n {
                            if rng.random_bool(p) {
                                edges.push((u, v));
                            }
                        }
                    }
                    LayerGraph::unweighted(n, &edges).unwrap()
                })
                .collect();
            let m = MultiplexNetwork::new(layers).unwrap();
            let mut surviving = NodeSet::full(n);
            for u in 0..n {
                if rng.random_bool(0.25) {
                    surviving.remove(u);
                }
            }
            let got: Vec<usize> = gmcc(&m, &surviving).iter().collect();
            let want = gmcc_oracle(&m, &surviving);
            assert_eq!(got, want, "case {case}: n={n} layers={n_layers}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gmcc_is_subset_and_idempotent(
            seed in 0u64..1000,
            n in 2usize..12,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges_a = Vec::new();
            let mut edges_b = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.3) { edges_a.push((u, v)); }
                    if rng.random_bool(0.3) { edges_b.push((u, v)); }
                }
            }
            let m = net_from(n, &edges_a, &edges_b);
            let surviving = NodeSet::full(n);
            let g1 = gmcc(&m, &surviving);
            for u in g1.iter() {
                prop_assert!(surviving.contains(u));
            }
            let g2 = gmcc(&m, &g1);
            prop_assert_eq!(&g1, &g2);
            // Removing one node never grows the GMCC.
            let first = g1.iter().next();
            if let Some(first) = first {
                let mut smaller = surviving.clone();
                smaller.remove(first);
                prop_assert!(gmcc(&m, &smaller).len() <= g1.len());
            }
        }
    }

    fn net_from(n: usize, a: &[(usize, usize)], b: &[(usize, usize)]) -> MultiplexNetwork {
        MultiplexNetwork::new(vec![
            LayerGraph::unweighted(n, a).unwrap(),
            LayerGraph::unweighted(n, b).unwrap(),
        ])
        .unwrap()
    }
}
