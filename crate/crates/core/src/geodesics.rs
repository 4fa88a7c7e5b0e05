//! Edge power transform, all-pairs geodesics, geodesic subgraphs, edge
//! betweenness, and minimal spanning trees.
//!
//! For a graph with Euclidean edge lengths `d_e`, the transformed length is
//! `d_e^(1 - alpha)`: `alpha = 0` keeps the original lengths, `alpha = 1`
//! gives hop counts, and as `alpha -> -inf` every geodesic collapses onto the
//! minimal spanning tree. The geodesic subgraph keeps only the edges that are
//! themselves shortest paths between their endpoints.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{GraphError, TieMode, WeightedGraph};
use crate::matrix::Matrix;

/// Relative tolerance for comparing path lengths.
pub const PATH_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} has non-positive weight")]
    NonPositiveWeight(usize),
    #[error("transformed weight of edge {0} is not a positive finite number")]
    NonFiniteWeight(usize),
    #[error("alpha must be finite")]
    NonFiniteAlpha,
    #[error("shortest path from {from} to {to} is not unique")]
    AmbiguousTie { from: usize, to: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A graph together with its `alpha`-transformed edge lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaGraph {
    base: WeightedGraph,
    alpha: f64,
    weights_alpha: Vec<f64>,
}

impl AlphaGraph {
    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weights_alpha(&self) -> &[f64] {
        &self.weights_alpha
    }

    pub fn n_vertices(&self) -> usize {
        self.base.n_vertices()
    }

    /// Adjacency lists of `(neighbour, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        self.base.adjacency()
    }
}

/// Maps every edge length `w` to `w^(1 - alpha)`.
pub fn alpha_transform(g: &WeightedGraph, alpha: f64) -> Result<AlphaGraph, GeodesicError> {
    if !alpha.is_finite() {
        return Err(GeodesicError::NonFiniteAlpha);
    }
    let p = 1.0 - alpha;
    let weights_alpha: Vec<f64> = g.edges().iter().map(|e| e.w.powf(p)).collect();
    if let Some(k) = weights_alpha
        .iter()
        .position(|w| !(w.is_finite() && *w > 0.0))
    {
        return Err(GeodesicError::NonFiniteWeight(k));
    }
    Ok(AlphaGraph {
        base: g.clone(),
        alpha,
        weights_alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApspAlgorithm {
    /// Floyd when `|E| > n^2 / 4`, Johnson otherwise.
    #[default]
    Auto,
    Floyd,
    Johnson,
}

impl ApspAlgorithm {
    pub fn resolve(self, n: usize, m: usize) -> ApspAlgorithm {
        match self {
            ApspAlgorithm::Auto if 4 * m > n * n => ApspAlgorithm::Floyd,
            ApspAlgorithm::Auto => ApspAlgorithm::Johnson,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicOptions {
    pub algorithm: ApspAlgorithm,
    pub ties: TieMode,
}

impl GeodesicOptions {
    pub fn lenient() -> Self {
        GeodesicOptions {
            algorithm: ApspAlgorithm::Auto,
            ties: TieMode::Lenient,
        }
    }
}

/// All-pairs geodesics for one `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicResult {
    pub alpha: f64,
    pub n_vertices: usize,
    /// Edge endpoints of the underlying graph, indexed like `betweenness`.
    pub edges: Vec<(usize, usize)>,
    #[serde(with = "crate::floatfmt::vec")]
    pub weights_alpha: Vec<f64>,
    /// Geodesic distances; `inf` between disconnected vertices.
    pub dist: Matrix,
    /// `next_hop[s][t]` is the predecessor of `t` on the chosen path from `s`.
    pub next_hop: Vec<Vec<Option<usize>>>,
    /// Indices of edges that are shortest paths between their endpoints.
    pub geodesic_edges: Vec<usize>,
    /// Per-edge count of unordered vertex pairs whose chosen path uses it.
    pub betweenness: Vec<u64>,
    #[serde(skip)]
    pred_edge: Vec<Vec<usize>>,
    #[serde(skip)]
    ambiguous: Option<(usize, usize)>,
}

const NO_EDGE: usize = usize::MAX;

impl GeodesicResult {
    pub fn n(&self) -> usize {
        self.n_vertices
    }

    pub fn is_connected(&self) -> bool {
        self.dist.as_slice().iter().all(|d| d.is_finite())
    }

    pub fn geodesic_edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.geodesic_edges.iter().map(|&e| self.edges[e]).collect()
    }

    /// Neighbour lists of the geodesic subgraph.
    pub fn geodesic_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &e in &self.geodesic_edges {
            let (i, j) = self.edges[e];
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Edge indices along the chosen path between `i` and `j`.
    ///
    /// The path of an unordered pair is the one from the smaller index.
    pub fn path_edges(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        let (s, mut t) = (i.min(j), i.max(j));
        if !self.dist[(s, t)].is_finite() {
            return None;
        }
        let mut out = Vec::new();
        if self.pred_edge.is_empty() {
            // deserialized result: recover edge ids from endpoints
            let lookup: std::collections::HashMap<(usize, usize), usize> = self
                .edges
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| ((a, b), k))
                .collect();
            while t != s {
                let p = self.next_hop[s][t]?;
                out.push(lookup[&(p.min(t), p.max(t))]);
                t = p;
            }
        } else {
            while t != s {
                out.push(self.pred_edge[s][t]);
                t = self.next_hop[s][t]?;
            }
        }
        out.reverse();
        Some(out)
    }

    /// Vertex sequence of the chosen path from `min(i,j)` to `max(i,j)`.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        let (s, mut t) = (i.min(j), i.max(j));
        if !self.dist[(s, t)].is_finite() {
            return None;
        }
        let mut out = vec![t];
        while t != s {
            t = self.next_hop[s][t]?;
            out.push(t);
        }
        out.reverse();
        Some(out)
    }

    pub fn total_betweenness(&self) -> u64 {
        self.betweenness.iter().sum()
    }

    /// `sum_e n_e * w_e^(1 - alpha)`.
    pub fn weighted_betweenness(&self) -> f64 {
        self.betweenness
            .iter()
            .zip(&self.weights_alpha)
            .map(|(&b, &w)| b as f64 * w)
            .sum()
    }
}

/// Floyd–Warshall, parallel over rows within each pivot round.
pub fn apsp_floyd(ag: &AlphaGraph) -> GeodesicResult {
    let n = ag.n_vertices();
    let mut dist = Matrix::filled(n, f64::INFINITY);
    for i in 0..n {
        dist[(i, i)] = 0.0;
    }
    for (e, &w) in ag.base.edges().iter().zip(&ag.weights_alpha) {
        if w < dist[(e.i, e.j)] {
            dist[(e.i, e.j)] = w;
            dist[(e.j, e.i)] = w;
        }
    }
    let mut pivot = vec![0.0; n];
    for k in 0..n {
        pivot.copy_from_slice(dist.row(k));
        dist.as_mut_slice()
            .par_chunks_mut(n.max(1))
            .for_each(|row| {
                let dik = row[k];
                if !dik.is_finite() {
                    return;
                }
                for (dij, &dkj) in row.iter_mut().zip(&pivot) {
                    let c = dik + dkj;
                    if c < *dij {
                        *dij = c;
                    }
                }
            });
    }
    finalize(ag, dist)
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

fn dijkstra(adj: &[Vec<(usize, usize)>], w: &[f64], s: usize, out: &mut [f64]) {
    out.fill(f64::INFINITY);
    out[s] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(HeapItem(0.0, s)));
    while let Some(Reverse(HeapItem(d, u))) = heap.pop() {
        if d > out[u] {
            continue;
        }
        for &(v, e) in &adj[u] {
            let c = d + w[e];
            if c < out[v] {
                out[v] = c;
                heap.push(Reverse(HeapItem(c, v)));
            }
        }
    }
}

/// Dijkstra from every source. All weights are positive so no Bellman–Ford
/// reweighting pass is required.
pub fn apsp_johnson(ag: &AlphaGraph) -> Result<GeodesicResult, GeodesicError> {
    if let Some(k) = ag.weights_alpha.iter().position(|&w| w <= 0.0) {
        return Err(GeodesicError::NonPositiveWeight(k));
    }
    let n = ag.n_vertices();
    let adj = ag.adjacency();
    let mut dist = Matrix::filled(n, f64::INFINITY);
    dist.as_mut_slice()
        .par_chunks_mut(n.max(1))
        .enumerate()
        .for_each(|(s, row)| dijkstra(&adj, &ag.weights_alpha, s, row));
    Ok(finalize(ag, dist))
}

/// Shortest-path trees, geodesic edges and betweenness from a distance matrix.
///
/// For each source, vertices are visited in `(dist, index)` order; each picks
/// as predecessor the smallest-index, already visited neighbour through which
/// its distance is attained within [`PATH_REL_TOL`].
fn finalize(ag: &AlphaGraph, mut dist: Matrix) -> GeodesicResult {
    let n = ag.n_vertices();
    for i in 0..n {
        for j in (i + 1)..n {
            let m = dist[(i, j)].min(dist[(j, i)]);
            dist[(i, j)] = m;
            dist[(j, i)] = m;
        }
    }
    let adj = ag.adjacency();
    let w = &ag.weights_alpha;

    struct Tree {
        pred: Vec<Option<usize>>,
        pred_edge: Vec<usize>,
        counts: Vec<(usize, u64)>,
        ambiguous: Option<usize>,
    }

    let trees: Vec<Tree> = (0..n)
        .into_par_iter()
        .map(|s| {
            let row = dist.row(s);
            let mut order: Vec<usize> = (0..n).filter(|&t| row[t].is_finite()).collect();
            order.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
            let mut rank = vec![usize::MAX; n];
            for (r, &t) in order.iter().enumerate() {
                rank[t] = r;
            }
            let mut pred = vec![None; n];
            let mut pred_edge = vec![NO_EDGE; n];
            let mut ambiguous = None;
            for &t in order.iter().skip(1) {
                let target = row[t] * (1.0 + PATH_REL_TOL);
                let mut best: Option<(usize, usize)> = None;
                let mut n_exact = 0;
                let mut fallback: Option<(f64, usize, usize)> = None;
                for &(u, e) in &adj[t] {
                    if rank[u] >= rank[t] {
                        continue;
                    }
                    let c = row[u] + w[e];
                    if c <= target {
                        n_exact += 1;
                        if best.is_none_or(|(bu, _)| u < bu) {
                            best = Some((u, e));
                        }
                    }
                    let better = match fallback {
                        None => true,
                        Some((fc, fu, _)) => c < fc || (c == fc && u < fu),
                    };
                    if better {
                        fallback = Some((c, u, e));
                    }
                }
                if n_exact > 1 && ambiguous.is_none() {
                    ambiguous = Some(t);
                }
                let chosen = best.or(fallback.map(|(_, u, e)| (u, e)));
                if let Some((u, e)) = chosen {
                    pred[t] = Some(u);
                    pred_edge[t] = e;
                }
            }
            // subtree counts of targets t > s, accumulated leaves-first
            let mut cnt = vec![0u64; n];
            let mut counts = Vec::new();
            for &t in order.iter().rev() {
                if t == s {
                    continue;
                }
                if t > s {
                    cnt[t] += 1;
                }
                if let Some(p) = pred[t] {
                    cnt[p] += cnt[t];
                    if cnt[t] > 0 {
                        counts.push((pred_edge[t], cnt[t]));
                    }
                }
            }
            Tree {
                pred,
                pred_edge,
                counts,
                ambiguous,
            }
        })
        .collect();

    let mut betweenness = vec![0u64; ag.base.n_edges()];
    let mut next_hop = Vec::with_capacity(n);
    let mut pred_edge = Vec::with_capacity(n);
    let mut ambiguous = None;
    for (s, t) in trees.into_iter().enumerate() {
        for (e, c) in t.counts {
            betweenness[e] += c;
        }
        if ambiguous.is_none() {
            ambiguous = t.ambiguous.map(|x| (s, x));
        }
        next_hop.push(t.pred);
        pred_edge.push(t.pred_edge);
    }

    let edges: Vec<(usize, usize)> = ag.base.edges().iter().map(|e| (e.i, e.j)).collect();
    let geodesic_edges = edges
        .iter()
        .zip(w)
        .enumerate()
        .filter(|(_, (&(i, j), &we))| we <= dist[(i, j)] * (1.0 + PATH_REL_TOL))
        .map(|(k, _)| k)
        .collect();

    GeodesicResult {
        alpha: ag.alpha,
        n_vertices: n,
        edges,
        weights_alpha: w.clone(),
        dist,
        next_hop,
        geodesic_edges,
        betweenness,
        pred_edge,
        ambiguous,
    }
}

/// Computes all geodesics and the geodesic subgraph of a connected graph.
pub fn geodesic_subgraph(
    ag: &AlphaGraph,
    opts: GeodesicOptions,
) -> Result<GeodesicResult, GeodesicError> {
    if !ag.base.is_connected() {
        return Err(GeodesicError::Disconnected);
    }
    let algo = opts
        .algorithm
        .resolve(ag.n_vertices(), ag.base.n_edges());
    let gr = match algo {
        ApspAlgorithm::Johnson => apsp_johnson(ag)?,
        _ => apsp_floyd(ag),
    };
    if opts.ties == TieMode::Strict {
        if let Some((from, to)) = gr.ambiguous {
            return Err(GeodesicError::AmbiguousTie { from, to });
        }
    }
    Ok(gr)
}

/// Convenience: transform and solve in one step.
pub fn geodesics_at(
    g: &WeightedGraph,
    alpha: f64,
    opts: GeodesicOptions,
) -> Result<GeodesicResult, GeodesicError> {
    geodesic_subgraph(&alpha_transform(g, alpha)?, opts)
}

/// A spanning tree as edge indices into its base graph, sorted by weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub edges: Vec<usize>,
    pub ordered_weights: Vec<f64>,
}

impl SpanningTree {
    fn from_ids(g: &WeightedGraph, mut ids: Vec<usize>) -> Self {
        ids.sort_by(|&a, &b| crate::graphs::edge_order(&g.edges()[a], &g.edges()[b]));
        let ordered_weights = ids.iter().map(|&k| g.edges()[k].w).collect();
        SpanningTree {
            edges: ids,
            ordered_weights,
        }
    }

    pub fn edge_set(&self, g: &WeightedGraph) -> BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .map(|&k| (g.edges()[k].i, g.edges()[k].j))
            .collect()
    }

    pub fn to_graph(&self, g: &WeightedGraph) -> WeightedGraph {
        g.subgraph(&self.edges)
    }

    pub fn total_weight(&self) -> f64 {
        self.ordered_weights.iter().sum()
    }
}

/// Union–find with path halving and union by size.
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Forward algorithm: scan edges by increasing weight and keep an edge
/// unless it closes a cycle.
pub fn mst_forward(g: &WeightedGraph) -> Result<SpanningTree, GeodesicError> {
    let n = g.n_vertices();
    let mut dsu = DisjointSets::new(n);
    let mut kept = Vec::with_capacity(n.saturating_sub(1));
    for k in g.sorted_edge_ids() {
        let e = g.edges()[k];
        if dsu.union(e.i, e.j) {
            kept.push(k);
            if kept.len() + 1 == n {
                break;
            }
        }
    }
    if kept.len() + 1 != n && n > 0 {
        return Err(GeodesicError::Disconnected);
    }
    Ok(SpanningTree::from_ids(g, kept))
}

/// Backward algorithm: scan edges by decreasing weight and delete an edge
/// whenever it lies on a cycle of the edges still present.
pub fn mst_backward(g: &WeightedGraph) -> Result<SpanningTree, GeodesicError> {
    if !g.is_connected() {
        return Err(GeodesicError::Disconnected);
    }
    let n = g.n_vertices();
    // only live edges are kept in the adjacency lists
    let mut adj = g.adjacency();
    let mut alive = vec![true; g.n_edges()];
    let mut n_alive = g.n_edges();
    let mut seen = vec![usize::MAX; n];
    let mut stack = Vec::with_capacity(n);
    let unlink = |adj: &mut Vec<Vec<(usize, usize)>>, u: usize, k: usize| {
        let pos = adj[u].iter().position(|&(_, ek)| ek == k).expect("edge in adjacency");
        adj[u].swap_remove(pos);
    };
    for (round, k) in g.sorted_edge_ids().into_iter().rev().enumerate() {
        if n_alive + 1 == n {
            break;
        }
        let e = g.edges()[k];
        unlink(&mut adj, e.i, k);
        unlink(&mut adj, e.j, k);
        // is e.j still reachable from e.i without edge k?
        stack.clear();
        stack.push(e.i);
        seen[e.i] = round;
        let mut reached = false;
        while let Some(u) = stack.pop() {
            if u == e.j {
                reached = true;
                break;
            }
            for &(v, _) in &adj[u] {
                if seen[v] != round {
                    seen[v] = round;
                    stack.push(v);
                }
            }
        }
        if reached {
            alive[k] = false;
            n_alive -= 1;
        } else {
            adj[e.i].push((e.j, k));
            adj[e.j].push((e.i, k));
        }
    }
    let ids = (0..g.n_edges()).filter(|&k| alive[k]).collect();
    Ok(SpanningTree::from_ids(g, ids))
}

/// Grid `1, 0.9, 0.8, ...` down to `alpha_min`, exact in decimal steps.
pub fn descending_grid(alpha_min: f64, step_tenths: u32) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k: i64 = 0;
    loop {
        let a = (10 - k * i64::from(step_tenths)) as f64 / 10.0;
        if a < alpha_min - 1e-9 {
            break;
        }
        out.push(a);
        k += 1;
    }
    out
}

/// Largest grid `alpha` (descending from 1 in steps of 0.1) at which the
/// geodesic subgraph equals the minimal spanning tree, if reached by
/// `alpha_min`.
pub fn alpha_star(
    g: &WeightedGraph,
    alpha_min: f64,
    opts: GeodesicOptions,
) -> Result<Option<f64>, GeodesicError> {
    if !g.is_connected() {
        return Err(GeodesicError::Disconnected);
    }
    let g = g.with_distinct_weights(opts.ties)?;
    let mst = mst_forward(&g)?.edge_set(&g);
    for alpha in descending_grid(alpha_min, 1) {
        let gr = geodesics_at(&g, alpha, opts)?;
        if gr.geodesic_edge_set() == mst {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(w: [f64; 3]) -> WeightedGraph {
        WeightedGraph::from_triples(3, &[(0, 1, w[0]), (1, 2, w[1]), (0, 2, w[2])]).unwrap()
    }

    #[test]
    fn alpha_transform_examples() {
        let g = WeightedGraph::from_triples(2, &[(0, 1, 4.0)]).unwrap();
        assert_eq!(alpha_transform(&g, 0.5).unwrap().weights_alpha(), &[2.0]);
        let g = WeightedGraph::from_triples(2, &[(0, 1, 7.0)]).unwrap();
        assert_eq!(alpha_transform(&g, 0.0).unwrap().weights_alpha(), &[7.0]);
        assert_eq!(alpha_transform(&g, 1.0).unwrap().weights_alpha(), &[1.0]);
        assert_eq!(
            alpha_transform(&g, f64::NAN).unwrap_err(),
            GeodesicError::NonFiniteAlpha
        );
    }

    #[test]
    fn triangle_paths() {
        // weights already transformed
        let g = tri([1.0, 1.0, 1.5]);
        let gr = apsp_floyd(&alpha_transform(&g, 0.0).unwrap());
        assert_eq!(gr.dist[(0, 2)], 1.5);
        assert_eq!(gr.geodesic_edges, vec![0, 1, 2]);

        let g = tri([1.0, 1.0, 2.25]);
        let gr = apsp_floyd(&alpha_transform(&g, 0.0).unwrap());
        assert_eq!(gr.dist[(0, 2)], 2.0);
        assert_eq!(gr.geodesic_edges, vec![0, 1]);
        assert_eq!(gr.path(0, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(gr.betweenness, vec![2, 2, 0]);
    }

    #[test]
    fn alpha_minus_one_drops_long_edge() {
        let g = tri([1.0, 1.0, 1.5]).with_distinct_weights(TieMode::Lenient).unwrap();
        let gr = geodesics_at(&g, 0.0, GeodesicOptions::lenient()).unwrap();
        assert_eq!(gr.geodesic_edges.len(), 3);
        let gr = geodesics_at(&g, -1.0, GeodesicOptions::lenient()).unwrap();
        assert_eq!(gr.geodesic_edges, vec![0, 1]);
    }

    #[test]
    fn disconnected_pairs_are_infinite() {
        let g = WeightedGraph::new(2, vec![], crate::graphs::GraphKind::Custom).unwrap();
        let ag = alpha_transform(&g, 0.0).unwrap();
        assert!(apsp_floyd(&ag).dist[(0, 1)].is_infinite());
        assert!(apsp_johnson(&ag).unwrap().dist[(0, 1)].is_infinite());
        assert_eq!(
            geodesic_subgraph(&ag, GeodesicOptions::default()).unwrap_err(),
            GeodesicError::Disconnected
        );
    }

    #[test]
    fn johnson_path_and_star() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let gr = apsp_johnson(&alpha_transform(&g, 0.0).unwrap()).unwrap();
        assert_eq!(gr.dist[(0, 2)], 2.0);

        let w = [0.5, 1.25, 2.0, 3.5];
        let star: Vec<_> = w.iter().enumerate().map(|(k, &x)| (0, k + 1, x)).collect();
        let g = WeightedGraph::from_triples(5, &star).unwrap();
        let gr = apsp_johnson(&alpha_transform(&g, 0.0).unwrap()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert_eq!(gr.dist[(a + 1, b + 1)], w[a] + w[b]);
                }
            }
        }
    }

    #[test]
    fn tree_input_keeps_every_edge() {
        let g = WeightedGraph::from_triples(4, &[(0, 1, 1.0), (1, 2, 2.0), (1, 3, 3.0)]).unwrap();
        for alpha in [1.0, 0.0, -3.0] {
            let gr = geodesics_at(&g, alpha, GeodesicOptions::default()).unwrap();
            assert_eq!(gr.geodesic_edges, vec![0, 1, 2]);
        }
        assert_eq!(
            alpha_star(&g, -5.0, GeodesicOptions::default()).unwrap(),
            Some(1.0)
        );
    }

    #[test]
    fn strict_mode_reports_ambiguous_paths() {
        // unit square: two equal paths between opposite corners
        let g = WeightedGraph::from_triples(4, &[(0, 1, 1.0), (1, 2, 1.1), (2, 3, 1.2), (0, 3, 1.3)])
            .unwrap();
        let ag = alpha_transform(&g, 1.0).unwrap();
        assert!(matches!(
            geodesic_subgraph(&ag, GeodesicOptions::default()),
            Err(GeodesicError::AmbiguousTie { .. })
        ));
        assert!(geodesic_subgraph(&ag, GeodesicOptions::lenient()).is_ok());
    }

    #[test]
    fn mst_triangle() {
        let g = tri([1.0, 1.2, 1.5]);
        let f = mst_forward(&g).unwrap();
        let b = mst_backward(&g).unwrap();
        assert_eq!(f.edges, vec![0, 1]);
        assert_eq!(b, f);
        assert_eq!(f.ordered_weights, vec![1.0, 1.2]);
    }

    #[test]
    fn mst_path_is_itself_and_disconnected_errors() {
        let g = WeightedGraph::from_triples(3, &[(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(mst_forward(&g).unwrap().edges, vec![1, 0]);
        let g = WeightedGraph::from_triples(3, &[(0, 1, 2.0)]).unwrap();
        assert_eq!(mst_forward(&g).unwrap_err(), GeodesicError::Disconnected);
        assert_eq!(mst_backward(&g).unwrap_err(), GeodesicError::Disconnected);
    }

    #[test]
    fn alpha_star_triangle_crossing() {
        // 1.5^(1-a) = 2 at a = 1 - ln 2 / ln 1.5 = -0.7095...
        let g = tri([1.0, 1.0, 1.5]);
        let a = alpha_star(&g, -5.0, GeodesicOptions::lenient()).unwrap();
        assert_eq!(a, Some(-0.8));
        assert_eq!(
            alpha_star(&g, -0.75, GeodesicOptions::lenient()).unwrap(),
            None
        );
    }

    #[test]
    fn grid_is_exact_decimal() {
        let g = descending_grid(-0.3, 1);
        assert_eq!(g, vec![1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.0, -0.1, -0.2, -0.3]);
    }

    #[test]
    fn auto_algorithm_choice() {
        assert_eq!(ApspAlgorithm::Auto.resolve(10, 45), ApspAlgorithm::Floyd);
        assert_eq!(ApspAlgorithm::Auto.resolve(10, 20), ApspAlgorithm::Johnson);
        assert_eq!(ApspAlgorithm::Floyd.resolve(10, 1), ApspAlgorithm::Floyd);
    }
}
