//! Empirical graphs on a point cloud: complete, Gabriel and planar Delaunay.
//!
//! Every builder returns a [`WeightedGraph`] whose edge lengths are Euclidean
//! distances. Edge weights are required to be pairwise distinct (general
//! position). In [`TieMode::Strict`] a violation is an error; in
//! [`TieMode::Lenient`] ties are broken by a deterministic perturbation and
//! coincident points are joined by a very short edge.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};
use thiserror::Error;

use crate::dataio::{euclidean, PointCloud};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("point {2} lies on the diametral sphere of edge ({0}, {1})")]
    DegenerateTie(usize, usize, usize),
    #[error("Delaunay construction requires 2-D points, got d={0}")]
    DimensionNot2D(usize),
    #[error("cocircular points {0:?}")]
    CocircularDegeneracy(Vec<usize>),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("edge ({0}, {1}) is a self-loop or out of range")]
    InvalidEdge(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) has non-positive or non-finite weight {2}")]
    BadWeight(usize, usize, f64),
    #[error("edges {0} and {1} have equal weight")]
    TiedWeights(usize, usize),
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error("graph kind {0:?} cannot be built from a point cloud")]
    UnsupportedKind(GraphKind),
}

/// How violations of general position are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Complete,
    Gabriel,
    Delaunay2D,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Undirected graph with positive edge lengths; edges are stored with `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    kind: GraphKind,
}

impl WeightedGraph {
    pub fn new(n_vertices: usize, edges: Vec<Edge>, kind: GraphKind) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for e in edges {
            let (i, j) = (e.i.min(e.j), e.i.max(e.j));
            if i == j || j >= n_vertices {
                return Err(GraphError::InvalidEdge(e.i, e.j));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                return Err(GraphError::BadWeight(i, j, e.w));
            }
            if !seen.insert((i, j)) {
                return Err(GraphError::DuplicateEdge(i, j));
            }
            out.push(Edge { i, j, w: e.w });
        }
        Ok(WeightedGraph {
            n_vertices,
            edges: out,
            kind,
        })
    }

    /// Convenience constructor from `(i, j, w)` triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        WeightedGraph::new(
            n,
            triples.iter().map(|&(i, j, w)| Edge { i, j, w }).collect(),
            GraphKind::Custom,
        )
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.w).collect()
    }

    /// Edge endpoints as sorted `(i, j)` pairs.
    pub fn edge_set(&self) -> std::collections::BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    /// Same topology with new weights (one per edge, same order).
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self, GraphError> {
        assert_eq!(weights.len(), self.edges.len());
        WeightedGraph::new(
            self.n_vertices,
            self.edges
                .iter()
                .zip(weights)
                .map(|(e, &w)| Edge { i: e.i, j: e.j, w })
                .collect(),
            self.kind,
        )
    }

    /// Subgraph on the listed edge indices.
    pub fn subgraph(&self, edge_ids: &[usize]) -> WeightedGraph {
        WeightedGraph {
            n_vertices: self.n_vertices,
            edges: edge_ids.iter().map(|&e| self.edges[e]).collect(),
            kind: GraphKind::Custom,
        }
    }

    /// Adjacency lists of `(neighbour, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.i].push((e.j, k));
            adj[e.j].push((e.i, k));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n_vertices
    }

    /// Edge indices ordered by `(w, i, j)`.
    pub fn sorted_edge_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.edges.len()).collect();
        ids.sort_by(|&a, &b| edge_order(&self.edges[a], &self.edges[b]));
        ids
    }

    /// Returns the first pair of edges with equal weight, if any.
    pub fn find_tie(&self) -> Option<(usize, usize)> {
        let ids = self.sorted_edge_ids();
        ids.windows(2)
            .find(|w| self.edges[w[0]].w == self.edges[w[1]].w)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// Enforces distinct weights according to `mode`.
    ///
    /// Lenient mode adds `rank * eps` within each group of tied weights, where
    /// `eps = 1e-12 * (smallest positive gap between distinct weights)`, or
    /// `1e-12 * min weight` when all weights are equal. Ranks follow `(w, i, j)`.
    pub fn with_distinct_weights(&self, mode: TieMode) -> Result<Self, GraphError> {
        let Some((a, b)) = self.find_tie() else {
            return Ok(self.clone());
        };
        if mode == TieMode::Strict {
            return Err(GraphError::TiedWeights(a, b));
        }
        let ids = self.sorted_edge_ids();
        let ws: Vec<f64> = ids.iter().map(|&k| self.edges[k].w).collect();
        let min_gap = ws
            .windows(2)
            .map(|p| p[1] - p[0])
            .filter(|g| *g > 0.0)
            .fold(f64::INFINITY, f64::min);
        let basis = if min_gap.is_finite() { min_gap } else { ws[0] };
        let eps = 1e-12 * basis;

        let mut new_w = self.weights();
        let mut prev_orig = f64::NAN;
        let mut prev_new = f64::NEG_INFINITY;
        let mut rank = 0u32;
        for &k in &ids {
            let w = self.edges[k].w;
            rank = if w == prev_orig { rank + 1 } else { 0 };
            let mut cand = w + f64::from(rank) * eps;
            if cand <= prev_new {
                cand = prev_new.next_up();
            }
            new_w[k] = cand;
            prev_orig = w;
            prev_new = cand;
        }
        self.with_weights(&new_w)
    }

    /// Graphviz rendering with full-precision weights.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n_vertices {
            let _ = writeln!(s, "  {v};");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  {} -- {} [weight=\"{}\"];", e.i, e.j, fmt_g17(e.w));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn edge_order(a: &Edge, b: &Edge) -> Ordering {
    a.w.total_cmp(&b.w)
        .then(a.i.cmp(&b.i))
        .then(a.j.cmp(&b.j))
}

/// C-style `%.17g`.
pub fn fmt_g17(v: f64) -> String {
    if !v.is_finite() {
        return crate::floatfmt::fmt_csv(v);
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..17).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn min_positive_distance(pc: &PointCloud) -> f64 {
    let n = pc.len();
    let mut m = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(pc.point(i), pc.point(j));
            if d > 0.0 {
                m = m.min(d);
            }
        }
    }
    m
}

/// Edge length used for coincident points in lenient mode.
const COINCIDENT_FRACTION: f64 = 1e-6;

fn check_n(pc: &PointCloud, needed: usize) -> Result<(), GraphError> {
    if pc.len() < needed {
        return Err(GraphError::TooFewPoints {
            needed,
            got: pc.len(),
        });
    }
    Ok(())
}

/// For each point, the index of the first point at the same location.
fn coincidence_map(pc: &PointCloud, mode: TieMode) -> Result<Vec<usize>, GraphError> {
    let n = pc.len();
    let mut rep: Vec<usize> = (0..n).collect();
    let mut by_bits: HashMap<Vec<u64>, usize> = HashMap::with_capacity(n);
    for i in 0..n {
        // normalise -0.0 so it hashes like 0.0
        let key: Vec<u64> = pc.point(i).iter().map(|v| (v + 0.0).to_bits()).collect();
        if let Some(&first) = by_bits.get(&key) {
            if mode == TieMode::Strict {
                return Err(GraphError::DuplicatePoints(first, i));
            }
            rep[i] = first;
        } else {
            by_bits.insert(key, i);
        }
    }
    Ok(rep)
}

/// Builds a graph of the given kind; `Custom` has no point-cloud builder.
pub fn build_graph(kind: GraphKind, pc: &PointCloud, mode: TieMode) -> Result<WeightedGraph, GraphError> {
    match kind {
        GraphKind::Complete => build_complete(pc, mode),
        GraphKind::Gabriel => build_gabriel(pc, mode),
        GraphKind::Delaunay2D => build_delaunay_2d(pc, mode),
        GraphKind::Custom => Err(GraphError::UnsupportedKind(kind)),
    }
}

/// Every pair of points, weighted by Euclidean distance.
pub fn build_complete(pc: &PointCloud, mode: TieMode) -> Result<WeightedGraph, GraphError> {
    check_n(pc, 2)?;
    coincidence_map(pc, mode)?;
    let n = pc.len();
    let floor = COINCIDENT_FRACTION * min_positive_distance(pc);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(pc.point(i), pc.point(j));
            let w = if d > 0.0 { d } else { floor };
            edges.push(Edge { i, j, w });
        }
    }
    WeightedGraph::new(n, edges, GraphKind::Complete)?.with_distinct_weights(mode)
}

/// Gabriel graph: `(i, j)` is an edge iff no third point lies inside the
/// sphere with diameter `x_i x_j`.
///
/// Uses the identity `|x_k - m|^2 - r^2 = (x_k - x_i) . (x_k - x_j)` where `m`
/// and `r` are the centre and radius of that sphere.
pub fn build_gabriel(pc: &PointCloud, mode: TieMode) -> Result<WeightedGraph, GraphError> {
    check_n(pc, 2)?;
    let rep = coincidence_map(pc, mode)?;
    let n = pc.len();
    let pts = pc.points();
    let floor = COINCIDENT_FRACTION * min_positive_distance(pc);

    let pairs: Vec<(usize, usize)> = (0..n)
        .filter(|&i| rep[i] == i)
        .flat_map(|i| ((i + 1)..n).filter(|&j| rep[j] == j).map(move |j| (i, j)))
        .collect();

    let verdicts: Vec<Result<Option<Edge>, GraphError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&pts[i], &pts[j]);
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            let tol = 1e-12 * d2;
            for k in 0..n {
                if k == i || k == j || rep[k] != k {
                    continue;
                }
                let c = &pts[k];
                let dot: f64 = c
                    .iter()
                    .zip(a)
                    .zip(b)
                    .map(|((z, x), y)| (z - x) * (z - y))
                    .sum();
                if dot.abs() <= tol {
                    if mode == TieMode::Strict {
                        return Err(GraphError::DegenerateTie(i, j, k));
                    }
                } else if dot < 0.0 {
                    return Ok(None);
                }
            }
            Ok(Some(Edge { i, j, w: d2.sqrt() }))
        })
        .collect();

    let mut edges = Vec::new();
    for v in verdicts {
        if let Some(e) = v? {
            edges.push(e);
        }
    }
    edges.extend(coincident_edges(&rep, floor));
    WeightedGraph::new(n, edges, GraphKind::Gabriel)?.with_distinct_weights(mode)
}

fn coincident_edges(rep: &[usize], floor: f64) -> impl Iterator<Item = Edge> + '_ {
    rep.iter()
        .enumerate()
        .filter(|(i, r)| *i != **r)
        .map(move |(i, &r)| Edge { i: r, j: i, w: floor })
}

struct Vertex {
    x: f64,
    y: f64,
    idx: usize,
}

impl HasPosition for Vertex {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        Point2::new(self.x, self.y)
    }
}

/// 1-skeleton of the planar Delaunay triangulation.
pub fn build_delaunay_2d(pc: &PointCloud, mode: TieMode) -> Result<WeightedGraph, GraphError> {
    if pc.dim() != 2 {
        return Err(GraphError::DimensionNot2D(pc.dim()));
    }
    check_n(pc, 3)?;
    let rep = coincidence_map(pc, mode)?;
    let n = pc.len();
    let floor = COINCIDENT_FRACTION * min_positive_distance(pc);

    let mut tri: DelaunayTriangulation<Vertex> = DelaunayTriangulation::new();
    for (i, p) in pc.points().iter().enumerate() {
        if rep[i] != i {
            continue;
        }
        tri.insert(Vertex {
            x: p[0],
            y: p[1],
            idx: i,
        })
        .map_err(|e| GraphError::Triangulation(format!("{e:?}")))?;
    }

    let mut edges = Vec::with_capacity(3 * n);
    for e in tri.undirected_edges() {
        let [va, vb] = e.vertices();
        let (i, j) = (va.data().idx, vb.data().idx);
        if mode == TieMode::Strict {
            let de = e.as_directed();
            if let (Some(c), Some(d)) = (de.opposite_vertex(), de.rev().opposite_vertex()) {
                let quad = [va.data(), vb.data(), c.data(), d.data()];
                if is_cocircular(&quad) {
                    let mut ids: Vec<usize> = quad.iter().map(|v| v.idx).collect();
                    ids.sort_unstable();
                    return Err(GraphError::CocircularDegeneracy(ids));
                }
            }
        }
        edges.push(Edge {
            i,
            j,
            w: euclidean(pc.point(i), pc.point(j)),
        });
    }
    edges.extend(coincident_edges(&rep, floor));
    WeightedGraph::new(n, edges, GraphKind::Delaunay2D)?.with_distinct_weights(mode)
}

/// In-circle determinant of `q[0..3]` against `q[3]`, compared with a
/// tolerance scaled to the quadruple's extent.
fn is_cocircular(q: &[&Vertex; 4]) -> bool {
    let d = q[3];
    let rows: Vec<[f64; 3]> = q[..3]
        .iter()
        .map(|v| {
            let (dx, dy) = (v.x - d.x, v.y - d.y);
            [dx, dy, dx * dx + dy * dy]
        })
        .collect();
    let ext = rows
        .iter()
        .map(|r| r[0].abs().max(r[1].abs()))
        .fold(0.0, f64::max);
    let det = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
        - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
        + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
    det.abs() <= 1e-10 * ext.powi(4)
}
