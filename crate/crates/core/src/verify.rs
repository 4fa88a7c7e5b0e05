//! Randomized property suite over the whole library.
//!
//! Each check runs a number of independent seeded trials in parallel and
//! counts failures. `Quick` mode uses fewer and smaller trials than `Full`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::average_linkage;
use crate::cone::{
    comparison_triangle_test, cone_distance_raw, cone_geodesic_point, g_beta_raw, gamma0, theta0,
    Beta,
};
use crate::dataio::PointCloud;
use crate::geodesics::{
    alpha_star, alpha_transform, apsp_floyd, apsp_johnson, descending_grid, geodesics_at, mst_backward,
    mst_forward, GeodesicOptions, GeodesicResult,
};
use crate::graphs::{
    build_complete, build_delaunay_2d, build_gabriel, GraphKind, TieMode, WeightedGraph,
};
use crate::matrix::Matrix;
use crate::rng::task_rng;
use crate::stats::{cdf_median, frechet_objective, population_median_dispersion, rank_median, FrechetParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: VerifyMode,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn total_trials(&self) -> usize {
        self.checks.iter().map(|c| c.trials).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn n_failed_checks(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

type Trial = Result<(), String>;

/// Runs `trials` seeded trials of `f` in parallel.
pub fn run_check<F>(name: &str, trials: usize, seed: u64, f: F) -> CheckOutcome
where
    F: Fn(&mut ChaCha8Rng) -> Trial + Sync,
{
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| f(&mut task_rng(seed, name, t as u64)))
        .collect();
    let failures = results.iter().filter(|r| r.is_err()).count();
    let first_failure = results
        .iter()
        .enumerate()
        .find_map(|(t, r)| r.as_ref().err().map(|e| format!("trial {t}: {e}")));
    CheckOutcome {
        name: name.to_string(),
        trials,
        failures,
        first_failure,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Trial {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Random-instance generators shared by the suite, tests and benchmarks.
pub mod gen {
    use super::*;

    pub fn uniform_points<R: Rng>(rng: &mut R, n: usize, d: usize) -> PointCloud {
        let pts = (0..n)
            .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
            .collect();
        PointCloud::new(pts, None, "uniform").expect("non-empty")
    }

    pub fn normal_points<R: Rng>(rng: &mut R, n: usize, d: usize) -> PointCloud {
        let pts = (0..n)
            .map(|_| (0..d).map(|_| StandardNormal.sample(rng)).collect())
            .collect();
        PointCloud::new(pts, None, "normal").expect("non-empty")
    }

    /// Random tree (each vertex attaches to an earlier one) plus `extra`
    /// random chords, with weights uniform on `(0.1, 1.1)`.
    pub fn connected_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> WeightedGraph {
        let mut seen = BTreeSet::new();
        let mut triples = Vec::new();
        for v in 1..n {
            let u = rng.random_range(0..v);
            seen.insert((u, v));
            triples.push((u, v, 0.1 + rng.random::<f64>()));
        }
        let max_edges = n * (n - 1) / 2;
        let mut added = 0;
        while added < extra && seen.len() < max_edges {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b || !seen.insert((a.min(b), a.max(b))) {
                continue;
            }
            triples.push((a.min(b), a.max(b), 0.1 + rng.random::<f64>()));
            added += 1;
        }
        WeightedGraph::from_triples(n, &triples).expect("valid random graph")
    }

    pub fn tree<R: Rng>(rng: &mut R, n: usize) -> WeightedGraph {
        connected_graph(rng, n, 0)
    }

    /// Complete graph on `n` vertices with i.i.d. uniform weights.
    pub fn complete_graph<R: Rng>(rng: &mut R, n: usize) -> WeightedGraph {
        let mut triples = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                triples.push((i, j, 0.1 + rng.random::<f64>()));
            }
        }
        WeightedGraph::from_triples(n, &triples).expect("valid complete graph")
    }
}

/// Every labelled tree on `n >= 2` vertices, decoded from Prüfer sequences.
pub fn prufer_trees(n: usize) -> impl Iterator<Item = Vec<(usize, usize)>> {
    let len = n.saturating_sub(2);
    let total = n.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut seq = Vec::with_capacity(len);
        for _ in 0..len {
            seq.push(code % n);
            code /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges
    })
}

fn sorted_weights(g: &WeightedGraph, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut w: Vec<f64> = edges
        .iter()
        .map(|&(i, j)| {
            g.edges()
                .iter()
                .find(|e| e.i == i && e.j == j)
                .expect("edge of the complete graph")
                .w
        })
        .collect();
    w.sort_by(f64::total_cmp);
    w
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn check_mst_graph_kinds(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(3..=max_n);
    let pc = gen::uniform_points(rng, n, 2);
    let c = build_complete(&pc, TieMode::Strict).map_err(err)?;
    let g = build_gabriel(&pc, TieMode::Strict).map_err(err)?;
    let d = build_delaunay_2d(&pc, TieMode::Strict).map_err(err)?;
    let tc = mst_forward(&c).map_err(err)?.edge_set(&c);
    let tg = mst_forward(&g).map_err(err)?.edge_set(&g);
    let td = mst_forward(&d).map_err(err)?.edge_set(&d);
    ensure(tc == tg && tg == td, || format!("MSTs differ for n={n}"))
}

fn check_mst_forward_backward(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(2..=max_n);
    let extra = rng.random_range(0..=n * 2);
    let g = gen::connected_graph(rng, n, extra);
    let f = mst_forward(&g).map_err(err)?;
    let b = mst_backward(&g).map_err(err)?;
    ensure(f.edge_set(&g) == b.edge_set(&g), || format!("forward != backward, n={n}"))
}

fn check_mst_dominance(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(3..=max_n);
    let g = gen::complete_graph(rng, n);
    let mst = mst_forward(&g).map_err(err)?;
    let star = mst.ordered_weights.clone();
    let mst_set: Vec<(usize, usize)> = mst.edge_set(&g).into_iter().collect();
    for t in prufer_trees(n) {
        let mut ts = t.clone();
        ts.sort_unstable();
        if ts == mst_set {
            continue;
        }
        let w = sorted_weights(&g, &t);
        let dominated = star.iter().zip(&w).all(|(a, b)| a <= b);
        let strict = star.iter().zip(&w).any(|(a, b)| a < b);
        if !(dominated && strict) {
            return Err(format!("tree {t:?} is not dominated by the MST"));
        }
    }
    Ok(())
}

fn check_mst_monotone(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(2..=max_n);
    let g = gen::connected_graph(rng, n, n);
    let base = mst_forward(&g).map_err(err)?.edge_set(&g);
    for f in [|w: f64| w * w, |w: f64| (1.0 + w).ln()] {
        let h = g.with_weights(&g.weights().into_iter().map(f).collect::<Vec<_>>()).map_err(err)?;
        if mst_forward(&h).map_err(err)?.edge_set(&h) != base {
            return Err("MST changed under a monotone transform".into());
        }
    }
    Ok(())
}

fn check_alpha_chain(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(4..=max_n);
    let pc = gen::uniform_points(rng, n, 2);
    let g = build_complete(&pc, TieMode::Strict).map_err(err)?;
    let mst = mst_forward(&g).map_err(err)?.edge_set(&g);
    let mut prev: Option<BTreeSet<(usize, usize)>> = None;
    for alpha in descending_grid(-5.0, 1) {
        let gr = geodesics_at(&g, alpha, GeodesicOptions::lenient()).map_err(err)?;
        let cur = gr.geodesic_edge_set();
        if !cur.is_superset(&mst) {
            return Err(format!("MST edge missing from the geodesic subgraph at alpha={alpha}"));
        }
        if let Some(p) = &prev {
            if !cur.is_subset(p) {
                return Err(format!("subgraph at alpha={alpha} is not nested"));
            }
        }
        prev = Some(cur);
    }
    match alpha_star(&g, -30.0, GeodesicOptions::lenient()).map_err(err)? {
        Some(a) => {
            let at = geodesics_at(&g, a, GeodesicOptions::lenient()).map_err(err)?;
            ensure(at.geodesic_edge_set() == mst, || format!("subgraph at alpha*={a} is not the MST"))
        }
        None => Ok(()),
    }
}

fn check_apsp_cross(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(2..=max_n);
    let extra = rng.random_range(0..=n * 3);
    let g = gen::connected_graph(rng, n, extra);
    let alpha = rng.random_range(-3.0..1.0);
    let ag = alpha_transform(&g, alpha).map_err(err)?;
    let f = apsp_floyd(&ag);
    let j = apsp_johnson(&ag).map_err(err)?;
    for (a, b) in f.dist.as_slice().iter().zip(j.dist.as_slice()) {
        if !rel_close(*a, *b, 1e-9) {
            return Err(format!("floyd {a} vs johnson {b}"));
        }
    }
    Ok(())
}

/// Symmetry, zero diagonal, triangle inequality, edge rule and betweenness
/// bookkeeping of one geodesic result.
pub fn geodesic_invariants(gr: &GeodesicResult) -> Trial {
    let n = gr.n();
    let d = &gr.dist;
    for i in 0..n {
        ensure(d[(i, i)] == 0.0, || format!("dist[{i}][{i}] != 0"))?;
        for j in 0..n {
            ensure(d[(i, j)] == d[(j, i)], || format!("asymmetric at ({i},{j})"))?;
            for k in 0..n {
                let bound = d[(i, j)] + d[(j, k)];
                ensure(d[(i, k)] <= bound * (1.0 + 1e-9), || {
                    format!("triangle inequality fails at ({i},{j},{k})")
                })?;
            }
        }
    }
    let geo: BTreeSet<usize> = gr.geodesic_edges.iter().copied().collect();
    for (e, &(i, j)) in gr.edges.iter().enumerate() {
        let is_geo = rel_close(d[(i, j)], gr.weights_alpha[e], 1e-12);
        ensure(is_geo == geo.contains(&e), || format!("edge {e} misclassified"))?;
    }
    let mut path_edges = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = gr.path_edges(i, j).ok_or("missing path")?;
            let len: f64 = p.iter().map(|&e| gr.weights_alpha[e]).sum();
            ensure(rel_close(len, d[(i, j)], 1e-9), || format!("path {i}-{j} has wrong length"))?;
            path_edges += p.len() as u64;
        }
    }
    ensure(path_edges == gr.total_betweenness(), || "betweenness sum mismatch".into())
}

fn check_geodesic_invariants(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(2..=max_n);
    let g = gen::connected_graph(rng, n, n);
    let alpha = rng.random_range(-4.0..=1.0);
    let gr = geodesics_at(&g, alpha, GeodesicOptions::lenient()).map_err(err)?;
    geodesic_invariants(&gr)
}

fn random_beta<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.random_range(-3.0..3.0))
}

fn check_cone_identity(rng: &mut ChaCha8Rng, samples: usize) -> Trial {
    for _ in 0..samples {
        let beta = random_beta(rng);
        let d = rng.random_range(0.0..3.0) * beta;
        let lhs = cone_distance_raw(1.0, 1.0, d, beta);
        let rhs = 2.0 * g_beta_raw(d, Beta::new(beta).map_err(err)?);
        ensure((lhs - rhs).abs() <= 1e-12, || format!("cone {lhs} vs 2g {rhs} at d={d}, beta={beta}"))?;
    }
    Ok(())
}

fn graph_metric<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Result<Matrix, String> {
    let g = gen::connected_graph(rng, n, extra);
    Ok(geodesics_at(&g, 0.0, GeodesicOptions::lenient()).map_err(err)?.dist)
}

fn check_g_beta_metric(rng: &mut ChaCha8Rng, samples: usize) -> Trial {
    let n = rng.random_range(3..=20);
    let d = graph_metric(rng, n, n)?;
    let beta = Beta::new(rng.random_range(0.05..2.0)).map_err(err)?;
    for _ in 0..samples {
        let (i, j, k) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
        let g = |a: usize, b: usize| g_beta_raw(d[(a, b)], beta);
        ensure(g(i, k) <= g(i, j) + g(j, k) + 1e-12, || format!("g_beta triangle ({i},{j},{k})"))?;
    }
    Ok(())
}

fn check_cone_triangle(rng: &mut ChaCha8Rng, samples: usize) -> Trial {
    let n = rng.random_range(2..=20);
    let d = graph_metric(rng, n, 0)?;
    let beta = rng.random_range(0.05..3.0);
    for _ in 0..samples {
        let p: Vec<(usize, f64)> = (0..3)
            .map(|_| (rng.random_range(0..n), rng.random::<f64>()))
            .collect();
        let c = |a: (usize, f64), b: (usize, f64)| cone_distance_raw(a.1, b.1, d[(a.0, b.0)], beta);
        let (x, y, z) = (p[0], p[1], p[2]);
        ensure(c(x, z) <= c(x, y) + c(y, z) + 1e-9, || "cone triangle inequality".into())?;
    }
    Ok(())
}

/// A base space for cone comparison tests: distances between positions and
/// the point at a given distance along the geodesic between two positions.
trait BaseSpace {
    type Pos: Copy;
    fn dist(&self, a: Self::Pos, b: Self::Pos) -> f64;
    /// Distance from `a` to the point at distance `t` from `b` towards `c`.
    fn dist_to_geodesic_point(&self, a: Self::Pos, b: Self::Pos, c: Self::Pos, t: f64) -> f64;
}

/// Vertices of a tree metric; points on a tree geodesic are handled via
/// the projection of `a` onto the path `b`–`c`.
struct TreeMetric(Matrix);

impl BaseSpace for TreeMetric {
    type Pos = usize;
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.0[(a, b)]
    }
    fn dist_to_geodesic_point(&self, a: usize, b: usize, c: usize, t: f64) -> f64 {
        let (ab, ac, bc) = (self.dist(a, b), self.dist(a, c), self.dist(b, c));
        let along = 0.5 * (ab + bc - ac);
        let off = 0.5 * (ab + ac - bc);
        off.max(0.0) + (t - along).abs()
    }
}

/// Circle of circumference `len`, positions in `[0, len)`.
struct Circle {
    len: f64,
}

impl Circle {
    fn wrap(&self, u: f64) -> f64 {
        u.rem_euclid(self.len)
    }
}

impl BaseSpace for Circle {
    type Pos = f64;
    fn dist(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs() % self.len;
        d.min(self.len - d)
    }
    fn dist_to_geodesic_point(&self, a: f64, b: f64, c: f64, t: f64) -> f64 {
        let fwd = self.wrap(c - b);
        let x = if fwd <= self.len / 2.0 { b + t } else { b - t };
        self.dist(a, self.wrap(x))
    }
}

/// One comparison test on a cone triangle `a, b, c` with `x` at fraction
/// `lambda` of the cone geodesic from `b` to `c`.
fn cone_comparison<S: BaseSpace>(
    space: &S,
    beta: f64,
    pts: [(S::Pos, f64); 3],
    lambda: f64,
) -> Result<f64, String> {
    let [(a, sa), (b, sb), (c, sc)] = pts;
    let cd = |p: S::Pos, sp: f64, q: S::Pos, sq: f64| cone_distance_raw(sp, sq, space.dist(p, q), beta);
    let d_ab = cd(a, sa, b, sb);
    let d_ac = cd(a, sa, c, sc);
    let d_bc = cd(b, sb, c, sc);
    let (rx, pos) = cone_geodesic_point(sb, sc, space.dist(b, c), beta, lambda);
    let base_ax = space.dist_to_geodesic_point(a, b, c, pos);
    let d_ax = cone_distance_raw(sa, rx, base_ax, beta);
    let d_bx = lambda * d_bc;
    let out = comparison_triangle_test(d_ab, d_ac, d_bc, d_bx, d_ax, 0.0).map_err(err)?;
    if out.pass {
        Ok(out.margin)
    } else {
        Err(format!("comparison margin {} < 0", out.margin))
    }
}

fn check_cone_over_tree(rng: &mut ChaCha8Rng, samples: usize) -> Trial {
    let n = rng.random_range(2..=15);
    let space = TreeMetric(graph_metric(rng, n, 0)?);
    let beta = rng.random_range(0.05..3.0);
    for _ in 0..samples {
        let pts = [(); 3].map(|_| (rng.random_range(0..n), rng.random::<f64>()));
        cone_comparison(&space, beta, pts, rng.random())?;
    }
    Ok(())
}

/// Cone over a unit `len`-cycle (CAT(k) with `k = (2 pi / len)^2`) with
/// `beta <= pi / sqrt(k) = len / 2`.
pub fn cone_over_cycle_trial<R: Rng>(rng: &mut R, len: usize) -> Result<f64, String> {
    let space = Circle { len: len as f64 };
    let k = (2.0 * PI / len as f64).powi(2);
    let beta_max = PI / k.sqrt();
    let beta = rng.random_range(0.05..=1.0) * beta_max;
    let pts = [(); 3].map(|_| (rng.random_range(0.0..len as f64), rng.random::<f64>()));
    cone_comparison(&space, beta, pts, rng.random())
}

fn check_cone_over_cycle(rng: &mut ChaCha8Rng, samples: usize) -> Trial {
    let len = rng.random_range(3..=12);
    for _ in 0..samples {
        cone_over_cycle_trial(rng, len)?;
    }
    Ok(())
}

fn check_theta0(_rng: &mut ChaCha8Rng, grid: usize) -> Trial {
    ensure((gamma0(0.0).map_err(err)? - 1.0).abs() < 1e-12, || "gamma0(0) != 1".into())?;
    for g in [2.0, 2.5, 5.0] {
        ensure(theta0(g).map_err(err)? == PI / 2.0, || format!("theta0({g}) != pi/2"))?;
    }
    for k in 0..=grid {
        let t = PI / 2.0 * k as f64 / grid as f64;
        let back = theta0(gamma0(t).map_err(err)?).map_err(err)?;
        ensure((back - t).abs() < 1e-9, || format!("theta0(gamma0({t})) = {back}"))?;
    }
    let mut prev = 0.0;
    for k in 0..=grid {
        let g = 1.0 + k as f64 / grid as f64;
        let t = theta0(g).map_err(err)?;
        ensure(t >= prev, || format!("theta0 decreases at {g}"))?;
        prev = t;
    }
    Ok(())
}

fn check_medians(rng: &mut ChaCha8Rng, _: usize) -> Trial {
    for n in 3..=11 {
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        x.sort_by(f64::total_cmp);
        let want_rank = if n % 2 == 1 { x[(n + 1) / 2 - 1] } else { x[(n + 2) / 2 - 1] };
        let want_cdf = if n % 2 == 1 {
            x[(n + 1) / 2 - 1]
        } else {
            (x[n / 2 - 1] + x[(n + 2) / 2 - 1]) / 2.0
        };
        ensure(rank_median(&x).map_err(err)? == want_rank, || format!("rank median, n={n}"))?;
        ensure(cdf_median(&x).map_err(err)? == want_cdf, || format!("cdf median, n={n}"))?;
    }
    Ok(())
}

fn check_population_dispersion(rng: &mut ChaCha8Rng, _: usize) -> Trial {
    let n = 20_001;
    let grid: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let dens = vec![1.0; n];
    let m: f64 = rng.random();
    let v = population_median_dispersion(&grid, &grid, &dens, m).map_err(err)?;
    let want = 1.0 / 3.0 - m * (1.0 - m);
    ensure((v - want).abs() < 1e-6, || format!("dispersion at {m}: {v} vs {want}"))
}

/// Direct UPGMA: cluster distance recomputed from leaf pairs at every step.
pub fn upgma_oracle(d: &Matrix) -> Vec<(usize, usize, f64)> {
    let n = d.n();
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut out = Vec::new();
    let mut next = n;
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let (ia, la) = &clusters[a];
                let (ib, lb) = &clusters[b];
                let sum: f64 = la.iter().flat_map(|&i| lb.iter().map(move |&j| (i, j))).map(|(i, j)| d[(i, j)]).sum();
                let h = sum / (la.len() * lb.len()) as f64;
                let key = ((*ia).min(*ib), (*ia).max(*ib));
                let better = match best {
                    None => true,
                    Some((bh, l, r, _, _)) => h < bh || (h == bh && key < (l, r)),
                };
                if better {
                    best = Some((h, key.0, key.1, a, b));
                }
            }
        }
        let (h, l, r, a, b) = best.expect("two clusters");
        let mut merged = clusters[a].1.clone();
        merged.extend(clusters[b].1.iter().copied());
        clusters.remove(b);
        clusters.remove(a);
        clusters.push((next, merged));
        next += 1;
        out.push((l, r, h));
    }
    out
}

fn check_upgma(rng: &mut ChaCha8Rng, _: usize) -> Trial {
    let n = rng.random_range(2..=8);
    // small integers make every cluster sum exact, so heights must agree bit for bit
    let mut d = Matrix::filled(n, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(1..=12) as f64;
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    let dg = average_linkage(&d).map_err(err)?;
    let got: Vec<(usize, usize, f64)> = dg.merges.iter().map(|m| (m.left, m.right, m.height)).collect();
    ensure(got == upgma_oracle(&d), || format!("merges differ: {got:?}"))?;
    let mut seen = dg.leaf_order.clone();
    seen.sort_unstable();
    ensure(seen == (0..n).collect::<Vec<_>>(), || "leaf order is not a permutation".into())?;
    // relabelling keeps heights when there are no ties
    let mut d = Matrix::filled(n, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(0.1..1.0);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    let dg = average_linkage(&d).map_err(err)?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let dp = d.permuted(&perm);
    let mut h1: Vec<f64> = dg.merges.iter().map(|m| m.height).collect();
    let mut h2: Vec<f64> = average_linkage(&dp).map_err(err)?.merges.iter().map(|m| m.height).collect();
    h1.sort_by(f64::total_cmp);
    h2.sort_by(f64::total_cmp);
    ensure(h1.iter().zip(&h2).all(|(a, b)| rel_close(*a, *b, 1e-12)), || {
        "heights changed under relabelling".into()
    })
}

fn check_frechet_permutation(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(3..=max_n);
    let pc = gen::normal_points(rng, n, 2);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let permuted = PointCloud::new(perm.iter().map(|&i| pc.point(i).to_vec()).collect(), None, "p")
        .map_err(err)?;
    let alpha = rng.random_range(-2.0..=0.0);
    let params = FrechetParams::new(alpha, Beta::new(rng.random_range(0.3..3.0)).map_err(err)?, 2.0)
        .map_err(err)?;
    let f = |pc: &PointCloud| -> Result<Vec<f64>, String> {
        let g = build_complete(pc, TieMode::Lenient).map_err(err)?;
        let gr = geodesics_at(&g, alpha, GeodesicOptions::lenient()).map_err(err)?;
        frechet_objective(&gr, &params).map_err(err)
    };
    let (a, b) = (f(&pc)?, f(&permuted)?);
    for (k, &i) in perm.iter().enumerate() {
        ensure(rel_close(a[i], b[k], 1e-9), || format!("f differs at vertex {i}"))?;
    }
    Ok(())
}

fn check_vertex_mean(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(2..=max_n);
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let pc = PointCloud::new(x.iter().map(|&v| vec![v]).collect(), None, "line").map_err(err)?;
    let g = build_complete(&pc, TieMode::Lenient).map_err(err)?;
    let gr = geodesics_at(&g, 0.0, GeodesicOptions::lenient()).map_err(err)?;
    let f = frechet_objective(&gr, &FrechetParams::euclidean(0.0)).map_err(err)?;
    let best = (0..n).min_by(|&a, &b| f[a].total_cmp(&f[b])).expect("n > 0");
    let mean = x.iter().sum::<f64>() / n as f64;
    let nearest = x.iter().map(|v| (v - mean).abs()).fold(f64::INFINITY, f64::min);
    ensure((x[best] - mean).abs() <= nearest + 1e-9, || "minimizer is not nearest to the mean".into())
}

fn check_beta_floor(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(2..=max_n);
    let pc = gen::uniform_points(rng, n, 2);
    let g = build_complete(&pc, TieMode::Lenient).map_err(err)?;
    let gr = geodesics_at(&g, 0.0, GeodesicOptions::lenient()).map_err(err)?;
    let min_d = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| gr.dist[(i, j)])
        .fold(f64::INFINITY, f64::min);
    let ladder = [Beta::new(0.5 * min_d).map_err(err)?, Beta::INFINITE];
    let scan = crate::selection::beta_scan(&gr, &ladder, 2.0).map_err(err)?;
    ensure(scan.local_min_count[0] == n, || format!("count {} != n={n}", scan.local_min_count[0]))?;
    ensure(scan.local_min_count[1] >= 1, || "no minimum at beta=inf".into())
}

fn check_graph_kinds_nested(rng: &mut ChaCha8Rng, max_n: usize) -> Trial {
    let n = rng.random_range(3..=max_n);
    let pc = gen::uniform_points(rng, n, 2);
    let g = build_gabriel(&pc, TieMode::Strict).map_err(err)?.edge_set();
    let d = build_delaunay_2d(&pc, TieMode::Strict).map_err(err)?.edge_set();
    let c = build_complete(&pc, TieMode::Strict).map_err(err)?;
    ensure(g.is_subset(&d), || "Gabriel edge missing from Delaunay".into())?;
    ensure(c.kind() == GraphKind::Complete && c.n_edges() == n * (n - 1) / 2, || "complete graph size".into())
}

/// Runs every property check.
pub fn run_suite(mode: VerifyMode, seed: u64) -> VerifyReport {
    let full = mode == VerifyMode::Full;
    let s = |q: usize, f: usize| if full { f } else { q };
    let mut checks = Vec::new();
    let mut add = |name: &str, trials: usize, param: usize, f: fn(&mut ChaCha8Rng, usize) -> Trial| {
        checks.push(run_check(name, trials, seed, |rng| f(rng, param)));
    };
    add("mst_same_for_complete_gabriel_delaunay", s(50, 200), 50, check_mst_graph_kinds);
    add("mst_forward_equals_backward", s(100, 500), 40, check_mst_forward_backward);
    add("mst_ordered_weight_dominance", s(10, 40), s(6, 7), check_mst_dominance);
    add("mst_invariant_under_monotone_maps", s(50, 200), 30, check_mst_monotone);
    add("gabriel_within_delaunay", s(50, 200), 60, check_graph_kinds_nested);
    add("alpha_chain_nested_and_reaches_mst", s(10, 50), s(15, 30), check_alpha_chain);
    add("floyd_matches_johnson", s(30, 100), s(60, 200), check_apsp_cross);
    add("geodesic_result_invariants", s(30, 100), 25, check_geodesic_invariants);
    add("cone_unit_radius_is_twice_g_beta", s(10, 100), 1000, check_cone_identity);
    add("g_beta_of_metric_is_metric", s(10, 100), 1000, check_g_beta_metric);
    add("cone_triangle_inequality_over_trees", s(10, 100), 1000, check_cone_triangle);
    add("cone_over_tree_is_cat0", s(10, 50), 100, check_cone_over_tree);
    add("cone_over_short_cycle_is_cat0", s(10, 50), 100, check_cone_over_cycle);
    add("theta0_inverts_gamma0", 1, s(50, 400), check_theta0);
    add("onedim_medians_match_order_statistics", s(20, 100), 0, check_medians);
    add("uniform_median_dispersion", s(10, 50), 0, check_population_dispersion);
    add("upgma_matches_direct_oracle", s(100, 500), 0, check_upgma);
    add("frechet_permutation_equivariant", s(10, 50), 25, check_frechet_permutation);
    add("euclidean_vertex_mean_nearest_sample_mean", s(30, 100), 30, check_vertex_mean);
    add("beta_below_min_distance_counts_all", s(20, 100), 30, check_beta_floor);
    VerifyReport { mode, seed, checks }
}
