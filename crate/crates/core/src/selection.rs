//! Parameter selection: scans over `alpha` and `beta`, and cross-validated
//! weighted k-nearest-neighbour classification on the `(alpha, beta)` grid.

use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::{g_beta_raw, Beta};
use crate::dataio::{euclidean, PointCloud};
use crate::floatfmt::fmt_csv;
use crate::geodesics::{
    alpha_transform, geodesic_subgraph, ApspAlgorithm, GeodesicError, GeodesicOptions,
    GeodesicResult,
};
use crate::graphs::{build_graph, GraphError, GraphKind, TieMode, WeightedGraph};
use crate::matrix::Matrix;
use crate::rng::task_rng;
use crate::stats::{dispersions, local_minima, objective_from_dist};

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("grid must be strictly increasing with a constant step")]
    NonUniformGrid,
    #[error("grid must be non-empty and sorted increasingly")]
    UnsortedGrid,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("gamma must be at least 1, got {0}")]
    InvalidGamma(f64),
    #[error("the point cloud has no labels")]
    MissingLabels,
    #[error("at least two classes are needed")]
    SingleClass,
    #[error("k = {k} exceeds the {n_train} training points")]
    KTooLarge { k: usize, n_train: usize },
    #[error("k and the number of repeats must be positive")]
    ZeroCount,
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Data(#[from] crate::dataio::DataError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `lo, lo + step, ...` up to `hi`, rounded to nine decimals so that decimal
/// steps land on exact grid values.
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0, "grid step must be positive");
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

/// `{-5, -4.8, ..., 1}`.
pub fn default_alpha_grid() -> Vec<f64> {
    linear_grid(-5.0, 1.0, 0.2)
}

/// `base * ratio^k` for `k = 0..count`, followed by infinity.
pub fn geometric_ladder(base: f64, ratio: f64, count: usize) -> Vec<Beta> {
    let mut out: Vec<Beta> = (0..count)
        .map(|k| Beta::new(base * ratio.powi(k as i32)).expect("positive ladder"))
        .collect();
    out.push(Beta::INFINITE);
    out
}

/// `{2^-6, ..., 2^5, inf}`.
pub fn default_beta_ladder() -> Vec<Beta> {
    geometric_ladder(2f64.powi(-6), 2.0, 12)
}

fn check_uniform(grid: &[f64]) -> Result<f64, SelectionError> {
    if grid.is_empty() || grid.iter().any(|a| !a.is_finite()) {
        return Err(SelectionError::NonUniformGrid);
    }
    if grid.len() == 1 {
        return Ok(0.0);
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0) || grid.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
        return Err(SelectionError::NonUniformGrid);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaScan {
    pub grid: Vec<f64>,
    pub step: f64,
    #[serde(with = "crate::floatfmt::vec")]
    pub s0_sq: Vec<f64>,
    #[serde(with = "crate::floatfmt::vec")]
    pub s1_sq: Vec<f64>,
    pub n_edges: Vec<usize>,
    pub total_betweenness: Vec<u64>,
    #[serde(with = "crate::floatfmt::vec")]
    pub weighted_betweenness: Vec<f64>,
    /// Central second difference of `-ln s1`; interior points only.
    #[serde(with = "crate::floatfmt::vec_option")]
    pub neg_log_s1_dd: Vec<Option<f64>>,
    /// Backward first difference of the total betweenness.
    #[serde(with = "crate::floatfmt::vec_option")]
    pub betweenness_diff: Vec<Option<f64>>,
    pub threshold_sd: f64,
    /// Grid values at the detected peaks of `neg_log_s1_dd`.
    pub peaks: Vec<f64>,
    /// One grid step below each peak.
    pub selected: Vec<f64>,
}

impl AlphaScan {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "alpha,s0_sq,s1_sq,n_edges,total_betweenness,weighted_betweenness,neg_log_s1_dd,betweenness_diff"
        )?;
        let opt = |v: Option<f64>| v.map(fmt_csv).unwrap_or_default();
        for k in 0..self.grid.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt_csv(self.grid[k]),
                fmt_csv(self.s0_sq[k]),
                fmt_csv(self.s1_sq[k]),
                self.n_edges[k],
                self.total_betweenness[k],
                fmt_csv(self.weighted_betweenness[k]),
                opt(self.neg_log_s1_dd[k]),
                opt(self.betweenness_diff[k]),
            )?;
        }
        Ok(())
    }
}

/// `-(l[k-1] - 2 l[k] + l[k+1]) / h^2` with `l = ln s1 = ln(s1^2) / 2`.
pub fn neg_log_second_difference(s1_sq: &[f64], h: f64) -> Vec<Option<f64>> {
    let l: Vec<f64> = s1_sq.iter().map(|s| 0.5 * s.ln()).collect();
    (0..l.len())
        .map(|k| {
            (k > 0 && k + 1 < l.len()).then(|| -(l[k - 1] - 2.0 * l[k] + l[k + 1]) / (h * h))
        })
        .collect()
}

/// Indices of strict interior local maxima exceeding `mean + threshold_sd * sd`
/// of the defined values. A series that is constant up to rounding has none.
pub fn detect_peaks(series: &[Option<f64>], threshold_sd: f64) -> Vec<usize> {
    let vals: Vec<f64> = series.iter().flatten().copied().collect();
    if vals.len() < 3 {
        return Vec::new();
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
    let sd = var.sqrt();
    if sd <= 1e-9 * (1.0 + mean.abs()) {
        // flat up to rounding
        return Vec::new();
    }
    let cut = mean + threshold_sd * sd;
    (1..series.len().saturating_sub(1))
        .filter(|&k| match (series[k - 1], series[k], series[k + 1]) {
            (Some(a), Some(b), Some(c)) => b > a && b >= c && b > cut,
            _ => false,
        })
        .collect()
}

/// Geodesic summaries at every `alpha` of a uniform increasing grid.
///
/// Ties in edge weights are always broken leniently so that betweenness is
/// well defined on real data.
pub fn alpha_scan(
    g: &WeightedGraph,
    grid: &[f64],
    threshold_sd: f64,
    algorithm: ApspAlgorithm,
) -> Result<AlphaScan, SelectionError> {
    let h = check_uniform(grid)?;
    if !g.is_connected() {
        return Err(SelectionError::Disconnected);
    }
    let g = g.with_distinct_weights(TieMode::Lenient)?;
    let opts = GeodesicOptions {
        algorithm,
        ties: TieMode::Lenient,
    };
    let rows: Vec<(f64, f64, usize, u64, f64)> = grid
        .par_iter()
        .map(|&alpha| {
            let gr = geodesic_subgraph(&alpha_transform(&g, alpha)?, opts)?;
            let (s0, s1) = dispersions(&gr.dist, Beta::INFINITE);
            Ok((
                s0,
                s1,
                gr.geodesic_edges.len(),
                gr.total_betweenness(),
                gr.weighted_betweenness(),
            ))
        })
        .collect::<Result<_, GeodesicError>>()?;
    let s0_sq: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let s1_sq: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let total_betweenness: Vec<u64> = rows.iter().map(|r| r.3).collect();
    let neg_log_s1_dd = neg_log_second_difference(&s1_sq, h);
    let betweenness_diff = (0..grid.len())
        .map(|k| {
            (k > 0).then(|| (total_betweenness[k] as f64 - total_betweenness[k - 1] as f64) / h)
        })
        .collect();
    let peak_ids = detect_peaks(&neg_log_s1_dd, threshold_sd);
    let peaks = peak_ids.iter().map(|&k| grid[k]).collect();
    let selected = peak_ids.iter().map(|&k| grid[k - 1]).collect();
    Ok(AlphaScan {
        grid: grid.to_vec(),
        step: h,
        s0_sq,
        s1_sq,
        n_edges: rows.iter().map(|r| r.2).collect(),
        total_betweenness,
        weighted_betweenness: rows.iter().map(|r| r.4).collect(),
        neg_log_s1_dd,
        betweenness_diff,
        threshold_sd,
        peaks,
        selected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaScan {
    pub grid: Vec<Beta>,
    pub gamma: f64,
    pub local_min_count: Vec<usize>,
    pub local_min_vertices: Vec<Vec<usize>>,
    #[serde(with = "crate::floatfmt::vec")]
    pub s0_sq: Vec<f64>,
    #[serde(with = "crate::floatfmt::vec")]
    pub s1_sq: Vec<f64>,
    /// Divided differences between consecutive finite rungs.
    #[serde(with = "crate::floatfmt::vec_option")]
    pub ds0: Vec<Option<f64>>,
    #[serde(with = "crate::floatfmt::vec_option")]
    pub ds1: Vec<Option<f64>>,
}

impl BetaScan {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "beta,local_min_count,s0_sq,s1_sq,ds0,ds1")?;
        let opt = |v: Option<f64>| v.map(fmt_csv).unwrap_or_default();
        for k in 0..self.grid.len() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_csv(self.grid[k].value()),
                self.local_min_count[k],
                fmt_csv(self.s0_sq[k]),
                fmt_csv(self.s1_sq[k]),
                opt(self.ds0[k]),
                opt(self.ds1[k]),
            )?;
        }
        Ok(())
    }
}

/// Local-minimum counts and `g_beta` dispersions along an increasing
/// `beta` ladder.
pub fn beta_scan(gr: &GeodesicResult, grid: &[Beta], gamma: f64) -> Result<BetaScan, SelectionError> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0].value() < w[1].value())) {
        return Err(SelectionError::UnsortedGrid);
    }
    if !(gamma >= 1.0) {
        return Err(SelectionError::InvalidGamma(gamma));
    }
    if !gr.is_connected() {
        return Err(SelectionError::Disconnected);
    }
    let rows: Vec<(Vec<usize>, f64, f64)> = grid
        .par_iter()
        .map(|&beta| {
            let f = objective_from_dist(&gr.dist, beta, gamma);
            let mins = local_minima(&f, gr, beta);
            let (s0, s1) = dispersions(&gr.dist, beta);
            (mins, s0, s1)
        })
        .collect();
    let diff = |vals: &[f64]| -> Vec<Option<f64>> {
        (0..grid.len())
            .map(|k| {
                (k > 0 && !grid[k].is_infinite())
                    .then(|| (vals[k] - vals[k - 1]) / (grid[k].value() - grid[k - 1].value()))
            })
            .collect()
    };
    let s0_sq: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let s1_sq: Vec<f64> = rows.iter().map(|r| r.2).collect();
    Ok(BetaScan {
        grid: grid.to_vec(),
        gamma,
        local_min_count: rows.iter().map(|r| r.0.len()).collect(),
        ds0: diff(&s0_sq),
        ds1: diff(&s1_sq),
        local_min_vertices: rows.into_iter().map(|r| r.0).collect(),
        s0_sq,
        s1_sq,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPair {
    pub alpha: f64,
    pub beta: Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnOptions {
    pub k: usize,
    pub n_repeats: usize,
    pub seed: u64,
    pub graph: GraphKind,
    pub algorithm: ApspAlgorithm,
    /// Build the graph on the training half only, attaching each test point
    /// by direct edges, instead of using geodesics in the graph on all points.
    pub rebuild_per_split: bool,
}

impl Default for KnnOptions {
    fn default() -> Self {
        KnnOptions {
            k: 10,
            n_repeats: 200,
            seed: 0,
            graph: GraphKind::Complete,
            algorithm: ApspAlgorithm::Auto,
            rebuild_per_split: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnResult {
    pub grid: Vec<GridPair>,
    pub mean_error: Vec<f64>,
    pub std_error: Vec<f64>,
    pub ci95: Vec<f64>,
    pub best_pair: GridPair,
    pub best_mean_error: f64,
    pub best_ci95: f64,
    pub baseline_error: f64,
    pub baseline_std: f64,
    pub baseline_ci95: f64,
    /// Baseline error of each repeat, in repeat order.
    pub baseline_errors: Vec<f64>,
    pub k: usize,
    pub n_repeats: usize,
    pub seed: u64,
    pub rebuild_per_split: bool,
}

/// Training and test indices of repeat `r`, each sorted; the training half
/// has `floor(n/2)` points.
pub fn split_indices(n: usize, seed: u64, r: usize) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut task_rng(seed, "knn-split", r as u64));
    let mut train = idx[..n / 2].to_vec();
    let mut test = idx[n / 2..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// Weighted vote with weights `1 / d^2`. Neighbours at distance zero, if
/// any, outvote everything else with equal weight. Ties go to the smallest
/// class index.
pub fn weighted_vote(neighbours: &[(f64, usize)], n_classes: usize) -> usize {
    let mut votes = vec![0.0; n_classes];
    if neighbours.iter().any(|&(d, _)| d == 0.0) {
        for &(d, c) in neighbours {
            if d == 0.0 {
                votes[c] += 1.0;
            }
        }
    } else {
        for &(d, c) in neighbours {
            votes[c] += 1.0 / (d * d);
        }
    }
    let mut best = 0;
    for c in 1..n_classes {
        if votes[c] > votes[best] {
            best = c;
        }
    }
    best
}

struct Labelled {
    class: Vec<usize>,
    n_classes: usize,
}

fn encode_labels(pc: &PointCloud) -> Result<Labelled, SelectionError> {
    let labels = pc.labels().ok_or(SelectionError::MissingLabels)?;
    let mut classes = pc.classes();
    classes.sort();
    if classes.len() < 2 {
        return Err(SelectionError::SingleClass);
    }
    let class = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("label in class list"))
        .collect();
    Ok(Labelled {
        class,
        n_classes: classes.len(),
    })
}

/// Errors over the `beta` grid for one repeat and one `alpha`, given the
/// test-to-train distance rows.
fn split_errors(
    dist: impl Fn(usize, usize) -> f64,
    train: &[usize],
    test: &[usize],
    lab: &Labelled,
    k: usize,
    betas: &[Beta],
) -> Vec<f64> {
    let mut wrong = vec![0usize; betas.len()];
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(train.len());
    let mut neigh: Vec<(f64, usize)> = Vec::with_capacity(k);
    for (ti, &t) in test.iter().enumerate() {
        cand.clear();
        cand.extend(train.iter().enumerate().map(|(jj, &j)| (dist(ti, jj), j)));
        // order by alpha-distance, then index; g_beta is monotone, so this
        // is also a valid nearest-first order for every beta
        cand.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (bi, &beta) in betas.iter().enumerate() {
            neigh.clear();
            neigh.extend(cand[..k].iter().map(|&(d, j)| (g_beta_raw(d, beta), lab.class[j])));
            if weighted_vote(&neigh, lab.n_classes) != lab.class[t] {
                wrong[bi] += 1;
            }
        }
    }
    wrong
        .into_iter()
        .map(|w| w as f64 / test.len() as f64)
        .collect()
}

fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    if x.len() < 2 {
        return (mean, 0.0);
    }
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Repeated half/half cross-validation of the weighted k-NN classifier at
/// every `(alpha, beta)` grid pair, plus the Euclidean baseline
/// `(alpha = 0, beta = inf)`.
pub fn knn_cv(
    pc: &PointCloud,
    alpha_grid: &[f64],
    beta_grid: &[Beta],
    opts: &KnnOptions,
) -> Result<KnnResult, SelectionError> {
    let lab = encode_labels(pc)?;
    if opts.k == 0 || opts.n_repeats == 0 {
        return Err(SelectionError::ZeroCount);
    }
    if alpha_grid.is_empty() || beta_grid.is_empty() {
        return Err(SelectionError::UnsortedGrid);
    }
    let n = pc.len();
    let n_train = n / 2;
    if opts.k > n_train {
        return Err(SelectionError::KTooLarge { k: opts.k, n_train });
    }
    let geo = GeodesicOptions {
        algorithm: opts.algorithm,
        ties: TieMode::Lenient,
    };
    // alpha = 0 is evaluated last and doubles as the baseline
    let mut alphas = alpha_grid.to_vec();
    alphas.push(0.0);
    let mut betas = beta_grid.to_vec();
    betas.push(Beta::INFINITE);
    let (n_a, n_b) = (alpha_grid.len(), beta_grid.len());

    let per_repeat: Vec<Vec<f64>> = if opts.rebuild_per_split {
        (0..opts.n_repeats)
            .into_par_iter()
            .map(|r| {
                let (train, test) = split_indices(n, opts.seed, r);
                let sub = PointCloud::new(
                    train.iter().map(|&i| pc.point(i).to_vec()).collect(),
                    None,
                    pc.name().to_string(),
                )?;
                let g = build_graph(opts.graph, &sub, TieMode::Lenient)?;
                let direct: Vec<Vec<f64>> = test
                    .iter()
                    .map(|&t| train.iter().map(|&j| euclidean(pc.point(t), pc.point(j))).collect())
                    .collect();
                let mut row = Vec::with_capacity((n_a + 1) * (n_b + 1));
                for (ai, &alpha) in alphas.iter().enumerate() {
                    let gr = geodesic_subgraph(&alpha_transform(&g, alpha)?, geo)?;
                    let p = 1.0 - alpha;
                    let dt: Vec<Vec<f64>> = direct
                        .iter()
                        .map(|w| {
                            let wa: Vec<f64> = w.iter().map(|x| x.powf(p)).collect();
                            (0..train.len())
                                .map(|j| {
                                    wa.iter()
                                        .zip(gr.dist.row(j))
                                        .map(|(a, b)| a + b)
                                        .fold(f64::INFINITY, f64::min)
                                })
                                .collect()
                        })
                        .collect();
                    let bs = if ai == n_a { &betas[n_b..] } else { &betas[..n_b] };
                    row.extend(split_errors(|t, j| dt[t][j], &train, &test, &lab, opts.k, bs));
                }
                Ok(row)
            })
            .collect::<Result<_, SelectionError>>()?
    } else {
        let g = build_graph(opts.graph, pc, TieMode::Lenient)?;
        let dists: Vec<Matrix> = alphas
            .iter()
            .map(|&alpha| Ok(geodesic_subgraph(&alpha_transform(&g, alpha)?, geo)?.dist))
            .collect::<Result<_, SelectionError>>()?;
        (0..opts.n_repeats)
            .into_par_iter()
            .map(|r| {
                let (train, test) = split_indices(n, opts.seed, r);
                let mut row = Vec::with_capacity((n_a + 1) * (n_b + 1));
                for (ai, d) in dists.iter().enumerate() {
                    let bs = if ai == n_a { &betas[n_b..] } else { &betas[..n_b] };
                    row.extend(split_errors(
                        |t, j| d[(test[t], train[j])],
                        &train,
                        &test,
                        &lab,
                        opts.k,
                        bs,
                    ));
                }
                Ok(row)
            })
            .collect::<Result<_, SelectionError>>()?
    };

    let n_pairs = n_a * n_b;
    let z = 1.96 / (opts.n_repeats as f64).sqrt();
    let mut grid = Vec::with_capacity(n_pairs);
    let (mut mean_error, mut std_error, mut ci95) = (Vec::new(), Vec::new(), Vec::new());
    for (ai, &alpha) in alpha_grid.iter().enumerate() {
        for (bi, &beta) in beta_grid.iter().enumerate() {
            let col: Vec<f64> = per_repeat.iter().map(|row| row[ai * n_b + bi]).collect();
            let (m, s) = mean_std(&col);
            grid.push(GridPair { alpha, beta });
            mean_error.push(m);
            std_error.push(s);
            ci95.push(z * s);
        }
    }
    let baseline_errors: Vec<f64> = per_repeat.iter().map(|row| row[n_pairs]).collect();
    let (baseline_error, baseline_std) = mean_std(&baseline_errors);
    let mut best = 0;
    for p in 1..n_pairs {
        if mean_error[p] < mean_error[best] {
            best = p;
        }
    }
    Ok(KnnResult {
        best_pair: grid[best],
        best_mean_error: mean_error[best],
        best_ci95: ci95[best],
        grid,
        mean_error,
        std_error,
        ci95,
        baseline_error,
        baseline_std,
        baseline_ci95: z * baseline_std,
        baseline_errors,
        k: opts.k,
        n_repeats: opts.n_repeats,
        seed: opts.seed,
        rebuild_per_split: opts.rebuild_per_split,
    })
}
