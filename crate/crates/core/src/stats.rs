//! Generalized Fréchet objectives on graph metrics, vertex-restricted means,
//! dispersions, and one-dimensional rank-based medians.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::{g_beta_raw, Beta};
use crate::geodesics::{DisjointSets, GeodesicResult};
use crate::matrix::Matrix;

/// Relative tolerance when comparing objective values.
pub const F_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("gamma must be at least 1, got {0}")]
    InvalidGamma(f64),
    #[error("parameters are for alpha={params} but the geodesics were computed at alpha={geodesics}")]
    AlphaMismatch { params: f64, geodesics: f64 },
    #[error("CDF values must be nondecreasing within [0, 1]")]
    NonMonotoneCdf,
    #[error("grid, CDF and density must have equal length of at least 2")]
    GridMismatch,
    #[error("kernel density needs a finite beta")]
    BetaInfinite,
    #[error("input is empty")]
    Empty,
    #[error("values must be finite, distinct and sorted increasingly")]
    NotSortedDistinct,
}

/// The exponents of `f(m) = sum_i g_beta(d_alpha(x_i, m))^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrechetParams {
    pub alpha: f64,
    pub beta: Beta,
    pub gamma: f64,
}

impl FrechetParams {
    pub fn new(alpha: f64, beta: Beta, gamma: f64) -> Result<Self, StatsError> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(StatsError::InvalidGamma(gamma));
        }
        Ok(FrechetParams { alpha, beta, gamma })
    }

    /// The ordinary squared-distance mean at the given `alpha`.
    pub fn euclidean(alpha: f64) -> Self {
        FrechetParams {
            alpha,
            beta: Beta::INFINITE,
            gamma: 2.0,
        }
    }
}

#[inline]
fn pow_gamma(x: f64, gamma: f64) -> f64 {
    if gamma == 2.0 {
        x * x
    } else if gamma == 1.0 {
        x
    } else {
        x.powf(gamma)
    }
}

/// Objective value at every vertex.
pub fn frechet_objective(gr: &GeodesicResult, params: &FrechetParams) -> Result<Vec<f64>, StatsError> {
    if !(params.gamma >= 1.0) {
        return Err(StatsError::InvalidGamma(params.gamma));
    }
    if params.alpha != gr.alpha {
        return Err(StatsError::AlphaMismatch {
            params: params.alpha,
            geodesics: gr.alpha,
        });
    }
    if !gr.is_connected() {
        return Err(StatsError::Disconnected);
    }
    Ok(objective_from_dist(&gr.dist, params.beta, params.gamma))
}

pub(crate) fn objective_from_dist(dist: &Matrix, beta: Beta, gamma: f64) -> Vec<f64> {
    (0..dist.n())
        .into_par_iter()
        .map(|m| {
            dist.row(m)
                .iter()
                .map(|&d| pow_gamma(g_beta_raw(d, beta), gamma))
                .sum()
        })
        .collect()
}

/// `(s0^2, s1^2)` of a distance matrix after `g_beta`:
/// the smallest mean squared distance to a vertex, and the mean squared
/// pairwise distance.
pub fn dispersions(dist: &Matrix, beta: Beta) -> (f64, f64) {
    let n = dist.n();
    if n < 2 {
        return (0.0, 0.0);
    }
    let f = objective_from_dist(dist, beta, 2.0);
    let s0 = f.iter().copied().fold(f64::INFINITY, f64::min) / n as f64;
    let mut pair = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let g = g_beta_raw(dist[(i, j)], beta);
            pair += g * g;
        }
    }
    let s1 = 2.0 * pair / (n * (n - 1)) as f64;
    (s0, s1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanReport {
    pub params: FrechetParams,
    #[serde(with = "crate::floatfmt::vec")]
    pub f_values: Vec<f64>,
    /// Plateau representatives attaining the global minimum.
    pub global_min_vertices: Vec<usize>,
    /// Plateau representatives of all local minima.
    pub local_min_vertices: Vec<usize>,
    #[serde(with = "crate::floatfmt::scalar")]
    pub s0_sq: f64,
    #[serde(with = "crate::floatfmt::scalar")]
    pub s1_sq: f64,
    /// `(s0^2)^(1/(1-alpha))`; absent at `alpha = 1`.
    #[serde(with = "crate::floatfmt::option")]
    pub s0_scaled: Option<f64>,
}

fn le_tol(a: f64, b: f64) -> bool {
    a <= b + F_REL_TOL * a.abs().max(b.abs())
}

fn eq_tol(a: f64, b: f64) -> bool {
    (a - b).abs() <= F_REL_TOL * a.abs().max(b.abs())
}

/// Plateau-merged local minima of `f` over the geodesic subgraph.
///
/// The neighbourhood of `m` is its geodesic-subgraph neighbours closer than
/// `beta` (all of them for infinite `beta`). A vertex is a local minimum when
/// no neighbour has a smaller value; neighbouring local minima with equal
/// values form one plateau, represented by its smallest index.
pub fn local_minima(f: &[f64], gr: &GeodesicResult, beta: Beta) -> Vec<usize> {
    let n = f.len();
    let adj = gr.geodesic_neighbors();
    let window = |m: usize| {
        adj[m]
            .iter()
            .copied()
            .filter(move |&j| beta.is_infinite() || gr.dist[(m, j)] < beta.value())
    };
    let is_min: Vec<bool> = (0..n)
        .map(|m| window(m).all(|j| le_tol(f[m], f[j])))
        .collect();
    let mut dsu = DisjointSets::new(n);
    for m in 0..n {
        if !is_min[m] {
            continue;
        }
        for j in window(m) {
            if is_min[j] && eq_tol(f[m], f[j]) {
                dsu.union(m, j);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for m in 0..n {
        if is_min[m] {
            let r = dsu.find(m);
            if !seen[r] {
                seen[r] = true;
                reps.push(m);
            }
        }
    }
    reps
}

/// Global and local minimizers plus dispersion summaries.
pub fn find_means(f_values: &[f64], gr: &GeodesicResult, params: &FrechetParams) -> MeanReport {
    let locals = local_minima(f_values, gr, params.beta);
    let fmin = f_values.iter().copied().fold(f64::INFINITY, f64::min);
    let global_min_vertices = locals
        .iter()
        .copied()
        .filter(|&m| eq_tol(f_values[m], fmin))
        .collect();
    let (s0_sq, s1_sq) = dispersions(&gr.dist, Beta::INFINITE);
    let s0_scaled = (gr.alpha != 1.0).then(|| s0_sq.powf(1.0 / (1.0 - gr.alpha)));
    MeanReport {
        params: *params,
        f_values: f_values.to_vec(),
        global_min_vertices,
        local_min_vertices: locals,
        s0_sq,
        s1_sq,
        s0_scaled,
    }
}

/// [`frechet_objective`] followed by [`find_means`].
pub fn frechet_means(gr: &GeodesicResult, params: &FrechetParams) -> Result<MeanReport, StatsError> {
    let f = frechet_objective(gr, params)?;
    Ok(find_means(&f, gr, params))
}

/// Density estimate `(1/beta)(1 - f(m)/n)` from objective values computed
/// with `gamma = 2`; the kernel is `(1/beta)(1 - g_beta(|x|)^2)`.
pub fn kernel_density_view(f_values: &[f64], beta: Beta, n: usize) -> Result<Vec<f64>, StatsError> {
    if beta.is_infinite() {
        return Err(StatsError::BetaInfinite);
    }
    if n == 0 {
        return Err(StatsError::Empty);
    }
    let b = beta.value();
    Ok(f_values
        .iter()
        .map(|&f| (1.0 - f / n as f64) / b)
        .collect())
}

fn check_sorted_distinct(x: &[f64]) -> Result<(), StatsError> {
    if x.is_empty() {
        return Err(StatsError::Empty);
    }
    if x.iter().any(|v| !v.is_finite()) || x.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(StatsError::NotSortedDistinct);
    }
    Ok(())
}

/// `max{i : x_(i) <= m}` (1-based), 0 below the sample.
fn rank_of(x: &[f64], m: f64) -> usize {
    x.partition_point(|&v| v <= m)
}

/// Piecewise-linear CDF through `(x_(i), (i-1)/(n-1))`, 0 and 1 outside.
pub fn piecewise_linear_cdf(x: &[f64], m: f64) -> f64 {
    let n = x.len();
    if n == 1 {
        return if m < x[0] { 0.0 } else { 1.0 };
    }
    if n == 0 || m <= x[0] {
        return 0.0;
    }
    if m >= x[n - 1] {
        return 1.0;
    }
    let k = x.partition_point(|&v| v <= m); // x[k-1] <= m < x[k]
    let t = (m - x[k - 1]) / (x[k] - x[k - 1]);
    ((k - 1) as f64 + t) / (n - 1) as f64
}

/// Per-observation distances `(rank metric, piecewise-linear CDF metric)`
/// between each `x_i` and `m`.
pub fn onedim_median_metrics(x: &[f64], m: f64) -> Result<Vec<(f64, f64)>, StatsError> {
    check_sorted_distinct(x)?;
    let n = x.len() as f64;
    let im = rank_of(x, m) as f64;
    let fm = piecewise_linear_cdf(x, m);
    Ok(x.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let d1 = ((i + 1) as f64 - im).abs() / n;
            let d2 = (piecewise_linear_cdf(x, xi) - fm).abs();
            (d1, d2)
        })
        .collect())
}

/// Minimizer of `sum_i |i - i(m)|^2` over `m`. The objective depends on `m`
/// only through its rank, so the order statistics are the candidates; on a
/// tie the larger one is reported.
pub fn rank_median(x: &[f64]) -> Result<f64, StatsError> {
    check_sorted_distinct(x)?;
    let n = x.len() as i64;
    let cost = |k: i64| (1..=n).map(|i| (i - k) * (i - k)).sum::<i64>();
    let best = (1..=n)
        .min_by(|&a, &b| cost(a).cmp(&cost(b)).then(b.cmp(&a)))
        .expect("non-empty");
    Ok(x[(best - 1) as usize])
}

/// Minimizer of `sum_i (F(x_i) - F(m))^2` for the piecewise-linear CDF `F`:
/// the point where `F` equals the mean of the `F(x_i)`.
pub fn cdf_median(x: &[f64]) -> Result<f64, StatsError> {
    check_sorted_distinct(x)?;
    let n = x.len();
    if n == 1 {
        return Ok(x[0]);
    }
    // F(x_(i)) = (i-1)/(n-1); summing the numerators keeps the mean exact
    let numer: usize = (0..n).sum();
    let target = numer as f64 / (n * (n - 1)) as f64;
    let pos = target * (n - 1) as f64;
    let k = (pos.floor() as usize).min(n - 2);
    let t = pos - k as f64;
    Ok((1.0 - t) * x[k] + t * x[k + 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneDimMedians {
    pub rank_median: f64,
    pub cdf_median: f64,
}

/// Both medians of an unsorted sample.
pub fn onedim_medians(values: &[f64]) -> Result<OneDimMedians, StatsError> {
    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    Ok(OneDimMedians {
        rank_median: rank_median(&x)?,
        cdf_median: cdf_median(&x)?,
    })
}

/// `integral (F(m) - F(x))^2 f(x) dx` by the trapezoid rule on the grid.
pub fn population_median_dispersion(
    grid: &[f64],
    cdf: &[f64],
    density: &[f64],
    m: f64,
) -> Result<f64, StatsError> {
    let n = grid.len();
    if n < 2 || cdf.len() != n || density.len() != n {
        return Err(StatsError::GridMismatch);
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(StatsError::GridMismatch);
    }
    if cdf.iter().any(|&c| !(0.0..=1.0).contains(&c)) || cdf.windows(2).any(|w| w[1] < w[0]) {
        return Err(StatsError::NonMonotoneCdf);
    }
    let fm = if m <= grid[0] {
        cdf[0]
    } else if m >= grid[n - 1] {
        cdf[n - 1]
    } else {
        let k = grid.partition_point(|&g| g <= m);
        let t = (m - grid[k - 1]) / (grid[k] - grid[k - 1]);
        cdf[k - 1] + t * (cdf[k] - cdf[k - 1])
    };
    let h = |k: usize| (fm - cdf[k]).powi(2) * density[k];
    Ok((1..n)
        .map(|k| 0.5 * (grid[k] - grid[k - 1]) * (h(k - 1) + h(k)))
        .sum())
}
