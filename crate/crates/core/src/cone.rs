//! The concave distance transform `g_beta`, metric cone distances, and
//! curvature diagnostics for metric graphs.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use rand::Rng;

use crate::geodesics::GeodesicResult;
use crate::graphs::WeightedGraph;
use crate::rng::task_rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("distance must be non-negative, got {0}")]
    NegativeDistance(f64),
    #[error("cone radius must lie in [0, 1], got {0}")]
    InvalidRadius(f64),
    #[error("beta must be positive, got {0}")]
    InvalidBeta(f64),
    #[error("this operation needs a finite beta")]
    BetaInfinite,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("degenerate comparison triangle: {0}")]
    DegenerateTriangle(String),
    #[error("triangle perimeter {perimeter} is not below 2*pi/sqrt(k) = {limit}")]
    PerimeterTooLarge { perimeter: f64, limit: f64 },
    #[error("argument {0} is outside the function's domain")]
    DomainError(f64),
    #[error("curvature bound must be positive, got {0}")]
    NonPositiveK(f64),
}

/// Scale parameter of `g_beta`; infinity means "no transform".
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta(f64);

impl Beta {
    pub const INFINITE: Beta = Beta(f64::INFINITY);

    pub fn new(v: f64) -> Result<Beta, ConeError> {
        if v > 0.0 {
            Ok(Beta(v))
        } else {
            Err(ConeError::InvalidBeta(v))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Beta {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = crate::floatfmt::parse_special(s).ok_or_else(|| format!("invalid beta `{s}`"))?;
        Beta::new(v).map_err(|e| e.to_string())
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::floatfmt::scalar::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = crate::floatfmt::scalar::deserialize(d)?;
        Beta::new(v).map_err(serde::de::Error::custom)
    }
}

/// `pi/2 * min(z/beta, 1)`, shared so that `g_beta` and the cone distance
/// agree to the last bit.
#[inline]
fn half_angle(z: f64, beta: f64) -> f64 {
    FRAC_PI_2 * (z / beta).min(1.0)
}

/// `sin(pi z / 2 beta)` for `z <= beta`, 1 beyond; identity when beta is infinite.
#[inline]
pub(crate) fn g_beta_raw(z: f64, beta: Beta) -> f64 {
    if beta.is_infinite() {
        z
    } else {
        half_angle(z, beta.0).sin()
    }
}

pub fn g_beta(z: f64, beta: Beta) -> Result<f64, ConeError> {
    if !(z >= 0.0) {
        return Err(ConeError::NegativeDistance(z));
    }
    Ok(g_beta_raw(z, beta))
}

/// A point `(x, s)` of the cone over a metric space: base vertex `x` at
/// radius `s`. Radius 0 is the apex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConePoint {
    pub base_index: usize,
    pub radius: f64,
}

impl ConePoint {
    pub fn new(base_index: usize, radius: f64) -> Result<Self, ConeError> {
        if !(0.0..=1.0).contains(&radius) {
            return Err(ConeError::InvalidRadius(radius));
        }
        Ok(ConePoint { base_index, radius })
    }
}

/// `sqrt(t^2 + s^2 - 2ts cos(pi min(d/beta, 1)))`.
///
/// Evaluated as `sqrt((t-s)^2 + 4ts sin^2(phi/2))`, which avoids
/// cancellation for nearby points.
pub fn cone_distance(p: ConePoint, q: ConePoint, d_base: f64, beta: Beta) -> Result<f64, ConeError> {
    for r in [p.radius, q.radius] {
        if !(0.0..=1.0).contains(&r) {
            return Err(ConeError::InvalidRadius(r));
        }
    }
    if !(d_base >= 0.0) {
        return Err(ConeError::NegativeDistance(d_base));
    }
    if beta.is_infinite() {
        return Err(ConeError::BetaInfinite);
    }
    Ok(cone_distance_raw(p.radius, q.radius, d_base, beta.0))
}

#[inline]
pub(crate) fn cone_distance_raw(s: f64, t: f64, d_base: f64, beta: f64) -> f64 {
    let h = half_angle(d_base, beta).sin();
    ((t - s) * (t - s) + 4.0 * t * s * h * h).sqrt()
}

/// Point on the cone geodesic from `(x, s)` to `(y, t)` at fraction `lambda`
/// of its length, where the base points are `d_base` apart.
///
/// Returns the radius of the point and its base position as a distance
/// along the base geodesic from `x` (0 at the apex).
pub fn cone_geodesic_point(s: f64, t: f64, d_base: f64, beta: f64, lambda: f64) -> (f64, f64) {
    let phi = 2.0 * half_angle(d_base, beta);
    if phi >= PI {
        // straight through the apex
        let u = lambda * (s + t);
        if u <= s {
            (s - u, 0.0)
        } else {
            (u - s, d_base)
        }
    } else {
        let px = (1.0 - lambda) * s + lambda * t * phi.cos();
        let py = lambda * t * phi.sin();
        let r = px.hypot(py);
        let psi = if r == 0.0 { 0.0 } else { py.atan2(px) };
        (r, (psi / PI * beta).min(d_base))
    }
}

/// `sum_i g_beta(d_i)^gamma`.
pub fn beta_extrinsic_objective(dists: &[f64], beta: Beta, gamma: f64) -> Result<f64, ConeError> {
    if !(gamma >= 1.0) {
        return Err(ConeError::DomainError(gamma));
    }
    let mut acc = 0.0;
    for &d in dists {
        acc += g_beta(d, beta)?.powf(gamma);
    }
    Ok(acc)
}

/// Length of the shortest cycle, or `None` for a forest.
///
/// For every edge `(u, v)`, the shortest `u`–`v` path avoiding that edge
/// plus the edge itself.
pub fn girth(g: &WeightedGraph) -> Option<f64> {
    let adj = g.adjacency();
    let n = g.n_vertices();
    (0..g.n_edges())
        .into_par_iter()
        .map_init(
            || vec![f64::INFINITY; n],
            |dist, k| {
                let e = g.edges()[k];
                dist.fill(f64::INFINITY);
                dist[e.i] = 0.0;
                let mut heap = std::collections::BinaryHeap::new();
                heap.push(std::cmp::Reverse(Key(0.0, e.i)));
                while let Some(std::cmp::Reverse(Key(d, u))) = heap.pop() {
                    if d > dist[u] {
                        continue;
                    }
                    if u == e.j {
                        break;
                    }
                    for &(v, ek) in &adj[u] {
                        if ek == k {
                            continue;
                        }
                        let c = d + g.edges()[ek].w;
                        if c < dist[v] {
                            dist[v] = c;
                            heap.push(std::cmp::Reverse(Key(c, v)));
                        }
                    }
                }
                dist[e.j] + e.w
            },
        )
        .filter(|c| c.is_finite())
        .min_by(f64::total_cmp)
}

#[derive(PartialEq)]
struct Key(f64, usize);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Smallest `k` for which the metric graph is CAT(k): 0 for trees,
/// `(2 pi / girth)^2` otherwise.
pub fn cat_k_threshold(g: &WeightedGraph) -> Result<f64, ConeError> {
    if !g.is_connected() {
        return Err(ConeError::Disconnected);
    }
    Ok(match girth(g) {
        None => 0.0,
        Some(l) => (2.0 * PI / l).powi(2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub pass: bool,
    /// Model-space distance `|a'x'|` minus the observed `d(a, x)`.
    pub margin: f64,
    pub model_distance: f64,
}

/// Compares `d(a, x)`, for `x` on the side `bc` at distance `d_bx` from `b`,
/// with the same distance in the comparison triangle on the surface of
/// constant curvature `k`.
pub fn comparison_triangle_test(
    d_ab: f64,
    d_ac: f64,
    d_bc: f64,
    d_bx: f64,
    d_ax: f64,
    k: f64,
) -> Result<ComparisonOutcome, ConeError> {
    for v in [d_ab, d_ac, d_bc, d_bx, d_ax] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(ConeError::DegenerateTriangle(format!("invalid length {v}")));
        }
    }
    if !k.is_finite() {
        return Err(ConeError::DomainError(k));
    }
    let perimeter = d_ab + d_ac + d_bc;
    let tol = 1e-9 * perimeter.max(1.0);
    if d_ab > d_ac + d_bc + tol || d_ac > d_ab + d_bc + tol || d_bc > d_ab + d_ac + tol {
        return Err(ConeError::DegenerateTriangle(
            "side lengths violate the triangle inequality".into(),
        ));
    }
    if d_bx > d_bc + tol {
        return Err(ConeError::DegenerateTriangle("x lies beyond c".into()));
    }
    let d_bx = d_bx.min(d_bc);
    if k > 0.0 {
        let limit = 2.0 * PI / k.sqrt();
        if perimeter >= limit {
            return Err(ConeError::PerimeterTooLarge { perimeter, limit });
        }
    }
    let model = if d_ab == 0.0 {
        d_bx
    } else if d_bc == 0.0 {
        d_ab
    } else if k == 0.0 {
        let cos_b = ((d_ab * d_ab + d_bc * d_bc - d_ac * d_ac) / (2.0 * d_ab * d_bc)).clamp(-1.0, 1.0);
        (d_ab * d_ab + d_bx * d_bx - 2.0 * d_ab * d_bx * cos_b).max(0.0).sqrt()
    } else if k > 0.0 {
        let r = k.sqrt();
        let (ab, ac, bc, bx) = (d_ab * r, d_ac * r, d_bc * r, d_bx * r);
        let cos_b = ((ac.cos() - ab.cos() * bc.cos()) / (ab.sin() * bc.sin())).clamp(-1.0, 1.0);
        let c = ab.cos() * bx.cos() + ab.sin() * bx.sin() * cos_b;
        c.clamp(-1.0, 1.0).acos() / r
    } else {
        let r = (-k).sqrt();
        let (ab, ac, bc, bx) = (d_ab * r, d_ac * r, d_bc * r, d_bx * r);
        let cos_b = ((ab.cosh() * bc.cosh() - ac.cosh()) / (ab.sinh() * bc.sinh())).clamp(-1.0, 1.0);
        let c = ab.cosh() * bx.cosh() - ab.sinh() * bx.sinh() * cos_b;
        c.max(1.0).acosh() / r
    };
    let margin = model - d_ax;
    Ok(ComparisonOutcome {
        pass: margin >= -tol,
        margin,
        model_distance: model,
    })
}

/// Pass counts of sampled comparison tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub k: f64,
    pub trials: usize,
    pub passes: usize,
    /// Triangles rejected because their perimeter reaches `2 pi / sqrt(k)`.
    pub skipped: usize,
    #[serde(with = "crate::floatfmt::scalar")]
    pub min_margin: f64,
}

impl ComparisonSummary {
    pub fn pass_rate(&self) -> Option<f64> {
        let tested = self.trials - self.skipped;
        (tested > 0).then(|| self.passes as f64 / tested as f64)
    }
}

/// Distance from `a` to the point `t` along the geodesic path `b -> c` of
/// the metric graph.
fn dist_to_path_point(gr: &GeodesicResult, a: usize, b: usize, c: usize, t: f64) -> f64 {
    let mut path = gr.path(b, c).unwrap_or_default();
    if b > c {
        path.reverse();
    }
    let mut walked = 0.0;
    for w in path.windows(2) {
        let (u, v) = (w[0], w[1]);
        let len = gr.dist[(u, v)];
        if t <= walked + len {
            let s = (t - walked).max(0.0);
            return (gr.dist[(a, u)] + s).min(gr.dist[(a, v)] + len - s);
        }
        walked += len;
    }
    gr.dist[(a, c)]
}

fn summarize(k: f64, outcomes: Vec<Result<ComparisonOutcome, ConeError>>) -> ComparisonSummary {
    let mut out = ComparisonSummary {
        k,
        trials: outcomes.len(),
        passes: 0,
        skipped: 0,
        min_margin: f64::INFINITY,
    };
    for o in outcomes {
        match o {
            Ok(c) => {
                out.passes += c.pass as usize;
                out.min_margin = out.min_margin.min(c.margin);
            }
            Err(_) => out.skipped += 1,
        }
    }
    out
}

/// Comparison tests at curvature `k` on random geodesic triangles of the
/// metric graph, with triangle vertices at graph vertices.
pub fn sample_graph_comparisons(gr: &GeodesicResult, k: f64, samples: usize, seed: u64) -> ComparisonSummary {
    let n = gr.n();
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|t| {
            let mut rng = task_rng(seed, "catk-graph", t as u64);
            let [a, b, c] = [(); 3].map(|_| rng.random_range(0..n));
            let d = &gr.dist;
            let bx = rng.random::<f64>() * d[(b, c)];
            let ax = dist_to_path_point(gr, a, b, c, bx);
            comparison_triangle_test(d[(a, b)], d[(a, c)], d[(b, c)], bx, ax, k)
        })
        .collect();
    summarize(k, outcomes)
}

/// Flat comparison tests on random triangles of the metric cone over the
/// graph with parameter `beta`.
pub fn sample_cone_comparisons(gr: &GeodesicResult, beta: Beta, samples: usize, seed: u64) -> ComparisonSummary {
    let n = gr.n();
    let b = beta.value();
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|t| {
            let mut rng = task_rng(seed, "catk-cone", t as u64);
            let [(a, sa), (p, sp), (q, sq)] = [(); 3].map(|_| (rng.random_range(0..n), rng.random::<f64>()));
            let d = &gr.dist;
            let lambda: f64 = rng.random();
            let d_ab = cone_distance_raw(sa, sp, d[(a, p)], b);
            let d_ac = cone_distance_raw(sa, sq, d[(a, q)], b);
            let d_bc = cone_distance_raw(sp, sq, d[(p, q)], b);
            let (rx, pos) = cone_geodesic_point(sp, sq, d[(p, q)], b, lambda);
            let d_ax = cone_distance_raw(sa, rx, dist_to_path_point(gr, a, p, q, pos), b);
            comparison_triangle_test(d_ab, d_ac, d_bc, lambda * d_bc, d_ax, 0.0)
        })
        .collect();
    summarize(0.0, outcomes)
}

/// Critical exponent for the spherical counterexamples: below it, the
/// configuration at angle `theta` still has a unique mean.
///
/// The two branches meet at `theta = pi/6`, where both equal
/// `1 / log2((2 pi / 3) / arccos(1/4))`.
pub fn gamma0(theta: f64) -> Result<f64, ConeError> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(ConeError::DomainError(theta));
    }
    let ratio = if theta <= PI / 6.0 {
        let s = theta.sin();
        let inner = (1.0 - 1.0 / (2.0 * (1.0 - s))).max(0.0).sqrt();
        let c2 = theta.cos().powi(2);
        (PI + 2.0 * theta) / (2.0 * (s * s + c2 * inner).min(1.0).acos())
    } else {
        // (pi - 2 theta) / arccos(sin^2 theta) written in eps = pi/2 - theta,
        // using arccos(1 - 2u^2) = 2 asin(u) with u = sin(eps)/sqrt(2)
        let eps = FRAC_PI_2 - theta;
        if eps == 0.0 {
            return Ok(2.0);
        }
        let denom = 2.0 * (eps.sin() / std::f64::consts::SQRT_2).asin();
        2.0 * eps / denom
    };
    Ok(1.0 / ratio.log2())
}

/// Inverse of [`gamma0`] on `[1, 2)`, and `pi/2` for `gamma >= 2`.
pub fn theta0(gamma: f64) -> Result<f64, ConeError> {
    if !(gamma >= 1.0) {
        return Err(ConeError::DomainError(gamma));
    }
    if gamma >= 2.0 {
        return Ok(FRAC_PI_2);
    }
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if gamma0(mid)? < gamma {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lower bounds on the diameters of the convex and geodesic mean domains,
/// and the exact `L1` bound, on a CAT(k) space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiameterBounds {
    pub k: f64,
    pub d_convex_lb: f64,
    pub d_geodesic_lb: f64,
    pub d_l1: f64,
}

pub fn diameter_bounds(k: f64) -> Result<DiameterBounds, ConeError> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(ConeError::NonPositiveK(k));
    }
    let r = k.sqrt();
    Ok(DiameterBounds {
        k,
        d_convex_lb: FRAC_PI_2 / r,
        d_geodesic_lb: PI / r,
        d_l1: FRAC_PI_2 / r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: f64) -> Beta {
        Beta::new(v).unwrap()
    }

    #[test]
    fn g_beta_examples() {
        assert_eq!(g_beta(0.0, b(0.3)).unwrap(), 0.0);
        assert!((g_beta(1.0 / 3.0, b(1.0)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(g_beta(2.0, b(2.0)).unwrap(), 1.0);
        assert_eq!(g_beta(4.0, b(2.0)).unwrap(), 1.0);
        assert_eq!(g_beta(7.5, Beta::INFINITE).unwrap(), 7.5);
        assert!(matches!(g_beta(-1.0, b(1.0)), Err(ConeError::NegativeDistance(_))));
        assert!(Beta::new(0.0).is_err());
        assert_eq!("inf".parse::<Beta>().unwrap(), Beta::INFINITE);
    }

    #[test]
    fn cone_distance_examples() {
        let apex = ConePoint::new(0, 0.0).unwrap();
        let q = ConePoint::new(1, 0.7).unwrap();
        assert!((cone_distance(apex, q, 3.0, b(1.0)).unwrap() - 0.7).abs() < 1e-15);
        let p = ConePoint::new(0, 1.0).unwrap();
        let q = ConePoint::new(1, 1.0).unwrap();
        assert!((cone_distance(p, q, 2.0, b(1.0)).unwrap() - 2.0).abs() < 1e-15);
        assert!((cone_distance(p, q, 1.0, b(3.0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cone_distance(p, q, 0.0, b(1.0)).unwrap(), 0.0);
        assert!(ConePoint::new(0, 1.5).is_err());
        assert_eq!(
            cone_distance(p, q, 1.0, Beta::INFINITE).unwrap_err(),
            ConeError::BetaInfinite
        );
    }

    #[test]
    fn objective_examples() {
        assert_eq!(beta_extrinsic_objective(&[0.0; 4], b(1.0), 2.0).unwrap(), 0.0);
        assert_eq!(beta_extrinsic_objective(&[2.0, 3.0, 5.0], b(1.0), 2.0).unwrap(), 3.0);
        assert_eq!(
            beta_extrinsic_objective(&[0.0, 1.0, 2.0], Beta::INFINITE, 2.0).unwrap(),
            5.0
        );
    }

    #[test]
    fn cat_thresholds() {
        let tree = WeightedGraph::from_triples(4, &[(0, 1, 1.0), (1, 2, 2.0), (1, 3, 0.5)]).unwrap();
        assert_eq!(cat_k_threshold(&tree).unwrap(), 0.0);
        let tri = WeightedGraph::from_triples(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert!((cat_k_threshold(&tri).unwrap() - 4.386490844928603).abs() < 1e-12);
        for n in [4usize, 7, 12] {
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
            let g = WeightedGraph::from_triples(n, &edges).unwrap();
            let want = (2.0 * PI / n as f64).powi(2);
            assert!((cat_k_threshold(&g).unwrap() - want).abs() < 1e-12);
        }
        let split = WeightedGraph::from_triples(3, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(cat_k_threshold(&split).unwrap_err(), ConeError::Disconnected);
    }

    #[test]
    fn comparison_examples() {
        let flat = comparison_triangle_test(1.0, 1.0, 1.0, 0.5, 3f64.sqrt() / 2.0, 0.0).unwrap();
        assert!(flat.pass && flat.margin.abs() < 1e-12);

        // octant triangle on the unit sphere; midpoint of bc is pi/2 from a
        let h = FRAC_PI_2;
        let sph = comparison_triangle_test(h, h, h, h / 2.0, h, 1.0).unwrap();
        assert!(sph.pass && sph.margin.abs() < 1e-12);

        // a hyperbolic comparison triangle is thinner than the flat one
        let hyp = comparison_triangle_test(1.0, 1.0, 1.0, 0.5, 0.0, -1.0).unwrap();
        assert!(hyp.model_distance < 3f64.sqrt() / 2.0);

        assert!(matches!(
            comparison_triangle_test(1.0, 1.0, 3.0, 0.5, 0.5, 0.0),
            Err(ConeError::DegenerateTriangle(_))
        ));
        assert!(matches!(
            comparison_triangle_test(2.5, 2.5, 2.5, 1.0, 1.0, 1.0),
            Err(ConeError::PerimeterTooLarge { .. })
        ));
    }

    #[test]
    fn gamma0_values() {
        assert!((gamma0(0.0).unwrap() - 1.0).abs() < 1e-12);
        let at = 1.0 / ((2.0 * PI / 3.0) / 0.25f64.acos()).log2();
        assert!((gamma0(PI / 6.0).unwrap() - at).abs() < 1e-12);
        assert!((at - 1.497).abs() < 1e-3);
        // right-hand limit of the second branch
        assert!((gamma0(PI / 6.0 + 1e-10).unwrap() - at).abs() < 1e-8);
        assert_eq!(gamma0(FRAC_PI_2).unwrap(), 2.0);
        assert!(gamma0(2.0).is_err());
    }

    #[test]
    fn theta0_inverts_gamma0() {
        assert_eq!(theta0(2.0).unwrap(), FRAC_PI_2);
        assert_eq!(theta0(5.0).unwrap(), FRAC_PI_2);
        for k in 0..=20 {
            let t = FRAC_PI_2 * k as f64 / 20.0;
            let g = gamma0(t).unwrap();
            assert!((theta0(g).unwrap() - t).abs() < 1e-9, "theta {t}");
        }
        assert!(theta0(0.5).is_err());
    }

    #[test]
    fn diameter_examples() {
        let d = diameter_bounds(1.0).unwrap();
        assert_eq!((d.d_convex_lb, d.d_geodesic_lb, d.d_l1), (FRAC_PI_2, PI, FRAC_PI_2));
        let d = diameter_bounds(4.0).unwrap();
        assert_eq!((d.d_convex_lb, d.d_geodesic_lb), (PI / 4.0, FRAC_PI_2));
        let d = diameter_bounds(PI * PI).unwrap();
        assert!((d.d_convex_lb - 0.5).abs() < 1e-15 && (d.d_geodesic_lb - 1.0).abs() < 1e-15);
        assert!(diameter_bounds(0.0).is_err());
    }

    #[test]
    fn cone_geodesic_endpoints() {
        let (r0, p0) = cone_geodesic_point(0.4, 0.9, 0.3, 1.0, 0.0);
        assert!((r0 - 0.4).abs() < 1e-15 && p0 == 0.0);
        let (r1, p1) = cone_geodesic_point(0.4, 0.9, 0.3, 1.0, 1.0);
        assert!((r1 - 0.9).abs() < 1e-12 && (p1 - 0.3).abs() < 1e-12);
        let (r, p) = cone_geodesic_point(0.5, 0.5, 2.0, 1.0, 0.25);
        assert!((r - 0.25).abs() < 1e-15 && p == 0.0);
    }

    #[test]
    fn sampled_comparisons_on_tree_and_cycle() {
        use crate::geodesics::{geodesics_at, GeodesicOptions};
        let tree = WeightedGraph::from_triples(5, &[(0, 1, 1.0), (1, 2, 0.5), (1, 3, 2.0), (3, 4, 1.0)]).unwrap();
        let gr = geodesics_at(&tree, 0.0, GeodesicOptions::default()).unwrap();
        let s = sample_graph_comparisons(&gr, 0.0, 500, 3);
        assert_eq!((s.passes, s.skipped), (500, 0));
        let c = sample_cone_comparisons(&gr, Beta::new(1.5).unwrap(), 500, 3);
        assert_eq!(c.passes, 500);

        let cycle = WeightedGraph::from_triples(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (0, 4, 1.0)])
            .unwrap();
        let k = cat_k_threshold(&cycle).unwrap();
        let gr = geodesics_at(&cycle, 0.0, GeodesicOptions::lenient()).unwrap();
        let s = sample_graph_comparisons(&gr, k, 500, 4);
        assert_eq!(s.passes + s.skipped, 500);
        assert!(s.pass_rate().unwrap() == 1.0);
    }
}
