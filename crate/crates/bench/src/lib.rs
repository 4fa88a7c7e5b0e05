//! Seeded benchmark instances.

use geodesic_core::graphs::{build_complete, build_delaunay_2d, TieMode, WeightedGraph};
use geodesic_core::rng::task_rng;
use geodesic_core::verify::gen;
use geodesic_core::PointCloud;

pub fn uniform_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    gen::uniform_points(&mut task_rng(seed, "bench-cloud", n as u64), n, d)
}

pub fn complete(n: usize, seed: u64) -> WeightedGraph {
    build_complete(&uniform_cloud(n, 2, seed), TieMode::Lenient).expect("distinct points")
}

pub fn delaunay(n: usize, seed: u64) -> WeightedGraph {
    build_delaunay_2d(&uniform_cloud(n, 2, seed), TieMode::Lenient).expect("2-D points")
}

/// Points with labels from two interleaved half-moons.
pub fn labelled_moons(n: usize, seed: u64) -> PointCloud {
    let pc = uniform_cloud(n, 2, seed);
    let mut pts = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (i, p) in pc.points().iter().enumerate() {
        let t = std::f64::consts::PI * p[0];
        let c = i % 2;
        let (x, y) = if c == 0 { (t.cos(), t.sin()) } else { (1.0 - t.cos(), 0.5 - t.sin()) };
        pts.push(vec![x + 0.1 * p[1], y + 0.1 * p[1]]);
        labels.push(format!("moon{c}"));
    }
    PointCloud::new(pts, Some(labels), "moons").expect("valid cloud")
}
