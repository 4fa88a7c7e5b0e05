//! Empirical geodesic graph analysis.
//!
//! Build an empirical graph on a point cloud, reweight its edges with the
//! local power transform `w -> w^(1 - alpha)`, take all-pairs geodesics, and
//! optionally flatten large distances with the global sine transform
//! `g_beta`. On top of the resulting metrics the crate computes generalized
//! Frechet means, dispersions, CAT(k) diagnostics, parameter scans and a
//! cross-validated k-NN classifier.

pub mod cluster;
pub mod cone;
pub mod dataio;
pub mod floatfmt;
pub mod geodesics;
pub mod graphs;
pub mod matrix;
pub mod rng;
pub mod selection;
pub mod stats;
pub mod verify;

pub use cone::{cone_distance, g_beta, Beta, ConePoint};
pub use dataio::{load_csv, normalize, PointCloud};
pub use geodesics::{
    alpha_transform, geodesic_subgraph, mst_backward, mst_forward, AlphaGraph, ApspAlgorithm,
    GeodesicOptions, GeodesicResult, SpanningTree,
};
pub use graphs::{build_complete, build_delaunay_2d, build_gabriel, GraphKind, TieMode, WeightedGraph};
pub use matrix::Matrix;
pub use stats::{FrechetParams, MeanReport};
