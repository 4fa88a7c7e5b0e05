//! `geodesic`: batch front end for geodesic-core.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use geodesic_core::cluster::{average_linkage, load_matrix_csv, reorder_matrix, write_matrix_csv};
use geodesic_core::cone::{
    cat_k_threshold, diameter_bounds, girth, sample_cone_comparisons, sample_graph_comparisons,
    ComparisonSummary, DiameterBounds,
};
use geodesic_core::dataio::load_column;
use geodesic_core::floatfmt::to_sorted_json;
use geodesic_core::geodesics::{alpha_star, geodesics_at, mst_backward, mst_forward};
use geodesic_core::graphs::build_graph;
use geodesic_core::selection::{
    alpha_scan, beta_scan, default_alpha_grid, default_beta_ladder, geometric_ladder, knn_cv,
    linear_grid, KnnOptions,
};
use geodesic_core::stats::{frechet_means, onedim_medians};
use geodesic_core::verify::{run_suite, VerifyMode};
use geodesic_core::{
    load_csv, normalize, ApspAlgorithm, Beta, FrechetParams, GeodesicOptions, GraphKind, PointCloud,
    TieMode, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "geodesic", version, about = "Empirical geodesic graphs, d_alpha/g_beta metrics and Frechet means")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an empirical graph on a point cloud
    Graph(GraphCmd),
    /// Minimal spanning tree of the empirical graph
    Mst(MstCmd),
    /// All-pairs geodesics and the geodesic subgraph at one alpha
    Geodesic(GeodesicCmd),
    /// Girth, CAT(k) threshold and sampled comparison tests
    Catk(CatkCmd),
    /// Generalized Frechet means over the data points
    Frechet(FrechetCmd),
    /// Dispersion and betweenness over an alpha grid, with peak selection
    AlphaScan(AlphaScanCmd),
    /// Local-minimum counts and dispersions over a beta ladder
    BetaScan(BetaScanCmd),
    /// Cross-validated weighted k-NN over an (alpha, beta) grid
    Knn(KnnCmd),
    /// Reorder a distance matrix by a group-average dendrogram
    Reorder(ReorderCmd),
    /// Rank and CDF medians of one numeric column
    Median1d(Median1dCmd),
    /// Run the randomized property suite
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    Complete,
    Gabriel,
    Delaunay,
}

impl From<GraphArg> for GraphKind {
    fn from(g: GraphArg) -> Self {
        match g {
            GraphArg::Complete => GraphKind::Complete,
            GraphArg::Gabriel => GraphKind::Gabriel,
            GraphArg::Delaunay => GraphKind::Delaunay2D,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ApspArg {
    Auto,
    Floyd,
    Johnson,
}

impl From<ApspArg> for ApspAlgorithm {
    fn from(a: ApspArg) -> Self {
        match a {
            ApspArg::Auto => ApspAlgorithm::Auto,
            ApspArg::Floyd => ApspAlgorithm::Floyd,
            ApspArg::Johnson => ApspAlgorithm::Johnson,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct InputArgs {
    /// Point cloud CSV with a header row
    #[arg(long)]
    input: PathBuf,
    /// Name of the class-label column, excluded from the coordinates
    #[arg(long)]
    label: Option<String>,
    /// Scale points so the mean Euclidean norm is 1
    #[arg(long)]
    normalize: bool,
    /// Empirical graph (delaunay requires 2-D points)
    #[arg(long, value_enum, default_value = "complete")]
    graph: GraphArg,
    /// Break weight and path ties deterministically instead of failing
    #[arg(long)]
    lenient: bool,
}

impl InputArgs {
    fn ties(&self) -> TieMode {
        if self.lenient {
            TieMode::Lenient
        } else {
            TieMode::Strict
        }
    }

    fn cloud(&self) -> Result<PointCloud> {
        let pc = load_csv(&self.input, self.label.as_deref())
            .with_context(|| format!("reading {}", self.input.display()))?;
        Ok(if self.normalize { normalize(&pc)? } else { pc })
    }

    fn graph(&self) -> Result<WeightedGraph> {
        Ok(build_graph(self.graph.into(), &self.cloud()?, self.ties())?)
    }
}

#[derive(Args)]
struct GeodesicArgs {
    /// Edge exponent: weights become w^(1 - alpha); any finite real
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// All-pairs shortest path algorithm
    #[arg(long, value_enum, default_value = "auto")]
    apsp: ApspArg,
}

#[derive(Args)]
struct GraphCmd {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MstMethod {
    Forward,
    Backward,
}

#[derive(Args)]
struct MstCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Kruskal (forward) or reverse-delete (backward)
    #[arg(long, value_enum, default_value = "forward")]
    method: MstMethod,
    /// Also search alpha = 1, 0.9, ... down to this value for the first
    /// alpha whose geodesic subgraph is the tree
    #[arg(long, allow_negative_numbers = true)]
    alpha_min: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GeodesicCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    geo: GeodesicArgs,
    /// JSON geodesic result (stdout if no output is given)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Distance matrix CSV, `inf` for unreachable pairs
    #[arg(long)]
    dist_csv: Option<PathBuf>,
    /// Geodesic subgraph in DOT format
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct CatkCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    geo: GeodesicArgs,
    /// Number of sampled comparison triangles (>= 0)
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Cone parameter for flat comparison tests on the metric cone (> 0; omit to skip)
    #[arg(long)]
    beta: Option<Beta>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrechetCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    geo: GeodesicArgs,
    /// Global transform parameter (> 0 or `inf`)
    #[arg(long, default_value = "inf")]
    beta: Beta,
    /// Power of the distances in the objective (>= 1)
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlphaScanCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Uniform grid as `lo:hi:step` (default -5:1:0.2)
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Peak threshold in standard deviations above the mean (any real)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long, value_enum, default_value = "auto")]
    apsp: ApspArg,
    /// Scan table CSV, one row per grid point (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Peaks and selected alphas as JSON
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct BetaLadder {
    /// Explicit comma-separated ladder, e.g. `0.1,1,inf`
    #[arg(long)]
    betas: Option<String>,
    /// First rung of a geometric ladder (> 0)
    #[arg(long)]
    beta_base: Option<f64>,
    /// Ratio of the geometric ladder (> 1)
    #[arg(long, default_value_t = 2.0)]
    beta_ratio: f64,
    /// Number of finite rungs; `inf` is appended
    #[arg(long, default_value_t = 12)]
    beta_count: usize,
}

impl BetaLadder {
    fn ladder(&self) -> Result<Vec<Beta>> {
        if let Some(s) = &self.betas {
            return s
                .split(',')
                .map(|v| v.trim().parse::<Beta>().map_err(|e| anyhow::anyhow!("--betas: {e}")))
                .collect();
        }
        match self.beta_base {
            Some(b) => {
                if !(b > 0.0 && self.beta_ratio > 1.0) {
                    bail!("beta ladder needs base > 0 and ratio > 1");
                }
                Ok(geometric_ladder(b, self.beta_ratio, self.beta_count))
            }
            None => Ok(default_beta_ladder()),
        }
    }
}

#[derive(Args)]
struct BetaScanCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    geo: GeodesicArgs,
    #[command(flatten)]
    ladder: BetaLadder,
    /// Power of the distances in the objective (>= 1)
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    /// Scan table CSV (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KnnCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Neighbours per vote (>= 1, at most the training size)
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Random half/half splits (>= 1)
    #[arg(long, default_value_t = 200)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Alpha grid as `lo:hi:step` or a comma list (default -5:1:0.2)
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    #[command(flatten)]
    ladder: BetaLadder,
    /// Build the graph on each training half instead of on all points
    #[arg(long)]
    rebuild_per_split: bool,
    /// Skip normalisation (by default points are scaled to mean norm 1)
    #[arg(long)]
    raw: bool,
    #[arg(long, value_enum, default_value = "auto")]
    apsp: ApspArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReorderCmd {
    /// Square distance matrix CSV without header; `inf` allowed
    #[arg(long)]
    input: PathBuf,
    /// Reordered matrix CSV (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Merge list and leaf order as JSON
    #[arg(long)]
    merges: Option<PathBuf>,
}

#[derive(Args)]
struct Median1dCmd {
    /// CSV with a header row
    #[arg(long)]
    input: PathBuf,
    /// Column to read (default: the first)
    #[arg(long)]
    column: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCmd {
    /// Fewer and smaller trials
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Full report as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(to_sorted_json(v)? + "\n")
}

fn parse_alpha_grid(s: &str) -> Result<Vec<f64>> {
    let parse = |v: &str| v.trim().parse::<f64>().with_context(|| format!("bad alpha `{v}`"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (parse(lo)?, parse(hi)?, parse(step)?);
            if !(step > 0.0 && hi >= lo) {
                bail!("alpha grid needs lo <= hi and step > 0");
            }
            Ok(linear_grid(lo, hi, step))
        }
        [_] => s.split(',').map(parse).collect(),
        _ => bail!("alpha grid must be `lo:hi:step` or a comma list"),
    }
}

fn geo_options(lenient: bool, apsp: ApspArg) -> GeodesicOptions {
    GeodesicOptions {
        algorithm: apsp.into(),
        ties: if lenient { TieMode::Lenient } else { TieMode::Strict },
    }
}

fn graph_cmd(c: GraphCmd) -> Result<()> {
    let g = c.input.graph()?;
    let text = match c.format {
        GraphFormat::Json => json(&g)?,
        GraphFormat::Dot => g.to_dot(),
    };
    emit(c.out.as_deref(), &text)
}

#[derive(Serialize)]
struct MstReport {
    tree: WeightedGraph,
    total_weight: f64,
    #[serde(with = "geodesic_core::floatfmt::option")]
    alpha_star: Option<f64>,
}

fn mst_cmd(c: MstCmd) -> Result<()> {
    let g = c.input.graph()?;
    let tree = match c.method {
        MstMethod::Forward => mst_forward(&g)?,
        MstMethod::Backward => mst_backward(&g)?,
    };
    let tg = tree.to_graph(&g);
    let text = match c.format {
        GraphFormat::Dot => tg.to_dot(),
        GraphFormat::Json => {
            let alpha_star = match c.alpha_min {
                Some(a) => alpha_star(&g, a, geo_options(c.input.lenient, ApspArg::Auto))?,
                None => None,
            };
            json(&MstReport {
                total_weight: tree.total_weight(),
                tree: tg,
                alpha_star,
            })?
        }
    };
    emit(c.out.as_deref(), &text)
}

fn geodesic_cmd(c: GeodesicCmd) -> Result<()> {
    let g = c.input.graph()?;
    let gr = geodesics_at(&g, c.geo.alpha, geo_options(c.input.lenient, c.geo.apsp))?;
    if let Some(p) = &c.dist_csv {
        let mut buf = Vec::new();
        write_matrix_csv(&gr.dist, &mut buf)?;
        emit(Some(p), std::str::from_utf8(&buf)?)?;
    }
    if let Some(p) = &c.dot {
        emit(Some(p), &g.subgraph(&gr.geodesic_edges).to_dot())?;
    }
    if c.out.is_some() || (c.dist_csv.is_none() && c.dot.is_none()) {
        emit(c.out.as_deref(), &json(&gr)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CatkReport {
    alpha: f64,
    #[serde(with = "geodesic_core::floatfmt::option")]
    girth: Option<f64>,
    k_threshold: f64,
    diameter_bounds: Option<DiameterBounds>,
    graph_comparisons: ComparisonSummary,
    graph_pass_rate: Option<f64>,
    cone_beta: Option<Beta>,
    cone_comparisons: Option<ComparisonSummary>,
    cone_pass_rate: Option<f64>,
}

fn catk_cmd(c: CatkCmd) -> Result<()> {
    let g = c.input.graph()?;
    let gr = geodesics_at(&g, c.geo.alpha, geo_options(c.input.lenient, c.geo.apsp))?;
    // the metric graph at this alpha carries the transformed weights
    let ga = g.with_weights(&gr.weights_alpha)?;
    let k = cat_k_threshold(&ga)?;
    let graph_comparisons = sample_graph_comparisons(&gr, k, c.samples, c.seed);
    let cone_comparisons = match c.beta {
        Some(b) if b.is_infinite() => bail!("--beta must be finite for cone comparisons"),
        Some(b) => Some(sample_cone_comparisons(&gr, b, c.samples, c.seed)),
        None => None,
    };
    let report = CatkReport {
        alpha: c.geo.alpha,
        girth: girth(&ga),
        k_threshold: k,
        diameter_bounds: if k > 0.0 { Some(diameter_bounds(k)?) } else { None },
        graph_pass_rate: graph_comparisons.pass_rate(),
        graph_comparisons,
        cone_beta: c.beta,
        cone_pass_rate: cone_comparisons.and_then(|s| s.pass_rate()),
        cone_comparisons,
    };
    emit(c.out.as_deref(), &json(&report)?)
}

fn frechet_cmd(c: FrechetCmd) -> Result<()> {
    let g = c.input.graph()?;
    let gr = geodesics_at(&g, c.geo.alpha, geo_options(c.input.lenient, c.geo.apsp))?;
    let params = FrechetParams::new(c.geo.alpha, c.beta, c.gamma)?;
    emit(c.out.as_deref(), &json(&frechet_means(&gr, &params)?)?)
}

#[derive(Serialize)]
struct AlphaScanSummary {
    grid: Vec<f64>,
    peaks: Vec<f64>,
    selected: Vec<f64>,
    threshold_sd: f64,
}

fn alpha_scan_cmd(c: AlphaScanCmd) -> Result<()> {
    let g = c.input.graph()?;
    let grid = match &c.alphas {
        Some(s) => parse_alpha_grid(s)?,
        None => default_alpha_grid(),
    };
    let scan = alpha_scan(&g, &grid, c.threshold, c.apsp.into())?;
    let mut buf = Vec::new();
    scan.write_csv(&mut buf)?;
    emit(c.out.as_deref(), std::str::from_utf8(&buf)?)?;
    if let Some(p) = &c.summary {
        let s = AlphaScanSummary {
            peaks: scan.peaks.clone(),
            selected: scan.selected.clone(),
            grid: scan.grid.clone(),
            threshold_sd: c.threshold,
        };
        emit(Some(p), &json(&s)?)?;
    }
    Ok(())
}

fn beta_scan_cmd(c: BetaScanCmd) -> Result<()> {
    let g = c.input.graph()?;
    let gr = geodesics_at(&g, c.geo.alpha, geo_options(c.input.lenient, c.geo.apsp))?;
    let scan = beta_scan(&gr, &c.ladder.ladder()?, c.gamma)?;
    let mut buf = Vec::new();
    scan.write_csv(&mut buf)?;
    emit(c.out.as_deref(), std::str::from_utf8(&buf)?)
}

fn knn_cmd(c: KnnCmd) -> Result<()> {
    if c.input.label.is_none() {
        bail!("knn needs --label");
    }
    let pc = load_csv(&c.input.input, c.input.label.as_deref())
        .with_context(|| format!("reading {}", c.input.input.display()))?;
    let pc = if c.raw { pc } else { normalize(&pc)? };
    let alphas = match &c.alphas {
        Some(s) => parse_alpha_grid(s)?,
        None => default_alpha_grid(),
    };
    let opts = KnnOptions {
        k: c.k,
        n_repeats: c.repeats,
        seed: c.seed,
        graph: c.input.graph.into(),
        algorithm: c.apsp.into(),
        rebuild_per_split: c.rebuild_per_split,
    };
    let r = knn_cv(&pc, &alphas, &c.ladder.ladder()?, &opts)?;
    emit(c.out.as_deref(), &json(&r)?)
}

fn reorder_cmd(c: ReorderCmd) -> Result<()> {
    let m = load_matrix_csv(&c.input).with_context(|| format!("reading {}", c.input.display()))?;
    let dg = average_linkage(&m)?;
    let r = reorder_matrix(&m, &dg)?;
    if let Some(p) = &c.merges {
        emit(Some(p), &json(&dg)?)?;
    }
    let mut buf = Vec::new();
    write_matrix_csv(&r, &mut buf)?;
    emit(c.out.as_deref(), std::str::from_utf8(&buf)?)
}

fn median1d_cmd(c: Median1dCmd) -> Result<()> {
    let x = load_column(&c.input, c.column.as_deref())?;
    emit(c.out.as_deref(), &json(&onedim_medians(&x)?)?)
}

/// Returns whether every check passed.
fn verify_cmd(c: VerifyCmd) -> Result<bool> {
    let mode = if c.quick { VerifyMode::Quick } else { VerifyMode::Full };
    let report = run_suite(mode, c.seed);
    let mut lines = String::new();
    for ch in &report.checks {
        let status = if ch.passed() { "PASS" } else { "FAIL" };
        lines += &format!("{status} {} ({} trials, {} failures)\n", ch.name, ch.trials, ch.failures);
        if let Some(f) = &ch.first_failure {
            lines += &format!("     first failure: {f}\n");
        }
    }
    lines += &format!(
        "{} checks, {} passed, {} failed; {} trials, {} failures\n",
        report.checks.len(),
        report.checks.len() - report.n_failed_checks(),
        report.n_failed_checks(),
        report.total_trials(),
        report.total_failures()
    );
    emit(None, &lines)?;
    if let Some(p) = &c.out {
        emit(Some(p), &json(&report)?)?;
    }
    Ok(report.n_failed_checks() == 0)
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("GEODESIC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("GEODESIC_THREADS must be a non-negative integer, got `{v}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Graph(c) => graph_cmd(c)?,
        Command::Mst(c) => mst_cmd(c)?,
        Command::Geodesic(c) => geodesic_cmd(c)?,
        Command::Catk(c) => catk_cmd(c)?,
        Command::Frechet(c) => frechet_cmd(c)?,
        Command::AlphaScan(c) => alpha_scan_cmd(c)?,
        Command::BetaScan(c) => beta_scan_cmd(c)?,
        Command::Knn(c) => knn_cmd(c)?,
        Command::Reorder(c) => reorder_cmd(c)?,
        Command::Median1d(c) => median1d_cmd(c)?,
        Command::Verify(c) => return verify_cmd(c),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
