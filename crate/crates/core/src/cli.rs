//! The `psp` command line: generate, preprocess, query, verify, bench.
//!
//! Every subcommand writes its report to the supplied writer so it can be
//! driven in-process. Exit codes: 0 ok, 1 usage, 2 I/O or bad input file,
//! 3 verification failure.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cluster::{routed_batch, routed_query, Placement, PlacementPolicy};
use crate::error::{Error, Result};
use crate::graph::{generate_grid, generate_triangulated_grid, load_graph, Graph, GraphFormat, WeightModel};
use crate::oracle::{build_oracle_timed, BuildTimings, Oracle};
use crate::paths::DijkstraWorkspace;
use crate::persist::{load_oracle, save_oracle};
use crate::query::{batch_query, random_pairs, QueryResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Pair counts at or below this are verified exhaustively.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 10_000;
/// Largest boundary graph whose pairs `verify` checks against the full graph.
pub const BOUNDARY_CHECK_LIMIT: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "psp", version, about = "Partition-based shortest-distance oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic grid graph.
    Generate(GenerateArgs),
    /// Build an oracle file from a graph and print build statistics as JSON.
    Preprocess(PreprocessArgs),
    /// Answer distance queries from an oracle file.
    Query(QueryArgs),
    /// Compare oracle answers with Dijkstra on the original graph.
    Verify(VerifyArgs),
    /// Sweep component and worker counts and emit CSV measurements.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSize {
    pub rows: usize,
    pub cols: usize,
}

impl FromStr for GridSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (r, c) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
        let rows: usize = r.trim().parse().map_err(|e| format!("rows: {e}"))?;
        let cols: usize = c.trim().parse().map_err(|e| format!("cols: {e}"))?;
        if rows == 0 || cols == 0 {
            return Err(format!("grid dimensions must be positive, got {rows}x{cols}"));
        }
        Ok(GridSize { rows, cols })
    }
}

/// Two numbers separated by `,` or `:`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range2<T>(pub T, pub T);

impl<T: FromStr> FromStr for Range2<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once([',', ':']).ok_or_else(|| format!("expected A,B, got {s:?}"))?;
        let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        Ok(Range2(a, b))
    }
}

/// Comma-separated counts. Empty pieces are skipped, so `""` is an empty list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountList(pub Vec<usize>);

impl FromStr for CountList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|piece| !piece.is_empty())
            .map(|piece| piece.parse().map_err(|e| format!("{piece:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(CountList)
    }
}

fn parse_format(s: &str) -> Result<GraphFormat, String> {
    s.parse()
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("weights").multiple(false))]
pub struct GenerateArgs {
    /// Grid dimensions, e.g. 64x64.
    #[arg(long)]
    pub grid: GridSize,
    /// Add one random diagonal per grid cell.
    #[arg(long)]
    pub triangulated: bool,
    /// Unit weights (default).
    #[arg(long, group = "weights")]
    pub unit: bool,
    /// Real weights uniform in [LO, HI).
    #[arg(long, group = "weights", value_name = "LO,HI")]
    pub uniform: Option<Range2<f64>>,
    /// Integer weights uniform in LO..=HI.
    #[arg(long, group = "weights", value_name = "LO,HI")]
    pub integer: Option<Range2<u32>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "edge-list", value_parser = parse_format)]
    pub format: GraphFormat,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value = "edge-list", value_parser = parse_format)]
    pub format: GraphFormat,
    /// Number of components; defaults to ceil(sqrt(n)).
    #[arg(long)]
    pub k: Option<usize>,
    /// Worker count for the build and for the per-worker storage report.
    #[arg(short = 'p', long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    RoundRobin,
    PairsPerGpu,
}

impl From<PolicyArg> for PlacementPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::RoundRobin => PlacementPolicy::RoundRobin,
            PolicyArg::PairsPerGpu => PlacementPolicy::PairsPerGpu,
        }
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// Oracle file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Inline pairs such as `0,5`.
    #[arg(value_name = "V1,V2")]
    pub pairs: Vec<Range2<usize>>,
    /// File with one `v1 v2` pair per line.
    #[arg(long = "pairs", value_name = "FILE", conflicts_with = "random_pairs")]
    pub pairs_file: Option<PathBuf>,
    /// Answer N random pairs drawn with --seed.
    #[arg(long, value_name = "N")]
    pub random_pairs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulated worker count; components are placed with --policy.
    /// Without it the placement stored in the oracle file is used.
    #[arg(short = 'p', long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value = "round-robin")]
    pub policy: PolicyArg,
    /// Write the transfer ledger as CSV.
    #[arg(long, value_name = "FILE")]
    pub ledger: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Graph the oracle was built from.
    #[arg(short, long)]
    pub graph: PathBuf,
    #[arg(long, default_value = "edge-list", value_parser = parse_format)]
    pub format: GraphFormat,
    /// Oracle file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Random pairs to check when n^2 exceeds the exhaustive limit.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance; 0 compares bitwise. Only real-valued weights
    /// need a nonzero value.
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, default_value = "edge-list", value_parser = parse_format)]
    pub format: GraphFormat,
    /// Comma-separated component counts; may be empty.
    #[arg(long, default_value = "")]
    pub sweep_k: CountList,
    /// Comma-separated worker counts.
    #[arg(long, default_value = "1")]
    pub sweep_p: CountList,
    /// Random queries per configuration.
    #[arg(long, default_value_t = 1000)]
    pub queries: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// A subcommand outcome other than success.
#[derive(Debug)]
pub enum Failure {
    Error(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verification(_) => EXIT_VERIFY,
            Failure::Error(e) => exit_code(e),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Error(e) => e.fmt(f),
            Failure::Verification(msg) => f.write_str(msg),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::NegativeWeight { .. }
        | Error::Asymmetric { .. }
        | Error::Truncated
        | Error::BadMagic
        | Error::VersionMismatch { .. }
        | Error::Checksum { .. }
        | Error::Malformed(_)
        | Error::WorkerGone => EXIT_IO,
        Error::TooLarge { .. }
        | Error::InvalidGraph(_)
        | Error::VertexOutOfRange { .. }
        | Error::InvalidComponentCount { .. }
        | Error::InvalidWorkerCount { .. }
        | Error::LengthMismatch { .. }
        | Error::OracleMismatch { .. } => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "psp: {f}");
            f.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Generate(a) => cmd_generate(a, out).map_err(Failure::from),
        Command::Preprocess(a) => cmd_preprocess(a, out).map(drop).map_err(Failure::from),
        Command::Query(a) => cmd_query(a, out).map_err(Failure::from),
        Command::Verify(a) => {
            let report = cmd_verify(a, out)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "{} of {} pairs and {} of {} boundary pairs disagree",
                    report.mismatches, report.pairs_checked, report.boundary_mismatches, report.boundary_pairs_checked
                )))
            }
        }
        Command::Bench(a) => cmd_bench(a, out).map_err(Failure::from),
    }
}

fn stdout_err(e: io::Error) -> Error {
    Error::io("<output>", e)
}

fn write_text(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(stdout_err),
    }
}

pub fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<()> {
    let weights = match (a.uniform, a.integer) {
        (Some(Range2(lo, hi)), _) => WeightModel::Uniform { lo, hi },
        (_, Some(Range2(lo, hi))) => WeightModel::Integer { lo, hi },
        _ => WeightModel::Unit,
    };
    let GridSize { rows, cols } = a.grid;
    let g = if a.triangulated {
        generate_triangulated_grid(rows, cols, weights, a.seed)?
    } else {
        generate_grid(rows, cols, weights, a.seed)?
    };
    let text = match a.format {
        GraphFormat::EdgeList => crate::graph::write_edge_list(&g),
        GraphFormat::Dimacs => crate::graph::write_dimacs(&g),
    };
    write_text(a.output.as_deref(), &text, out)
}

/// Default component count, `ceil(sqrt(n))`.
pub fn default_k(n: usize) -> usize {
    let mut k = (n as f64).sqrt() as usize;
    while k * k < n {
        k += 1;
    }
    while k > 1 && (k - 1) * (k - 1) >= n {
        k -= 1;
    }
    k.max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseMillis {
    pub partition: f64,
    pub component_apsp: f64,
    pub boundary: f64,
    pub total: f64,
}

impl From<BuildTimings> for PhaseMillis {
    fn from(t: BuildTimings) -> Self {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        PhaseMillis {
            partition: ms(t.partition),
            component_apsp: ms(t.component_apsp),
            boundary: ms(t.boundary),
            total: ms(t.partition + t.component_apsp + t.boundary),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreprocessStats {
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub boundary_total: usize,
    pub elapsed_ms: PhaseMillis,
    pub stored_entries: u64,
    pub peak_table_entries_per_worker: u64,
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidComponentCount { k, n });
    }
    Ok(())
}

fn check_p(p: usize, k: usize) -> Result<()> {
    if p == 0 || p > k {
        return Err(Error::InvalidWorkerCount { p, k });
    }
    Ok(())
}

pub fn cmd_preprocess(a: &PreprocessArgs, out: &mut dyn Write) -> Result<PreprocessStats> {
    let g = load_graph(&a.input, a.format)?;
    let k = a.k.unwrap_or_else(|| default_k(g.n()));
    check_k(k, g.n())?;
    check_p(a.workers, k)?;
    let (oracle, timings) = build_oracle_timed(&g, k, a.workers, a.seed)?;
    drop(g);
    let placement = Placement::new(k, a.workers, PlacementPolicy::RoundRobin)?;
    let stats = PreprocessStats {
        n: oracle.n(),
        k,
        p: a.workers,
        boundary_total: oracle.boundary_total(),
        elapsed_ms: timings.into(),
        stored_entries: oracle.stored_entries(),
        peak_table_entries_per_worker: oracle.peak_worker_entries(&placement),
    };
    save_oracle(&oracle, &a.output)?;
    let json = serde_json::to_string_pretty(&stats).expect("stats serialize");
    writeln!(out, "{json}").map_err(stdout_err)?;
    Ok(stats)
}

/// Reads `v1 v2` pairs, one per line. Blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty());
        let mut next = || -> Result<usize> {
            let f = fields.next().ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected two vertex ids".into(),
            })?;
            f.parse().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("{f:?}: {e}"),
            })
        };
        let pair = (next()?, next()?);
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                message: "trailing fields".into(),
            });
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

pub fn format_distance(d: f64) -> String {
    if d.is_infinite() {
        "inf".to_string()
    } else {
        d.to_string()
    }
}

fn query_pairs(a: &QueryArgs, n: usize) -> Result<Vec<(usize, usize)>> {
    let mut pairs: Vec<(usize, usize)> = a.pairs.iter().map(|&Range2(x, y)| (x, y)).collect();
    if let Some(path) = &a.pairs_file {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        pairs.extend(parse_pairs(&text)?);
    }
    if let Some(count) = a.random_pairs {
        pairs.extend(random_pairs(n, count, a.seed));
    }
    Ok(pairs)
}

pub fn cmd_query(a: &QueryArgs, out: &mut dyn Write) -> Result<()> {
    let mut oracle = load_oracle(&a.input)?;
    let pairs = query_pairs(a, oracle.n())?;
    for &(x, y) in &pairs {
        for v in [x, y] {
            if v >= oracle.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: oracle.n() });
            }
        }
    }
    let threads = match a.workers {
        Some(p) => {
            check_p(p, oracle.k())?;
            oracle.set_placement(Placement::new(oracle.k(), p, a.policy.into())?)?;
            p
        }
        None => 1,
    };
    let results = batch_query(&oracle, &pairs, threads)?;
    let mut text = String::with_capacity(32 * pairs.len());
    for (&(x, y), r) in pairs.iter().zip(&results) {
        text.push_str(&format!(
            "{x} {y} {} {} {}\n",
            format_distance(r.distance),
            r.stats.minplus_ops,
            r.stats.transfer_entries
        ));
    }
    out.write_all(text.as_bytes()).map_err(stdout_err)?;
    if let Some(path) = &a.ledger {
        let (_, ledger) = routed_batch(&oracle, oracle.placement(), &pairs)?;
        ledger.write_csv(path)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub k: usize,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    pub mismatches: u64,
    pub boundary_total: usize,
    pub boundary_checked: bool,
    pub boundary_pairs_checked: u64,
    pub boundary_mismatches: u64,
    /// Up to ten disagreeing pairs as `(v1, v2, oracle, dijkstra)`.
    pub examples: Vec<(usize, usize, f64, f64)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.boundary_mismatches == 0
    }
}

fn agrees(a: f64, b: f64, tolerance: f64) -> bool {
    if a == b {
        return true;
    }
    tolerance > 0.0 && a.is_finite() && b.is_finite() && (a - b).abs() <= tolerance * a.abs().max(b.abs()).max(1.0)
}

/// Checks `oracle` against Dijkstra on `g`. All pairs when `n^2` is at most
/// [`EXHAUSTIVE_PAIR_LIMIT`], otherwise `samples` random pairs; every
/// boundary pair when the boundary graph has at most
/// [`BOUNDARY_CHECK_LIMIT`] vertices.
pub fn verify_oracle(g: &Graph, oracle: &Oracle, samples: usize, seed: u64, tolerance: f64) -> Result<VerifyReport> {
    let n = g.n();
    if oracle.n() != n {
        return Err(Error::OracleMismatch { oracle: oracle.n(), graph: n });
    }
    let exhaustive = n.saturating_mul(n) <= EXHAUSTIVE_PAIR_LIMIT;
    let mut pairs = if exhaustive {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        random_pairs(n, samples, seed)
    };
    pairs.sort_unstable();

    let mut report = VerifyReport {
        n,
        k: oracle.k(),
        exhaustive,
        pairs_checked: 0,
        mismatches: 0,
        boundary_total: oracle.boundary_total(),
        boundary_checked: false,
        boundary_pairs_checked: 0,
        boundary_mismatches: 0,
        examples: Vec::new(),
    };
    let mut ws = DijkstraWorkspace::default();
    let mut dist = vec![0.0; n];
    let mut current = usize::MAX;
    for &(a, b) in &pairs {
        if a != current {
            ws.run(g, a, &mut dist);
            current = a;
        }
        let got = crate::query::query(oracle, a, b)?.distance;
        report.pairs_checked += 1;
        if !agrees(got, dist[b], tolerance) {
            report.mismatches += 1;
            if report.examples.len() < 10 {
                report.examples.push((a, b, got, dist[b]));
            }
        }
    }

    let nb = oracle.boundary_total();
    if nb <= BOUNDARY_CHECK_LIMIT {
        report.boundary_checked = true;
        for x in 0..nb {
            ws.run(g, oracle.boundary_vertex(x), &mut dist);
            for y in 0..nb {
                report.boundary_pairs_checked += 1;
                if !agrees(oracle.boundary_distance(x, y), dist[oracle.boundary_vertex(y)], tolerance) {
                    report.boundary_mismatches += 1;
                }
            }
        }
    }
    Ok(report)
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<VerifyReport> {
    let g = load_graph(&a.graph, a.format)?;
    let oracle = load_oracle(&a.input)?;
    let report = verify_oracle(&g, &oracle, a.samples, a.seed, a.tolerance)?;
    let json = serde_json::to_string_pretty(&report).expect("report serialize");
    writeln!(out, "{json}").map_err(stdout_err)?;
    Ok(report)
}

pub const BENCH_HEADER: &str = "k,p,status,partition_ms,component_apsp_ms,boundary_ms,boundary_total,stored_entries,\
peak_worker_entries,mean_minplus_ops,mean_query_us,transfer_bytes";

/// One configuration of a bench sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub k: usize,
    pub p: usize,
    pub outcome: std::result::Result<BenchMeasurement, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchMeasurement {
    pub timings: PhaseMillis,
    pub boundary_total: usize,
    pub stored_entries: u64,
    pub peak_worker_entries: u64,
    pub mean_minplus_ops: f64,
    pub mean_query_us: f64,
    pub transfer_bytes: u64,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        match &self.outcome {
            Ok(m) => format!(
                "{},{},ok,{:.3},{:.3},{:.3},{},{},{},{:.3},{:.3},{}",
                self.k,
                self.p,
                m.timings.partition,
                m.timings.component_apsp,
                m.timings.boundary,
                m.boundary_total,
                m.stored_entries,
                m.peak_worker_entries,
                m.mean_minplus_ops,
                m.mean_query_us,
                m.transfer_bytes
            ),
            Err(msg) => format!("{},{},error: {},,,,,,,,,", self.k, self.p, msg.replace([',', '\n'], ";")),
        }
    }
}

fn bench_one(g: &Graph, k: usize, p: usize, pairs: &[(usize, usize)], seed: u64) -> Result<BenchMeasurement> {
    check_k(k, g.n())?;
    check_p(p, k)?;
    let (oracle, timings) = build_oracle_timed(g, k, p, seed)?;
    let placement = Placement::new(k, p, PlacementPolicy::RoundRobin)?;
    let mut ops = 0u64;
    let mut bytes = 0u64;
    let mut elapsed = Duration::ZERO;
    for &(a, b) in pairs {
        let start = Instant::now();
        let (r, record): (QueryResult, _) = routed_query(&oracle, &placement, a, b)?;
        elapsed += start.elapsed();
        ops += r.stats.minplus_ops;
        bytes += record.map_or(0, |t| t.bytes);
    }
    let q = pairs.len().max(1) as f64;
    Ok(BenchMeasurement {
        timings: timings.into(),
        boundary_total: oracle.boundary_total(),
        stored_entries: oracle.stored_entries(),
        peak_worker_entries: oracle.peak_worker_entries(&placement),
        mean_minplus_ops: ops as f64 / q,
        mean_query_us: elapsed.as_secs_f64() * 1e6 / q,
        transfer_bytes: bytes,
    })
}

/// Runs every `(k, p)` combination over `g`. A configuration that cannot be
/// built yields an error row and the sweep continues.
pub fn bench_sweep(g: &Graph, ks: &[usize], ps: &[usize], queries: usize, seed: u64) -> Vec<BenchRow> {
    let pairs = random_pairs(g.n(), queries, seed);
    let mut rows = Vec::new();
    for &k in ks {
        for &p in ps {
            let outcome = bench_one(g, k, p, &pairs, seed).map_err(|e| e.to_string());
            rows.push(BenchRow { k, p, outcome });
        }
    }
    rows
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.input, a.format)?;
    let rows = bench_sweep(&g, &a.sweep_k.0, &a.sweep_p.0, a.queries, a.seed);
    let mut text = String::from(BENCH_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.to_csv());
        text.push('\n');
    }
    write_text(a.output.as_deref(), &text, out)
}
