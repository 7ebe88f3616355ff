//! Acceptance suite. Runs every criterion in order and prints one PASS/FAIL
//! line for each; exits nonzero if any fails.
//!
//! `cargo test --test acceptance -- 4 5` runs a subset by number.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use planar_oracle::cluster::{routed_batch, Cluster, Placement, PlacementPolicy, ENTRY_BYTES};
use planar_oracle::graph::{generate_grid, generate_triangulated_grid, Graph, WeightModel};
use planar_oracle::oracle::{build_oracle, Oracle};
use planar_oracle::partition::partition_graph;
use planar_oracle::paths::dijkstra_sssp;
use planar_oracle::persist::{load_oracle, oracle_bytes, oracle_from_bytes, save_oracle};
use planar_oracle::query::{query, query_parallel_inner, random_pairs};
use planar_oracle::Error;

mod common;
use common::{adjacency, ceil_sqrt, dijkstra, floyd_warshall, log_log_slope};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

const EXHAUSTIVE_BUDGET: Duration = Duration::from_secs(120);
const SAMPLED_BUDGET: Duration = Duration::from_secs(300);
const STORAGE_SLOPE: (f64, f64) = (1.4, 1.6);
const QUERY_SLOPE: (f64, f64) = (0.4, 0.6);
const BOUNDARY_FACTOR: f64 = 4.0;
const MIN_SPEEDUP: f64 = 50.0;
const SCALING_SIZES: [usize; 3] = [32, 64, 128];

fn small_graphs() -> Vec<(String, Graph)> {
    let int = WeightModel::Integer { lo: 1, hi: 20 };
    vec![
        ("grid 12x12 unit".into(), generate_grid(12, 12, WeightModel::Unit, 0).unwrap()),
        ("grid 31x32 int".into(), generate_grid(31, 32, int, 1).unwrap()),
        ("grid 44x45 int".into(), generate_grid(44, 45, int, 2).unwrap()),
        ("tri 15x15 unit".into(), generate_triangulated_grid(15, 15, WeightModel::Unit, 3).unwrap()),
        ("tri 30x33 int".into(), generate_triangulated_grid(30, 33, int, 4).unwrap()),
        ("tri 36x36 unit".into(), generate_triangulated_grid(36, 36, WeightModel::Unit, 5).unwrap()),
    ]
}

fn small_ks(n: usize) -> Vec<usize> {
    let mut ks = vec![1, 2, 4, ceil_sqrt(n)];
    ks.sort_unstable();
    ks.dedup();
    ks
}

/// Criteria 1 and 3 share graphs and ground truth.
fn exhaustive_and_boundary() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut queries = 0u64;
    let mut mismatches = 0u64;
    let mut boundary_pairs = 0u64;
    let mut violations = 0u64;
    let mut configs = 0;
    for (name, g) in small_graphs() {
        let n = g.n();
        let truth = floyd_warshall(&g);
        for k in small_ks(n) {
            configs += 1;
            let o = build_oracle(&g, k, 1, 0).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let got = query(&o, a, b).unwrap().distance;
                    queries += 1;
                    if got.to_bits() != truth[a * n + b].to_bits() {
                        mismatches += 1;
                        if mismatches <= 5 {
                            eprintln!("  {name} k={k}: d({a},{b}) = {got}, expected {}", truth[a * n + b]);
                        }
                    }
                }
            }
            let nb = o.boundary_total();
            for x in 0..nb {
                let gx = o.boundary_vertex(x);
                for y in 0..nb {
                    boundary_pairs += 1;
                    let expected = truth[gx * n + o.boundary_vertex(y)];
                    if o.boundary_distance(x, y).to_bits() != expected.to_bits() {
                        violations += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    (
        Outcome::new(
            mismatches == 0 && elapsed < EXHAUSTIVE_BUDGET,
            format!(
                "{queries} queries over {configs} graph/k configurations, {mismatches} mismatches, {:.1}s (budget {}s)",
                elapsed.as_secs_f64(),
                EXHAUSTIVE_BUDGET.as_secs()
            ),
        ),
        Outcome::new(
            violations == 0,
            format!("{boundary_pairs} boundary pairs, {violations} violations"),
        ),
    )
}

fn sampled_large() -> Outcome {
    let start = Instant::now();
    let g = generate_grid(256, 256, WeightModel::Unit, 0).unwrap();
    let o = build_oracle(&g, 128, 1, 0).unwrap();
    let built = start.elapsed();
    let adj = adjacency(&g);
    let mut pairs = random_pairs(g.n(), 10_000, 11);
    pairs.sort_unstable();
    let mut mismatches = 0;
    let mut current = (usize::MAX, Vec::new());
    for &(a, b) in &pairs {
        if current.0 != a {
            current = (a, dijkstra(&adj, a));
        }
        if query(&o, a, b).unwrap().distance.to_bits() != current.1[b].to_bits() {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        mismatches == 0 && elapsed < SAMPLED_BUDGET,
        format!(
            "256x256 k=128 |BG|={}: 10000 queries, {mismatches} mismatches, build {:.1}s, total {:.1}s (budget {}s)",
            o.boundary_total(),
            built.as_secs_f64(),
            elapsed.as_secs_f64(),
            SAMPLED_BUDGET.as_secs()
        ),
    )
}

/// Oracles for n in {1024, 4096, 16384} with k = ceil(sqrt(n)), shared by
/// criteria 4, 5 and 8.
fn scaling_oracles() -> Vec<Oracle> {
    SCALING_SIZES
        .iter()
        .map(|&side| {
            let g = generate_grid(side, side, WeightModel::Unit, 0).unwrap();
            build_oracle(&g, ceil_sqrt(g.n()), 1, 0).unwrap()
        })
        .collect()
}

fn storage_law(oracles: &[Oracle]) -> Outcome {
    let mut identity_ok = true;
    let mut ns = Vec::new();
    let mut entries = Vec::new();
    for o in oracles {
        let p = o.partition();
        let mut sizes = vec![0u64; o.k()];
        let mut boundary = vec![0u64; o.k()];
        for v in 0..o.n() {
            let c = p.assignment()[v];
            sizes[c] += 1;
            boundary[c] += u64::from(p.boundary_flags()[v]);
        }
        let bg: u64 = boundary.iter().sum();
        let expected = sizes.iter().map(|s| s * s).sum::<u64>() + bg * bg;
        let materialized: u64 = o.component_tables().iter().map(|t| t.values().len() as u64).sum::<u64>()
            + o.boundary_tables().iter().map(|t| t.values().len() as u64).sum::<u64>();
        identity_ok &= o.stored_entries() == expected && materialized == expected;
        ns.push(o.n() as f64);
        entries.push(o.stored_entries() as f64);
    }
    let slope = log_log_slope(&ns, &entries);
    Outcome::new(
        identity_ok && (STORAGE_SLOPE.0..=STORAGE_SLOPE.1).contains(&slope),
        format!(
            "identity {}, entries {:?}, slope {slope:.3} (want {:?})",
            if identity_ok { "holds" } else { "BROKEN" },
            entries.iter().map(|&e| e as u64).collect::<Vec<_>>(),
            STORAGE_SLOPE
        ),
    )
}

fn query_cost_law(oracles: &[Oracle]) -> Outcome {
    let mut ns = Vec::new();
    let mut means = Vec::new();
    for o in oracles {
        let (mut sum, mut count) = (0u64, 0u64);
        for (a, b) in random_pairs(o.n(), 4000, 5) {
            let r = query(o, a, b).unwrap();
            if !r.stats.same_component {
                sum += r.stats.minplus_ops;
                count += 1;
            }
        }
        ns.push(o.n() as f64);
        means.push(sum as f64 / count as f64);
    }
    let slope = log_log_slope(&ns, &means);
    Outcome::new(
        (QUERY_SLOPE.0..=QUERY_SLOPE.1).contains(&slope),
        format!(
            "mean ops {:?}, slope {slope:.3} (want {:?})",
            means.iter().map(|m| m.round() as u64).collect::<Vec<_>>(),
            QUERY_SLOPE
        ),
    )
}

fn partition_quality(oracles: &[Oracle]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    let mut check = |n: usize, k: usize, total: usize| {
        let ratio = (total as f64 / k as f64) / (BOUNDARY_FACTOR * (n as f64 / k as f64).sqrt());
        worst = worst.max(ratio);
        lines.push(format!("n={n} k={k}: {ratio:.2}"));
    };
    for o in oracles {
        check(o.n(), o.k(), o.boundary_total());
    }
    for &side in &SCALING_SIZES {
        let g = generate_grid(side, side, WeightModel::Unit, 0).unwrap();
        for k in [4, 16, 64] {
            check(g.n(), k, partition_graph(&g, k, 0).unwrap().boundary_total());
        }
    }
    Outcome::new(
        worst <= 1.0,
        format!("mean|B(C)| / (4 sqrt(n/k)) worst {worst:.2} [{}]", lines.join(", ")),
    )
}

fn transfer_accounting() -> Outcome {
    let g = generate_triangulated_grid(40, 40, WeightModel::Integer { lo: 1, hi: 9 }, 8).unwrap();
    let o = Arc::new(build_oracle(&g, 16, 1, 0).unwrap());
    let pairs = random_pairs(g.n(), 2000, 21);
    let boundary_count = |c: usize| {
        (0..o.n())
            .filter(|&v| o.partition().assignment()[v] == c && o.partition().boundary_flags()[v])
            .count() as u64
    };
    let counts: Vec<u64> = (0..o.k()).map(boundary_count).collect();
    let mut ok = true;
    let mut lines = Vec::new();
    for (p, policy) in [
        (1, PlacementPolicy::RoundRobin),
        (2, PlacementPolicy::RoundRobin),
        (5, PlacementPolicy::RoundRobin),
        (4, PlacementPolicy::PairsPerGpu),
        (16, PlacementPolicy::RoundRobin),
    ] {
        let placement = Placement::new(o.k(), p, policy).unwrap();
        let owner = |c: usize| match policy {
            PlacementPolicy::RoundRobin => c % p,
            PlacementPolicy::PairsPerGpu => c / o.k().div_ceil(p),
        };
        let expected: u64 = pairs
            .iter()
            .map(|&(a, b)| {
                let (c1, c2) = (o.partition().assignment()[a], o.partition().assignment()[b]);
                if owner(c1) != owner(c2) {
                    ENTRY_BYTES * counts[c2]
                } else {
                    0
                }
            })
            .sum();
        let (_, ledger) = routed_batch(&o, &placement, &pairs).unwrap();
        let mut cluster = Cluster::start(Arc::clone(&o), placement).unwrap();
        cluster.query_batch(&pairs).unwrap();
        let threaded = cluster.shutdown();
        let good = ledger.total_bytes() == expected
            && threaded.total_bytes() == expected
            && (p > 1 || (ledger.is_empty() && threaded.is_empty()));
        ok &= good;
        lines.push(format!("p={p} {policy:?}: {expected}B{}", if good { "" } else { " MISMATCH" }));
    }
    Outcome::new(ok, format!("2000 queries; {}", lines.join(", ")))
}

fn determinism() -> Outcome {
    let g = generate_grid(48, 48, WeightModel::Integer { lo: 1, hi: 50 }, 13).unwrap();
    let files: Vec<Vec<u8>> = [1, 4, 8]
        .iter()
        .map(|&w| oracle_bytes(&build_oracle(&g, 48, w, 42).unwrap()))
        .collect();
    let identical = files.windows(2).all(|w| w[0] == w[1]);
    let o = build_oracle(&g, 48, 1, 42).unwrap();
    let mut differing = 0;
    for (a, b) in random_pairs(g.n(), 1000, 3) {
        let seq = query(&o, a, b).unwrap();
        let par = query_parallel_inner(&o, a, b, 4).unwrap();
        if seq != par {
            differing += 1;
        }
    }
    Outcome::new(
        identical && differing == 0,
        format!(
            "files for workers 1/4/8 {} ({} bytes), parallel inner query differs on {differing} of 1000 pairs",
            if identical { "identical" } else { "DIFFER" },
            files[0].len()
        ),
    )
}

fn speedup() -> Outcome {
    let g = generate_grid(256, 256, WeightModel::Unit, 0).unwrap();
    let k = ceil_sqrt(g.n());
    let build = Instant::now();
    let o = build_oracle(&g, k, 1, 0).unwrap();
    let build = build.elapsed();
    let pairs = random_pairs(g.n(), 1000, 17);

    let start = Instant::now();
    let mut oracle_sum = 0.0;
    for &(a, b) in &pairs {
        oracle_sum += query(&o, a, b).unwrap().distance;
    }
    let oracle_time = start.elapsed();

    let start = Instant::now();
    let mut dijkstra_sum = 0.0;
    for &(a, b) in &pairs {
        dijkstra_sum += dijkstra_sssp(&g, a).unwrap()[b];
    }
    let dijkstra_time = start.elapsed();

    let ratio = dijkstra_time.as_secs_f64() / oracle_time.as_secs_f64();
    Outcome::new(
        ratio >= MIN_SPEEDUP && oracle_sum == dijkstra_sum,
        format!(
            "k={k} |BG|={} build {:.1}s; mean query {:.2}us vs Dijkstra {:.2}ms: {ratio:.0}x (want >= {MIN_SPEEDUP}x)",
            o.boundary_total(),
            build.as_secs_f64(),
            oracle_time.as_secs_f64() * 1e6 / 1000.0,
            dijkstra_time.as_secs_f64() * 1e3 / 1000.0
        ),
    )
}

fn persistence() -> Outcome {
    let g = generate_triangulated_grid(50, 50, WeightModel::Integer { lo: 1, hi: 30 }, 2).unwrap();
    let o = build_oracle(&g, 50, 1, 0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.psp");
    save_oracle(&o, &path).unwrap();
    let first = std::fs::read(&path).unwrap();
    let loaded = load_oracle(&path).unwrap();
    let again = dir.path().join("again.psp");
    save_oracle(&loaded, &again).unwrap();
    let round_trip = loaded == o && std::fs::read(&again).unwrap() == first;
    let answers_match = random_pairs(g.n(), 500, 1)
        .into_iter()
        .all(|(a, b)| query(&o, a, b).unwrap() == query(&loaded, a, b).unwrap());

    let mut rejected = 0;
    let cases = [first.len() - 1, first.len() - 8, first.len() / 2, 40];
    for &at in &cases {
        let mut bad = first.clone();
        bad[at] ^= 0x10;
        std::fs::write(&path, &bad).unwrap();
        if matches!(load_oracle(&path), Err(Error::Checksum { .. })) {
            rejected += 1;
        }
    }
    let empty_rejected = matches!(oracle_from_bytes(&[]), Err(Error::Truncated));
    Outcome::new(
        round_trip && answers_match && rejected == cases.len() && empty_rejected,
        format!(
            "{} bytes, round trip {}, {rejected}/{} corrupted files rejected",
            first.len(),
            if round_trip && answers_match { "bit-identical" } else { "DIFFERS" },
            cases.len()
        ),
    )
}

const TITLES: [&str; 10] = [
    "exactness, exhaustive",
    "exactness, sampled 256x256",
    "boundary graph distances",
    "storage law",
    "query cost law",
    "transfer accounting",
    "determinism",
    "partition quality",
    "query speedup",
    "persistence",
];

fn main() -> ExitCode {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |c: usize| selected.is_empty() || selected.contains(&c);
    let mut results: Vec<(usize, Outcome, Duration)> = Vec::new();
    let mut record = |c: usize, outcome: Outcome, took: Duration| {
        println!(
            "criterion {c:>2} {}: {} ({:.1}s) {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            TITLES[c - 1],
            took.as_secs_f64(),
            outcome.detail
        );
        results.push((c, outcome, took));
    };

    if wanted(1) || wanted(3) {
        let start = Instant::now();
        let (exhaustive, boundary) = exhaustive_and_boundary();
        let took = start.elapsed();
        if wanted(1) {
            record(1, exhaustive, took);
        }
        if wanted(3) {
            record(3, boundary, took);
        }
    }
    if wanted(2) {
        let start = Instant::now();
        let outcome = sampled_large();
        record(2, outcome, start.elapsed());
    }
    if wanted(4) || wanted(5) || wanted(8) {
        let start = Instant::now();
        let oracles = scaling_oracles();
        let shared = start.elapsed();
        type Check = fn(&[Oracle]) -> Outcome;
        let checks: [(usize, Check); 3] = [(4, storage_law), (5, query_cost_law), (8, partition_quality)];
        for (c, check) in checks {
            if wanted(c) {
                let start = Instant::now();
                let outcome = check(&oracles);
                record(c, outcome, shared + start.elapsed());
            }
        }
    }
    type Single = fn() -> Outcome;
    let singles: [(usize, Single); 4] = [(6, transfer_accounting), (7, determinism), (9, speedup), (10, persistence)];
    for (c, run) in singles {
        if wanted(c) {
            let start = Instant::now();
            let outcome = run();
            record(c, outcome, start.elapsed());
        }
    }

    results.sort_by_key(|r| r.0);
    let failed: Vec<usize> = results.iter().filter(|r| !r.1.passed).map(|r| r.0).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        results.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" {failed:?}") }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
