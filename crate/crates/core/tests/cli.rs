use std::path::Path;
use std::process::{Command, Output};

use planar_oracle::cli::BENCH_HEADER;
use planar_oracle::graph::{load_graph, GraphFormat};
use planar_oracle::persist::load_oracle;

mod common;

fn psp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psp")).args(args).output().expect("spawn psp")
}

fn ok(args: &[&str]) -> String {
    let out = psp(args);
    assert!(
        out.status.success(),
        "psp {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_grid_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.el");
    let b = dir.path().join("b.el");
    ok(&["generate", "--grid", "2x3", "--unit", "-o", s(&a)]);
    let g = load_graph(&a, GraphFormat::EdgeList).unwrap();
    assert_eq!((g.n(), g.m()), (6, 7));

    ok(&["generate", "--grid", "40x50", "--integer", "1,100", "--seed", "1", "-o", s(&a)]);
    ok(&["generate", "--grid", "40x50", "--integer", "1,100", "--seed", "1", "-o", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let tri = ok(&["generate", "--grid", "3x3", "--triangulated", "--format", "dimacs"]);
    assert!(tri.starts_with("p sp 9 "));
}

#[test]
fn generate_rejects_empty_grid() {
    let out = psp(&["generate", "--grid", "0x5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generate_reports_unwritable_path() {
    let out = psp(&["generate", "--grid", "2x2", "-o", "/nonexistent-dir/g.el"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn preprocess_query_verify_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    let oracle = dir.path().join("g.psp");
    ok(&["generate", "--grid", "2x3", "--unit", "-o", s(&graph)]);

    let stats: serde_json::Value =
        serde_json::from_str(&ok(&["preprocess", "-i", s(&graph), "--k", "2", "-o", s(&oracle)])).unwrap();
    assert_eq!(stats["n"], 6);
    assert_eq!(stats["k"], 2);
    assert_eq!(stats["p"], 1);
    assert_eq!(stats["boundary_total"], 4);
    let o = load_oracle(&oracle).unwrap();
    assert_eq!(stats["stored_entries"], o.stored_entries());
    for phase in ["partition", "component_apsp", "boundary", "total"] {
        assert!(stats["elapsed_ms"][phase].is_number());
    }

    let lines = ok(&["query", "-i", s(&oracle), "0,5", "4:4"]);
    let lines: Vec<&str> = lines.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("0 5 3 "), "{}", lines[0]);
    assert!(lines[1].starts_with("4 4 0 "), "{}", lines[1]);

    let out = psp(&["query", "-i", s(&oracle), "0,99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("99"));

    let report: serde_json::Value =
        serde_json::from_str(&ok(&["verify", "-g", s(&graph), "-i", s(&oracle)])).unwrap();
    assert_eq!(report["pairs_checked"], 36);
    assert_eq!(report["mismatches"], 0);
    assert_eq!(report["exhaustive"], true);
    assert_eq!(report["boundary_mismatches"], 0);
}

#[test]
fn preprocess_default_and_extreme_k() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    let oracle = dir.path().join("g.psp");
    ok(&["generate", "--grid", "5x5", "-o", s(&graph)]);
    let stats = |extra: &[&str]| -> serde_json::Value {
        let mut args = vec!["preprocess", "-i", s(&graph), "-o", s(&oracle)];
        args.extend_from_slice(extra);
        serde_json::from_str(&ok(&args)).unwrap()
    };
    assert_eq!(stats(&[])["k"], 5);
    assert_eq!(stats(&["--k", "1"])["boundary_total"], 0);
    assert_eq!(stats(&["--k", "25"])["boundary_total"], 25);
    assert_eq!(stats(&["--k", "4", "-p", "4"])["p"], 4);

    assert_eq!(psp(&["preprocess", "-i", s(&graph), "--k", "26", "-o", s(&oracle)]).status.code(), Some(1));
    assert_eq!(psp(&["preprocess", "-i", s(&graph), "--k", "4", "-p", "5", "-o", s(&oracle)]).status.code(), Some(1));
    assert_eq!(psp(&["preprocess", "-i", "/nonexistent.el", "-o", s(&oracle)]).status.code(), Some(2));
}

#[test]
fn k_equal_n_counts_non_isolated_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    let oracle = dir.path().join("g.psp");
    std::fs::write(&graph, "5 2\n0 1 1\n1 2 2\n").unwrap();
    let stats: serde_json::Value =
        serde_json::from_str(&ok(&["preprocess", "-i", s(&graph), "--k", "5", "-o", s(&oracle)])).unwrap();
    assert_eq!(stats["boundary_total"], 3);
    let out = ok(&["query", "-i", s(&oracle), "0,2", "0,4"]);
    assert_eq!(out.lines().next().unwrap().split(' ').nth(2), Some("3"));
    assert_eq!(out.lines().nth(1).unwrap().split(' ').nth(2), Some("inf"));
}

#[test]
fn query_sources_and_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    let oracle = dir.path().join("g.psp");
    let pairs = dir.path().join("pairs.txt");
    let ledger = dir.path().join("ledger.csv");
    ok(&["generate", "--grid", "12x12", "--integer", "1,9", "-o", s(&graph)]);
    ok(&["preprocess", "-i", s(&graph), "--k", "8", "-o", s(&oracle)]);
    std::fs::write(&pairs, "# v1 v2\n0 143\n5 5\n").unwrap();

    let from_file = ok(&["query", "-i", s(&oracle), "--pairs", s(&pairs)]);
    assert_eq!(from_file.lines().count(), 2);

    let g = load_graph(&graph, GraphFormat::EdgeList).unwrap();
    let adj = common::adjacency(&g);
    let random = ok(&["query", "-i", s(&oracle), "--random-pairs", "200", "--seed", "7", "-p", "3", "--ledger", s(&ledger)]);
    let mut expected_bytes = 0u64;
    for line in random.lines() {
        let f: Vec<&str> = line.split(' ').collect();
        let (a, b): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let d: f64 = f[2].parse().unwrap();
        assert_eq!(d, common::dijkstra(&adj, a)[b], "{line}");
        expected_bytes += 8 * f[4].parse::<u64>().unwrap();
    }
    let csv = std::fs::read_to_string(&ledger).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("query_id,src_worker,dst_worker,entries,bytes"));
    let bytes: u64 = rows.map(|r| r.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(bytes, expected_bytes);
    assert!(bytes > 0);

    let single = ok(&["query", "-i", s(&oracle), "--random-pairs", "50", "-p", "1"]);
    assert!(single.lines().all(|l| l.ends_with(" 0")));
}

#[test]
fn verify_detects_corrupted_table() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    let oracle = dir.path().join("g.psp");
    ok(&["generate", "--grid", "8x8", "-o", s(&graph)]);
    ok(&["preprocess", "-i", s(&graph), "--k", "4", "-o", s(&oracle)]);

    // Overwrite the first off-diagonal entry of the first component table
    // with 0.5 and re-seal the checksum.
    let o = load_oracle(&oracle).unwrap();
    let n = o.n();
    let table_start = 32 + 16 * n + n.div_ceil(8) + 8 * (o.k() + 1);
    let mut bytes = std::fs::read(&oracle).unwrap();
    bytes[table_start + 8..table_start + 16].copy_from_slice(&0.5f64.to_le_bytes());
    let body = bytes.len() - 8;
    let crc = crc::Crc::<u64>::new(&crc::CRC_64_XZ).checksum(&bytes[..body]);
    bytes[body..].copy_from_slice(&crc.to_le_bytes());
    std::fs::write(&oracle, &bytes).unwrap();

    let out = psp(&["verify", "-g", s(&graph), "-i", s(&oracle)]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["mismatches"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_sampled_on_larger_grid() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    let oracle = dir.path().join("g.psp");
    ok(&["generate", "--grid", "64x64", "-o", s(&graph)]);
    ok(&["preprocess", "-i", s(&graph), "-o", s(&oracle)]);
    let report: serde_json::Value =
        serde_json::from_str(&ok(&["verify", "-g", s(&graph), "-i", s(&oracle)])).unwrap();
    assert_eq!(report["exhaustive"], false);
    assert_eq!(report["pairs_checked"], 10_000);
    assert_eq!(report["mismatches"], 0);
}

#[test]
fn bench_rows_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.el");
    ok(&["generate", "--grid", "20x20", "-o", s(&graph)]);

    let csv = ok(&["bench", "-i", s(&graph), "--sweep-k", "8,16", "--queries", "100"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], BENCH_HEADER);
    assert_eq!(lines.len(), 3);
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[col("status")], "ok");
        assert!(f[col("stored_entries")].parse::<u64>().unwrap() > 0);
    }

    let csv = ok(&["bench", "-i", s(&graph), "--sweep-k", "4,1000", "--sweep-p", "1,2", "--queries", "20"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[3].starts_with("1000,1,error"));
    assert!(lines[1].contains(",ok,"));

    let empty = ok(&["bench", "-i", s(&graph), "--sweep-k", ""]);
    assert_eq!(empty, format!("{BENCH_HEADER}\n"));
    let absent = ok(&["bench", "-i", s(&graph)]);
    assert_eq!(absent, format!("{BENCH_HEADER}\n"));
}

#[test]
fn help_exits_zero() {
    let out = psp(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("preprocess"));
}
