//! Build an oracle over a weighted grid and check a batch of queries against
//! Dijkstra.
//!
//!     cargo run --release --example build_and_query -- 96 2000

use std::time::Instant;

use planar_oracle::graph::{generate_grid, WeightModel};
use planar_oracle::oracle::build_oracle_timed;
use planar_oracle::paths::dijkstra_sssp;
use planar_oracle::query::{batch_query, query, random_pairs};

fn main() -> planar_oracle::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let side = args.next().unwrap_or(96);
    let count = args.next().unwrap_or(2000);

    let g = generate_grid(side, side, WeightModel::Integer { lo: 1, hi: 50 }, 7)?;
    let k = (g.n() as f64).sqrt().ceil() as usize;
    let (oracle, timings) = build_oracle_timed(&g, k, 2, 0)?;
    println!(
        "n={} k={k} |BG|={} stored entries {} (partition {:?}, tables {:?}, boundary {:?})",
        g.n(),
        oracle.boundary_total(),
        oracle.stored_entries(),
        timings.partition,
        timings.component_apsp,
        timings.boundary
    );

    let pairs = random_pairs(g.n(), count, 1);
    let start = Instant::now();
    let results = batch_query(&oracle, &pairs, 2)?;
    let elapsed = start.elapsed();

    let mut ops = 0;
    for (&(a, b), r) in pairs.iter().zip(&results).take(200) {
        assert_eq!(r.distance, dijkstra_sssp(&g, a)?[b], "pair ({a}, {b})");
        ops += r.stats.minplus_ops;
    }
    println!(
        "{count} queries in {elapsed:?}; first 200 match Dijkstra, mean min-plus ops {:.0}",
        ops as f64 / 200.0
    );

    let r = query(&oracle, 0, g.n() - 1)?;
    println!(
        "corner to corner: {} ({} ops, boundary sizes {:?})",
        r.distance, r.stats.minplus_ops, r.stats.boundary_sizes
    );
    Ok(())
}
