//! Partition a unit grid and report component sizes, boundary counts and
//! the boundary-first reordering.
//!
//!     cargo run --release --example partition_grid -- 64 16

use planar_oracle::graph::{generate_grid, WeightModel};
use planar_oracle::partition::{balance_limit, partition_graph, reorder_vertices};

fn main() -> planar_oracle::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let side = args.next().unwrap_or(64);
    let k = args.next().unwrap_or(16);

    let g = generate_grid(side, side, WeightModel::Unit, 0)?;
    let p = partition_graph(&g, k, 0)?;
    let n = g.n();

    println!("{side}x{side} grid, n={n}, k={k}, size cap {}", balance_limit(n, k));
    println!("{:>4} {:>6} {:>8}", "comp", "size", "boundary");
    for c in 0..k {
        println!("{c:>4} {:>6} {:>8}", p.size(c), p.boundary_count(c));
    }
    let mean = p.boundary_total() as f64 / k as f64;
    let scale = 4.0 * (n as f64 / k as f64).sqrt();
    println!("mean boundary {mean:.1}, 4*sqrt(n/k) = {scale:.1}, ratio {:.2}", mean / scale);

    let (reordered, layout) = reorder_vertices(&g, &p);
    assert!(layout.is_ordered());
    assert_eq!(reordered.m(), g.m());
    let first = layout.members(0);
    println!(
        "component 0 occupies ids {}..={}, boundary first: {:?}",
        first[0],
        first[first.len() - 1],
        first.iter().map(|&v| layout.is_boundary(v)).take(p.boundary_count(0) + 2).collect::<Vec<_>>()
    );
    Ok(())
}
