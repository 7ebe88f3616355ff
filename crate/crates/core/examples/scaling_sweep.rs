//! Sweep the component count on a fixed grid and print the storage and
//! query cost of each configuration as CSV.
//!
//!     cargo run --release --example scaling_sweep -- 128 8,16,32,64,128

use planar_oracle::cli::{bench_sweep, BENCH_HEADER};
use planar_oracle::graph::{generate_grid, WeightModel};

fn main() -> planar_oracle::Result<()> {
    let mut args = std::env::args().skip(1);
    let side: usize = args.next().map_or(96, |a| a.parse().expect("grid side"));
    let ks: Vec<usize> = args
        .next()
        .unwrap_or_else(|| "4,8,16,32,64,96".into())
        .split(',')
        .map(|k| k.parse().expect("component count"))
        .collect();

    let g = generate_grid(side, side, WeightModel::Unit, 0)?;
    println!("{BENCH_HEADER}");
    for row in bench_sweep(&g, &ks, &[1, 4], 500, 0) {
        println!("{}", row.to_csv());
    }
    Ok(())
}
