//! Place components on simulated workers, run queries through the threaded
//! cluster, and look at the transfer ledger, modeled latency and the build
//! schedule for each placement policy.

use std::sync::Arc;

use planar_oracle::cluster::{
    boundary_phase_costs, component_phase_costs, simulate_build_schedule, Cluster, LatencyModel, Placement,
    PlacementPolicy,
};
use planar_oracle::graph::{generate_grid, WeightModel};
use planar_oracle::oracle::build_oracle;
use planar_oracle::query::random_pairs;

fn main() -> planar_oracle::Result<()> {
    let g = generate_grid(64, 64, WeightModel::Unit, 0)?;
    let oracle = Arc::new(build_oracle(&g, 64, 1, 0)?);
    let pairs = random_pairs(g.n(), 1000, 9);
    let model = LatencyModel::default();

    for policy in [PlacementPolicy::RoundRobin, PlacementPolicy::PairsPerGpu] {
        for p in [1, 4, 16] {
            let placement = Placement::new(oracle.k(), p, policy)?;
            let peak = oracle.peak_worker_entries(&placement);
            let mut cluster = Cluster::start(Arc::clone(&oracle), placement)?;
            let results = cluster.query_batch(&pairs)?;
            let ledger = cluster.shutdown();

            let (overlapped, sequential) = results.iter().fold((0.0, 0.0), |(o, s), r| {
                let est = model.estimate(&r.stats);
                (o + est.overlapped_ns, s + est.sequential_ns)
            });
            let build = simulate_build_schedule(p, &component_phase_costs(&oracle), policy)?;
            let boundary = simulate_build_schedule(p, &boundary_phase_costs(&oracle), policy)?;
            println!(
                "{policy:?} p={p:>2}: {:>4} transfers {:>8} B, peak entries/worker {peak:>8}, \
                 modeled us/query {:.2} overlapped {:.2} sequential, build imbalance {:.2}/{:.2}",
                ledger.records().len(),
                ledger.total_bytes(),
                overlapped / 1e3 / pairs.len() as f64,
                sequential / 1e3 / pairs.len() as f64,
                build.imbalance() / build.mean_load.max(1.0),
                boundary.imbalance() / boundary.mean_load.max(1.0),
            );
            if p == 4 && policy == PlacementPolicy::RoundRobin {
                print!("{}", ledger.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
                println!("\n...");
            }
        }
    }
    Ok(())
}
