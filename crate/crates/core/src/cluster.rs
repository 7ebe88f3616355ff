//! In-process model of a multi-node deployment: which worker owns which
//! component's tables, the column transfer a cross-worker query needs, and
//! the resulting byte and latency accounting.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::thread::JoinHandle;

use crossbeam_channel::{bounded, unbounded, Receiver, Sender};

use crate::error::{Error, Result};
use crate::graph::Distance;
use crate::oracle::{Location, Oracle};
use crate::query::{finish, stitch_to_boundary, target_column, QueryResult, QueryStats};

/// Bytes per shipped table entry.
pub const ENTRY_BYTES: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementPolicy {
    /// Component `c` goes to worker `c mod p`.
    RoundRobin,
    /// Contiguous runs of components per worker, so consecutive pairs share a
    /// worker when `k = 2p` (one component per accelerator, two per node).
    PairsPerGpu,
}

/// Component-to-worker ownership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    owner: Vec<usize>,
    components_of: Vec<Vec<usize>>,
}

impl Placement {
    pub fn new(k: usize, p: usize, policy: PlacementPolicy) -> Result<Self> {
        if p == 0 || p > k {
            return Err(Error::InvalidWorkerCount { p, k });
        }
        let owner: Vec<usize> = match policy {
            PlacementPolicy::RoundRobin => (0..k).map(|c| c % p).collect(),
            PlacementPolicy::PairsPerGpu => {
                // first k % p workers take one extra component
                let (base, extra) = (k / p, k % p);
                (0..p)
                    .flat_map(|w| std::iter::repeat_n(w, base + usize::from(w < extra)))
                    .collect()
            }
        };
        Self::from_owners(p, owner)
    }

    /// Wraps an explicit owner list; every worker id must be below `p`.
    pub fn from_owners(p: usize, owner: Vec<usize>) -> Result<Self> {
        if p == 0 || owner.iter().any(|&w| w >= p) {
            return Err(Error::InvalidWorkerCount { p, k: owner.len() });
        }
        let mut components_of = vec![Vec::new(); p];
        for (c, &w) in owner.iter().enumerate() {
            components_of[w].push(c);
        }
        Ok(Placement { owner, components_of })
    }

    pub fn p(&self) -> usize {
        self.components_of.len()
    }

    pub fn k(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, component: usize) -> usize {
        self.owner[component]
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    pub fn components_of(&self, worker: usize) -> &[usize] {
        &self.components_of[worker]
    }
}

pub fn place_components(k: usize, p: usize, policy: PlacementPolicy) -> Result<Placement> {
    Placement::new(k, p, policy)
}

/// One column shipment: `entries` values sent from the target's owner to the
/// worker executing the query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferRecord {
    pub query_id: usize,
    pub src_worker: usize,
    pub dst_worker: usize,
    pub entries: usize,
    pub bytes: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransferLedger {
    records: Vec<TransferRecord>,
}

impl TransferLedger {
    pub fn push(&mut self, record: TransferRecord) {
        self.records.push(record);
    }

    pub fn records(&self) -> &[TransferRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_entries(&self) -> u64 {
        self.records.iter().map(|r| r.entries as u64).sum()
    }

    pub fn total_bytes(&self) -> u64 {
        self.records.iter().map(|r| r.bytes).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("query_id,src_worker,dst_worker,entries,bytes\n");
        for r in &self.records {
            writeln!(out, "{},{},{},{},{}", r.query_id, r.src_worker, r.dst_worker, r.entries, r.bytes).unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

fn check_placement(o: &Oracle, pl: &Placement) -> Result<()> {
    if pl.k() != o.k() {
        return Err(Error::InvalidWorkerCount { p: pl.p(), k: o.k() });
    }
    Ok(())
}

/// Runs a query at the owner of `v1`'s component, pulling `v2`'s boundary
/// column from its owner when they differ. Returns the transfer, if any,
/// tagged with `query_id` 0.
pub fn routed_query(o: &Oracle, pl: &Placement, v1: usize, v2: usize) -> Result<(QueryResult, Option<TransferRecord>)> {
    check_placement(o, pl)?;
    let (from, to) = (o.locate(v1)?, o.locate(v2)?);
    let (src, dst) = (pl.owner(to.component), pl.owner(from.component));
    let column = target_column(o, to);
    let record = (src != dst).then(|| TransferRecord {
        query_id: 0,
        src_worker: src,
        dst_worker: dst,
        entries: column.len(),
        bytes: column.len() as u64 * ENTRY_BYTES,
    });
    let to_boundary = stitch_to_boundary(o, from, to.component);
    let result = finish(o, from, to, &to_boundary, column, record.map_or(0, |r| r.entries));
    Ok((result, record))
}

/// [`routed_query`] over a batch, numbering queries by position.
pub fn routed_batch(o: &Oracle, pl: &Placement, pairs: &[(usize, usize)]) -> Result<(Vec<QueryResult>, TransferLedger)> {
    let mut ledger = TransferLedger::default();
    let mut results = Vec::with_capacity(pairs.len());
    for (id, &(a, b)) in pairs.iter().enumerate() {
        let (r, record) = routed_query(o, pl, a, b)?;
        if let Some(record) = record {
            ledger.push(TransferRecord { query_id: id, ..record });
        }
        results.push(r);
    }
    Ok((results, ledger))
}

enum Request {
    Column {
        target: Location,
        reply: Sender<Result<Vec<Distance>>>,
    },
    Query {
        from: Location,
        to: Location,
        column: Option<Vec<Distance>>,
        reply: Sender<Result<QueryResult>>,
    },
}

struct Worker {
    id: usize,
    oracle: Arc<Oracle>,
    owned: Vec<bool>,
}

impl Worker {
    fn require(&self, component: usize) -> Result<()> {
        if self.owned[component] {
            Ok(())
        } else {
            Err(Error::Malformed(format!("worker {} does not own component {component}", self.id)))
        }
    }

    fn serve(self, inbox: Receiver<Request>) {
        for request in inbox {
            match request {
                Request::Column { target, reply } => {
                    let answer = self
                        .require(target.component)
                        .map(|_| target_column(&self.oracle, target).to_vec());
                    let _ = reply.send(answer);
                }
                Request::Query { from, to, column, reply } => {
                    let _ = reply.send(self.answer(from, to, column));
                }
            }
        }
    }

    fn answer(&self, from: Location, to: Location, column: Option<Vec<Distance>>) -> Result<QueryResult> {
        self.require(from.component)?;
        let to_boundary = stitch_to_boundary(&self.oracle, from, to.component);
        match column {
            Some(column) => Ok(finish(&self.oracle, from, to, &to_boundary, &column, column.len())),
            None => {
                self.require(to.component)?;
                Ok(finish(&self.oracle, from, to, &to_boundary, target_column(&self.oracle, to), 0))
            }
        }
    }
}

/// A pool of worker threads, each answering only for the components it owns.
/// The caller acts as coordinator: it routes each query to the owner of the
/// source component after fetching the target column from the target's owner.
pub struct Cluster {
    oracle: Arc<Oracle>,
    placement: Placement,
    inboxes: Vec<Sender<Request>>,
    handles: Vec<JoinHandle<()>>,
    ledger: TransferLedger,
    next_query: usize,
}

impl Cluster {
    pub fn start(oracle: Arc<Oracle>, placement: Placement) -> Result<Self> {
        check_placement(&oracle, &placement)?;
        let mut inboxes = Vec::with_capacity(placement.p());
        let mut handles = Vec::with_capacity(placement.p());
        for id in 0..placement.p() {
            let (tx, rx) = unbounded();
            let mut owned = vec![false; placement.k()];
            for &c in placement.components_of(id) {
                owned[c] = true;
            }
            let worker = Worker {
                id,
                oracle: Arc::clone(&oracle),
                owned,
            };
            inboxes.push(tx);
            handles.push(std::thread::spawn(move || worker.serve(rx)));
        }
        Ok(Cluster {
            oracle,
            placement,
            inboxes,
            handles,
            ledger: TransferLedger::default(),
            next_query: 0,
        })
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn ledger(&self) -> &TransferLedger {
        &self.ledger
    }

    pub fn query(&mut self, v1: usize, v2: usize) -> Result<QueryResult> {
        let (from, to) = (self.oracle.locate(v1)?, self.oracle.locate(v2)?);
        let query_id = self.next_query;
        self.next_query += 1;
        let (src, dst) = (self.placement.owner(to.component), self.placement.owner(from.component));

        let column = if src != dst {
            let (reply, answer) = bounded(1);
            self.inboxes[src]
                .send(Request::Column { target: to, reply })
                .map_err(|_| Error::WorkerGone)?;
            let column = answer.recv().map_err(|_| Error::WorkerGone)??;
            self.ledger.push(TransferRecord {
                query_id,
                src_worker: src,
                dst_worker: dst,
                entries: column.len(),
                bytes: column.len() as u64 * ENTRY_BYTES,
            });
            Some(column)
        } else {
            None
        };

        let (reply, answer) = bounded(1);
        self.inboxes[dst]
            .send(Request::Query { from, to, column, reply })
            .map_err(|_| Error::WorkerGone)?;
        answer.recv().map_err(|_| Error::WorkerGone)?
    }

    pub fn query_batch(&mut self, pairs: &[(usize, usize)]) -> Result<Vec<QueryResult>> {
        pairs.iter().map(|&(a, b)| self.query(a, b)).collect()
    }

    /// Stops the workers and returns the accumulated ledger.
    pub fn shutdown(mut self) -> TransferLedger {
        self.inboxes.clear();
        for handle in self.handles.drain(..) {
            let _ = handle.join();
        }
        std::mem::take(&mut self.ledger)
    }
}

impl Drop for Cluster {
    fn drop(&mut self) {
        self.inboxes.clear();
        for handle in self.handles.drain(..) {
            let _ = handle.join();
        }
    }
}

/// Linear cost model for one query: additions, per-entry transfer time, and a
/// fixed per-message latency, all in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyModel {
    pub op_ns: f64,
    pub entry_ns: f64,
    pub message_ns: f64,
}

impl Default for LatencyModel {
    fn default() -> Self {
        LatencyModel {
            op_ns: 1.0,
            entry_ns: 1.0,
            message_ns: 1_000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeledLatency {
    /// Column transfer runs concurrently with the first stitching loop.
    pub overlapped_ns: f64,
    /// Transfer strictly before any computation.
    pub sequential_ns: f64,
}

impl LatencyModel {
    pub fn estimate(&self, stats: &QueryStats) -> ModeledLatency {
        let (nb1, nb2) = stats.boundary_sizes;
        let first = (nb1 * nb2) as f64 * self.op_ns;
        let last = nb2 as f64 * self.op_ns;
        let transfer = if stats.transfer_entries > 0 {
            self.message_ns + stats.transfer_entries as f64 * self.entry_ns
        } else {
            0.0
        };
        ModeledLatency {
            overlapped_ns: first.max(transfer) + last,
            sequential_ns: first + transfer + last,
        }
    }
}

/// Per-worker summed task cost for a component-parallel phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleProfile {
    pub worker_loads: Vec<f64>,
    pub makespan: f64,
    pub mean_load: f64,
}

impl ScheduleProfile {
    /// Makespan minus mean load; zero for a perfectly balanced schedule.
    pub fn imbalance(&self) -> f64 {
        self.makespan - self.mean_load
    }
}

/// Assigns one task per component to workers according to `policy` and sums
/// the costs each worker runs.
pub fn simulate_build_schedule(p: usize, component_costs: &[f64], policy: PlacementPolicy) -> Result<ScheduleProfile> {
    if let Some(bad) = component_costs.iter().find(|c| c.is_nan() || **c < 0.0) {
        return Err(Error::InvalidGraph(format!("task cost {bad} must be nonnegative")));
    }
    let placement = Placement::new(component_costs.len(), p, policy)?;
    let worker_loads: Vec<f64> = (0..p)
        .map(|w| placement.components_of(w).iter().map(|&c| component_costs[c]).sum())
        .collect();
    let makespan = worker_loads.iter().copied().fold(0.0, f64::max);
    let mean_load = worker_loads.iter().sum::<f64>() / p as f64;
    Ok(ScheduleProfile {
        worker_loads,
        makespan,
        mean_load,
    })
}

/// Boundary-phase cost per component: `|B(C)| * |E(BG)|`.
pub fn boundary_phase_costs(o: &Oracle) -> Vec<f64> {
    let edges = o.boundary_graph().graph().m() as f64;
    (0..o.k()).map(|c| o.boundary_count(c) as f64 * edges).collect()
}

/// Component-phase cost per component: `|C|^3`.
pub fn component_phase_costs(o: &Oracle) -> Vec<f64> {
    (0..o.k()).map(|c| (o.component_size(c) as f64).powi(3)).collect()
}
