//! Preprocessing: partition the graph, solve all-pairs distances inside every
//! component, compress the graph to its boundary vertices, and solve the
//! boundary graph from every boundary vertex.
//!
//! All tables live in the boundary-first id space produced by
//! [`reorder_vertices`]: component `c` owns new ids `offsets[c]..offsets[c+1]`
//! and its boundary vertices come first in that range. Boundary-graph ids
//! follow the same order, so the boundary of `c` is the contiguous range
//! `bg_offsets[c]..bg_offsets[c+1]`.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cluster::{Placement, PlacementPolicy};
use crate::error::{Error, Result};
use crate::graph::{Distance, Graph};
use crate::partition::{partition_graph, reorder_vertices, Partition};
use crate::paths::{apsp_dense, DijkstraWorkspace, DistanceMatrix};

/// The compressed graph on boundary vertices. Holds every original
/// cross-component edge plus, per component, a clique over its boundary
/// weighted by distances inside that component.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGraph {
    global_of: Vec<usize>,
    graph: Graph,
}

impl BoundaryGraph {
    pub fn from_parts(global_of: Vec<usize>, graph: Graph) -> Result<Self> {
        if global_of.len() != graph.n() {
            return Err(Error::LengthMismatch {
                left: global_of.len(),
                right: graph.n(),
            });
        }
        Ok(BoundaryGraph { global_of, graph })
    }

    /// Number of boundary vertices.
    pub fn order(&self) -> usize {
        self.global_of.len()
    }

    /// Reordered-graph vertex id of boundary id `b`.
    pub fn global_of(&self, b: usize) -> usize {
        self.global_of[b]
    }

    pub fn global_ids(&self) -> &[usize] {
        &self.global_of
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

/// Distances in the boundary graph from the boundary vertices of one component
/// (rows, in boundary-id order) to every boundary vertex (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTable {
    rows: usize,
    cols: usize,
    values: Vec<Distance>,
}

impl BoundaryTable {
    pub fn from_values(rows: usize, cols: usize, values: Vec<Distance>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: rows * cols,
            });
        }
        Ok(BoundaryTable { rows, cols, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Distance] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Distance {
        self.values[r * self.cols + c]
    }

    pub fn values(&self) -> &[Distance] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Distance] {
        &mut self.values
    }
}

/// Where a vertex lives: its component and its index inside that component's
/// table. Boundary vertices have `local < boundary_count(component)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub component: usize,
    pub local: usize,
}

/// The preprocessed query structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Oracle {
    pub(crate) partition: Partition,
    pub(crate) layout: Partition,
    pub(crate) offsets: Vec<usize>,
    pub(crate) bg_offsets: Vec<usize>,
    pub(crate) component_tables: Vec<DistanceMatrix>,
    pub(crate) boundary_graph: BoundaryGraph,
    pub(crate) boundary_tables: Vec<BoundaryTable>,
    pub(crate) placement: Placement,
}

/// Wall-clock time spent in each preprocessing phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BuildTimings {
    pub partition: Duration,
    pub component_apsp: Duration,
    pub boundary: Duration,
}

fn component_offsets(layout: &Partition) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(layout.k() + 1);
    offsets.push(0);
    for c in 0..layout.k() {
        offsets.push(offsets[c] + layout.size(c));
    }
    offsets
}

fn boundary_offsets(layout: &Partition) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(layout.k() + 1);
    offsets.push(0);
    for c in 0..layout.k() {
        offsets.push(offsets[c] + layout.boundary_count(c));
    }
    offsets
}

fn task_pool(workers: usize, k: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.min(k).max(1))
        .build()
        .expect("thread pool")
}

/// Builds an oracle with `k` components. `workers` sets the width of the
/// per-component task pool and never changes the result.
pub fn build_oracle(g: &Graph, k: usize, workers: usize, seed: u64) -> Result<Oracle> {
    build_oracle_timed(g, k, workers, seed).map(|(o, _)| o)
}

pub fn build_oracle_timed(g: &Graph, k: usize, workers: usize, seed: u64) -> Result<(Oracle, BuildTimings)> {
    if workers == 0 {
        return Err(Error::InvalidWorkerCount { p: workers, k });
    }
    let start = Instant::now();
    let partition = partition_graph(g, k, seed)?;
    let partition_time = start.elapsed();
    let (oracle, mut timings) = build_oracle_from_partition(g, partition, workers)?;
    timings.partition += partition_time;
    Ok((oracle, timings))
}

/// Builds an oracle over a caller-supplied partition of `g`.
pub fn build_oracle_from_partition(g: &Graph, partition: Partition, workers: usize) -> Result<(Oracle, BuildTimings)> {
    let k = partition.k();
    if workers == 0 {
        return Err(Error::InvalidWorkerCount { p: workers, k });
    }
    if partition.n() != g.n() {
        return Err(Error::OracleMismatch {
            oracle: partition.n(),
            graph: g.n(),
        });
    }
    let mut timings = BuildTimings::default();

    let start = Instant::now();
    let (reordered, layout) = reorder_vertices(g, &partition);
    timings.partition = start.elapsed();

    let pool = task_pool(workers, k);
    let start = Instant::now();
    let component_tables = component_apsp(&reordered, &layout, &pool);
    timings.component_apsp = start.elapsed();

    let start = Instant::now();
    let boundary_graph = build_boundary_graph(&reordered, &layout, &component_tables);
    let boundary_tables = pool.install(|| boundary_apsp_in_pool(&boundary_graph, &layout));
    timings.boundary = start.elapsed();

    let oracle = Oracle {
        offsets: component_offsets(&layout),
        bg_offsets: boundary_offsets(&layout),
        placement: Placement::new(k, k, PlacementPolicy::RoundRobin)?,
        partition,
        layout,
        component_tables,
        boundary_graph,
        boundary_tables,
    };
    Ok((oracle, timings))
}

fn component_apsp(reordered: &Graph, layout: &Partition, pool: &rayon::ThreadPool) -> Vec<DistanceMatrix> {
    let offsets = component_offsets(layout);
    pool.install(|| {
        (0..layout.k())
            .into_par_iter()
            .map(|c| apsp_dense(&reordered.induced_range(offsets[c], offsets[c + 1])))
            .collect()
    })
}

/// Assembles the boundary graph from the reordered graph, its ordered
/// partition, and the per-component distance tables. Clique edges between
/// boundary vertices that cannot reach each other inside their component are
/// left out.
pub fn build_boundary_graph(reordered: &Graph, layout: &Partition, tables: &[DistanceMatrix]) -> BoundaryGraph {
    assert!(layout.is_ordered(), "partition must be in boundary-first order");
    assert_eq!(tables.len(), layout.k());
    let offsets = component_offsets(layout);
    let bg_offsets = boundary_offsets(layout);
    let bg_of = |v: usize| {
        let c = layout.component_of(v);
        bg_offsets[c] + (v - offsets[c])
    };

    let mut global_of = Vec::with_capacity(bg_offsets[layout.k()]);
    let mut edges = Vec::new();
    for (c, table) in tables.iter().enumerate() {
        let nb = bg_offsets[c + 1] - bg_offsets[c];
        global_of.extend(offsets[c]..offsets[c] + nb);
        for i in 0..nb {
            for j in i + 1..nb {
                let w = table.get(i, j);
                if w.is_finite() {
                    edges.push((bg_offsets[c] + i, bg_offsets[c] + j, w));
                }
            }
        }
    }
    for (u, v, w) in reordered.edges() {
        if layout.component_of(u) != layout.component_of(v) {
            edges.push((bg_of(u), bg_of(v), w));
        }
    }
    let graph = Graph::from_edges(global_of.len(), edges).expect("clique and cross edges never collide");
    BoundaryGraph { global_of, graph }
}

/// Boundary-graph distances from every boundary vertex, grouped into one
/// table per component. `workers` bounds the task-pool width.
pub fn boundary_apsp(bg: &BoundaryGraph, layout: &Partition, workers: usize) -> Vec<BoundaryTable> {
    task_pool(workers, layout.k()).install(|| boundary_apsp_in_pool(bg, layout))
}

fn boundary_apsp_in_pool(bg: &BoundaryGraph, layout: &Partition) -> Vec<BoundaryTable> {
    let bg_offsets = boundary_offsets(layout);
    let b = bg.order();
    (0..layout.k())
        .into_par_iter()
        .map(|c| {
            let rows = bg_offsets[c + 1] - bg_offsets[c];
            let mut values = vec![0.0; rows * b];
            let mut workspace = DijkstraWorkspace::default();
            for (r, row) in values.chunks_mut(b.max(1)).take(rows).enumerate() {
                workspace.run(bg.graph(), bg_offsets[c] + r, row);
            }
            BoundaryTable { rows, cols: b, values }
        })
        .collect()
}

impl Oracle {
    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn k(&self) -> usize {
        self.partition.k()
    }

    /// Total boundary vertices, `|BG|`.
    pub fn boundary_total(&self) -> usize {
        self.boundary_graph.order()
    }

    /// Partition in the caller's original vertex ids.
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Partition in boundary-first ids.
    pub fn layout(&self) -> &Partition {
        &self.layout
    }

    /// Original id to boundary-first id.
    pub fn permutation(&self) -> &[usize] {
        self.partition.permutation()
    }

    pub fn component_size(&self, c: usize) -> usize {
        self.offsets[c + 1] - self.offsets[c]
    }

    /// `|B(C)|`.
    pub fn boundary_count(&self, c: usize) -> usize {
        self.bg_offsets[c + 1] - self.bg_offsets[c]
    }

    /// First boundary-graph id belonging to component `c`.
    pub fn boundary_offset(&self, c: usize) -> usize {
        self.bg_offsets[c]
    }

    pub fn component_table(&self, c: usize) -> &DistanceMatrix {
        &self.component_tables[c]
    }

    pub fn component_tables(&self) -> &[DistanceMatrix] {
        &self.component_tables
    }

    pub fn boundary_table(&self, c: usize) -> &BoundaryTable {
        &self.boundary_tables[c]
    }

    pub fn boundary_tables(&self) -> &[BoundaryTable] {
        &self.boundary_tables
    }

    pub fn boundary_graph(&self) -> &BoundaryGraph {
        &self.boundary_graph
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    /// Replaces the component-to-worker map used for transfer accounting.
    pub fn set_placement(&mut self, placement: Placement) -> Result<()> {
        if placement.k() != self.k() {
            return Err(Error::InvalidWorkerCount {
                p: placement.p(),
                k: self.k(),
            });
        }
        self.placement = placement;
        Ok(())
    }

    /// Component and table index of an original vertex id.
    pub fn locate(&self, v: usize) -> Result<Location> {
        let n = self.n();
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let new = self.partition.permutation()[v];
        let component = self.layout.component_of(new);
        Ok(Location {
            component,
            local: new - self.offsets[component],
        })
    }

    /// Original id of the vertex with boundary-graph id `b`.
    pub fn boundary_vertex(&self, b: usize) -> usize {
        self.partition.inverse_permutation()[self.boundary_graph.global_of(b)]
    }

    /// Distance in the boundary graph between boundary ids `a` and `b`.
    pub fn boundary_distance(&self, a: usize, b: usize) -> Distance {
        let c = self.bg_offsets.partition_point(|&off| off <= a) - 1;
        self.boundary_tables[c].get(a - self.bg_offsets[c], b)
    }

    /// Table entries held in memory: `sum |C|^2 + |BG| * sum |B(C)|`.
    pub fn stored_entries(&self) -> u64 {
        let component: u64 = self.component_tables.iter().map(|t| t.values().len() as u64).sum();
        let boundary: u64 = self.boundary_tables.iter().map(|t| t.values().len() as u64).sum();
        component + boundary
    }

    /// Table entries owned by worker `w` under the current placement.
    pub fn worker_entries(&self, w: usize) -> u64 {
        self.placement
            .components_of(w)
            .iter()
            .map(|&c| (self.component_tables[c].values().len() + self.boundary_tables[c].values().len()) as u64)
            .sum()
    }

    /// Largest per-worker table footprint under `placement`.
    pub fn peak_worker_entries(&self, placement: &Placement) -> u64 {
        (0..placement.p())
            .map(|w| {
                placement
                    .components_of(w)
                    .iter()
                    .map(|&c| (self.component_tables[c].values().len() + self.boundary_tables[c].values().len()) as u64)
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }
}
