//! Point-to-point distance queries by two-level boundary stitching.
//!
//! For a query `(v1, v2)` with `v1` in component `C1` and `v2` in `C2`:
//!
//! 1. for every `b2` in `B(C2)`, `d(v1, b2) = min_{b1 in B(C1)} d_C1(v1, b1) + d_BG(b1, b2)`;
//! 2. fetch `d_C2(b2, v2)` for all `b2`, the boundary prefix of `v2`'s column
//!    in the table of `C2` (a cross-worker transfer when `C1` and `C2` live on
//!    different workers);
//! 3. `d(v1, v2) = min_{b2} d(v1, b2) + d_C2(b2, v2)`;
//! 4. when `C1 == C2`, also take the in-component distance `d_C1(v1, v2)`.
//!
//! `d_C1(v1, b1)` may overestimate the true distance for some `b1`, but the
//! first boundary vertex on a shortest path is always reached inside `C1`, so
//! the minimum is exact.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Distance, UNREACHABLE};
use crate::oracle::{Location, Oracle};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Distance additions performed (`|B(C1)| * |B(C2)| + |B(C2)|`).
    pub minplus_ops: u64,
    /// `(|B(C1)|, |B(C2)|)`.
    pub boundary_sizes: (usize, usize),
    /// Table entries shipped between workers.
    pub transfer_entries: usize,
    pub same_component: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryResult {
    pub distance: Distance,
    pub stats: QueryStats,
}

/// Exact `dist(v1, v2)` for original vertex ids. Transfer accounting follows
/// the oracle's placement.
pub fn query(o: &Oracle, v1: usize, v2: usize) -> Result<QueryResult> {
    let (from, to) = (o.locate(v1)?, o.locate(v2)?);
    let to_boundary = stitch_to_boundary(o, from, to.component);
    Ok(finish(o, from, to, &to_boundary, target_column(o, to), transfer_entries(o, from, to)))
}

/// Same answer as [`query`], with the loop over `B(C2)` split into static
/// contiguous blocks across `workers` threads.
pub fn query_parallel_inner(o: &Oracle, v1: usize, v2: usize, workers: usize) -> Result<QueryResult> {
    if workers == 0 {
        return Err(Error::InvalidWorkerCount { p: 0, k: o.k() });
    }
    let (from, to) = (o.locate(v1)?, o.locate(v2)?);
    let nb2 = o.boundary_count(to.component);
    let mut to_boundary = vec![UNREACHABLE; nb2];
    let chunk = nb2.div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        for (i, out) in to_boundary.chunks_mut(chunk).enumerate() {
            let range = i * chunk..i * chunk + out.len();
            scope.spawn(move || stitch_range(o, from, to.component, range, out));
        }
    });
    Ok(finish(o, from, to, &to_boundary, target_column(o, to), transfer_entries(o, from, to)))
}

/// Answers every pair, in order, spreading queries over `workers` threads.
pub fn batch_query(o: &Oracle, pairs: &[(usize, usize)], workers: usize) -> Result<Vec<QueryResult>> {
    if workers == 0 {
        return Err(Error::InvalidWorkerCount { p: 0, k: o.k() });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| pairs.par_iter().map(|&(a, b)| query(o, a, b)).collect())
}

/// `count` uniformly random ordered pairs over `0..n`, reproducible from `seed`.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

fn transfer_entries(o: &Oracle, from: Location, to: Location) -> usize {
    let placement = o.placement();
    if placement.owner(from.component) == placement.owner(to.component) {
        0
    } else {
        o.boundary_count(to.component)
    }
}

/// `d(v1, b2)` for every `b2` in `B(to_component)`.
pub(crate) fn stitch_to_boundary(o: &Oracle, from: Location, to_component: usize) -> Vec<Distance> {
    let nb2 = o.boundary_count(to_component);
    let mut out = vec![UNREACHABLE; nb2];
    stitch_range(o, from, to_component, 0..nb2, &mut out);
    out
}

fn stitch_range(o: &Oracle, from: Location, to_component: usize, targets: Range<usize>, out: &mut [Distance]) {
    let nb1 = o.boundary_count(from.component);
    let to_v1 = &o.component_table(from.component).row(from.local)[..nb1];
    let table = o.boundary_table(from.component);
    let cols = o.boundary_offset(to_component) + targets.start..o.boundary_offset(to_component) + targets.end;
    out.fill(UNREACHABLE);
    for (b1, &head) in to_v1.iter().enumerate() {
        if head == UNREACHABLE {
            continue;
        }
        for (best, &tail) in out.iter_mut().zip(&table.row(b1)[cols.clone()]) {
            *best = best.min(head + tail);
        }
    }
}

/// `d_C2(b2, v2)` for every `b2` in `B(C2)`. Tables are symmetric, so the
/// column's boundary prefix is the contiguous row prefix.
pub(crate) fn target_column(o: &Oracle, to: Location) -> &[Distance] {
    let nb2 = o.boundary_count(to.component);
    &o.component_table(to.component).row(to.local)[..nb2]
}

pub(crate) fn finish(
    o: &Oracle,
    from: Location,
    to: Location,
    to_boundary: &[Distance],
    column: &[Distance],
    transfer_entries: usize,
) -> QueryResult {
    let nb1 = o.boundary_count(from.component);
    let nb2 = o.boundary_count(to.component);
    debug_assert_eq!(to_boundary.len(), nb2);
    debug_assert_eq!(column.len(), nb2);
    let mut distance = to_boundary
        .iter()
        .zip(column)
        .fold(UNREACHABLE, |best, (a, b)| if a + b < best { a + b } else { best });
    let same_component = from.component == to.component;
    if same_component {
        distance = distance.min(o.component_table(from.component).get(from.local, to.local));
    }
    QueryResult {
        distance,
        stats: QueryStats {
            minplus_ops: (nb1 * nb2 + nb2) as u64,
            boundary_sizes: (nb1, nb2),
            transfer_entries,
            same_component,
        },
    }
}
