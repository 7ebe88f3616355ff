//! Exact shortest-distance kernels: binary-heap Dijkstra and cache-blocked
//! Floyd-Warshall.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, UNREACHABLE};

/// Default tile edge for [`apsp_dense`].
pub const DEFAULT_BLOCK: usize = 64;

/// Dense row-major `order x order` table of distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    order: usize,
    values: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn from_values(order: usize, values: Vec<Distance>) -> Result<Self> {
        if values.len() != order * order {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: order * order,
            });
        }
        Ok(DistanceMatrix { order, values })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Distance {
        self.values[i * self.order + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Distance] {
        &self.values[i * self.order..(i + 1) * self.order]
    }

    pub fn values(&self) -> &[Distance] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Distance] {
        &mut self.values
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    dist: Distance,
    vertex: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // Reversed so the max-heap pops the smallest distance, ties by smaller id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Single-source distances from `source` to every vertex.
pub fn dijkstra_sssp(g: &Graph, source: usize) -> Result<Vec<Distance>> {
    let n = g.n();
    if source >= n {
        return Err(Error::VertexOutOfRange { vertex: source, n });
    }
    let mut dist = vec![UNREACHABLE; n];
    dijkstra_into(g, source, &mut dist, &mut BinaryHeap::new());
    Ok(dist)
}

/// Dijkstra into caller-provided buffers; `dist` must hold `g.n()` entries
/// and is overwritten. Lets batch callers reuse allocations.
fn dijkstra_into(g: &Graph, source: usize, dist: &mut [Distance], heap: &mut BinaryHeap<HeapEntry>) {
    dist.fill(UNREACHABLE);
    heap.clear();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        vertex: source,
    });
    while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, w) in g.neighbors(u) {
            let cand = d + w;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(HeapEntry { dist: cand, vertex: v });
            }
        }
    }
}

/// Reusable Dijkstra state for running many sources over one graph.
#[derive(Default)]
pub struct DijkstraWorkspace {
    heap: BinaryHeap<HeapEntry>,
}


impl DijkstraWorkspace {
    pub fn run(&mut self, g: &Graph, source: usize, dist: &mut [Distance]) {
        assert_eq!(dist.len(), g.n());
        dijkstra_into(g, source, dist, &mut self.heap);
    }
}

/// Initial distance table: zero diagonal, edge weights, infinity elsewhere.
fn adjacency_matrix(g: &Graph) -> Vec<Distance> {
    let n = g.n();
    let mut d = vec![UNREACHABLE; n * n];
    for u in 0..n {
        d[u * n + u] = 0.0;
        for (v, w) in g.neighbors(u) {
            let cell = &mut d[u * n + v];
            if w < *cell {
                *cell = w;
            }
        }
    }
    d
}

/// All-pairs distances with blocked Floyd-Warshall, tile edge [`DEFAULT_BLOCK`].
pub fn apsp_dense(g: &Graph) -> DistanceMatrix {
    apsp_blocked(g, DEFAULT_BLOCK)
}

/// All-pairs distances with blocked Floyd-Warshall and the given tile edge.
///
/// Each round over pivot block `kb` relaxes the diagonal tile first, then the
/// tiles sharing its row or column, then every other tile, which only reads
/// the already-final row and column panels.
pub fn apsp_blocked(g: &Graph, block: usize) -> DistanceMatrix {
    assert!(block > 0, "block size must be positive");
    let n = g.n();
    let mut d = adjacency_matrix(g);
    let blocks = n.div_ceil(block);
    let span = |b: usize| (b * block, ((b + 1) * block).min(n));

    for kb in 0..blocks {
        let ks = span(kb);
        relax_tile(&mut d, n, ks, ks, ks);
        for b in (0..blocks).filter(|&b| b != kb) {
            relax_tile(&mut d, n, ks, span(b), ks);
            relax_tile(&mut d, n, span(b), ks, ks);
        }
        for ib in (0..blocks).filter(|&b| b != kb) {
            for jb in (0..blocks).filter(|&b| b != kb) {
                relax_tile(&mut d, n, span(ib), span(jb), ks);
            }
        }
    }
    DistanceMatrix { order: n, values: d }
}

/// `d[i][j] = min(d[i][j], d[i][k] + d[k][j])` for `k` in `ks`, `i` in `is`, `j` in `js`.
#[inline]
fn relax_tile(d: &mut [Distance], n: usize, is: (usize, usize), js: (usize, usize), ks: (usize, usize)) {
    for k in ks.0..ks.1 {
        for i in is.0..is.1 {
            // d[k][k] == 0, so row k never improves through pivot k.
            if i == k {
                continue;
            }
            let via = d[i * n + k];
            if via == UNREACHABLE {
                continue;
            }
            let (row_i, row_k) = if i < k {
                let (head, tail) = d.split_at_mut(k * n);
                (&mut head[i * n..i * n + n], &tail[..n])
            } else {
                let (head, tail) = d.split_at_mut(i * n);
                (&mut tail[..n], &head[k * n..k * n + n])
            };
            for (cur, &kj) in row_i[js.0..js.1].iter_mut().zip(&row_k[js.0..js.1]) {
                let cand = via + kj;
                *cur = if cand < *cur { cand } else { *cur };
            }
        }
    }
}

/// `min_i a[i] + b[i]`, infinity for empty input.
pub fn min_plus_combine(a: &[Distance], b: &[Distance]) -> Result<Distance> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).fold(UNREACHABLE, |best, (x, y)| best.min(x + y)))
}
