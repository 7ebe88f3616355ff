//! Weighted undirected graphs in compressed adjacency form.
//!
//! Vertex ids are dense `0..n`. Every undirected edge `{u, v}` is stored as two
//! arcs with equal weight, and each adjacency list is sorted by neighbor id so
//! iteration order is reproducible.

mod generate;
mod io;

use std::collections::VecDeque;

pub use generate::{generate_grid, generate_triangulated_grid, WeightModel};
pub use io::{load_graph, parse_dimacs, parse_edge_list, save_graph, write_dimacs, write_edge_list, GraphFormat};

use crate::error::{Error, Result};

/// A shortest-path length. Unreachable pairs carry `f64::INFINITY`, which
/// absorbs addition and compares above every finite value.
pub type Distance = f64;

/// Sentinel for "no path".
pub const UNREACHABLE: Distance = f64::INFINITY;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Graph {
    /// Builds a graph from undirected edges, each listed once in either
    /// orientation. Rejects out-of-range ids, self-loops, duplicate pairs and
    /// weights that are negative or not finite.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "weight {w} on edge ({u}, {v}) must be finite and nonnegative"
                )));
            }
            arcs.push((u, v, w));
            arcs.push((v, u, w));
        }
        arcs.sort_by_key(|a| (a.0, a.1));
        if let Some(pair) = arcs.windows(2).find(|p| p[0].0 == p[1].0 && p[0].1 == p[1].1) {
            let (u, v) = (pair[0].0.min(pair[0].1), pair[0].0.max(pair[0].1));
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) appears more than once")));
        }
        Ok(Self::from_sorted_arcs(n, &arcs))
    }

    fn from_sorted_arcs(n: usize, arcs: &[(usize, usize, f64)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Graph {
            offsets,
            targets: arcs.iter().map(|a| a.1).collect(),
            weights: arcs.iter().map(|a| a.2).collect(),
        }
    }

    /// Builds a graph from raw per-vertex adjacency lists without any checks.
    /// Intended for constructing deliberately malformed inputs for [`Graph::validate`].
    pub fn from_adjacency_unchecked(adjacency: Vec<Vec<(usize, f64)>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for list in adjacency {
            for (v, w) in list {
                targets.push(v);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Graph {
            offsets,
            targets,
            weights,
        }
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    /// Undirected edges as `(u, v, w)` with `u < v`, in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Relabels vertices: old vertex `v` becomes `permutation[v]`.
    pub fn permuted(&self, permutation: &[usize]) -> Graph {
        assert_eq!(permutation.len(), self.n());
        let mut arcs: Vec<(usize, usize, f64)> = (0..self.n())
            .flat_map(|u| self.neighbors(u).map(move |(v, w)| (u, v, w)))
            .map(|(u, v, w)| (permutation[u], permutation[v], w))
            .collect();
        arcs.sort_by_key(|a| (a.0, a.1));
        Self::from_sorted_arcs(self.n(), &arcs)
    }

    /// Subgraph induced by the contiguous id range `[start, end)`, relabeled to
    /// `0..end - start`.
    pub fn induced_range(&self, start: usize, end: usize) -> Graph {
        let arcs: Vec<(usize, usize, f64)> = (start..end)
            .flat_map(|u| {
                self.neighbors(u)
                    .filter(|&(v, _)| v >= start && v < end)
                    .map(move |(v, w)| (u - start, v - start, w))
            })
            .collect();
        Self::from_sorted_arcs(end - start, &arcs)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for (v, _) in self.neighbors(u) {
                if v < n && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let mut report = ValidationReport::default();
        for u in 0..n {
            let mut prev: Option<usize> = None;
            for (v, w) in self.neighbors(u) {
                if v >= n {
                    report.out_of_range.push((u, v));
                    continue;
                }
                if v == u {
                    report.self_loops.push(u);
                }
                if !w.is_finite() || w < 0.0 {
                    report.bad_weights.push((u, v, w));
                }
                if prev == Some(v) {
                    report.parallel_edges.push((u, v));
                }
                prev = Some(v);
                let back = self.neighbors(v).find(|&(x, _)| x == u).map(|(_, bw)| bw);
                if back.is_none_or(|bw| bw.to_bits() != w.to_bits()) {
                    report.asymmetric.push((u, v));
                }
            }
        }
        report.connected = report.out_of_range.is_empty() && self.is_connected();
        report
    }
}

/// Findings from [`Graph::validate`]. Disconnection is reported but is not an error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Arcs `(u, v)` whose reverse arc is missing or carries a different weight.
    pub asymmetric: Vec<(usize, usize)>,
    pub bad_weights: Vec<(usize, usize, f64)>,
    pub self_loops: Vec<usize>,
    pub parallel_edges: Vec<(usize, usize)>,
    pub out_of_range: Vec<(usize, usize)>,
    pub connected: bool,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.asymmetric.is_empty()
            && self.bad_weights.is_empty()
            && self.self_loops.is_empty()
            && self.parallel_edges.is_empty()
            && self.out_of_range.is_empty()
    }
}
