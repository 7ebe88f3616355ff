//! Reference distance computations shared by the integration tests. These
//! are written against the raw edge list only, independent of the library's
//! own shortest-path code.

#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use planar_oracle::graph::Graph;

/// Plain adjacency lists rebuilt from the edge list.
pub fn adjacency(g: &Graph) -> Vec<Vec<(usize, f64)>> {
    let mut adj = vec![Vec::new(); g.n()];
    for (u, v, w) in g.edges() {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    adj
}

/// Textbook Floyd–Warshall, row-major n x n.
pub fn floyd_warshall(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut d = vec![f64::INFINITY; n * n];
    for v in 0..n {
        d[v * n + v] = 0.0;
    }
    for (u, v, w) in g.edges() {
        if w < d[u * n + v] {
            d[u * n + v] = w;
            d[v * n + u] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    d
}

/// Dijkstra keyed on the bit pattern of nonnegative `f64`s, which orders
/// the same way as the values.
pub fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((0f64.to_bits(), source)));
    while let Some(Reverse((bits, u))) = heap.pop() {
        let d = f64::from_bits(bits);
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd.to_bits(), v)));
            }
        }
    }
    dist
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut k = 0;
    while k * k < n {
        k += 1;
    }
    k
}
