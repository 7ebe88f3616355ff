use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count the generators will produce.
pub const MAX_GENERATED_VERTICES: usize = u32::MAX as usize;

/// How edge weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightModel {
    /// Every edge has weight 1.
    Unit,
    /// Real weights drawn uniformly from `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    /// Integer-valued weights drawn uniformly from `lo..=hi`. Path sums stay
    /// exact in `f64`, so distances compare bitwise across algorithms.
    Integer { lo: u32, hi: u32 },
}

impl WeightModel {
    fn check(&self) -> Result<()> {
        match *self {
            WeightModel::Unit => Ok(()),
            WeightModel::Uniform { lo, hi } if lo >= 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi => Ok(()),
            WeightModel::Integer { lo, hi } if lo <= hi => Ok(()),
            other => Err(Error::InvalidGraph(format!("invalid weight model {other:?}"))),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            WeightModel::Unit => 1.0,
            WeightModel::Uniform { lo, hi } if lo == hi => lo,
            WeightModel::Uniform { lo, hi } => rng.gen_range(lo..hi),
            WeightModel::Integer { lo, hi } => f64::from(rng.gen_range(lo..=hi)),
        }
    }
}

fn vertex_count(rows: usize, cols: usize) -> Result<usize> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidGraph(format!("grid dimensions {rows}x{cols} must be positive")));
    }
    rows.checked_mul(cols)
        .filter(|&n| n <= MAX_GENERATED_VERTICES)
        .ok_or(Error::TooLarge { rows, cols })
}

fn grid_edges(rows: usize, cols: usize, weights: WeightModel, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let id = r * cols + c;
            if c + 1 < cols {
                edges.push((id, id + 1, weights.draw(rng)));
            }
            if r + 1 < rows {
                edges.push((id, id + cols, weights.draw(rng)));
            }
        }
    }
    edges
}

/// A `rows x cols` 4-neighbour grid with row-major ids `r * cols + c`.
pub fn generate_grid(rows: usize, cols: usize, weights: WeightModel, seed: u64) -> Result<Graph> {
    let n = vertex_count(rows, cols)?;
    weights.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = grid_edges(rows, cols, weights, &mut rng);
    Graph::from_edges(n, edges)
}

/// A grid with one diagonal per unit cell; the diagonal's orientation is
/// drawn from `seed`. Maximum degree is 8 and the drawing stays planar.
pub fn generate_triangulated_grid(rows: usize, cols: usize, weights: WeightModel, seed: u64) -> Result<Graph> {
    let n = vertex_count(rows, cols)?;
    weights.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = grid_edges(rows, cols, weights, &mut rng);
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            let top_left = r * cols + c;
            let diagonal = if rng.gen::<bool>() {
                (top_left, top_left + cols + 1)
            } else {
                (top_left + 1, top_left + cols)
            };
            edges.push((diagonal.0, diagonal.1, weights.draw(&mut rng)));
        }
    }
    Graph::from_edges(n, edges)
}
