//! Balanced k-partitions, boundary detection, and the boundary-first vertex
//! ordering used by every distance table.
//!
//! Partitioning grows `k` regions from pseudo-random seed vertices by
//! breadth-first search, each capped at `ceil(n / k)` vertices. A few rounds
//! move every seed to the deepest vertex of its region and regrow, which
//! evens out region shapes. Then greedy refinement sweeps move single
//! boundary vertices to a neighbouring component whenever that strictly
//! lowers the total number of boundary vertices without breaking the balance
//! bound. The whole procedure runs [`ATTEMPTS`] times from fresh seed
//! vertices and keeps the partition with the smallest boundary.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Maximum number of refinement sweeps.
pub const MAX_REFINEMENT_SWEEPS: usize = 10;

/// Largest component allowed after refinement: `ceil(1.1 * n / k)`.
pub fn balance_limit(n: usize, k: usize) -> usize {
    (11 * n).div_ceil(10 * k)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    k: usize,
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
    boundary: Vec<bool>,
    permutation: Vec<usize>,
    inverse: Vec<usize>,
}

impl Partition {
    /// Wraps a vertex-to-component map, deriving members, boundary flags and
    /// the boundary-first ordering. Every component id must be below `k`.
    pub fn from_assignment(g: &Graph, k: usize, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != g.n() {
            return Err(Error::LengthMismatch {
                left: assignment.len(),
                right: g.n(),
            });
        }
        Self::check_ids(k, &assignment)?;
        let boundary = compute_boundary(g, &assignment);
        Self::from_parts(k, assignment, boundary)
    }

    /// Rebuilds a partition from stored assignment and boundary flags.
    pub fn from_parts(k: usize, assignment: Vec<usize>, boundary: Vec<bool>) -> Result<Self> {
        let n = assignment.len();
        if boundary.len() != n {
            return Err(Error::LengthMismatch {
                left: boundary.len(),
                right: n,
            });
        }
        Self::check_ids(k, &assignment)?;
        let mut members = vec![Vec::new(); k];
        for (v, &c) in assignment.iter().enumerate() {
            members[c].push(v);
        }
        let mut inverse = Vec::with_capacity(n);
        for list in &members {
            inverse.extend(list.iter().copied().filter(|&v| boundary[v]));
            inverse.extend(list.iter().copied().filter(|&v| !boundary[v]));
        }
        let mut permutation = vec![0; n];
        for (new, &old) in inverse.iter().enumerate() {
            permutation[old] = new;
        }
        Ok(Partition {
            k,
            assignment,
            members,
            boundary,
            permutation,
            inverse,
        })
    }

    fn check_ids(k: usize, assignment: &[usize]) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidComponentCount { k, n: assignment.len() });
        }
        match assignment.iter().find(|&&c| c >= k) {
            Some(&bad) => Err(Error::InvalidGraph(format!("component id {bad} not below k={k}"))),
            None => Ok(()),
        }
    }

    /// The same partition expressed in the boundary-first id space.
    pub fn relabeled(&self) -> Partition {
        let n = self.n();
        let mut assignment = vec![0; n];
        let mut boundary = vec![false; n];
        for (old, &new) in self.permutation.iter().enumerate() {
            assignment[new] = self.assignment[old];
            boundary[new] = self.boundary[old];
        }
        Partition::from_parts(self.k, assignment, boundary).expect("relabelling keeps ids valid")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// Vertices of component `c`, ascending.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    pub fn size(&self, c: usize) -> usize {
        self.members[c].len()
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    /// `|B(C)|` for component `c`.
    pub fn boundary_count(&self, c: usize) -> usize {
        self.members[c].iter().filter(|&&v| self.boundary[v]).count()
    }

    pub fn boundary_total(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Old id to new id under the boundary-first ordering.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// New id to old id.
    pub fn inverse_permutation(&self) -> &[usize] {
        &self.inverse
    }

    pub fn max_size(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when component ids are contiguous ranges in ascending component
    /// order with boundary vertices first, i.e. the permutation is the identity.
    pub fn is_ordered(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `vertex component boundary_flag` lines, one per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.n() {
            writeln!(out, "{v} {} {}", self.assignment[v], u8::from(self.boundary[v])).unwrap();
        }
        out
    }
}

/// Flags every vertex with at least one neighbour in another component.
pub fn compute_boundary(g: &Graph, assignment: &[usize]) -> Vec<bool> {
    (0..g.n())
        .map(|v| g.neighbors(v).any(|(u, _)| assignment[u] != assignment[v]))
        .collect()
}

/// Splits `g` into `k` balanced components. Deterministic for a fixed seed.
pub fn partition_graph(g: &Graph, k: usize, seed: u64) -> Result<Partition> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidComponentCount { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for _ in 0..ATTEMPTS {
        let mut assignment = grow_regions(g, k, &mut rng);
        refine(g, k, &mut assignment);
        let total = compute_boundary(g, &assignment).iter().filter(|&&b| b).count();
        if best.as_ref().is_none_or(|(t, _)| total < *t) {
            best = Some((total, assignment));
        }
    }
    Partition::from_assignment(g, k, best.expect("at least one attempt").1)
}

/// Independent grow-and-refine runs per call; the one with the fewest
/// boundary vertices wins, earliest first on ties.
pub const ATTEMPTS: usize = 4;

const UNASSIGNED: usize = usize::MAX;

fn grow_regions(g: &Graph, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut seeds = rand::seq::index::sample(rng, g.n(), k).into_vec();
    let mut assignment = grow_from(g, k, &mut seeds);
    for _ in 0..RECENTER_ROUNDS {
        seeds = deepest_members(g, k, &assignment);
        assignment = grow_from(g, k, &mut seeds);
    }
    assignment
}

/// Rounds of moving every seed to the interior of its region and regrowing.
pub const RECENTER_ROUNDS: usize = 3;

/// For each component, the member farthest (in hops, inside the component)
/// from the component's boundary; ties by smallest id.
fn deepest_members(g: &Graph, k: usize, assignment: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if g.neighbors(v).any(|(u, _)| assignment[u] != assignment[v]) {
            depth[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.neighbors(u) {
            if assignment[v] == assignment[u] && depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    // Members never reached from a boundary count as deepest.
    let mut best: Vec<Option<usize>> = vec![None; k];
    for v in 0..n {
        let slot = &mut best[assignment[v]];
        if slot.is_none_or(|b| depth[v] > depth[b]) {
            *slot = Some(v);
        }
    }
    best.into_iter().map(|b| b.expect("components are nonempty")).collect()
}

fn grow_from(g: &Graph, k: usize, seeds: &mut [usize]) -> Vec<usize> {
    let n = g.n();
    let cap = n.div_ceil(k);
    seeds.sort_unstable();

    let mut assignment = vec![UNASSIGNED; n];
    let mut sizes = vec![0usize; k];
    let mut queue = VecDeque::with_capacity(n);
    for (c, &s) in seeds.iter().enumerate() {
        assignment[s] = c;
        sizes[c] = 1;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let c = assignment[u];
        for (v, _) in g.neighbors(u) {
            if sizes[c] >= cap {
                break;
            }
            if assignment[v] == UNASSIGNED {
                assignment[v] = c;
                sizes[c] += 1;
                queue.push_back(v);
            }
        }
    }

    // Vertices cut off by full regions or lying in seedless connected pieces:
    // attach each to its smallest non-full neighbouring region, falling back
    // to the globally smallest region when no neighbour has room.
    let mut pending: VecDeque<usize> = (0..n)
        .filter(|&v| assignment[v] == UNASSIGNED && g.neighbors(v).any(|(u, _)| assignment[u] != UNASSIGNED))
        .collect();
    let mut next_unassigned = 0;
    loop {
        while let Some(v) = pending.pop_front() {
            if assignment[v] != UNASSIGNED {
                continue;
            }
            let target = g
                .neighbors(v)
                .map(|(u, _)| assignment[u])
                .filter(|&c| c != UNASSIGNED && sizes[c] < cap)
                .min_by_key(|&c| (sizes[c], c));
            if let Some(c) = target {
                assignment[v] = c;
                sizes[c] += 1;
                pending.extend(g.neighbors(v).map(|(u, _)| u).filter(|&u| assignment[u] == UNASSIGNED));
            }
        }
        while next_unassigned < n && assignment[next_unassigned] != UNASSIGNED {
            next_unassigned += 1;
        }
        if next_unassigned == n {
            break;
        }
        let v = next_unassigned;
        let c = (0..k).min_by_key(|&c| (sizes[c], c)).expect("k >= 1");
        assignment[v] = c;
        sizes[c] += 1;
        pending.extend(g.neighbors(v).map(|(u, _)| u).filter(|&u| assignment[u] == UNASSIGNED));
    }
    assignment
}

fn refine(g: &Graph, k: usize, assignment: &mut [usize]) {
    let n = g.n();
    let limit = balance_limit(n, k);
    let mut sizes = vec![0usize; k];
    for &c in assignment.iter() {
        sizes[c] += 1;
    }
    let mut boundary = compute_boundary(g, assignment);

    let is_boundary_with = |assignment: &[usize], x: usize, moved: usize, to: usize| {
        let cx = if x == moved { to } else { assignment[x] };
        g.neighbors(x).any(|(y, _)| {
            let cy = if y == moved { to } else { assignment[y] };
            cy != cx
        })
    };

    for _ in 0..MAX_REFINEMENT_SWEEPS {
        let mut moved_any = false;
        for v in 0..n {
            if !boundary[v] {
                continue;
            }
            let from = assignment[v];
            if sizes[from] <= 1 {
                continue;
            }
            let mut candidates: Vec<usize> = g
                .neighbors(v)
                .map(|(u, _)| assignment[u])
                .filter(|&c| c != from && sizes[c] < limit)
                .collect();
            candidates.sort_unstable();
            candidates.dedup();

            let mut best: Option<(isize, usize)> = None;
            for to in candidates {
                let mut delta = 0isize;
                for x in std::iter::once(v).chain(g.neighbors(v).map(|(u, _)| u)) {
                    let after = is_boundary_with(assignment, x, v, to);
                    delta += isize::from(after) - isize::from(boundary[x]);
                }
                if delta < 0 && best.is_none_or(|(d, _)| delta < d) {
                    best = Some((delta, to));
                }
            }
            if let Some((_, to)) = best {
                assignment[v] = to;
                sizes[from] -= 1;
                sizes[to] += 1;
                for x in std::iter::once(v).chain(g.neighbors(v).map(|(u, _)| u)) {
                    boundary[x] = g.neighbors(x).any(|(y, _)| assignment[y] != assignment[x]);
                }
                moved_any = true;
            }
        }
        if !moved_any {
            break;
        }
    }
}

/// Relabels `g` and `p` so components occupy contiguous id ranges with
/// boundary vertices first. The returned partition has identity permutation.
pub fn reorder_vertices(g: &Graph, p: &Partition) -> (Graph, Partition) {
    let q = p.relabeled();
    debug_assert!(q.is_ordered());
    (g.permuted(p.permutation()), q)
}
