//! Exact Hamilton-cycle solvers and the π-HC verifier.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{LabeledDigraph, Vertex};
use crate::pattern::{Dir, Pattern};

/// Default vertex cap for [`exact_pi_hc`].
pub const EXACT_PI_HC_CAP: usize = 16;
/// Vertex cap for [`exact_directed_hc`].
pub const EXACT_DIRECTED_HC_CAP: usize = 18;
/// Vertex cap for [`enumerate_oracle`].
pub const ENUMERATE_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{n} vertices exceeds the solver cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("pattern length {k} does not divide n = {n}")]
    PatternMismatch { n: usize, k: usize },
}

/// A Hamilton cycle `order[0] order[1] … order[n-1] order[0]`, where
/// `orientations[i]` is the direction of the arc between `order[i]` and `order[i+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub order: Vec<Vertex>,
    pub orientations: Vec<Dir>,
    /// Pattern position of the first arc, when known.
    pub offset: Option<usize>,
}

impl CycleWitness {
    /// The arc between positions `i` and `i+1` as `(tail, head)`.
    pub fn arc(&self, i: usize) -> (Vertex, Vertex) {
        let n = self.order.len();
        let (a, b) = (self.order[i], self.order[(i + 1) % n]);
        match self.orientations[i] {
            Dir::Forward => (a, b),
            Dir::Backward => (b, a),
        }
    }

    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.order.len()).map(|i| self.arc(i)).collect()
    }

    /// Rotates so the minimum vertex comes first.
    pub fn normalized(mut self) -> CycleWitness {
        if let Some(pos) = self.order.iter().position_min() {
            self.order.rotate_left(pos);
            self.orientations.rotate_left(pos);
            if let Some(off) = self.offset.as_mut() {
                *off += pos;
            }
        }
        self
    }

    pub fn orientation_string(&self) -> String {
        crate::pattern::orientation_string(&self.orientations)
    }
}

/// True iff `w` is a Hamilton cycle of `d` whose orientations follow some rotation of `pi`.
pub fn verify_pi_hc(d: &LabeledDigraph, w: &CycleWitness, pi: &Pattern) -> bool {
    let n = d.n();
    let k = pi.len();
    if n < 2 || w.order.len() != n || w.orientations.len() != n || n % k != 0 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in &w.order {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    let arcs = w.arcs();
    if !arcs.iter().all(|&(t, h)| d.has_arc(t, h)) {
        return false;
    }
    // on two vertices the cycle must use both opposite arcs
    if n == 2 && arcs[0] == arcs[1] {
        return false;
    }
    (0..k).any(|r| crate::pattern::follows_from(&w.orientations, pi, r))
}

/// Arc of `d` oriented as `dir` from `a` to `b` in traversal order.
#[inline]
fn has_oriented(d: &LabeledDigraph, a: Vertex, b: Vertex, dir: Dir) -> bool {
    match dir {
        Dir::Forward => d.has_arc(a, b),
        Dir::Backward => d.has_arc(b, a),
    }
}

/// Dense oriented adjacency: `adj[dir][a]` is a bitmask of `b` reachable from `a` with an arc oriented `dir`.
fn oriented_masks(d: &LabeledDigraph) -> [Vec<u32>; 2] {
    let n = d.n();
    let mut fwd = vec![0u32; n];
    let mut bwd = vec![0u32; n];
    for a in d.arcs() {
        fwd[a.tail as usize] |= 1 << a.head;
        bwd[a.head as usize] |= 1 << a.tail;
    }
    [fwd, bwd]
}

fn dir_index(d: Dir) -> usize {
    match d {
        Dir::Forward => 0,
        Dir::Backward => 1,
    }
}

/// Exact π-HC search with the default cap.
pub fn exact_pi_hc(d: &LabeledDigraph, pi: &Pattern) -> Result<Option<CycleWitness>, SolverError> {
    exact_pi_hc_capped(d, pi, EXACT_PI_HC_CAP)
}

/// Backtracking from vertex 0 for each of the `k` pattern offsets, remembering
/// dead `(visited set, last vertex)` states.
pub fn exact_pi_hc_capped(
    d: &LabeledDigraph,
    pi: &Pattern,
    cap: usize,
) -> Result<Option<CycleWitness>, SolverError> {
    let n = d.n();
    let k = pi.len();
    let cap = cap.min(31);
    if n > cap {
        return Err(SolverError::TooLarge { n, cap });
    }
    if n == 0 || n % k != 0 {
        return Err(SolverError::PatternMismatch { n, k });
    }
    if n < 2 {
        return Ok(None);
    }
    let masks = oriented_masks(d);
    let full: u32 = (1u32 << n) - 1;
    for offset in 0..k {
        let dir_at = |pos: usize| dir_index(pi.at(pos + offset));
        if n == 2 {
            let (d0, d1) = (pi.at(offset), pi.at(offset + 1));
            if d0 == d1 && has_oriented(d, 0, 1, d0) && has_oriented(d, 1, 0, d1) {
                return Ok(Some(CycleWitness {
                    order: vec![0, 1],
                    orientations: vec![d0, d1],
                    offset: Some(offset),
                }));
            }
            continue;
        }
        // vertices that can close the cycle back to 0 with the last arc
        let closing_dir = dir_at(n - 1);
        let closers: u32 = (1..n)
            .filter(|&v| masks[closing_dir][v] & 1 != 0)
            .fold(0, |acc, v| acc | 1 << v);
        if closers == 0 {
            continue;
        }
        let mut dead = vec![0u64; ((1usize << n) * n).div_ceil(64)];
        let mut path = vec![0 as Vertex];
        if search(&masks, &dir_at, full, closers, 1, 0, &mut path, &mut dead, n) {
            let orientations = (0..n).map(|i| pi.at(i + offset)).collect();
            return Ok(Some(CycleWitness {
                order: path,
                orientations,
                offset: Some(offset),
            }));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search(
    masks: &[Vec<u32>; 2],
    dir_at: &dyn Fn(usize) -> usize,
    full: u32,
    closers: u32,
    visited: u32,
    last: usize,
    path: &mut Vec<Vertex>,
    dead: &mut [u64],
    n: usize,
) -> bool {
    if visited == full {
        return closers >> last & 1 == 1;
    }
    let key = visited as usize * n + last;
    if dead[key / 64] >> (key % 64) & 1 == 1 {
        return false;
    }
    // the closing arc must still be reachable from some unvisited vertex
    if closers & !visited == 0 {
        mark(dead, key);
        return false;
    }
    let pos = path.len() - 1;
    let mut cand = masks[dir_at(pos)][last] & !visited;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        path.push(v as Vertex);
        if search(masks, dir_at, full, closers, visited | 1 << v, v, path, dead, n) {
            return true;
        }
        path.pop();
    }
    mark(dead, key);
    false
}

fn mark(dead: &mut [u64], key: usize) {
    dead[key / 64] |= 1 << (key % 64);
}

/// Reference decision procedure: every vertex order, every pattern offset, no pruning.
pub fn enumerate_oracle(d: &LabeledDigraph, pi: &Pattern) -> Result<bool, SolverError> {
    let n = d.n();
    let k = pi.len();
    if n > ENUMERATE_CAP {
        return Err(SolverError::TooLarge { n, cap: ENUMERATE_CAP });
    }
    if n < 2 || n % k != 0 {
        return Ok(false);
    }
    for order in (0..n as Vertex).permutations(n) {
        for offset in 0..k {
            let mut used = Vec::with_capacity(n);
            let ok = (0..n).all(|i| {
                let (a, b) = (order[i], order[(i + 1) % n]);
                let arc = match pi.at(i + offset) {
                    Dir::Forward => (a, b),
                    Dir::Backward => (b, a),
                };
                let fresh = !used.contains(&arc);
                used.push(arc);
                fresh && d.has_arc(arc.0, arc.1)
            });
            if ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Directed Hamilton cycle by backtracking from vertex 0 with dead-state memo
/// and in/out-degree pruning.
pub fn exact_directed_hc(d: &LabeledDigraph) -> Result<Option<CycleWitness>, SolverError> {
    let n = d.n();
    if n > EXACT_DIRECTED_HC_CAP {
        return Err(SolverError::TooLarge {
            n,
            cap: EXACT_DIRECTED_HC_CAP,
        });
    }
    if n < 2 || (0..n as Vertex).any(|v| d.in_degree(v) == 0 || d.out_degree(v) == 0) {
        return Ok(None);
    }
    if n == 2 {
        return Ok((d.has_arc(0, 1) && d.has_arc(1, 0)).then(|| CycleWitness {
            order: vec![0, 1],
            orientations: vec![Dir::Forward; 2],
            offset: Some(0),
        }));
    }
    let masks = oriented_masks(d);
    let full: u32 = (1u32 << n) - 1;
    let closers = masks[1][0];
    let mut dead = vec![0u64; ((1usize << n) * n).div_ceil(64)];
    let mut path = vec![0 as Vertex];
    let fwd = |_: usize| 0usize;
    Ok(search(&masks, &fwd, full, closers, 1, 0, &mut path, &mut dead, n).then(|| CycleWitness {
        order: path,
        orientations: vec![Dir::Forward; n],
        offset: Some(0),
    }))
}
