//! Short patterned paths through the low-degree vertices.
//!
//! Positions are `0..=len` with `len = 6k` (one path may get `6k + 2`).
//! Position `t` lies in bin `t mod k` and the arc between positions `t` and
//! `t + 1` is oriented `π[t mod k]`.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bins::BinAssignment;
use super::classify::VertexClassification;
use super::exposure::{ExposureGuard, SeenArc};
use super::PipelineFailure;
use crate::digraph::Vertex;
use crate::pattern::{Dir, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternedPath {
    pub vertices: Vec<Vertex>,
    /// `orientations[t]` for the arc between positions `t` and `t + 1`.
    pub orientations: Vec<Dir>,
    /// The low-degree vertex the path was built around.
    pub center: Vertex,
    /// Position of the center's predecessor.
    pub first_pos: usize,
    /// `(position, vertex)` taken from a non-standard bin and swapped afterwards.
    pub exceptional: Vec<(usize, Vertex)>,
}

impl PatternedPath {
    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("non-empty path")
    }

    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        self.vertices
            .windows(2)
            .zip(&self.orientations)
            .map(|(w, d)| match d {
                Dir::Forward => (w[0], w[1]),
                Dir::Backward => (w[1], w[0]),
            })
            .collect()
    }
}

/// Shared state while the paths are grown.
pub struct PathBuilder<'a> {
    pub guard: &'a mut ExposureGuard,
    pub class: &'a VertexClassification,
    pub bins: &'a mut BinAssignment,
    pub pi: &'a Pattern,
    pub in_path: Vec<bool>,
    /// Neighbours kept back for the path of a dangerous vertex.
    pub reserved_for: Vec<Option<Vertex>>,
}

fn oriented(arcs: &[SeenArc], v: Vertex, early_only: bool) -> Vec<(Vertex, Dir)> {
    // Forward: v -> w; Backward: w -> v
    arcs.iter()
        .filter(|a| !early_only || a.early)
        .map(|a| {
            if a.tail == v {
                (a.head, Dir::Forward)
            } else {
                (a.tail, Dir::Backward)
            }
        })
        .collect()
}

impl<'a> PathBuilder<'a> {
    pub fn new(
        guard: &'a mut ExposureGuard,
        class: &'a VertexClassification,
        bins: &'a mut BinAssignment,
        pi: &'a Pattern,
    ) -> PathBuilder<'a> {
        let n = bins.n();
        PathBuilder {
            guard,
            class,
            bins,
            pi,
            in_path: vec![false; n],
            reserved_for: vec![None; n],
        }
    }

    /// Keeps the current `D_*` neighbours of `v` out of every other path.
    pub fn reserve_neighbours(&mut self, v: Vertex) {
        for a in self.guard.expose(v) {
            let w = a.other(v);
            if self.reserved_for[w as usize].is_none() {
                self.reserved_for[w as usize] = Some(v);
            }
        }
    }

    fn k(&self) -> usize {
        self.pi.len()
    }

    fn free_good(&self, w: Vertex) -> bool {
        self.class.is_good(w) && !self.in_path[w as usize]
    }

    /// A free good neighbour `w` of `v` in bin `bin` joined by an early arc
    /// oriented `dir` when read from `v` (`Forward` means `v -> w`).
    fn step<R: Rng + ?Sized>(&mut self, v: Vertex, bin: usize, dir: Dir, rng: &mut R) -> Result<Vertex, PipelineFailure> {
        let arcs = self.guard.expose(v);
        let mut cands: Vec<Vertex> = oriented(&arcs, v, true)
            .into_iter()
            .filter(|&(w, d)| {
                d == dir
                    && self.bins.bin_of[w as usize] == bin
                    && self.free_good(w)
                    && self.reserved_for[w as usize].is_none()
            })
            .map(|(w, _)| w)
            .collect();
        cands.sort_unstable();
        cands.dedup();
        let w = *cands.choose(rng).ok_or(PipelineFailure::PathBuildFailed {
            vertex: v,
            reason: format!("no free good neighbour in bin {bin}"),
        })?;
        self.in_path[w as usize] = true;
        Ok(w)
    }

    /// Builds the path through `w2`.
    pub fn build<R: Rng + ?Sized>(&mut self, w2: Vertex, rng: &mut R) -> Result<PatternedPath, PipelineFailure> {
        let k = self.k();
        let len = 6 * k;
        let pi = self.pi.dirs().to_vec();
        let arcs = self.guard.expose(w2);
        // orientation of the traversal y -> w2 (as predecessor) and w2 -> y (as successor)
        let nbrs = oriented(&arcs, w2, false);
        let mut as_pred: Vec<(Vertex, [bool; 2])> = Vec::new();
        for &(y, d) in &nbrs {
            let reserved = self.reserved_for[y as usize].is_some_and(|o| o != w2);
            if !self.free_good(y) || y == w2 || reserved {
                continue;
            }
            // arc w2 -> y traversed from y is Backward
            let pred_dir = d.flip();
            match as_pred.iter_mut().find(|e| e.0 == y) {
                Some(e) => e.1[pred_dir as usize] = true,
                None => {
                    let mut o = [false; 2];
                    o[pred_dir as usize] = true;
                    as_pred.push((y, o));
                }
            }
        }
        as_pred.sort_unstable_by_key(|e| e.0);
        // candidates (w1, w3, j0): w1 -> w2 oriented π[j0], w2 -> w3 oriented π[j0+1]
        let mut cands: Vec<(Vertex, Vertex, usize)> = Vec::new();
        for &(y1, o1) in &as_pred {
            for &(y3, o3) in &as_pred {
                if y1 == y3 {
                    continue;
                }
                // as successor the orientation is the flip of the predecessor reading
                let j = (0..k).find(|&j| o1[pi[j] as usize] && o3[pi[(j + 1) % k].flip() as usize]);
                if let Some(j) = j {
                    cands.push((y1, y3, j));
                }
            }
        }
        let &(w1, w3, j0) = cands.choose(rng).ok_or(PipelineFailure::PathBuildFailed {
            vertex: w2,
            reason: "no pair of free good neighbours fits the pattern".into(),
        })?;
        let t1 = k + j0;
        let mut pos: Vec<Option<Vertex>> = vec![None; len + 1];
        pos[t1] = Some(w1);
        pos[t1 + 1] = Some(w2);
        pos[t1 + 2] = Some(w3);
        for w in [w1, w2, w3] {
            self.in_path[w as usize] = true;
        }
        // the i-th of w1, w2, w3 belongs in bin (j0 + i) mod k; a misplaced one is
        // exchanged with a vertex found at position a + (i + 3)k, searched in bin (j0 + i) mod k
        let mut exceptions: Vec<(usize, usize, Vertex)> = Vec::new();
        for (i, w) in [w1, w2, w3].into_iter().enumerate() {
            let a = self.bins.bin_of[w as usize];
            let want = (j0 + i) % k;
            if a != want {
                exceptions.push((a + (i + 3) * k, want, w));
            }
        }
        let target = |t: usize| {
            exceptions
                .iter()
                .find(|e| e.0 == t)
                .map_or(t % k, |e| e.1)
        };
        for t in t1 + 2..len {
            let v = pos[t].unwrap();
            pos[t + 1] = Some(self.step(v, target(t + 1), pi[t % k], rng)?);
        }
        for t in (1..=t1).rev() {
            let v = pos[t].unwrap();
            // arc (t-1, t) oriented π[t-1], read from v it is flipped
            pos[t - 1] = Some(self.step(v, target(t - 1), pi[(t - 1) % k].flip(), rng)?);
        }
        let vertices: Vec<Vertex> = pos.into_iter().map(Option::unwrap).collect();
        let mut exceptional = Vec::new();
        for &(t, _, w) in &exceptions {
            self.bins.swap(w, vertices[t]);
            exceptional.push((t, vertices[t]));
        }
        Ok(PatternedPath {
            orientations: (0..len).map(|t| pi[t % k]).collect(),
            vertices,
            center: w2,
            first_pos: t1,
            exceptional,
        })
    }

    /// Appends two vertices in bins 1 and 0. Only used with the alternating
    /// pattern, where the orientations still alternate.
    pub fn extend_by_two<R: Rng + ?Sized>(&mut self, path: &mut PatternedPath, rng: &mut R) -> Result<(), PipelineFailure> {
        let k = self.k();
        let pi = self.pi.dirs().to_vec();
        for bin in [1, 0] {
            let t = path.vertices.len() - 1;
            let v = path.last();
            let w = self.step(v, bin, pi[t % k], rng)?;
            path.vertices.push(w);
            path.orientations.push(pi[t % k]);
        }
        Ok(())
    }
}
