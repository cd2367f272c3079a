//! Bookkeeping for what the construction has looked at.
//!
//! The guard holds every pair that appears by the end of the window and hands
//! out information only through methods that record what they reveal. Arcs of
//! `D_{n,p-}` whose endpoints were never revealed stay hidden until
//! [`ExposureGuard::extract`], which is the single place their far endpoints
//! are read.

use serde::{Deserialize, Serialize};

use crate::digraph::Vertex;
use crate::din_dout::ChoiceKind;
use crate::model::ProcessTrace;

#[derive(Debug, Clone, Copy)]
struct StampedPair {
    tail: Vertex,
    head: Vertex,
    x_in: f64,
    x_out: f64,
}

impl StampedPair {
    fn stamp(&self) -> f64 {
        self.x_in.min(self.x_out)
    }

    fn other(&self, v: Vertex) -> Vertex {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// An arc of `D_*` incident with an exposed vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeenArc {
    pub tail: Vertex,
    pub head: Vertex,
    /// Present by the start of the window.
    pub early: bool,
    /// Visible from the head (in-label early).
    pub visible_in: bool,
    /// Visible from the tail (out-label early).
    pub visible_out: bool,
}

impl SeenArc {
    pub fn other(&self, v: Vertex) -> Vertex {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// Counters kept by the guard.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExposureAudit {
    pub vertices_exposed: usize,
    pub arcs_revealed: usize,
    pub window_arcs: usize,
    pub window_revealed: usize,
    pub extraction_reads: usize,
    /// Early arcs revealed before extraction although neither endpoint was exposed.
    pub premature_reveals: usize,
}

#[derive(Debug, Clone)]
pub struct ExposureGuard {
    n: usize,
    s_minus: f64,
    pairs: Vec<StampedPair>,
    /// Number of leading pairs (in arrival order) present by `s_minus`.
    early: usize,
    incident: Vec<Vec<u32>>,
    exposed: Vec<bool>,
    revealed: Vec<bool>,
    extracted: Vec<bool>,
    admitted: Vec<bool>,
    audit: ExposureAudit,
}

impl ExposureGuard {
    /// Reads every pair with a stamp at most `s_plus` (round clock).
    pub fn new(trace: &ProcessTrace, s_minus: f64, s_plus: f64) -> ExposureGuard {
        let n = trace.n();
        let mut pairs = Vec::new();
        trace.for_each_pair(|tail, head, [x_in, x_out]| {
            if x_in.min(x_out) <= s_plus {
                pairs.push(StampedPair { tail, head, x_in, x_out });
            }
        });
        pairs.sort_by(|a, b| {
            a.stamp()
                .total_cmp(&b.stamp())
                .then((a.tail, a.head).cmp(&(b.tail, b.head)))
        });
        let early = pairs.partition_point(|p| p.stamp() <= s_minus);
        let mut incident = vec![Vec::new(); n];
        for (i, p) in pairs.iter().enumerate() {
            incident[p.tail as usize].push(i as u32);
            incident[p.head as usize].push(i as u32);
        }
        let len = pairs.len();
        ExposureGuard {
            n,
            s_minus,
            pairs,
            early,
            incident,
            exposed: vec![false; n],
            revealed: vec![false; len],
            extracted: vec![false; len],
            admitted: vec![false; len],
            audit: ExposureAudit::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of arcs present at the start of the window.
    pub fn early_arc_count(&self) -> usize {
        self.early
    }

    pub fn is_exposed(&self, v: Vertex) -> bool {
        self.exposed[v as usize]
    }

    fn in_dstar(&self, i: usize) -> bool {
        i < self.early || self.admitted[i]
    }

    /// Per-bin counts of arcs visible from each vertex: `(out, in)`, indexed `[v][bin]`.
    /// Only counts are released.
    pub fn visible_counts(&self, bin_of: &[usize], k: usize) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
        let mut out = vec![vec![0u32; k]; self.n];
        let mut inn = vec![vec![0u32; k]; self.n];
        for p in &self.pairs[..self.early] {
            if p.x_out <= self.s_minus {
                out[p.tail as usize][bin_of[p.head as usize]] += 1;
            }
            if p.x_in <= self.s_minus {
                inn[p.head as usize][bin_of[p.tail as usize]] += 1;
            }
        }
        (out, inn)
    }

    /// Exposes `v`: every arc of `D_*` at `v` becomes known. Idempotent.
    pub fn expose(&mut self, v: Vertex) -> Vec<SeenArc> {
        if !self.exposed[v as usize] {
            self.exposed[v as usize] = true;
            self.audit.vertices_exposed += 1;
        }
        let mut seen = Vec::new();
        for idx in 0..self.incident[v as usize].len() {
            let i = self.incident[v as usize][idx] as usize;
            if !self.in_dstar(i) {
                continue;
            }
            if !self.revealed[i] {
                self.revealed[i] = true;
                self.audit.arcs_revealed += 1;
            }
            let p = self.pairs[i];
            seen.push(SeenArc {
                tail: p.tail,
                head: p.head,
                early: i < self.early,
                visible_in: p.x_in <= self.s_minus,
                visible_out: p.x_out <= self.s_minus,
            });
        }
        seen
    }

    /// Walks the window arcs `e_1, e_2, …` in order. Each is revealed only if
    /// it touches a flagged vertex; otherwise just its existence is reported.
    pub fn window(&mut self, flagged: &[bool]) -> Vec<Option<(Vertex, Vertex)>> {
        let mut out = Vec::with_capacity(self.pairs.len() - self.early);
        for i in self.early..self.pairs.len() {
            let p = self.pairs[i];
            if flagged[p.tail as usize] || flagged[p.head as usize] {
                self.revealed[i] = true;
                self.audit.window_revealed += 1;
                out.push(Some((p.tail, p.head)));
            } else {
                out.push(None);
            }
        }
        self.audit.window_arcs = out.len();
        out
    }

    /// Adds the revealed window arcs among `e_1 … e_r` to `D_*`.
    pub fn admit_window(&mut self, r: usize) {
        for i in self.early..(self.early + r).min(self.pairs.len()) {
            if self.revealed[i] {
                self.admitted[i] = true;
            }
        }
    }

    /// Arcs visible from `v` not yet discovered, by the bin of the far end:
    /// `(out, in)`. Computed as the visible counts minus the discovered arcs
    /// at `v`, so no hidden endpoint is consulted.
    pub fn undiscovered_counts(
        &self,
        v: Vertex,
        visible_out: &[u32],
        visible_in: &[u32],
        bin_of: &[usize],
    ) -> (Vec<u32>, Vec<u32>) {
        let mut out = visible_out.to_vec();
        let mut inn = visible_in.to_vec();
        for &i in &self.incident[v as usize] {
            let i = i as usize;
            if i >= self.early || !self.revealed[i] {
                continue;
            }
            let p = self.pairs[i];
            let b = bin_of[p.other(v) as usize];
            if p.tail == v && p.x_out <= self.s_minus {
                out[b] -= 1;
            }
            if p.head == v && p.x_in <= self.s_minus {
                inn[b] -= 1;
            }
        }
        (out, inn)
    }

    /// Reads the far endpoints of the undiscovered arcs visible from `v` with
    /// far end in bin `bin` (`Out`: arcs leaving `v`, `In`: arcs entering `v`).
    pub fn extract(&mut self, v: Vertex, bin: usize, kind: ChoiceKind, bin_of: &[usize]) -> Vec<Vertex> {
        let mut ends = Vec::new();
        for idx in 0..self.incident[v as usize].len() {
            let i = self.incident[v as usize][idx] as usize;
            if i >= self.early || self.revealed[i] {
                continue;
            }
            let p = self.pairs[i];
            let visible = match kind {
                ChoiceKind::Out => p.tail == v && p.x_out <= self.s_minus,
                ChoiceKind::In => p.head == v && p.x_in <= self.s_minus,
            };
            let w = p.other(v);
            if visible && bin_of[w as usize] == bin {
                self.extracted[i] = true;
                self.audit.extraction_reads += 1;
                ends.push(w);
            }
        }
        ends
    }

    /// Recomputes the counters, including the check that every early arc
    /// revealed outside extraction has an exposed endpoint.
    pub fn audit(&self) -> ExposureAudit {
        let mut a = self.audit;
        a.premature_reveals = (0..self.early)
            .filter(|&i| {
                let p = self.pairs[i];
                self.revealed[i]
                    && !self.extracted[i]
                    && !self.exposed[p.tail as usize]
                    && !self.exposed[p.head as usize]
            })
            .count();
        a
    }
}
