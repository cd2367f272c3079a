//! Contracting each path to a single vertex, and the binned instance read off
//! the undiscovered arcs of the contracted digraph.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::classify::VertexClassification;
use super::exposure::ExposureGuard;
use super::paths::PatternedPath;
use super::PipelineFailure;
use crate::digraph::Vertex;
use crate::din_dout::{lemma2_matrices, ChoiceKind, SinToutInstance};
use crate::pattern::Dir;
use crate::solver::CycleWitness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Member {
    Ordinary(Vertex),
    /// Index into the path list.
    Fat(usize),
}

/// Vertex set after contraction, with compact ids `0..n'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractedDigraph {
    pub k: usize,
    pub members: Vec<Member>,
    pub bins: Vec<Vec<Vertex>>,
    /// Compact id of each original vertex that survives as itself.
    pub compact_of: Vec<Option<Vertex>>,
    /// Path endpoints `(first, last)` per fat vertex.
    pub ends: Vec<(Vertex, Vertex)>,
}

impl ContractedDigraph {
    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn bin_of(&self, x: Vertex) -> usize {
        self.bins.iter().position(|b| b.contains(&x)).expect("member of some bin")
    }

    /// Original vertex that carries the arcs of `x` toward `bin`: a fat vertex
    /// uses its first vertex toward bin `k-1` and its last toward bin 1.
    pub fn representative(&self, x: Vertex, bin: usize) -> Vertex {
        match self.members[x as usize] {
            Member::Ordinary(v) => v,
            Member::Fat(p) if bin == self.k - 1 => self.ends[p].0,
            Member::Fat(p) => self.ends[p].1,
        }
    }

    /// Compact id for an arc end `w` seen from a vertex in `owner_bin`, or
    /// `None` when the arc does not survive contraction.
    fn resolve(&self, w: Vertex, owner_bin: usize) -> Option<Vertex> {
        if let Some(c) = self.compact_of[w as usize] {
            return Some(c);
        }
        self.ends.iter().position(|&(f, l)| {
            (f == w && owner_bin == self.k - 1) || (l == w && owner_bin == 1)
        })
        .map(|p| self.fat_id(p))
    }

    fn fat_id(&self, p: usize) -> Vertex {
        self.members
            .iter()
            .position(|&m| m == Member::Fat(p))
            .expect("fat vertex present") as Vertex
    }

    /// Replaces fat vertices of a compact cycle by their paths.
    pub fn expand(&self, w: &CycleWitness, paths: &[PatternedPath]) -> CycleWitness {
        let mut order = Vec::new();
        let mut orientations: Vec<Dir> = Vec::new();
        for (i, &x) in w.order.iter().enumerate() {
            let next = w.orientations[i];
            match self.members[x as usize] {
                Member::Ordinary(v) => {
                    order.push(v);
                    orientations.push(next);
                }
                Member::Fat(p) => {
                    order.extend_from_slice(&paths[p].vertices);
                    orientations.extend_from_slice(&paths[p].orientations);
                    orientations.push(next);
                }
            }
        }
        CycleWitness {
            order,
            orientations,
            offset: None,
        }
        .normalized()
    }
}

/// Ordinary vertices keep their bins, each path becomes one vertex in bin 0.
pub fn contract(bin_of: &[usize], k: usize, paths: &[PatternedPath]) -> Result<ContractedDigraph, PipelineFailure> {
    let n = bin_of.len();
    let mut on_path = vec![false; n];
    for p in paths {
        for &v in &p.vertices {
            on_path[v as usize] = true;
        }
    }
    let mut members = Vec::new();
    let mut bins = vec![Vec::new(); k];
    let mut compact_of = vec![None; n];
    for v in 0..n {
        if !on_path[v] {
            let id = members.len() as Vertex;
            compact_of[v] = Some(id);
            members.push(Member::Ordinary(v as Vertex));
            bins[bin_of[v]].push(id);
        }
    }
    for p in 0..paths.len() {
        bins[0].push(members.len() as Vertex);
        members.push(Member::Fat(p));
    }
    if bins.iter().any(|b| b.len() != bins[0].len()) {
        return Err(PipelineFailure::UnbalancedContraction(bins.iter().map(Vec::len).collect()));
    }
    Ok(ContractedDigraph {
        k,
        members,
        bins,
        compact_of,
        ends: paths.iter().map(|p| (p.first(), p.last())).collect(),
    })
}

/// Fewest undiscovered visible arcs of any contracted vertex toward an adjacent bin, with where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct U1Minimum {
    pub count: u32,
    pub vertex: Vertex,
    pub bin: usize,
}

/// Counts undiscovered arcs without reading their far ends.
pub fn u1_minimum(
    guard: &ExposureGuard,
    c: &ContractedDigraph,
    class: &VertexClassification,
    initial_bins: &[usize],
) -> Option<U1Minimum> {
    let k = c.k;
    let mut best: Option<U1Minimum> = None;
    for x in 0..c.n() as Vertex {
        let b = c.bin_of(x);
        for bin in [(b + 1) % k, (b + k - 1) % k] {
            let v = c.representative(x, bin);
            let (uo, ui) = guard.undiscovered_counts(v, &class.d_out[v as usize], &class.d_in[v as usize], initial_bins);
            let count = uo[bin].min(ui[bin]);
            if best.is_none_or(|m| count < m.count) {
                best = Some(U1Minimum { count, vertex: v, bin });
            }
        }
    }
    best
}

/// Reads the far ends of the undiscovered arcs and keeps two in- and two
/// out-choices per vertex and adjacent bin, uniformly among the survivors.
pub fn extract_instance<R: Rng + ?Sized>(
    guard: &mut ExposureGuard,
    c: &ContractedDigraph,
    initial_bins: &[usize],
    rng: &mut R,
) -> Result<SinToutInstance, PipelineFailure> {
    let (k, n) = (c.k, c.n());
    let mut in_choices = vec![vec![Vec::new(); k]; n];
    let mut out_choices = vec![vec![Vec::new(); k]; n];
    for x in 0..n as Vertex {
        let b = c.bin_of(x);
        for bin in [(b + 1) % k, (b + k - 1) % k] {
            let v = c.representative(x, bin);
            for kind in [ChoiceKind::In, ChoiceKind::Out] {
                let mut ends: Vec<Vertex> = guard
                    .extract(v, bin, kind, initial_bins)
                    .into_iter()
                    .filter_map(|w| c.resolve(w, b))
                    .collect();
                ends.sort_unstable();
                ends.dedup();
                if ends.len() < 2 {
                    return Err(PipelineFailure::U1Violated { vertex: v, bin });
                }
                let picked: Vec<Vertex> = index::sample(rng, ends.len(), 2).iter().map(|i| ends[i]).collect();
                let table = match kind {
                    ChoiceKind::In => &mut in_choices,
                    ChoiceKind::Out => &mut out_choices,
                };
                table[x as usize][bin] = picked;
            }
        }
    }
    let (s, t) = lemma2_matrices(k);
    SinToutInstance::from_choices(c.bins.clone(), s, t, in_choices, out_choices)
        .map_err(|e| PipelineFailure::Internal(e.to_string()))
}
