//! The binned random multi-digraph `D_{S-in,T-out}` and the construction of a
//! pattern Hamilton cycle from chained bipartite matchings plus a directed
//! Hamilton cycle on the contracted paths.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Arc, LabeledDigraph, Labels, Vertex};
use crate::directed_hc::{directed_hc, HcBudget};
use crate::matching::{find_perfect_matching, BipartiteTwoOut, EdgeSource};
use crate::pattern::{Dir, Pattern};
use crate::solver::{verify_pi_hc, CycleWitness};

pub type Matrix = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DinDoutError {
    #[error("bin {target} is too small for the choices requested by bin {bin}")]
    BinTooSmall { bin: usize, target: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("the construction needs k >= 3 bins, got {0}")]
    KTooSmall(usize),
    #[error("pattern length {len} differs from the bin count {k}")]
    PatternLength { k: usize, len: usize },
    #[error("bins have unequal sizes")]
    UnequalBins,
    #[error("no perfect matching between bin {0} and the next bin")]
    MatchingFailed(usize),
    #[error("no Hamilton cycle found on the contracted paths")]
    HcNotFound,
    #[error("assembled cycle failed verification")]
    VerificationFailed,
}

/// Whether a chosen arc was an in-choice of its head or an out-choice of its tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChoiceKind {
    In,
    Out,
}

/// One element of the instance's arc multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChoiceRef {
    pub tail: Vertex,
    pub head: Vertex,
    pub kind: ChoiceKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinToutInstance {
    pub bins: Vec<Vec<Vertex>>,
    pub bin_of: Vec<usize>,
    pub s: Matrix,
    pub t: Matrix,
    /// `in_choices[v][j]`: tails in bin `j` of in-arcs chosen by `v`.
    pub in_choices: Vec<Vec<Vec<Vertex>>>,
    /// `out_choices[v][j]`: heads in bin `j` of out-arcs chosen by `v`.
    pub out_choices: Vec<Vec<Vec<Vertex>>>,
}

/// Matrices with 2 in consecutive-bin positions (cyclically) and 0 elsewhere.
pub fn lemma2_matrices(k: usize) -> (Matrix, Matrix) {
    let mut m = vec![vec![0; k]; k];
    for i in 0..k {
        m[i][(i + 1) % k] = 2;
        m[(i + 1) % k][i] = 2;
    }
    (m.clone(), m)
}

/// `k` contiguous bins of `m` vertices each.
pub fn equal_bins(k: usize, m: usize) -> Vec<Vec<Vertex>> {
    (0..k)
        .map(|i| ((i * m) as Vertex..((i + 1) * m) as Vertex).collect())
        .collect()
}

fn bin_map(bins: &[Vec<Vertex>]) -> Result<Vec<usize>, DinDoutError> {
    let n: usize = bins.iter().map(Vec::len).sum();
    let mut bin_of = vec![usize::MAX; n];
    for (i, b) in bins.iter().enumerate() {
        for &v in b {
            let slot = bin_of
                .get_mut(v as usize)
                .ok_or_else(|| DinDoutError::InvalidInstance(format!("vertex {v} out of range")))?;
            if *slot != usize::MAX {
                return Err(DinDoutError::InvalidInstance(format!("vertex {v} in two bins")));
            }
            *slot = i;
        }
    }
    Ok(bin_of)
}

fn check_matrices(bins: &[Vec<Vertex>], s: &Matrix, t: &Matrix) -> Result<(), DinDoutError> {
    let k = bins.len();
    for m in [s, t] {
        if m.len() != k || m.iter().any(|row| row.len() != k) {
            return Err(DinDoutError::InvalidInstance(format!("matrices must be {k}x{k}")));
        }
    }
    for i in 0..k {
        for j in 0..k {
            let room = bins[j].len() - usize::from(i == j);
            if s[i][j] > room || t[i][j] > room {
                return Err(DinDoutError::BinTooSmall { bin: i, target: j });
            }
        }
    }
    Ok(())
}

/// Samples every vertex's choices independently and uniformly.
pub fn sample_sin_tout<R: Rng + ?Sized>(
    bins: Vec<Vec<Vertex>>,
    s: Matrix,
    t: Matrix,
    rng: &mut R,
) -> Result<SinToutInstance, DinDoutError> {
    let bin_of = bin_map(&bins)?;
    check_matrices(&bins, &s, &t)?;
    let k = bins.len();
    let n = bin_of.len();
    let pick = |v: Vertex, j: usize, count: usize, rng: &mut R| -> Vec<Vertex> {
        let pool: Vec<Vertex> = bins[j].iter().copied().filter(|&w| w != v).collect();
        index::sample(rng, pool.len(), count)
            .into_iter()
            .map(|x| pool[x])
            .collect()
    };
    let mut in_choices = vec![vec![Vec::new(); k]; n];
    let mut out_choices = vec![vec![Vec::new(); k]; n];
    for v in 0..n {
        let i = bin_of[v];
        for j in 0..k {
            in_choices[v][j] = pick(v as Vertex, j, s[i][j], rng);
            out_choices[v][j] = pick(v as Vertex, j, t[i][j], rng);
        }
    }
    Ok(SinToutInstance {
        bins,
        bin_of,
        s,
        t,
        in_choices,
        out_choices,
    })
}

impl SinToutInstance {
    /// Builds an instance from explicit choices, checking every count and bin.
    pub fn from_choices(
        bins: Vec<Vec<Vertex>>,
        s: Matrix,
        t: Matrix,
        in_choices: Vec<Vec<Vec<Vertex>>>,
        out_choices: Vec<Vec<Vec<Vertex>>>,
    ) -> Result<SinToutInstance, DinDoutError> {
        let bin_of = bin_map(&bins)?;
        check_matrices(&bins, &s, &t)?;
        let inst = SinToutInstance {
            bins,
            bin_of,
            s,
            t,
            in_choices,
            out_choices,
        };
        inst.check_invariants().map_err(DinDoutError::InvalidInstance)?;
        Ok(inst)
    }

    pub fn k(&self) -> usize {
        self.bins.len()
    }

    pub fn n(&self) -> usize {
        self.bin_of.len()
    }

    /// Every vertex has exactly the prescribed number of distinct choices per bin, none itself.
    pub fn check_invariants(&self) -> Result<(), String> {
        let (n, k) = (self.n(), self.k());
        if self.in_choices.len() != n || self.out_choices.len() != n {
            return Err("choice tables must cover every vertex".into());
        }
        for v in 0..n {
            let i = self.bin_of[v];
            for (table, matrix, what) in [(&self.in_choices, &self.s, "in"), (&self.out_choices, &self.t, "out")] {
                if table[v].len() != k {
                    return Err(format!("vertex {v}: {what}-choices need one list per bin"));
                }
                for j in 0..k {
                    let list = &table[v][j];
                    let mut sorted = list.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if list.len() != matrix[i][j] || sorted.len() != list.len() {
                        return Err(format!("vertex {v}: wrong {what}-choice count for bin {j}"));
                    }
                    if list.iter().any(|&w| w as usize == v || self.bin_of.get(w as usize) != Some(&j)) {
                        return Err(format!("vertex {v}: {what}-choice outside bin {j}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every chosen arc with its multiplicity.
    pub fn choice_arcs(&self) -> Vec<ChoiceRef> {
        let mut out = Vec::new();
        for v in 0..self.n() {
            for list in &self.in_choices[v] {
                out.extend(list.iter().map(|&w| ChoiceRef {
                    tail: w,
                    head: v as Vertex,
                    kind: ChoiceKind::In,
                }));
            }
            for list in &self.out_choices[v] {
                out.extend(list.iter().map(|&w| ChoiceRef {
                    tail: v as Vertex,
                    head: w,
                    kind: ChoiceKind::Out,
                }));
            }
        }
        out
    }

    /// The simple digraph underlying the instance; in-choices carry label `in`, out-choices `out`.
    pub fn digraph(&self) -> LabeledDigraph {
        let arcs = self.choice_arcs().into_iter().map(|c| Arc {
            tail: c.tail,
            head: c.head,
            labels: match c.kind {
                ChoiceKind::In => Labels::IN,
                ChoiceKind::Out => Labels::OUT,
            },
        });
        LabeledDigraph::from_arcs(self.n(), arcs).expect("choices are valid arcs")
    }

    /// Does the multiset contain this choice?
    pub fn has_choice(&self, c: &ChoiceRef) -> bool {
        let (owner, other) = match c.kind {
            ChoiceKind::In => (c.head, c.tail),
            ChoiceKind::Out => (c.tail, c.head),
        };
        let Some(&j) = self.bin_of.get(other as usize) else {
            return false;
        };
        let table = match c.kind {
            ChoiceKind::In => &self.in_choices,
            ChoiceKind::Out => &self.out_choices,
        };
        table.get(owner as usize).is_some_and(|l| l[j].contains(&other))
    }

    /// Bipartite graph of arcs between bin `i` (left) and bin `j` (right) oriented
    /// `i → j` when `dir` is Forward and `j → i` otherwise. Vertices are bin positions.
    pub fn walkup_graph(&self, i: usize, j: usize, dir: Dir) -> BipartiteTwoOut {
        let pos = |v: Vertex, b: usize| self.bins[b].iter().position(|&x| x == v).unwrap() as u32;
        let (left_table, right_table) = match dir {
            Dir::Forward => (&self.out_choices, &self.in_choices),
            Dir::Backward => (&self.in_choices, &self.out_choices),
        };
        let left_choices = self.bins[i]
            .iter()
            .map(|&u| left_table[u as usize][j].iter().map(|&w| pos(w, j)).collect())
            .collect();
        let right_choices = self.bins[j]
            .iter()
            .map(|&w| right_table[w as usize][i].iter().map(|&u| pos(u, i)).collect())
            .collect();
        BipartiteTwoOut {
            left_choices,
            right_choices,
        }
    }

    /// The two independent Walkup graphs of a two-bin instance (`B_1 → B_2` and `B_2 → B_1`).
    pub fn walkup_decomposition(&self) -> Result<(BipartiteTwoOut, BipartiteTwoOut), DinDoutError> {
        if self.k() != 2 {
            return Err(DinDoutError::InvalidInstance("decomposition needs exactly two bins".into()));
        }
        Ok((self.walkup_graph(0, 1, Dir::Forward), self.walkup_graph(0, 1, Dir::Backward)))
    }

    fn choice_for(&self, left: Vertex, right: Vertex, dir: Dir, src: EdgeSource) -> ChoiceRef {
        let (tail, head) = match dir {
            Dir::Forward => (left, right),
            Dir::Backward => (right, left),
        };
        let kind = match (dir, src) {
            (Dir::Forward, EdgeSource::LeftChoice) | (Dir::Backward, EdgeSource::RightChoice) => ChoiceKind::Out,
            _ => ChoiceKind::In,
        };
        ChoiceRef { tail, head, kind }
    }
}

/// Vertex-disjoint paths `u_1 … u_k` with `u_i` in bin `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamily {
    pub paths: Vec<Vec<Vertex>>,
    /// Arc choices used by each path, in path order.
    pub used: Vec<Vec<ChoiceRef>>,
}

fn check_shape(inst: &SinToutInstance, pi: &Pattern) -> Result<(), DinDoutError> {
    let k = inst.k();
    if k < 3 {
        return Err(DinDoutError::KTooSmall(k));
    }
    if pi.len() != k {
        return Err(DinDoutError::PatternLength { k, len: pi.len() });
    }
    if inst.bins.iter().any(|b| b.len() != inst.bins[0].len()) {
        return Err(DinDoutError::UnequalBins);
    }
    Ok(())
}

/// Perfect matchings between consecutive bins, oriented by the pattern, composed into paths.
pub fn chain_matchings(inst: &SinToutInstance, pi: &Pattern) -> Result<PathFamily, DinDoutError> {
    check_shape(inst, pi)?;
    let k = inst.k();
    let m = inst.bins[0].len();
    let mut paths: Vec<Vec<Vertex>> = inst.bins[0].iter().map(|&v| vec![v]).collect();
    let mut used: Vec<Vec<ChoiceRef>> = vec![Vec::with_capacity(k - 1); m];
    // position of the current path end within its bin
    let mut cur: Vec<usize> = (0..m).collect();
    for i in 0..k - 1 {
        let dir = pi.dirs()[i];
        let g = inst.walkup_graph(i, i + 1, dir);
        let matching = find_perfect_matching(&g).map_err(|_| DinDoutError::MatchingFailed(i))?;
        for p in 0..m {
            let a = cur[p];
            let b = matching.mate[a] as usize;
            let (left, right) = (inst.bins[i][a], inst.bins[i + 1][b]);
            paths[p].push(right);
            used[p].push(inst.choice_for(left, right, dir, matching.source[a]));
            cur[p] = b;
        }
    }
    Ok(PathFamily { paths, used })
}

/// A π-Hamilton cycle of an instance with the arc choices it uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Cycle {
    pub witness: CycleWitness,
    pub used: Vec<ChoiceRef>,
}

/// Contracts every path and closes them into one cycle through the arcs between
/// the last and the first bin, oriented as the last pattern entry.
pub fn hc_on_contracted<R: Rng + ?Sized>(
    paths: &PathFamily,
    inst: &SinToutInstance,
    pi: &Pattern,
    budget: HcBudget,
    rng: &mut R,
) -> Result<Lemma2Cycle, DinDoutError> {
    check_shape(inst, pi)?;
    let k = inst.k();
    let count = paths.paths.len();
    if count == 0 {
        return Err(DinDoutError::HcNotFound);
    }
    let path_of_first: std::collections::HashMap<Vertex, usize> =
        paths.paths.iter().enumerate().map(|(p, path)| (path[0], p)).collect();
    let path_of_last: std::collections::HashMap<Vertex, usize> =
        paths.paths.iter().enumerate().map(|(p, path)| (path[k - 1], p)).collect();
    let closing = pi.dirs()[k - 1];
    // contracted arc a -> b: arc between last(a) and first(b), oriented `closing`
    let mut links: std::collections::BTreeMap<(usize, usize), ChoiceRef> = Default::default();
    for (p, path) in paths.paths.iter().enumerate() {
        let (first, last) = (path[0], path[k - 1]);
        // choices owned by `last` toward bin 0, and by `first` toward bin k-1
        let (last_table, first_table, last_kind, first_kind) = match closing {
            Dir::Forward => (&inst.out_choices, &inst.in_choices, ChoiceKind::Out, ChoiceKind::In),
            Dir::Backward => (&inst.in_choices, &inst.out_choices, ChoiceKind::In, ChoiceKind::Out),
        };
        for &w in &last_table[last as usize][0] {
            let b = path_of_first[&w];
            let (tail, head) = if closing == Dir::Forward { (last, w) } else { (w, last) };
            links.entry((p, b)).or_insert(ChoiceRef {
                tail,
                head,
                kind: last_kind,
            });
        }
        for &w in &first_table[first as usize][k - 1] {
            let a = path_of_last[&w];
            let (tail, head) = if closing == Dir::Forward { (w, first) } else { (first, w) };
            links.entry((a, p)).or_insert(ChoiceRef {
                tail,
                head,
                kind: first_kind,
            });
        }
    }
    let path_order: Vec<usize> = if count == 1 {
        if !links.contains_key(&(0, 0)) {
            return Err(DinDoutError::HcNotFound);
        }
        vec![0]
    } else {
        let pairs: Vec<(Vertex, Vertex)> = links
            .keys()
            .filter(|(a, b)| a != b)
            .map(|&(a, b)| (a as Vertex, b as Vertex))
            .collect();
        let contracted = LabeledDigraph::from_pairs(count, &pairs).expect("valid contracted arcs");
        let w = directed_hc(&contracted, budget, rng).ok_or(DinDoutError::HcNotFound)?;
        w.order.iter().map(|&c| c as usize).collect()
    };
    let mut order = Vec::with_capacity(count * k);
    let mut used = Vec::with_capacity(count * k);
    for (idx, &p) in path_order.iter().enumerate() {
        let next = path_order[(idx + 1) % count];
        order.extend_from_slice(&paths.paths[p]);
        used.extend_from_slice(&paths.used[p]);
        used.push(links[&(p, next)]);
    }
    let witness = CycleWitness {
        orientations: (0..order.len()).map(|i| pi.at(i)).collect(),
        order,
        offset: Some(0),
    }
    .normalized();
    if !verify_pi_hc(&inst.digraph(), &witness, pi) {
        return Err(DinDoutError::VerificationFailed);
    }
    Ok(Lemma2Cycle { witness, used })
}

/// Full construction: chained matchings, then the contracted Hamilton cycle.
pub fn lemma2_construct<R: Rng + ?Sized>(
    inst: &SinToutInstance,
    pi: &Pattern,
    budget: HcBudget,
    rng: &mut R,
) -> Result<Lemma2Cycle, DinDoutError> {
    let paths = chain_matchings(inst, pi)?;
    hc_on_contracted(&paths, inst, pi, budget, rng)
}
