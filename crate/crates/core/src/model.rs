//! Random digraph models and the coupled labeled process.
//!
//! `D_{n,p}` is realised as the union of an "in" round and an "out" round,
//! each keeping every ordered pair independently with probability
//! `p' = 1 - sqrt(1 - p)`, so that `2p' - p'^2 = p`. The process view gives
//! each `(pair, label)` one uniform stamp; the arc is present at time `p`
//! with label `l` iff its `l`-stamp is at most `p'`.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Arc, Labels, LabeledDigraph, Vertex};
use crate::pattern::{Pattern, PatternClass};
use crate::rng::unit_f64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("arc index {m} out of range (at most {max})")]
    IndexOutOfRange { m: usize, max: usize },
    #[error("{0}")]
    DomainError(String),
    #[error("need at least {need} vertices, got {n}")]
    TooFewVertices { n: usize, need: usize },
    #[error("stamp table has {got} entries, expected {expected}")]
    BadStampTable { got: usize, expected: usize },
}

/// Which degree condition plays the role of event `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegreeVariant {
    /// Every vertex has in-degree ≥ 2 or out-degree ≥ 2.
    Alternating,
    /// Every vertex has total degree ≥ 2.
    NonAlternating,
}

impl DegreeVariant {
    /// Variant governing Hamilton cycles that follow `p`; `None` for the trivial pattern.
    pub fn for_pattern(p: &Pattern) -> Option<DegreeVariant> {
        let canon = p.canonical_form();
        match canon.classify() {
            PatternClass::Trivial => None,
            PatternClass::Alternating => Some(DegreeVariant::Alternating),
            PatternClass::NonAlternating => Some(DegreeVariant::NonAlternating),
            PatternClass::NonPrimitive => {
                // reduce to the primitive root
                let k = canon.len();
                let root = (1..k)
                    .filter(|d| k % d == 0)
                    .find(|&d| (d..k).all(|i| canon.dirs()[i] == canon.dirs()[i % d]))?;
                let root = Pattern::new(canon.dirs()[..root].to_vec()).ok()?;
                DegreeVariant::for_pattern(&root)
            }
        }
    }

    #[inline]
    pub fn satisfied(self, in_deg: usize, out_deg: usize) -> bool {
        match self {
            DegreeVariant::Alternating => in_deg >= 2 || out_deg >= 2,
            DegreeVariant::NonAlternating => in_deg + out_deg >= 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DegreeVariant::Alternating => "alternating",
            DegreeVariant::NonAlternating => "non-alternating",
        }
    }
}

/// `p'` with `2p' - p'^2 = p`.
pub fn round_probability(p: f64) -> f64 {
    1.0 - (1.0 - p).sqrt()
}

/// Inverse of [`round_probability`]: the merged probability of one round value.
pub fn merged_probability(p_round: f64) -> f64 {
    2.0 * p_round - p_round * p_round
}

fn check_probability(p: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ModelError::InvalidProbability(p))
    }
}

/// Number of ordered pairs of distinct vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Ordered pair for a dense index in `0..n(n-1)`, in `(tail, head)` order.
#[inline]
pub fn pair_from_index(n: usize, idx: usize) -> (Vertex, Vertex) {
    let tail = idx / (n - 1);
    let r = idx % (n - 1);
    let head = if r >= tail { r + 1 } else { r };
    (tail as Vertex, head as Vertex)
}

/// Sorted indices of a Bernoulli(`q`) subset of `0..len`, by geometric skips.
fn bernoulli_indices<R: Rng + ?Sized>(len: usize, q: f64, rng: &mut R) -> Vec<usize> {
    if q <= 0.0 || len == 0 {
        return Vec::new();
    }
    if q >= 1.0 {
        return (0..len).collect();
    }
    let geo = Geometric::new(q).expect("0 < q < 1");
    let mut out = Vec::with_capacity((len as f64 * q * 1.1) as usize + 16);
    let mut next = 0u64;
    loop {
        next = next.saturating_add(geo.sample(rng));
        if next >= len as u64 {
            break;
        }
        out.push(next as usize);
        next += 1;
    }
    out
}

/// Merges two sorted index lists into `(index, labels)` in increasing order.
fn merge_rounds(ins: &[usize], outs: &[usize], mut emit: impl FnMut(usize, Labels)) {
    let (mut i, mut j) = (0, 0);
    while i < ins.len() || j < outs.len() {
        match (ins.get(i), outs.get(j)) {
            (Some(&a), Some(&b)) if a == b => {
                emit(a, Labels::BOTH);
                i += 1;
                j += 1;
            }
            (Some(&a), Some(&b)) if a < b => {
                emit(a, Labels::IN);
                i += 1;
            }
            (Some(_), Some(&b)) => {
                emit(b, Labels::OUT);
                j += 1;
            }
            (Some(&a), None) => {
                emit(a, Labels::IN);
                i += 1;
            }
            (None, Some(&b)) => {
                emit(b, Labels::OUT);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
}

/// Samples `D_{n,p}` by two independent rounds at `p'` and merges them.
pub fn sample_dnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<LabeledDigraph, ModelError> {
    check_probability(p)?;
    if n < 2 {
        return Err(ModelError::TooFewVertices { n, need: 2 });
    }
    let q = round_probability(p);
    let len = pair_count(n);
    let ins = bernoulli_indices(len, q, rng);
    let outs = bernoulli_indices(len, q, rng);
    let mut arcs = Vec::with_capacity(ins.len() + outs.len());
    merge_rounds(&ins, &outs, |idx, labels| {
        let (tail, head) = pair_from_index(n, idx);
        arcs.push(Arc { tail, head, labels });
    });
    Ok(LabeledDigraph::from_sorted_unique(n, arcs))
}

/// In- and out-degree tables of a `D_{n,p}` sample, without building the digraph.
pub fn sample_dnp_degrees<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<(Vec<u32>, Vec<u32>), ModelError> {
    check_probability(p)?;
    if n < 2 {
        return Err(ModelError::TooFewVertices { n, need: 2 });
    }
    let q = round_probability(p);
    let len = pair_count(n);
    let ins = bernoulli_indices(len, q, rng);
    let outs = bernoulli_indices(len, q, rng);
    let mut in_deg = vec![0u32; n];
    let mut out_deg = vec![0u32; n];
    merge_rounds(&ins, &outs, |idx, _| {
        let (tail, head) = pair_from_index(n, idx);
        out_deg[tail as usize] += 1;
        in_deg[head as usize] += 1;
    });
    Ok((in_deg, out_deg))
}

/// Samples `D_{n,m}`: a uniform `m`-subset of the ordered pairs. The model has
/// no rounds, so every arc carries both labels.
pub fn sample_dnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<LabeledDigraph, ModelError> {
    if n < 2 {
        return Err(ModelError::TooFewVertices { n, need: 2 });
    }
    let len = pair_count(n);
    if m > len {
        return Err(ModelError::IndexOutOfRange { m, max: len });
    }
    let mut picked = index::sample(rng, len, m).into_vec();
    picked.sort_unstable();
    let arcs = picked
        .into_iter()
        .map(|idx| {
            let (tail, head) = pair_from_index(n, idx);
            Arc {
                tail,
                head,
                labels: Labels::BOTH,
            }
        })
        .collect();
    Ok(LabeledDigraph::from_sorted_unique(n, arcs))
}

/// Label index used in stamp addressing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArcLabel {
    In = 0,
    Out = 1,
}

impl ArcLabel {
    pub fn labels(self) -> Labels {
        match self {
            ArcLabel::In => Labels::IN,
            ArcLabel::Out => Labels::OUT,
        }
    }
}

/// First appearance of an ordered pair in the process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arrival {
    /// Round-clock time (`p'` scale) at which the arc first appears.
    pub stamp: f64,
    pub tail: Vertex,
    pub head: Vertex,
    /// Label whose stamp caused the arrival.
    pub label: ArcLabel,
    /// Stamp of the other label.
    pub other_stamp: f64,
}

#[derive(Debug, Clone)]
enum StampSource {
    /// Stamps derived on demand from a ChaCha stream per tail vertex.
    Keyed { seed: u64 },
    /// Explicit table, `[in, out]` at index `tail * n + head`.
    Table(Vec<[f64; 2]>),
}

/// Full arrival schedule of labeled arcs on `[n]`.
///
/// Stamps for the keyed source are addressed by `(seed, tail, head, label)`:
/// stream `tail` of the seeded generator, word `2 * head + label`. Nothing of
/// size `n^2` is stored.
#[derive(Debug, Clone)]
pub struct ProcessTrace {
    n: usize,
    source: StampSource,
}

/// Point of the process at which to take a prefix digraph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum At {
    /// Merged-probability time `p ∈ [0, 1]`.
    Time(f64),
    /// First `m` distinct arcs.
    Count(usize),
}

impl ProcessTrace {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Stamps `[x_in, x_out]` for every head `0..n` of `tail` (the `head == tail` slot is unused).
    pub fn row(&self, tail: Vertex) -> Vec<[f64; 2]> {
        let n = self.n;
        match &self.source {
            StampSource::Keyed { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(tail as u64);
                (0..n)
                    .map(|_| [unit_f64(rng.next_u64()), unit_f64(rng.next_u64())])
                    .collect()
            }
            StampSource::Table(t) => t[tail as usize * n..(tail as usize + 1) * n].to_vec(),
        }
    }

    /// Stamps `[x_in, x_out]` of one ordered pair.
    pub fn stamps(&self, tail: Vertex, head: Vertex) -> [f64; 2] {
        match &self.source {
            StampSource::Keyed { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(tail as u64);
                rng.set_word_pos(4 * head as u128);
                [unit_f64(rng.next_u64()), unit_f64(rng.next_u64())]
            }
            StampSource::Table(t) => t[tail as usize * self.n + head as usize],
        }
    }

    /// Calls `f(tail, head, [x_in, x_out])` for every ordered pair, tails ascending.
    pub fn for_each_pair(&self, mut f: impl FnMut(Vertex, Vertex, [f64; 2])) {
        for v in 0..self.n as Vertex {
            let row = self.row(v);
            for (w, s) in row.into_iter().enumerate() {
                if w as Vertex != v {
                    f(v, w as Vertex, s);
                }
            }
        }
    }

    /// Arrivals with stamp at most `cut`, in process order.
    ///
    /// Equal stamps are ordered by `(tail, head, label)`.
    pub fn arrivals_until(&self, cut: f64) -> Vec<Arrival> {
        let mut out = Vec::new();
        self.for_each_pair(|tail, head, [x_in, x_out]| {
            let (stamp, label, other_stamp) = if x_in <= x_out {
                (x_in, ArcLabel::In, x_out)
            } else {
                (x_out, ArcLabel::Out, x_in)
            };
            if stamp <= cut {
                out.push(Arrival {
                    stamp,
                    tail,
                    head,
                    label,
                    other_stamp,
                });
            }
        });
        out.sort_by(|a, b| {
            a.stamp
                .total_cmp(&b.stamp)
                .then((a.tail, a.head, a.label).cmp(&(b.tail, b.head, b.label)))
        });
        out
    }

    /// The first `m` arrivals, widening the stamp cut until enough are seen.
    pub fn first_arrivals(&self, m: usize) -> Result<Vec<Arrival>, ModelError> {
        let total = pair_count(self.n);
        if m > total {
            return Err(ModelError::IndexOutOfRange { m, max: total });
        }
        if m == 0 {
            return Ok(Vec::new());
        }
        // P(pair arrived by s) = 2s - s^2 ~ 2s
        let mut cut = (1.5 * m as f64 / (2.0 * total as f64) + 1e-9).min(1.0);
        loop {
            let mut arr = self.arrivals_until(cut);
            if arr.len() >= m || cut >= 1.0 {
                arr.truncate(m);
                return Ok(arr);
            }
            cut = (cut * 2.0).min(1.0);
        }
    }

    /// Prefix digraph at a time or an arc count.
    pub fn prefix_digraph(&self, at: At) -> Result<LabeledDigraph, ModelError> {
        match at {
            At::Time(p) => {
                check_probability(p)?;
                Ok(self.round_digraph(round_probability(p)))
            }
            At::Count(m) => {
                let arr = self.first_arrivals(m)?;
                let Some(last) = arr.last() else {
                    return Ok(LabeledDigraph::empty(self.n));
                };
                let cut = last.stamp;
                let arcs = arr.iter().map(|a| {
                    let mut labels = a.label.labels();
                    if a.other_stamp <= cut {
                        labels = Labels::BOTH;
                    }
                    Arc {
                        tail: a.tail,
                        head: a.head,
                        labels,
                    }
                });
                Ok(LabeledDigraph::from_arcs(self.n, arcs).expect("trace arcs are valid"))
            }
        }
    }

    /// Digraph of all `(pair, label)` with stamp at most `p_round` (round clock).
    pub fn round_digraph(&self, p_round: f64) -> LabeledDigraph {
        let mut arcs = Vec::new();
        self.for_each_pair(|tail, head, [x_in, x_out]| {
            let labels = match (x_in <= p_round, x_out <= p_round) {
                (true, true) => Labels::BOTH,
                (true, false) => Labels::IN,
                (false, true) => Labels::OUT,
                (false, false) => return,
            };
            arcs.push(Arc { tail, head, labels });
        });
        LabeledDigraph::from_sorted_unique(self.n, arcs)
    }
}

/// Trace with stamps derived from `seed`.
pub fn sample_trace(n: usize, seed: u64) -> Result<ProcessTrace, ModelError> {
    if n < 2 {
        return Err(ModelError::TooFewVertices { n, need: 2 });
    }
    Ok(ProcessTrace {
        n,
        source: StampSource::Keyed { seed },
    })
}

/// Trace from an explicit `n*n` table of `[x_in, x_out]` stamps (diagonal ignored).
pub fn trace_from_table(n: usize, table: Vec<[f64; 2]>) -> Result<ProcessTrace, ModelError> {
    if n < 2 {
        return Err(ModelError::TooFewVertices { n, need: 2 });
    }
    if table.len() != n * n {
        return Err(ModelError::BadStampTable {
            got: table.len(),
            expected: n * n,
        });
    }
    for s in table.iter().flatten() {
        check_probability(*s)?;
    }
    Ok(ProcessTrace {
        n,
        source: StampSource::Table(table),
    })
}

/// Trace whose arrival order is exactly `order` (both labels arrive together),
/// with every other pair arriving afterwards in index order.
pub fn trace_from_order(n: usize, order: &[(Vertex, Vertex)]) -> Result<ProcessTrace, ModelError> {
    let total = pair_count(n);
    let mut table = vec![[1.0, 1.0]; n * n];
    let mut rank = 0usize;
    let mut seen = vec![false; n * n];
    let step = 1.0 / (total as f64 + 1.0);
    for &(t, h) in order {
        let i = t as usize * n + h as usize;
        if t == h || t as usize >= n || h as usize >= n || seen[i] {
            return Err(ModelError::DomainError(format!("bad or repeated arc ({t}, {h})")));
        }
        seen[i] = true;
        rank += 1;
        table[i] = [rank as f64 * step, rank as f64 * step];
    }
    for t in 0..n {
        for h in 0..n {
            let i = t * n + h;
            if t != h && !seen[i] {
                rank += 1;
                table[i] = [rank as f64 * step, rank as f64 * step];
            }
        }
    }
    trace_from_table(n, table)
}

/// Event `A` on the merged simple digraph.
pub fn event_a(d: &LabeledDigraph, variant: DegreeVariant) -> bool {
    (0..d.n() as Vertex).all(|v| variant.satisfied(d.in_degree(v), d.out_degree(v)))
}

/// Smallest `m` with event `A` holding in the first `m` arcs, if any.
pub fn hitting_index(t: &ProcessTrace, variant: DegreeVariant) -> Option<usize> {
    let n = t.n();
    let total = pair_count(n);
    let mut in_deg = vec![0usize; n];
    let mut out_deg = vec![0usize; n];
    let mut deficient = (0..n).filter(|_| !variant.satisfied(0, 0)).count();
    if deficient == 0 {
        return Some(0);
    }
    // Arrivals are consumed in stamp order; widen the window until A holds.
    let mut cut = (4.0 * (n as f64).ln().max(1.0) / n as f64).min(1.0);
    let mut consumed = 0usize;
    let mut last_stamp = -1.0f64;
    loop {
        let arr = t.arrivals_until(cut);
        for a in arr.iter().skip(consumed) {
            debug_assert!(a.stamp >= last_stamp);
            last_stamp = a.stamp;
            consumed += 1;
            let (tv, hv) = (a.tail as usize, a.head as usize);
            let before_t = variant.satisfied(in_deg[tv], out_deg[tv]);
            let before_h = variant.satisfied(in_deg[hv], out_deg[hv]);
            out_deg[tv] += 1;
            in_deg[hv] += 1;
            if !before_t && variant.satisfied(in_deg[tv], out_deg[tv]) {
                deficient -= 1;
            }
            if !before_h && variant.satisfied(in_deg[hv], out_deg[hv]) {
                deficient -= 1;
            }
            if deficient == 0 {
                return Some(consumed);
            }
        }
        if cut >= 1.0 || consumed == total {
            return None;
        }
        cut = (cut * 2.0).min(1.0);
    }
}

/// `(X, Y)`: vertices with in- and out-degree exactly 1, and vertices of total degree 1.
pub fn low_degree_stats(d: &LabeledDigraph) -> (usize, usize) {
    low_degree_counts(
        (0..d.n() as Vertex).map(|v| (d.in_degree(v), d.out_degree(v))),
    )
}

pub(crate) fn low_degree_counts(degrees: impl Iterator<Item = (usize, usize)>) -> (usize, usize) {
    degrees.fold((0, 0), |(x, y), (i, o)| {
        (x + usize::from(i == 1 && o == 1), y + usize::from(i + o == 1))
    })
}

fn check_threshold_domain(n: usize, need: usize) -> Result<(), ModelError> {
    if n < need {
        return Err(ModelError::DomainError(format!(
            "formula needs n >= {need}, got {n}"
        )));
    }
    Ok(())
}

/// `(log n + a·log log n + c) / 2n` with `a = 2` (alternating) or `a = 1`, clamped to `[0, 1]`.
pub fn threshold_p(variant: DegreeVariant, n: usize, c: f64) -> Result<f64, ModelError> {
    check_threshold_domain(n, 3)?;
    let ln = (n as f64).ln();
    let lnln = ln.ln();
    let a = match variant {
        DegreeVariant::Alternating => 2.0,
        DegreeVariant::NonAlternating => 1.0,
    };
    Ok(((ln + a * lnln + c) / (2.0 * n as f64)).clamp(0.0, 1.0))
}

/// Window `(p_-, p_+)` around the threshold, with half-width `log log log n / 2n`.
pub fn p_plus_minus(variant: DegreeVariant, n: usize) -> Result<(f64, f64), ModelError> {
    check_threshold_domain(n, 16)?;
    let omega = (n as f64).ln().ln().ln();
    Ok((threshold_p(variant, n, -omega)?, threshold_p(variant, n, omega)?))
}

/// Limit of `P(A)` at `threshold_p(variant, n, c)`.
pub fn limiting_probability(variant: DegreeVariant, c: f64) -> f64 {
    (-limiting_mean(variant, c)).exp()
}

/// Limit of `E[X]` (alternating) or `E[Y]` (non-alternating) at the threshold.
pub fn limiting_mean(variant: DegreeVariant, c: f64) -> f64 {
    match variant {
        DegreeVariant::Alternating => (-c).exp() / 4.0,
        DegreeVariant::NonAlternating => (-c).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn round_probability_inverts() {
        assert!((round_probability(0.19) - 0.1).abs() < 1e-12);
        assert_eq!(round_probability(0.0), 0.0);
        assert_eq!(round_probability(1.0), 1.0);
        for p in [0.1, 0.19, 0.5, 0.9, 1e-6] {
            assert!((merged_probability(round_probability(p)) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_index_covers_all_pairs() {
        let n = 5;
        let mut seen = std::collections::HashSet::new();
        let mut prev = None;
        for idx in 0..pair_count(n) {
            let (t, h) = pair_from_index(n, idx);
            assert_ne!(t, h);
            assert!(seen.insert((t, h)));
            if let Some(p) = prev {
                assert!(p < (t, h));
            }
            prev = Some((t, h));
        }
        assert_eq!(seen.len(), 20);
    }

    #[test]
    fn dnp_edges() {
        let mut rng = trial_rng(1, 0);
        assert_eq!(sample_dnp(10, 0.0, &mut rng).unwrap().arc_count(), 0);
        assert_eq!(sample_dnp(10, 1.0, &mut rng).unwrap().arc_count(), 90);
        assert!(matches!(
            sample_dnp(10, 1.5, &mut rng),
            Err(ModelError::InvalidProbability(_))
        ));
    }

    #[test]
    fn dnp_degrees_match_digraph() {
        let d = sample_dnp(300, 0.05, &mut trial_rng(9, 1)).unwrap();
        let (ins, outs) = sample_dnp_degrees(300, 0.05, &mut trial_rng(9, 1)).unwrap();
        for v in 0..300u32 {
            assert_eq!(d.in_degree(v), ins[v as usize] as usize);
            assert_eq!(d.out_degree(v), outs[v as usize] as usize);
        }
    }

    #[test]
    fn dnm_has_m_arcs() {
        let d = sample_dnm(30, 100, &mut trial_rng(3, 3)).unwrap();
        assert_eq!(d.arc_count(), 100);
        assert!(sample_dnm(3, 7, &mut trial_rng(3, 3)).is_err());
    }

    #[test]
    fn keyed_stamps_are_addressable() {
        let t = sample_trace(7, 11).unwrap();
        for v in 0..7u32 {
            let row = t.row(v);
            for w in 0..7u32 {
                if v != w {
                    assert_eq!(row[w as usize], t.stamps(v, w));
                }
            }
        }
    }

    #[test]
    fn trace_is_deterministic() {
        let a = sample_trace(20, 5).unwrap().arrivals_until(1.0);
        let b = sample_trace(20, 5).unwrap().arrivals_until(1.0);
        assert_eq!(a, b);
        let c = sample_trace(20, 6).unwrap().arrivals_until(1.0);
        assert_ne!(a, c);
    }

    #[test]
    fn full_prefix_is_complete() {
        let t = sample_trace(6, 2).unwrap();
        let d = t.prefix_digraph(At::Count(30)).unwrap();
        assert_eq!(d.arc_count(), 30);
        assert_eq!(t.prefix_digraph(At::Count(0)).unwrap().arc_count(), 0);
        assert!(matches!(
            t.prefix_digraph(At::Count(31)),
            Err(ModelError::IndexOutOfRange { .. })
        ));
        assert_eq!(t.prefix_digraph(At::Time(1.0)).unwrap().arc_count(), 30);
    }

    #[test]
    fn prefixes_are_nested_by_one_arc() {
        let t = sample_trace(8, 4).unwrap();
        let mut prev = t.prefix_digraph(At::Count(0)).unwrap();
        for m in 1..=56 {
            let cur = t.prefix_digraph(At::Count(m)).unwrap();
            assert_eq!(cur.arc_count(), m);
            assert!(prev.is_subgraph_of(&cur));
            prev = cur;
        }
    }

    #[test]
    fn time_prefix_counts_distinct_pairs() {
        let t = sample_trace(12, 8).unwrap();
        for p in [0.05, 0.2, 0.6] {
            let q = round_probability(p);
            let mut pairs = 0;
            let mut labels_ok = true;
            let d = t.prefix_digraph(At::Time(p)).unwrap();
            t.for_each_pair(|v, w, [xi, xo]| {
                if xi <= q || xo <= q {
                    pairs += 1;
                    let l = d.labels(v, w).unwrap();
                    labels_ok &= l.has_in() == (xi <= q) && l.has_out() == (xo <= q);
                }
            });
            assert_eq!(d.arc_count(), pairs);
            assert!(labels_ok);
        }
    }

    #[test]
    fn event_a_variants() {
        // in-degree 1 and out-degree 1 at every vertex
        let cycle = LabeledDigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!event_a(&cycle, DegreeVariant::Alternating));
        assert!(event_a(&cycle, DegreeVariant::NonAlternating));
        let empty = LabeledDigraph::empty(4);
        assert!(!event_a(&empty, DegreeVariant::Alternating));
        assert!(!event_a(&empty, DegreeVariant::NonAlternating));
    }

    #[test]
    fn hitting_index_examples() {
        let t = trace_from_order(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(hitting_index(&t, DegreeVariant::NonAlternating), Some(3));
        let t2 = sample_trace(2, 1).unwrap();
        assert_eq!(hitting_index(&t2, DegreeVariant::NonAlternating), Some(2));
        assert_eq!(hitting_index(&t2, DegreeVariant::Alternating), None);
    }

    #[test]
    fn hitting_index_matches_recomputation() {
        for seed in 0..100 {
            let t = sample_trace(50, seed).unwrap();
            for variant in [DegreeVariant::Alternating, DegreeVariant::NonAlternating] {
                let m = hitting_index(&t, variant).unwrap();
                let at = t.prefix_digraph(At::Count(m)).unwrap();
                let before = t.prefix_digraph(At::Count(m - 1)).unwrap();
                assert!(event_a(&at, variant));
                assert!(!event_a(&before, variant));
            }
        }
    }

    #[test]
    fn low_degree_examples() {
        assert_eq!(low_degree_stats(&LabeledDigraph::empty(5)), (0, 0));
        let one = LabeledDigraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(low_degree_stats(&one), (0, 2));
        let cyc: Vec<_> = (0..6u32).map(|i| (i, (i + 1) % 6)).collect();
        let cyc = LabeledDigraph::from_pairs(6, &cyc).unwrap();
        assert_eq!(low_degree_stats(&cyc), (6, 0));
    }

    #[test]
    fn threshold_values() {
        let a = threshold_p(DegreeVariant::Alternating, 1000, 0.0).unwrap();
        let b = threshold_p(DegreeVariant::NonAlternating, 1000, 0.0).unwrap();
        assert!((a - 0.00538652).abs() < 5e-8, "{a}");
        assert!((b - 0.00442020).abs() < 5e-8, "{b}");
        assert!(threshold_p(DegreeVariant::Alternating, 2, 0.0).is_err());
        assert!((limiting_probability(DegreeVariant::Alternating, 0.0) - 0.778801).abs() < 1e-6);
        assert!((limiting_probability(DegreeVariant::NonAlternating, 0.0) - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn window_bounds() {
        let n = 1_000_000;
        let omega = (n as f64).ln().ln().ln();
        assert!((omega - 0.9654).abs() < 1e-4);
        for v in [DegreeVariant::Alternating, DegreeVariant::NonAlternating] {
            let (lo, hi) = p_plus_minus(v, n).unwrap();
            let mid = threshold_p(v, n, 0.0).unwrap();
            assert!(lo < mid && mid < hi);
            assert!(((hi - lo) - omega / n as f64).abs() < 1e-15);
        }
        assert!(p_plus_minus(DegreeVariant::Alternating, 15).is_err());
        assert!(p_plus_minus(DegreeVariant::Alternating, 16).is_ok());
    }

    #[test]
    fn variant_for_patterns() {
        let p = |s: &str| s.parse::<Pattern>().unwrap();
        assert_eq!(DegreeVariant::for_pattern(&p("><")), Some(DegreeVariant::Alternating));
        assert_eq!(DegreeVariant::for_pattern(&p("><><")), Some(DegreeVariant::Alternating));
        assert_eq!(DegreeVariant::for_pattern(&p(">><")), Some(DegreeVariant::NonAlternating));
        assert_eq!(DegreeVariant::for_pattern(&p(">")), None);
        assert_eq!(DegreeVariant::for_pattern(&p(">>")), None);
    }
}
