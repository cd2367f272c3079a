//! Equitable bin partitions and the swap log.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::PipelineFailure;
use crate::digraph::Vertex;
use crate::pattern::{Pattern, PatternClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Swap {
    pub vertex: Vertex,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinAssignment {
    /// Bins used internally: `k` for non-alternating patterns, 4 for the alternating one.
    pub k_eff: usize,
    pub bin_of: Vec<usize>,
    /// Bins before any swap.
    pub initial: Vec<usize>,
    pub swaps: Vec<Swap>,
}

/// Bin sizes: `n/k` each, or `⌈n/4⌉,⌈n/4⌉,⌊n/4⌋,⌊n/4⌋` for the alternating pattern.
pub fn bin_sizes(n: usize, pi: &Pattern) -> Result<Vec<usize>, PipelineFailure> {
    match pi.canonical_form().classify() {
        PatternClass::Alternating => {
            if n % 2 != 0 {
                return Err(PipelineFailure::Divisibility { n, modulus: 2 });
            }
            let (hi, lo) = (n.div_ceil(4), n / 4);
            Ok(vec![hi, hi, lo, lo])
        }
        PatternClass::NonAlternating => {
            let k = pi.len();
            if n % k != 0 {
                return Err(PipelineFailure::Divisibility { n, modulus: k });
            }
            Ok(vec![n / k; k])
        }
        class => Err(PipelineFailure::UnsupportedPattern(class)),
    }
}

impl BinAssignment {
    fn from_order(order: &[Vertex], sizes: &[usize]) -> BinAssignment {
        let mut bin_of = vec![0; order.len()];
        let mut it = order.iter();
        for (b, &size) in sizes.iter().enumerate() {
            for &v in it.by_ref().take(size) {
                bin_of[v as usize] = b;
            }
        }
        BinAssignment {
            k_eff: sizes.len(),
            initial: bin_of.clone(),
            bin_of,
            swaps: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.bin_of.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k_eff];
        for &b in &self.bin_of {
            s[b] += 1;
        }
        s
    }

    /// Exchanges the bins of two vertices.
    pub fn swap(&mut self, a: Vertex, b: Vertex) {
        let (ba, bb) = (self.bin_of[a as usize], self.bin_of[b as usize]);
        if ba == bb {
            return;
        }
        self.bin_of[a as usize] = bb;
        self.bin_of[b as usize] = ba;
        self.swaps.push(Swap { vertex: a, from: ba, to: bb });
        self.swaps.push(Swap { vertex: b, from: bb, to: ba });
    }

    /// Net change in each bin's size implied by the swap log (all zeros when balanced).
    pub fn swap_balance(&self) -> Vec<i64> {
        let mut net = vec![0i64; self.k_eff];
        for s in &self.swaps {
            net[s.from] -= 1;
            net[s.to] += 1;
        }
        net
    }
}

/// Consecutive blocks of vertices in index order.
pub fn assign_bins(n: usize, pi: &Pattern) -> Result<BinAssignment, PipelineFailure> {
    let sizes = bin_sizes(n, pi)?;
    let order: Vec<Vertex> = (0..n as Vertex).collect();
    Ok(BinAssignment::from_order(&order, &sizes))
}

/// Same sizes as [`assign_bins`], over a uniformly random vertex order.
pub fn assign_bins_shuffled<R: Rng + ?Sized>(
    n: usize,
    pi: &Pattern,
    rng: &mut R,
) -> Result<BinAssignment, PipelineFailure> {
    let sizes = bin_sizes(n, pi)?;
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(rng);
    Ok(BinAssignment::from_order(&order, &sizes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn sizes_examples() {
        assert_eq!(assign_bins(12, &pat(">><")).unwrap().sizes(), vec![4, 4, 4]);
        assert_eq!(assign_bins(10, &pat("><")).unwrap().sizes(), vec![3, 3, 2, 2]);
        assert_eq!(
            assign_bins(10, &pat(">><")),
            Err(PipelineFailure::Divisibility { n: 10, modulus: 3 })
        );
        assert!(assign_bins(9, &pat("<>")).is_err());
        assert!(matches!(
            assign_bins(8, &pat(">")),
            Err(PipelineFailure::UnsupportedPattern(PatternClass::Trivial))
        ));
    }

    #[test]
    fn swaps_preserve_sizes() {
        let mut b = assign_bins_shuffled(30, &pat(">><"), &mut trial_rng(1, 1)).unwrap();
        let before = b.sizes();
        let (x, y) = ((0..30).find(|&v| b.bin_of[v] == 0).unwrap(), (0..30).find(|&v| b.bin_of[v] == 2).unwrap());
        b.swap(x as Vertex, y as Vertex);
        assert_eq!(b.sizes(), before);
        assert_eq!(b.swap_balance(), vec![0, 0, 0]);
        assert_eq!(b.bin_of[x], 2);
    }
}
