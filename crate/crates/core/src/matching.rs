//! Bipartite "2-out" graphs and perfect matchings.
//!
//! Each side chooses neighbours on the other side; the edge set is the union
//! of both sides' choices. Matching uses Hopcroft–Karp; when no perfect
//! matching exists the search returns a Hall-violating left set.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which side's choice produced an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeSource {
    LeftChoice,
    RightChoice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteTwoOut {
    /// `left_choices[a]` are the right vertices chosen by left vertex `a`.
    pub left_choices: Vec<Vec<u32>>,
    /// `right_choices[b]` are the left vertices chosen by right vertex `b`.
    pub right_choices: Vec<Vec<u32>>,
}

/// A Hall-violating set: `left_set` has fewer than `left_set.len()` neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolation {
    pub left_set: Vec<u32>,
    pub neighbourhood: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("sides have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("no perfect matching: {} left vertices see only {} right vertices", .0.left_set.len(), .0.neighbourhood.len())]
    NoMatching(HallViolation),
}

/// Perfect matching; `mate[a]` is the right partner of left vertex `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub mate: Vec<u32>,
    /// Choice that supplied each matched edge (left choice preferred when both did).
    pub source: Vec<EdgeSource>,
}

impl BipartiteTwoOut {
    /// Walkup's model: every vertex on each side picks `d` distinct neighbours u.a.r.
    pub fn sample<R: Rng + ?Sized>(m: usize, d: usize, rng: &mut R) -> BipartiteTwoOut {
        let d = d.min(m);
        let mut pick = |_| {
            index::sample(rng, m, d)
                .into_iter()
                .map(|x| x as u32)
                .collect::<Vec<_>>()
        };
        let left_choices = (0..m).map(&mut pick).collect();
        let right_choices = (0..m).map(&mut pick).collect();
        BipartiteTwoOut {
            left_choices,
            right_choices,
        }
    }

    /// Every vertex chooses every vertex on the other side.
    pub fn complete(m: usize) -> BipartiteTwoOut {
        let all: Vec<u32> = (0..m as u32).collect();
        BipartiteTwoOut {
            left_choices: vec![all.clone(); m],
            right_choices: vec![all; m],
        }
    }

    pub fn left_len(&self) -> usize {
        self.left_choices.len()
    }

    pub fn right_len(&self) -> usize {
        self.right_choices.len()
    }

    /// Right neighbours of every left vertex (union of both sides' choices), deduplicated.
    pub fn left_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj: Vec<Vec<u32>> = self.left_choices.clone();
        for (b, lefts) in self.right_choices.iter().enumerate() {
            for &a in lefts {
                adj[a as usize].push(b as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edge_source(a, b).is_some()
    }

    pub fn edge_source(&self, a: u32, b: u32) -> Option<EdgeSource> {
        if self.left_choices.get(a as usize)?.contains(&b) {
            Some(EdgeSource::LeftChoice)
        } else if self.right_choices.get(b as usize)?.contains(&a) {
            Some(EdgeSource::RightChoice)
        } else {
            None
        }
    }

    /// Checks that `m` is a perfect matching using edges of `self`.
    pub fn is_perfect_matching(&self, m: &Matching) -> bool {
        let n = self.left_len();
        if self.right_len() != n || m.mate.len() != n || m.source.len() != n {
            return false;
        }
        let mut used = vec![false; n];
        m.mate.iter().zip(&m.source).enumerate().all(|(a, (&b, &src))| {
            let ok = (b as usize) < n && !used[b as usize] && self.edge_source(a as u32, b) == Some(src);
            if ok {
                used[b as usize] = true;
            }
            ok
        })
    }
}

impl HallViolation {
    /// True iff the set really violates Hall's condition in `g`.
    pub fn verify(&self, g: &BipartiteTwoOut) -> bool {
        let adj = g.left_adjacency();
        let mut nb: Vec<u32> = self
            .left_set
            .iter()
            .flat_map(|&a| adj[a as usize].iter().copied())
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb.len() < self.left_set.len() && nb == self.neighbourhood
    }
}

const NIL: u32 = u32::MAX;

/// Maximum matching by Hopcroft–Karp; returns `mate_left` with `NIL` for unmatched.
fn hopcroft_karp(adj: &[Vec<u32>], right_len: usize) -> Vec<u32> {
    let n = adj.len();
    let mut mate_l = vec![NIL; n];
    let mut mate_r = vec![NIL; right_len];
    let mut dist = vec![u32::MAX; n];
    let mut queue = Vec::with_capacity(n);
    let mut next = vec![0usize; n];
    let mut stack: Vec<u32> = Vec::new();
    loop {
        // layered BFS from free left vertices
        queue.clear();
        for a in 0..n {
            if mate_l[a] == NIL {
                dist[a] = 0;
                queue.push(a as u32);
            } else {
                dist[a] = u32::MAX;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head] as usize;
            head += 1;
            for &b in &adj[a] {
                let a2 = mate_r[b as usize];
                if a2 == NIL {
                    found = true;
                } else if dist[a2 as usize] == u32::MAX {
                    dist[a2 as usize] = dist[a] + 1;
                    queue.push(a2);
                }
            }
        }
        if !found {
            return mate_l;
        }
        // iterative DFS along the layers
        next.iter_mut().for_each(|x| *x = 0);
        for root in 0..n {
            if mate_l[root] != NIL {
                continue;
            }
            stack.clear();
            stack.push(root as u32);
            while let Some(&a) = stack.last() {
                let a = a as usize;
                if next[a] == adj[a].len() {
                    dist[a] = u32::MAX;
                    stack.pop();
                    continue;
                }
                let b = adj[a][next[a]];
                let a2 = mate_r[b as usize];
                if a2 == NIL {
                    // augment along the stack
                    for &x in stack.iter().rev() {
                        let x = x as usize;
                        let bx = adj[x][next[x]];
                        mate_l[x] = bx;
                        mate_r[bx as usize] = x as u32;
                    }
                    for &x in &stack {
                        dist[x as usize] = u32::MAX;
                    }
                    break;
                }
                if dist[a2 as usize] == dist[a] + 1 {
                    stack.push(a2);
                } else {
                    next[a] += 1;
                }
            }
        }
    }
}

/// Perfect matching of `g`, or a Hall-violation certificate.
pub fn find_perfect_matching(g: &BipartiteTwoOut) -> Result<Matching, MatchingError> {
    let (l, r) = (g.left_len(), g.right_len());
    if l != r {
        return Err(MatchingError::SizeMismatch { left: l, right: r });
    }
    let adj = g.left_adjacency();
    let mate_l = hopcroft_karp(&adj, r);
    if let Some(free) = mate_l.iter().position(|&b| b == NIL) {
        return Err(MatchingError::NoMatching(hall_certificate(&adj, &mate_l, r, free)));
    }
    let source = mate_l
        .iter()
        .enumerate()
        .map(|(a, &b)| g.edge_source(a as u32, b).expect("matched edge exists"))
        .collect();
    Ok(Matching { mate: mate_l, source })
}

/// Left vertices reachable from `free` by alternating paths, with their neighbourhood.
fn hall_certificate(adj: &[Vec<u32>], mate_l: &[u32], right_len: usize, free: usize) -> HallViolation {
    let mut mate_r = vec![NIL; right_len];
    for (a, &b) in mate_l.iter().enumerate() {
        if b != NIL {
            mate_r[b as usize] = a as u32;
        }
    }
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; right_len];
    let mut stack = vec![free];
    seen_l[free] = true;
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if !seen_r[b as usize] {
                seen_r[b as usize] = true;
                // a maximum matching leaves no free vertex reachable here
                let a2 = mate_r[b as usize] as usize;
                if !seen_l[a2] {
                    seen_l[a2] = true;
                    stack.push(a2);
                }
            }
        }
    }
    let pick = |v: &[bool]| (0..v.len() as u32).filter(|&i| v[i as usize]).collect::<Vec<_>>();
    HallViolation {
        left_set: pick(&seen_l),
        neighbourhood: pick(&seen_r),
    }
}
