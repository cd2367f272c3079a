//! Local-structure conditions around low-degree vertices, checked exactly by
//! breadth-first search in the underlying undirected multigraph (a pair of
//! opposite arcs counts as a cycle of length 2).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::digraph::{LabeledDigraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandsomeParams {
    /// Neighbourhood radius for all three conditions.
    pub radius: usize,
    /// H1 fails at a vertex with this many non-good vertices nearby.
    pub h1_limit: usize,
    /// Longest cycle considered by H3.
    pub cycle_len: usize,
}

impl HandsomeParams {
    pub fn for_k(k: usize) -> HandsomeParams {
        HandsomeParams {
            radius: 10 * k,
            h1_limit: 4 * k,
            cycle_len: 10 * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HandsomeCondition {
    H1,
    H2,
    H3,
}

/// Full violation sets.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HandsomeReport {
    /// Vertices with too many non-good vertices within the radius.
    pub h1: Vec<Vertex>,
    /// Dangerous vertices with another non-good vertex within the radius, and one such vertex.
    pub h2: Vec<(Vertex, Vertex)>,
    /// Vertices on a short cycle that lie within the radius of a non-good vertex.
    pub h3: Vec<Vertex>,
}

impl HandsomeReport {
    pub fn holds(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<HandsomeCondition> {
        if !self.h1.is_empty() {
            Some(HandsomeCondition::H1)
        } else if !self.h2.is_empty() {
            Some(HandsomeCondition::H2)
        } else if !self.h3.is_empty() {
            Some(HandsomeCondition::H3)
        } else {
            None
        }
    }
}

/// Undirected multigraph: `adj[v]` lists `(neighbour, edge id)`.
struct Multigraph {
    adj: Vec<Vec<(u32, u32)>>,
}

impl Multigraph {
    fn new(d: &LabeledDigraph) -> Multigraph {
        let mut adj = vec![Vec::new(); d.n()];
        for (e, a) in d.arcs().iter().enumerate() {
            adj[a.tail as usize].push((a.head, e as u32));
            adj[a.head as usize].push((a.tail, e as u32));
        }
        Multigraph { adj }
    }

    /// BFS from `sources` to depth `radius`; calls `visit(v, dist)` and stops when it returns true.
    fn ball(&self, sources: &[Vertex], radius: usize, dist: &mut [u32], mut visit: impl FnMut(Vertex, u32) -> bool) {
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s as usize] == u32::MAX {
                dist[s as usize] = 0;
                touched.push(s);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if visit(u, du) {
                break;
            }
            if du as usize == radius {
                continue;
            }
            for &(w, _) in &self.adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
        for v in touched {
            dist[v as usize] = u32::MAX;
        }
    }

    /// Is `x` on a cycle of length at most `len`?
    fn short_cycle_through(&self, x: Vertex, len: usize, dist: &mut [u32], branch: &mut [u32], parent: &mut [u32]) -> bool {
        let depth = (len / 2) as u32;
        let mut touched = vec![x];
        let mut queue = VecDeque::new();
        dist[x as usize] = 0;
        queue.push_back(x);
        let mut found = false;
        'bfs: while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &(w, e) in &self.adj[u as usize] {
                if e == parent[u as usize] {
                    continue;
                }
                if dist[w as usize] == u32::MAX {
                    if du < depth {
                        dist[w as usize] = du + 1;
                        parent[w as usize] = e;
                        branch[w as usize] = if u == x { e } else { branch[u as usize] };
                        touched.push(w);
                        queue.push_back(w);
                    }
                    continue;
                }
                let closes = w == x || u == x || branch[w as usize] != branch[u as usize];
                if closes && (du + dist[w as usize] + 1) as usize <= len {
                    found = true;
                    break 'bfs;
                }
            }
        }
        for v in touched {
            dist[v as usize] = u32::MAX;
            parent[v as usize] = u32::MAX;
            branch[v as usize] = u32::MAX;
        }
        found
    }
}

/// Checks the three conditions on `d` for the given non-good and dangerous masks.
pub fn check_handsome(d: &LabeledDigraph, non_good: &[bool], dangerous: &[bool], params: HandsomeParams) -> HandsomeReport {
    let n = d.n();
    let g = Multigraph::new(d);
    let mut dist = vec![u32::MAX; n];
    let bad_list: Vec<Vertex> = (0..n as Vertex).filter(|&v| non_good[v as usize]).collect();
    let mut report = HandsomeReport::default();

    if bad_list.len() >= params.h1_limit {
        for v in 0..n as Vertex {
            let mut seen = 0;
            let mut hit = false;
            g.ball(&[v], params.radius, &mut dist, |w, _| {
                seen += usize::from(non_good[w as usize]);
                hit = seen >= params.h1_limit;
                hit
            });
            if hit {
                report.h1.push(v);
            }
        }
    }

    for &v in bad_list.iter().filter(|&&v| dangerous[v as usize]) {
        let mut witness = None;
        g.ball(&[v], params.radius, &mut dist, |w, _| {
            if w != v && non_good[w as usize] {
                witness = Some(w);
            }
            witness.is_some()
        });
        if let Some(w) = witness {
            report.h2.push((v, w));
        }
    }

    let mut near = Vec::new();
    g.ball(&bad_list, params.radius, &mut dist, |w, _| {
        near.push(w);
        false
    });
    near.sort_unstable();
    let mut branch = vec![u32::MAX; n];
    let mut parent = vec![u32::MAX; n];
    for x in near {
        if g.short_cycle_through(x, params.cycle_len, &mut dist, &mut branch, &mut parent) {
            report.h3.push(x);
        }
    }
    report
}
