//! Directed Hamilton cycles in sparse digraphs.
//!
//! The search treats a Hamilton cycle as a successor assignment: every vertex
//! picks one out-arc and one in-arc, and no chain may close early. Choices
//! propagate (a vertex with a single remaining out- or in-arc is forced, the
//! arc closing a partial chain is removed) and the search branches on the most
//! constrained vertex. With an unlimited budget the search is exhaustive.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::{LabeledDigraph, Vertex};
use crate::pattern::Dir;
use crate::solver::{exact_directed_hc, CycleWitness, EXACT_DIRECTED_HC_CAP};

/// Search effort for digraphs above the exact-solver cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HcBudget {
    pub restarts: usize,
    /// Branch nodes per restart, as a multiple of the vertex count.
    pub nodes_per_vertex: usize,
}

impl Default for HcBudget {
    fn default() -> Self {
        HcBudget {
            restarts: 50,
            nodes_per_vertex: 100,
        }
    }
}

const NIL: u32 = u32::MAX;

struct Graph {
    tail: Vec<u32>,
    head: Vec<u32>,
    out_arcs: Vec<Vec<u32>>,
    in_arcs: Vec<Vec<u32>>,
}

impl Graph {
    fn arc_between(&self, u: u32, v: u32) -> Option<u32> {
        self.out_arcs[u as usize]
            .iter()
            .copied()
            .find(|&a| self.head[a as usize] == v)
    }
}

#[derive(Clone)]
struct State {
    alive: Vec<bool>,
    out_cnt: Vec<u32>,
    in_cnt: Vec<u32>,
    succ: Vec<u32>,
    pred: Vec<u32>,
    /// For a chain start, its end; for a chain end, its start.
    chain_end: Vec<u32>,
    chain_start: Vec<u32>,
    chosen: usize,
}

struct Search<'a, R: Rng + ?Sized> {
    g: &'a Graph,
    n: usize,
    nodes_left: usize,
    rng: &'a mut R,
}

impl State {
    fn new(g: &Graph, n: usize) -> State {
        State {
            alive: vec![true; g.tail.len()],
            out_cnt: g.out_arcs.iter().map(|l| l.len() as u32).collect(),
            in_cnt: g.in_arcs.iter().map(|l| l.len() as u32).collect(),
            succ: vec![NIL; n],
            pred: vec![NIL; n],
            chain_end: (0..n as u32).collect(),
            chain_start: (0..n as u32).collect(),
            chosen: 0,
        }
    }

    fn kill(&mut self, g: &Graph, a: u32, queue: &mut Vec<u32>) {
        let ai = a as usize;
        if self.alive[ai] {
            self.alive[ai] = false;
            self.out_cnt[g.tail[ai] as usize] -= 1;
            self.in_cnt[g.head[ai] as usize] -= 1;
            queue.push(g.tail[ai]);
            queue.push(g.head[ai]);
        }
    }

    /// Commits arc `a`; false on contradiction.
    fn choose(&mut self, g: &Graph, n: usize, a: u32, queue: &mut Vec<u32>) -> bool {
        let (u, v) = (g.tail[a as usize], g.head[a as usize]);
        if !self.alive[a as usize] || self.succ[u as usize] != NIL || self.pred[v as usize] != NIL {
            return false;
        }
        self.succ[u as usize] = v;
        self.pred[v as usize] = u;
        self.chosen += 1;
        for &b in &g.out_arcs[u as usize] {
            if b != a {
                self.kill(g, b, queue);
            }
        }
        for &b in &g.in_arcs[v as usize] {
            if b != a {
                self.kill(g, b, queue);
            }
        }
        let s = self.chain_start[u as usize];
        let e = self.chain_end[v as usize];
        if s == v {
            return self.chosen == n;
        }
        self.chain_end[s as usize] = e;
        self.chain_start[e as usize] = s;
        if self.chosen + 1 < n {
            if let Some(c) = g.arc_between(e, s) {
                self.kill(g, c, queue);
            }
        }
        true
    }

    fn propagate(&mut self, g: &Graph, n: usize, queue: &mut Vec<u32>) -> bool {
        while let Some(x) = queue.pop() {
            let xi = x as usize;
            if self.succ[xi] == NIL {
                match self.out_cnt[xi] {
                    0 => return false,
                    1 => {
                        let a = *g.out_arcs[xi].iter().find(|&&a| self.alive[a as usize]).unwrap();
                        if !self.choose(g, n, a, queue) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            if self.pred[xi] == NIL {
                match self.in_cnt[xi] {
                    0 => return false,
                    1 => {
                        let a = *g.in_arcs[xi].iter().find(|&&a| self.alive[a as usize]).unwrap();
                        if !self.choose(g, n, a, queue) {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }
}

impl<R: Rng + ?Sized> Search<'_, R> {
    fn run(&mut self, st: State) -> Option<State> {
        if st.chosen == self.n {
            return Some(st);
        }
        if self.nodes_left == 0 {
            return None;
        }
        self.nodes_left -= 1;
        // most constrained open slot; ties broken at random
        let mut best: Option<(u32, bool)> = None;
        let mut best_cnt = u32::MAX;
        let mut ties = 0u32;
        for x in 0..self.n {
            for (open, cnt, is_out) in [
                (st.succ[x] == NIL, st.out_cnt[x], true),
                (st.pred[x] == NIL, st.in_cnt[x], false),
            ] {
                if !open {
                    continue;
                }
                if cnt < best_cnt {
                    best_cnt = cnt;
                    best = Some((x as u32, is_out));
                    ties = 1;
                } else if cnt == best_cnt {
                    ties += 1;
                    if self.rng.random_range(0..ties) == 0 {
                        best = Some((x as u32, is_out));
                    }
                }
            }
        }
        let (x, is_out) = best?;
        let list = if is_out {
            &self.g.out_arcs[x as usize]
        } else {
            &self.g.in_arcs[x as usize]
        };
        let mut options: Vec<u32> = list.iter().copied().filter(|&a| st.alive[a as usize]).collect();
        options.shuffle(self.rng);
        for a in options {
            let mut child = st.clone();
            let mut queue = Vec::new();
            if child.choose(self.g, self.n, a, &mut queue) && child.propagate(self.g, self.n, &mut queue) {
                if let Some(done) = self.run(child) {
                    return Some(done);
                }
            }
            if self.nodes_left == 0 {
                return None;
            }
        }
        None
    }
}

fn build_graph(n: usize, arcs: &[(Vertex, Vertex)]) -> Graph {
    let mut pairs: Vec<(u32, u32)> = arcs.iter().copied().filter(|&(t, h)| t != h).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let mut g = Graph {
        tail: Vec::with_capacity(pairs.len()),
        head: Vec::with_capacity(pairs.len()),
        out_arcs: vec![Vec::new(); n],
        in_arcs: vec![Vec::new(); n],
    };
    for (i, &(t, h)) in pairs.iter().enumerate() {
        g.tail.push(t);
        g.head.push(h);
        g.out_arcs[t as usize].push(i as u32);
        g.in_arcs[h as usize].push(i as u32);
    }
    g
}

/// Searches for a directed Hamilton cycle; returns the vertex order starting at 0.
///
/// `budget = None` makes the search exhaustive.
pub fn search_directed_hc<R: Rng + ?Sized>(
    n: usize,
    arcs: &[(Vertex, Vertex)],
    budget: Option<HcBudget>,
    rng: &mut R,
) -> Option<Vec<Vertex>> {
    if n < 2 {
        return None;
    }
    let g = build_graph(n, arcs);
    let mut root = State::new(&g, n);
    let mut queue: Vec<u32> = (0..n as u32).collect();
    if !root.propagate(&g, n, &mut queue) {
        return None;
    }
    let (restarts, nodes) = match budget {
        Some(b) => (b.restarts.max(1), b.nodes_per_vertex.saturating_mul(n).max(1)),
        None => (1, usize::MAX),
    };
    for _ in 0..restarts {
        let mut s = Search {
            g: &g,
            n,
            nodes_left: nodes,
            rng: &mut *rng,
        };
        if let Some(done) = s.run(root.clone()) {
            let mut order = Vec::with_capacity(n);
            let mut v = 0u32;
            for _ in 0..n {
                order.push(v);
                v = done.succ[v as usize];
            }
            debug_assert_eq!(v, 0);
            return Some(order);
        }
        if s.nodes_left > 0 {
            // the search space was exhausted: no cycle exists
            return None;
        }
    }
    None
}

/// Directed Hamilton cycle of `d`: exact below the solver cap, budgeted search above.
pub fn directed_hc<R: Rng + ?Sized>(d: &LabeledDigraph, budget: HcBudget, rng: &mut R) -> Option<CycleWitness> {
    if d.n() <= EXACT_DIRECTED_HC_CAP {
        return exact_directed_hc(d).expect("within cap");
    }
    let pairs: Vec<(Vertex, Vertex)> = d.arcs().iter().map(|a| (a.tail, a.head)).collect();
    search_directed_hc(d.n(), &pairs, Some(budget), rng).map(|order| CycleWitness {
        orientations: vec![Dir::Forward; order.len()],
        order,
        offset: Some(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_dnp;
    use crate::pattern::Pattern;
    use crate::rng::trial_rng;
    use crate::solver::verify_pi_hc;
    use rand::seq::index;

    fn is_hc(n: usize, arcs: &[(Vertex, Vertex)], order: &[Vertex]) -> bool {
        let mut seen = vec![false; n];
        order.len() == n
            && order.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
            && (0..n).all(|i| arcs.contains(&(order[i], order[(i + 1) % n])))
    }

    fn two_in_two_out<R: Rng>(n: usize, rng: &mut R) -> Vec<(Vertex, Vertex)> {
        let mut arcs = Vec::new();
        for v in 0..n {
            for w in index::sample(rng, n - 1, 2) {
                let w = if w >= v { w + 1 } else { w };
                arcs.push((v as u32, w as u32));
            }
            for w in index::sample(rng, n - 1, 2) {
                let w = if w >= v { w + 1 } else { w };
                arcs.push((w as u32, v as u32));
            }
        }
        arcs
    }

    #[test]
    fn exhaustive_search_matches_exact_solver() {
        for t in 0..200 {
            let d = sample_dnp(11, 0.25, &mut trial_rng(40, t)).unwrap();
            let pairs: Vec<_> = d.arcs().iter().map(|a| (a.tail, a.head)).collect();
            let got = search_directed_hc(11, &pairs, None, &mut trial_rng(41, t));
            let want = exact_directed_hc(&d).unwrap();
            assert_eq!(got.is_some(), want.is_some(), "trial {t}");
            if let Some(order) = got {
                assert!(is_hc(11, &pairs, &order));
            }
        }
    }

    #[test]
    fn small_cases() {
        let mut rng = trial_rng(0, 0);
        assert_eq!(search_directed_hc(2, &[(0, 1), (1, 0)], None, &mut rng), Some(vec![0, 1]));
        assert_eq!(search_directed_hc(2, &[(0, 1)], None, &mut rng), None);
        assert_eq!(search_directed_hc(1, &[], None, &mut rng), None);
        let cyc: Vec<_> = (0..40u32).map(|i| (i, (i + 1) % 40)).collect();
        assert_eq!(
            search_directed_hc(40, &cyc, None, &mut rng),
            Some((0..40).collect::<Vec<_>>())
        );
    }

    #[test]
    fn finds_cycles_in_random_two_in_two_out() {
        let mut found = 0;
        for t in 0..20 {
            let mut rng = trial_rng(8, t);
            let arcs = two_in_two_out(300, &mut rng);
            if let Some(order) = search_directed_hc(300, &arcs, Some(HcBudget::default()), &mut rng) {
                assert!(is_hc(300, &arcs, &order));
                found += 1;
            }
        }
        assert!(found >= 18, "{found}");
    }

    #[test]
    fn wrapper_verifies() {
        let mut rng = trial_rng(2, 2);
        let arcs = two_in_two_out(60, &mut rng);
        let d = LabeledDigraph::from_pairs(60, &arcs).unwrap();
        let w = directed_hc(&d, HcBudget::default(), &mut rng).unwrap();
        assert!(verify_pi_hc(&d, &w, &Pattern::trivial()));
    }
}
