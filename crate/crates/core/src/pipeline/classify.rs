//! Good / bad / dangerous vertices at the start of the window.

use serde::{Deserialize, Serialize};

use super::exposure::ExposureGuard;
use crate::digraph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Good,
    Bad,
    Dangerous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexClassification {
    pub k: usize,
    pub good_min: usize,
    pub class: Vec<VertexClass>,
    /// Visible out-arcs of each vertex by bin of the head.
    pub d_out: Vec<Vec<u32>>,
    /// Visible in-arcs of each vertex by bin of the tail.
    pub d_in: Vec<Vec<u32>>,
    /// `(in, out)` degree at the start of the window, known for exposed vertices.
    pub degrees: Vec<Option<(u32, u32)>>,
}

impl VertexClassification {
    pub fn is_good(&self, v: Vertex) -> bool {
        self.class[v as usize] == VertexClass::Good
    }

    pub fn count(&self, c: VertexClass) -> usize {
        self.class.iter().filter(|&&x| x == c).count()
    }

    pub fn mask(&self, pred: impl Fn(VertexClass) -> bool) -> Vec<bool> {
        self.class.iter().map(|&c| pred(c)).collect()
    }
}

/// Good: at least `good_min` visible arcs in each direction to every bin.
/// Others are exposed and split by total degree: above `good_min` is bad,
/// the rest dangerous.
pub fn classify_vertices(
    guard: &mut ExposureGuard,
    bin_of: &[usize],
    k: usize,
    good_min: usize,
) -> VertexClassification {
    let n = guard.n();
    let (d_out, d_in) = guard.visible_counts(bin_of, k);
    let mut class = vec![VertexClass::Good; n];
    let mut degrees = vec![None; n];
    for v in 0..n {
        let good = (0..k).all(|b| d_out[v][b] as usize >= good_min && d_in[v][b] as usize >= good_min);
        if good {
            continue;
        }
        let (mut i, mut o) = (0u32, 0u32);
        for a in guard.expose(v as Vertex).iter().filter(|a| a.early) {
            if a.tail == v as Vertex {
                o += 1;
            } else {
                i += 1;
            }
        }
        degrees[v] = Some((i, o));
        class[v] = if (i + o) as usize > good_min {
            VertexClass::Bad
        } else {
            VertexClass::Dangerous
        };
    }
    VertexClassification {
        k,
        good_min,
        class,
        d_out,
        d_in,
        degrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_trace;

    #[test]
    fn classes_follow_definitions() {
        let n = 90;
        let t = sample_trace(n, 11).unwrap();
        let bin_of: Vec<usize> = (0..n).map(|v| v % 3).collect();
        let s = 0.2;
        let mut g = ExposureGuard::new(&t, s, s);
        let c = classify_vertices(&mut g, &bin_of, 3, 5);
        let d = t.round_digraph(s);
        for v in 0..n as Vertex {
            let mut out = [0usize; 3];
            let mut inn = [0usize; 3];
            for a in d.arcs() {
                if a.tail == v && a.labels.has_out() {
                    out[bin_of[a.head as usize]] += 1;
                }
                if a.head == v && a.labels.has_in() {
                    inn[bin_of[a.tail as usize]] += 1;
                }
            }
            let good = out.iter().chain(&inn).all(|&x| x >= 5);
            let expected = if good {
                VertexClass::Good
            } else if d.total_degree(v) > 5 {
                VertexClass::Bad
            } else {
                VertexClass::Dangerous
            };
            assert_eq!(c.class[v as usize], expected, "vertex {v}");
            assert_eq!(g.is_exposed(v), !good);
        }
        assert!(c.count(VertexClass::Good) > 0 && c.count(VertexClass::Good) < n);
    }
}
