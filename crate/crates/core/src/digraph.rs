//! Simple digraphs whose arcs carry `in`/`out` labels.
//!
//! Parallel copies of the same ordered pair are merged into one arc holding
//! the union of their labels, so all degree queries see the simple digraph.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::BitOr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

/// Non-empty subset of `{in, out}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labels(u8);

impl Labels {
    pub const IN: Labels = Labels(1);
    pub const OUT: Labels = Labels(2);
    pub const BOTH: Labels = Labels(3);

    pub fn has_in(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn has_out(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn contains(self, other: Labels) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn as_str(self) -> &'static str {
        match self.0 {
            1 => "i",
            2 => "o",
            _ => "io",
        }
    }

    pub fn parse(s: &str) -> Option<Labels> {
        match s {
            "i" => Some(Labels::IN),
            "o" => Some(Labels::OUT),
            "io" | "oi" => Some(Labels::BOTH),
            _ => None,
        }
    }
}

impl BitOr for Labels {
    type Output = Labels;

    fn bitor(self, rhs: Labels) -> Labels {
        Labels(self.0 | rhs.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: Vertex,
    pub head: Vertex,
    pub labels: Labels,
}

#[derive(Debug, Error)]
pub enum DigraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDigraph {
    n: usize,
    /// Sorted by `(tail, head)`; one entry per ordered pair.
    arcs: Vec<Arc>,
    out_adj: Vec<Vec<Vertex>>,
    in_adj: Vec<Vec<Vertex>>,
}

impl LabeledDigraph {
    pub fn empty(n: usize) -> LabeledDigraph {
        LabeledDigraph {
            n,
            arcs: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    /// Builds the merged simple digraph from an arbitrary arc list.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<LabeledDigraph, DigraphError>
    where
        I: IntoIterator<Item = Arc>,
    {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        for a in &arcs {
            for v in [a.tail, a.head] {
                if v as usize >= n {
                    return Err(DigraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a.tail == a.head {
                return Err(DigraphError::SelfLoop(a.tail));
            }
        }
        arcs.sort_unstable_by_key(|a| (a.tail, a.head));
        let mut merged: Vec<Arc> = Vec::with_capacity(arcs.len());
        for a in arcs {
            match merged.last_mut() {
                Some(last) if last.tail == a.tail && last.head == a.head => {
                    last.labels = last.labels | a.labels;
                }
                _ => merged.push(a),
            }
        }
        Ok(Self::from_sorted_unique(n, merged))
    }

    /// Unlabeled convenience constructor; every arc gets both labels.
    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<LabeledDigraph, DigraphError> {
        Self::from_arcs(
            n,
            pairs.iter().map(|&(tail, head)| Arc {
                tail,
                head,
                labels: Labels::BOTH,
            }),
        )
    }

    pub(crate) fn from_sorted_unique(n: usize, arcs: Vec<Arc>) -> LabeledDigraph {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for a in &arcs {
            out_adj[a.tail as usize].push(a.head);
            in_adj[a.head as usize].push(a.tail);
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        LabeledDigraph {
            n,
            arcs,
            out_adj,
            in_adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.in_adj[v as usize]
    }

    pub fn has_arc(&self, tail: Vertex, head: Vertex) -> bool {
        self.out_adj
            .get(tail as usize)
            .is_some_and(|l| l.binary_search(&head).is_ok())
    }

    pub fn labels(&self, tail: Vertex, head: Vertex) -> Option<Labels> {
        self.arcs
            .binary_search_by_key(&(tail, head), |a| (a.tail, a.head))
            .ok()
            .map(|i| self.arcs[i].labels)
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.in_adj[v as usize].len()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_adj[v as usize].len()
    }

    /// In-degree plus out-degree in the merged simple digraph.
    pub fn total_degree(&self, v: Vertex) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// Distinct vertices joined to `v` by an arc in either direction.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut all: Vec<Vertex> = self.out_adj[v as usize]
            .iter()
            .chain(&self.in_adj[v as usize])
            .copied()
            .collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Every arc of `self` is an arc of `other` (labels ignored).
    pub fn is_subgraph_of(&self, other: &LabeledDigraph) -> bool {
        self.n == other.n && self.arcs.iter().all(|a| other.has_arc(a.tail, a.head))
    }

    /// Writes the text format: a header `n=<int>` then one `tail head labels` line per arc.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n={}", self.n)?;
        for a in &self.arcs {
            writeln!(w, "{} {} {}", a.tail, a.head, a.labels.as_str())?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<LabeledDigraph, DigraphError> {
        let mut n = None;
        let mut arcs = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let perr = |msg: &str| DigraphError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            if n.is_none() {
                let v = t
                    .strip_prefix("n=")
                    .ok_or_else(|| perr("expected header n=<int>"))?;
                n = Some(v.trim().parse::<usize>().map_err(|_| perr("bad vertex count"))?);
                continue;
            }
            let mut parts = t.split_whitespace();
            let mut field = |what: &str| parts.next().ok_or_else(|| perr(&format!("missing {what}")));
            let tail = field("tail")?.parse::<Vertex>().map_err(|_| perr("bad tail"))?;
            let head = field("head")?.parse::<Vertex>().map_err(|_| perr("bad head"))?;
            let labels = Labels::parse(field("labels")?).ok_or_else(|| perr("labels must be i, o or io"))?;
            arcs.push(Arc { tail, head, labels });
        }
        let n = n.ok_or(DigraphError::Parse {
            line: 0,
            msg: "missing header n=<int>".into(),
        })?;
        Self::from_arcs(n, arcs)
    }
}

impl fmt::Display for LabeledDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = Vec::new();
        self.write_text(&mut buf).map_err(|_| fmt::Error)?;
        f.write_str(&String::from_utf8_lossy(&buf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_parallel_labels() {
        let d = LabeledDigraph::from_arcs(
            3,
            [
                Arc { tail: 0, head: 1, labels: Labels::IN },
                Arc { tail: 0, head: 1, labels: Labels::OUT },
                Arc { tail: 1, head: 0, labels: Labels::IN },
            ],
        )
        .unwrap();
        assert_eq!(d.arc_count(), 2);
        assert_eq!(d.labels(0, 1), Some(Labels::BOTH));
        assert_eq!(d.labels(1, 0), Some(Labels::IN));
        assert_eq!(d.total_degree(0), 2);
        assert_eq!(d.neighbors(0), vec![1]);
        assert_eq!(d.total_degree(2), 0);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert!(matches!(
            LabeledDigraph::from_pairs(2, &[(1, 1)]),
            Err(DigraphError::SelfLoop(1))
        ));
        assert!(matches!(
            LabeledDigraph::from_pairs(2, &[(0, 2)]),
            Err(DigraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn text_format_round_trip() {
        let d = LabeledDigraph::from_arcs(
            4,
            [
                Arc { tail: 0, head: 1, labels: Labels::IN },
                Arc { tail: 2, head: 3, labels: Labels::BOTH },
                Arc { tail: 3, head: 0, labels: Labels::OUT },
            ],
        )
        .unwrap();
        let text = d.to_string();
        assert_eq!(text, "n=4\n0 1 i\n2 3 io\n3 0 o\n");
        let back = LabeledDigraph::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = LabeledDigraph::read_text("n=3\n0 1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, DigraphError::Parse { line: 2, .. }));
        let err = LabeledDigraph::read_text("0 1 i\n".as_bytes()).unwrap_err();
        assert!(matches!(err, DigraphError::Parse { line: 1, .. }));
    }
}
