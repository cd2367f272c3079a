//! Traces with a prescribed mix of vertex types around the threshold window,
//! dense enough that good vertices exist at small `n`. Used to exercise the
//! later stages of the construction, which random traces of desk-top size
//! never reach.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{PipelineFailure, Setup};
use crate::digraph::Vertex;
use crate::model::{trace_from_table, ProcessTrace};
use crate::pattern::Pattern;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    /// Chance that a label of a pair between dense vertices is present before the window.
    pub q_dense: f64,
    /// Same for pairs touching a bad vertex.
    pub q_bad: f64,
    /// Chance that a label not present early arrives inside the window.
    pub q_window: f64,
    pub bad: usize,
    pub dangerous: usize,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        PlantedSpec {
            q_dense: 0.5,
            q_bad: 0.05,
            q_window: 0.002,
            bad: 3,
            dangerous: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedInfo {
    pub bad: Vec<Vertex>,
    pub dangerous: Vec<Vertex>,
}

/// Dangerous vertices get one early in-arc and two window out-arcs, all to
/// distinct dense vertices; every other label at a dangerous vertex arrives
/// after the window.
pub fn planted_trace<R: Rng + ?Sized>(
    n: usize,
    pi: &Pattern,
    spec: &PlantedSpec,
    rng: &mut R,
) -> Result<(ProcessTrace, PlantedInfo), PipelineFailure> {
    let setup = Setup::new(n, pi)?;
    let (s0, s1) = (setup.s_minus, setup.s_plus);
    let specials = spec.bad + spec.dangerous;
    if n < specials + 3 * spec.dangerous + 1 {
        return Err(PipelineFailure::Internal("too many planted vertices".into()));
    }
    let mut ids: Vec<Vertex> = (0..n as Vertex).collect();
    ids.shuffle(rng);
    let bad = ids[..spec.bad].to_vec();
    let dangerous = ids[spec.bad..specials].to_vec();
    let mut is_bad = vec![false; n];
    let mut is_dangerous = vec![false; n];
    bad.iter().for_each(|&v| is_bad[v as usize] = true);
    dangerous.iter().for_each(|&v| is_dangerous[v as usize] = true);

    let early = |r: &mut R| r.random_range(0.0..s0);
    let window = |r: &mut R| r.random_range(s0..s1).max(f64::MIN_POSITIVE);
    let late = |r: &mut R| r.random_range(s1..1.0);
    let mut table = vec![[1.0f64, 1.0]; n * n];
    for t in 0..n {
        for h in 0..n {
            if t == h {
                continue;
            }
            if is_dangerous[t] || is_dangerous[h] {
                table[t * n + h] = [late(rng), late(rng)];
                continue;
            }
            let q = if is_bad[t] || is_bad[h] { spec.q_bad } else { spec.q_dense };
            let mut label = || {
                if rng.random_bool(q) {
                    early(rng)
                } else if rng.random_bool(spec.q_window) {
                    window(rng)
                } else {
                    late(rng)
                }
            };
            table[t * n + h] = [label(), label()];
        }
    }
    // neighbours of dangerous vertices: distinct dense vertices
    let mut dense = ids[specials..].to_vec();
    dense.shuffle(rng);
    for (i, &d) in dangerous.iter().enumerate() {
        let d = d as usize;
        let nb = &dense[3 * i..3 * i + 3];
        table[nb[0] as usize * n + d][0] = early(rng);
        for &y in &nb[1..] {
            table[d * n + y as usize][1] = window(rng);
        }
    }
    let trace = trace_from_table(n, table).map_err(|e| PipelineFailure::Internal(e.to_string()))?;
    Ok((trace, PlantedInfo { bad, dangerous }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{assign_bins, run_attempt, PipelineConfig, VertexClass};
    use crate::rng::trial_rng;

    #[test]
    fn planted_classes_come_out_as_planted() {
        let pi: Pattern = ">><".parse().unwrap();
        let mut rng = trial_rng(3, 0);
        let (trace, info) = planted_trace(150, &pi, &PlantedSpec::default(), &mut rng).unwrap();
        let setup = Setup::new(150, &pi).unwrap();
        let config = PipelineConfig {
            enforce_handsome: false,
            ..PipelineConfig::default()
        };
        let rep = run_attempt(&trace, &setup, &config, assign_bins(150, &pi).unwrap(), &mut rng);
        let c = &rep.classification;
        for &v in &info.dangerous {
            assert_eq!(c.class[v as usize], VertexClass::Dangerous);
        }
        for &v in &info.bad {
            assert_eq!(c.class[v as usize], VertexClass::Bad);
        }
        assert_eq!(c.count(VertexClass::Good), 150 - 6);
        assert!(rep.r_star.is_some());
    }
}
