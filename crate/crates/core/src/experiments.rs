//! Seeded Monte Carlo experiments with order-independent output.
//!
//! Trial `t` at the `i`-th size draws from stream `(i << 32) | t` of the
//! master seed, so a trial's outcome does not depend on the worker pool.

use std::io::Write;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Discrete, Poisson};
use thiserror::Error;

use crate::matching::{find_perfect_matching, BipartiteTwoOut};
use crate::model::{
    hitting_index, limiting_mean, limiting_probability, low_degree_counts, sample_dnp_degrees, sample_trace,
    threshold_p, At, DegreeVariant,
};
use crate::pattern::Pattern;
use crate::pipeline::{bins::bin_sizes, run_pipeline, PipelineConfig};
use crate::rng::trial_rng;
use crate::solver::{exact_pi_hc, verify_pi_hc, EXACT_PI_HC_CAP};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    EventA,
    LowDegree,
    Hitting,
    Walkup,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::EventA => "eventA",
            Experiment::LowDegree => "lowdeg",
            Experiment::Hitting => "hitting",
            Experiment::Walkup => "walkup",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolverChoice {
    Pipeline,
    Exact,
    PipelineFallback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Digraph sizes, or bin sizes `m` for the Walkup experiment.
    pub ns: Vec<usize>,
    pub pattern: Pattern,
    pub c: f64,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverChoice,
    /// Worker count; 0 uses the rayon default.
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.ns.is_empty() {
            return bad("at least one n is required".into());
        }
        if self.experiment == Experiment::Walkup {
            if let Some(m) = self.ns.iter().find(|&&m| m < 2) {
                return bad(format!("Walkup needs m >= 2, got {m}"));
            }
            return Ok(());
        }
        if DegreeVariant::for_pattern(&self.pattern).is_none() {
            return bad(format!("pattern {} has no degree condition", self.pattern));
        }
        for &n in &self.ns {
            bin_sizes(n, &self.pattern).map_err(|e| ExperimentError::Config(e.to_string()))?;
            if n < 16 && self.experiment != Experiment::Hitting {
                return bad(format!("threshold formulas need n >= 16, got {n}"));
            }
        }
        if self.experiment == Experiment::Hitting && self.solver == SolverChoice::Exact {
            if let Some(n) = self.ns.iter().find(|&&n| n > EXACT_PI_HC_CAP) {
                return bad(format!("exact solver needs n <= {EXACT_PI_HC_CAP}, got {n}"));
            }
        }
        if self.experiment == Experiment::Hitting && self.solver != SolverChoice::Exact {
            if let Some(n) = self.ns.iter().find(|&&n| n < 16) {
                return bad(format!("the pipeline needs n >= 16, got {n}"));
            }
        }
        Ok(())
    }

    fn variant(&self) -> DegreeVariant {
        DegreeVariant::for_pattern(&self.pattern).expect("validated")
    }
}

/// One output row: a trial, or the summary of all trials at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub kind: String,
    pub trial: Option<u64>,
    /// Seed of the trial's trace or sample stream.
    pub seed: Option<u64>,
    pub n: usize,
    pub p: Option<f64>,
    pub m_star: Option<usize>,
    pub outcome: String,
    pub x: Option<usize>,
    pub y: Option<usize>,
    pub good: Option<usize>,
    pub bad: Option<usize>,
    pub dangerous: Option<usize>,
    pub successes: Option<usize>,
    pub trials: Option<usize>,
    pub estimate: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub target: Option<f64>,
    pub tv_distance: Option<f64>,
}

impl TrialRecord {
    fn trial(trial: u64, seed: u64, n: usize, outcome: impl Into<String>) -> TrialRecord {
        TrialRecord {
            kind: "trial".into(),
            trial: Some(trial),
            seed: Some(seed),
            n,
            p: None,
            m_star: None,
            outcome: outcome.into(),
            x: None,
            y: None,
            good: None,
            bad: None,
            dangerous: None,
            successes: None,
            trials: None,
            estimate: None,
            ci_low: None,
            ci_high: None,
            target: None,
            tv_distance: None,
        }
    }

    fn summary(n: usize, outcome: impl Into<String>) -> TrialRecord {
        TrialRecord {
            kind: "summary".into(),
            trial: None,
            seed: None,
            ..TrialRecord::trial(0, 0, n, outcome)
        }
    }

    pub fn is_summary(&self) -> bool {
        self.kind == "summary"
    }
}

/// Exact two-sided binomial interval at level `1 - alpha`.
pub fn clopper_pearson(successes: usize, trials: usize, alpha: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let (x, n) = (successes as f64, trials as f64);
    let lo = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0).expect("positive shape").inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x).expect("positive shape").inverse_cdf(1.0 - alpha / 2.0)
    };
    (lo, hi)
}

/// Total-variation distance between the empirical law of `values` and Poisson(`lambda`).
pub fn tv_to_poisson(values: &[usize], lambda: f64) -> f64 {
    let hist = histogram(values);
    let pois = Poisson::new(lambda).expect("positive mean");
    let mut covered = 0.0;
    let mut diff = 0.0;
    for (k, &count) in hist.iter().enumerate() {
        let q = pois.pmf(k as u64);
        covered += q;
        diff += (count as f64 / values.len() as f64 - q).abs();
    }
    0.5 * (diff + (1.0 - covered).max(0.0))
}

pub fn histogram(values: &[usize]) -> Vec<usize> {
    let mut h = vec![0; values.iter().max().map_or(0, |m| m + 1)];
    for &v in values {
        h[v] += 1;
    }
    h
}

fn stream(size_index: usize, trial: usize) -> u64 {
    ((size_index as u64) << 32) | trial as u64
}

fn rate_summary(n: usize, rows: &[TrialRecord], success: &str, target: Option<f64>) -> TrialRecord {
    let s = rows.iter().filter(|r| r.outcome == success).count();
    let (lo, hi) = clopper_pearson(s, rows.len(), 0.05);
    TrialRecord {
        successes: Some(s),
        trials: Some(rows.len()),
        estimate: Some(s as f64 / rows.len() as f64),
        ci_low: Some(lo),
        ci_high: Some(hi),
        target,
        ..TrialRecord::summary(n, success)
    }
}

fn degree_trial(cfg: &ExperimentConfig, n: usize, si: usize, t: usize) -> TrialRecord {
    let variant = cfg.variant();
    let p = threshold_p(variant, n, cfg.c).expect("validated");
    let mut rng = trial_rng(cfg.seed, stream(si, t));
    let seed = rng.next_u64();
    let mut sample_rng = trial_rng(seed, 0);
    let (ins, outs) = sample_dnp_degrees(n, p, &mut sample_rng).expect("valid p");
    let (x, y) = low_degree_counts(ins.iter().zip(&outs).map(|(&i, &o)| (i as usize, o as usize)));
    let a = ins.iter().zip(&outs).all(|(&i, &o)| variant.satisfied(i as usize, o as usize));
    TrialRecord {
        p: Some(p),
        x: Some(x),
        y: Some(y),
        ..TrialRecord::trial(t as u64, seed, n, if a { "A" } else { "not_A" })
    }
}

fn hitting_trial(cfg: &ExperimentConfig, n: usize, si: usize, t: usize) -> TrialRecord {
    let variant = cfg.variant();
    let mut rng = trial_rng(cfg.seed, stream(si, t));
    let seed = rng.next_u64();
    let trace = sample_trace(n, seed).expect("n >= 2");
    let mut rec = TrialRecord::trial(t as u64, seed, n, "");
    match cfg.solver {
        SolverChoice::Exact => {
            let Some(m) = hitting_index(&trace, variant) else {
                rec.outcome = "a_never".into();
                return rec;
            };
            rec.m_star = Some(m);
            let d = trace.prefix_digraph(At::Count(m)).expect("index in range");
            rec.outcome = match exact_pi_hc(&d, &cfg.pattern) {
                Ok(Some(w)) if verify_pi_hc(&d, &w, &cfg.pattern) => "success".into(),
                Ok(Some(_)) => "verification".into(),
                Ok(None) => "no_cycle".into(),
                Err(e) => format!("error: {e}"),
            };
        }
        SolverChoice::Pipeline | SolverChoice::PipelineFallback => {
            let config = PipelineConfig {
                fallback_exact: cfg.solver == SolverChoice::PipelineFallback,
                ..PipelineConfig::default()
            };
            let run = run_pipeline(&trace, &cfg.pattern, &config, &mut rng);
            rec.m_star = run.m_star;
            if let Some(a) = run.attempts.first() {
                rec.good = Some(a.good);
                rec.bad = Some(a.bad);
                rec.dangerous = Some(a.dangerous);
            }
            rec.outcome = match &run.result {
                // the pipeline only returns cycles it verified on the hitting-time digraph
                Ok(_) => "success".into(),
                Err(e) => e.stage().into(),
            };
        }
    }
    rec
}

fn walkup_trial(cfg: &ExperimentConfig, m: usize, si: usize, t: usize) -> TrialRecord {
    let mut rng = trial_rng(cfg.seed, stream(si, t));
    let seed = rng.next_u64();
    let g = BipartiteTwoOut::sample(m, 2, &mut trial_rng(seed, 0));
    let outcome = match find_perfect_matching(&g) {
        Ok(mm) if g.is_perfect_matching(&mm) => "success",
        Ok(_) => "verification",
        Err(_) => "no_matching",
    };
    TrialRecord::trial(t as u64, seed, m, outcome)
}

/// Runs every trial and appends one summary row per size.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, ExperimentError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let mut out = Vec::new();
    for (si, &n) in cfg.ns.iter().enumerate() {
        let rows: Vec<TrialRecord> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| match cfg.experiment {
                    Experiment::EventA | Experiment::LowDegree => degree_trial(cfg, n, si, t),
                    Experiment::Hitting => hitting_trial(cfg, n, si, t),
                    Experiment::Walkup => walkup_trial(cfg, n, si, t),
                })
                .collect()
        });
        let summary = match cfg.experiment {
            Experiment::EventA => rate_summary(n, &rows, "A", Some(limiting_probability(cfg.variant(), cfg.c))),
            Experiment::Hitting => rate_summary(n, &rows, "success", None),
            Experiment::Walkup => rate_summary(n, &rows, "success", None),
            Experiment::LowDegree => low_degree_summary(cfg, n, &rows),
        };
        out.extend(rows);
        out.push(summary);
    }
    Ok(out)
}

/// The counted statistic: `X` for the alternating condition, `Y` otherwise.
fn low_degree_value(variant: DegreeVariant, r: &TrialRecord) -> usize {
    match variant {
        DegreeVariant::Alternating => r.x.unwrap_or(0),
        DegreeVariant::NonAlternating => r.y.unwrap_or(0),
    }
}

fn low_degree_summary(cfg: &ExperimentConfig, n: usize, rows: &[TrialRecord]) -> TrialRecord {
    let variant = cfg.variant();
    let values: Vec<usize> = rows.iter().map(|r| low_degree_value(variant, r)).collect();
    let mean = values.iter().sum::<usize>() as f64 / values.len() as f64;
    let target = limiting_mean(variant, cfg.c);
    TrialRecord {
        trials: Some(rows.len()),
        estimate: Some(mean),
        target: Some(target),
        tv_distance: Some(tv_to_poisson(&values, target)),
        ..TrialRecord::summary(n, if variant == DegreeVariant::Alternating { "mean_x" } else { "mean_y" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Writes rows with a fixed column order; an empty list gives a header-only CSV.
pub fn emit<W: Write>(rows: &[TrialRecord], format: OutputFormat, mut w: W) -> Result<(), ExperimentError> {
    match format {
        OutputFormat::Csv => {
            let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
            wr.write_record(CSV_COLUMNS)?;
            for r in rows {
                wr.serialize(r)?;
            }
            wr.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

pub const CSV_COLUMNS: [&str; 19] = [
    "kind", "trial", "seed", "n", "p", "m_star", "outcome", "x", "y", "good", "bad", "dangerous",
    "successes", "trials", "estimate", "ci_low", "ci_high", "target", "tv_distance",
];
