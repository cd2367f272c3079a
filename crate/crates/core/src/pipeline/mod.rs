//! Hitting-time construction of a pattern Hamilton cycle.
//!
//! One attempt: classify vertices at `p_-`, expose window arcs at dangerous
//! vertices until event `A` holds, build short patterned paths through every
//! non-good vertex, contract them, read a 2-in/2-out binned instance off the
//! undiscovered arcs and solve it. The result is checked against the prefix
//! digraph at the hitting index.

pub mod bins;
pub mod classify;
pub mod contract;
pub mod exposure;
pub mod handsome;
pub mod paths;
pub mod planted;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Vertex;
use crate::din_dout::{lemma2_construct, DinDoutError, SinToutInstance};
use crate::directed_hc::HcBudget;
use crate::model::{hitting_index, p_plus_minus, round_probability, At, DegreeVariant, ProcessTrace};
use crate::pattern::{Pattern, PatternClass};
use crate::solver::{exact_pi_hc, verify_pi_hc, CycleWitness, EXACT_PI_HC_CAP};

pub use bins::{assign_bins, assign_bins_shuffled, BinAssignment};
pub use classify::{classify_vertices, VertexClass, VertexClassification};
pub use contract::{contract, extract_instance, u1_minimum, ContractedDigraph, Member, U1Minimum};
pub use exposure::{ExposureAudit, ExposureGuard};
pub use handsome::{check_handsome, HandsomeCondition, HandsomeParams, HandsomeReport};
pub use paths::{PathBuilder, PatternedPath};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum PipelineFailure {
    #[error("pattern class {0} is not supported")]
    UnsupportedPattern(PatternClass),
    #[error("n = {n} is not divisible by {modulus}")]
    Divisibility { n: usize, modulus: usize },
    #[error("threshold window undefined: {0}")]
    WindowUndefined(String),
    #[error("hitting time outside the window")]
    AOutsideWindow,
    #[error("structural condition {0:?} fails")]
    NotHandsome(HandsomeCondition),
    #[error("path through {vertex} could not be built: {reason}")]
    PathBuildFailed { vertex: Vertex, reason: String },
    #[error("contracted bins are unbalanced: {0:?}")]
    UnbalancedContraction(Vec<usize>),
    #[error("vertex {vertex} has fewer than two undiscovered arcs toward bin {bin}")]
    U1Violated { vertex: Vertex, bin: usize },
    #[error("no perfect matching after bin {0}")]
    MatchingFailed(usize),
    #[error("no Hamilton cycle on the contracted paths")]
    HcNotFound,
    #[error("assembled cycle failed verification")]
    VerificationFailed,
    #[error("internal error: {0}")]
    Internal(String),
}

impl PipelineFailure {
    /// Short stage name for tallies.
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineFailure::UnsupportedPattern(_) => "pattern",
            PipelineFailure::Divisibility { .. } => "divisibility",
            PipelineFailure::WindowUndefined(_) => "window",
            PipelineFailure::AOutsideWindow => "a_outside_window",
            PipelineFailure::NotHandsome(HandsomeCondition::H1) => "h1",
            PipelineFailure::NotHandsome(HandsomeCondition::H2) => "h2",
            PipelineFailure::NotHandsome(HandsomeCondition::H3) => "h3",
            PipelineFailure::PathBuildFailed { .. } => "path_build",
            PipelineFailure::UnbalancedContraction(_) => "contraction",
            PipelineFailure::U1Violated { .. } => "u1",
            PipelineFailure::MatchingFailed(_) => "matching",
            PipelineFailure::HcNotFound => "hc_not_found",
            PipelineFailure::VerificationFailed => "verification",
            PipelineFailure::Internal(_) => "internal",
        }
    }

    /// Failures that another bin assignment cannot change.
    fn is_final(&self) -> bool {
        matches!(
            self,
            PipelineFailure::UnsupportedPattern(_)
                | PipelineFailure::Divisibility { .. }
                | PipelineFailure::WindowUndefined(_)
                | PipelineFailure::AOutsideWindow
                | PipelineFailure::Internal(_)
        )
    }
}

impl From<DinDoutError> for PipelineFailure {
    fn from(e: DinDoutError) -> Self {
        match e {
            DinDoutError::MatchingFailed(i) => PipelineFailure::MatchingFailed(i),
            DinDoutError::HcNotFound => PipelineFailure::HcNotFound,
            DinDoutError::VerificationFailed => PipelineFailure::VerificationFailed,
            other => PipelineFailure::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Extra attempts with a fresh random bin assignment.
    pub retries: usize,
    /// Fall back to the exact solver on the hitting-time digraph when `n` is small enough.
    pub fallback_exact: bool,
    /// Stop when a structural condition fails instead of continuing regardless.
    pub enforce_handsome: bool,
    /// Visible arcs per bin and direction needed to be good; `4k + 2` by default.
    pub good_min: Option<usize>,
    pub handsome: Option<HandsomeParams>,
    pub hc_budget: HcBudget,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            retries: 3,
            fallback_exact: false,
            enforce_handsome: true,
            good_min: None,
            handsome: None,
            hc_budget: HcBudget::default(),
        }
    }
}

/// Pattern data resolved once per run.
#[derive(Debug, Clone)]
pub struct Setup {
    pub pi: Pattern,
    /// Pattern the bins follow: `π` itself, or `><><` for the alternating class.
    pub pi_bins: Pattern,
    pub variant: DegreeVariant,
    pub k: usize,
    pub n: usize,
    /// Window ends on the round clock.
    pub s_minus: f64,
    pub s_plus: f64,
}

impl Setup {
    pub fn new(n: usize, pi: &Pattern) -> Result<Setup, PipelineFailure> {
        let class = pi.canonical_form().classify();
        let pi_bins = match class {
            PatternClass::Alternating => Pattern::alternating().repeat(2).expect("short pattern"),
            PatternClass::NonAlternating => pi.clone(),
            other => return Err(PipelineFailure::UnsupportedPattern(other)),
        };
        bins::bin_sizes(n, pi)?;
        let variant = DegreeVariant::for_pattern(pi).expect("supported class");
        let (lo, hi) = p_plus_minus(variant, n).map_err(|e| PipelineFailure::WindowUndefined(e.to_string()))?;
        Ok(Setup {
            pi: pi.clone(),
            k: pi_bins.len(),
            pi_bins,
            variant,
            n,
            s_minus: round_probability(lo),
            s_plus: round_probability(hi),
        })
    }

    pub fn good_min(&self, config: &PipelineConfig) -> usize {
        config.good_min.unwrap_or(4 * self.k + 2)
    }

    pub fn handsome_params(&self, config: &PipelineConfig) -> HandsomeParams {
        config.handsome.unwrap_or_else(|| HandsomeParams::for_k(self.k))
    }
}

/// Everything one attempt produced, for inspection.
#[derive(Debug, Clone)]
pub struct AttemptReport {
    pub bins: BinAssignment,
    pub classification: VertexClassification,
    pub window_arcs: usize,
    /// Window arcs up to and including the one completing `A`.
    pub r_star: Option<usize>,
    pub m_star: Option<usize>,
    pub handsome: Option<HandsomeReport>,
    pub paths: Vec<PatternedPath>,
    pub contracted: Option<ContractedDigraph>,
    pub u1: Option<U1Minimum>,
    pub instance: Option<SinToutInstance>,
    pub audit: ExposureAudit,
    pub result: Result<CycleWitness, PipelineFailure>,
}

/// Compact, serializable account of one attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptSummary {
    pub good: usize,
    pub bad: usize,
    pub dangerous: usize,
    pub window_arcs: usize,
    pub r_star: Option<usize>,
    pub h_violations: Option<[usize; 3]>,
    pub paths: usize,
    pub contracted_n: Option<usize>,
    pub u1_min: Option<u32>,
    pub stage: Option<String>,
    pub failure: Option<String>,
}

impl AttemptReport {
    pub fn summary(&self) -> AttemptSummary {
        let c = &self.classification;
        let err = self.result.as_ref().err();
        AttemptSummary {
            good: c.count(VertexClass::Good),
            bad: c.count(VertexClass::Bad),
            dangerous: c.count(VertexClass::Dangerous),
            window_arcs: self.window_arcs,
            r_star: self.r_star,
            h_violations: self.handsome.as_ref().map(|h| [h.h1.len(), h.h2.len(), h.h3.len()]),
            paths: self.paths.len(),
            contracted_n: self.contracted.as_ref().map(ContractedDigraph::n),
            u1_min: self.u1.map(|u| u.count),
            stage: err.map(|e| e.stage().to_string()),
            failure: err.map(|e| e.to_string()),
        }
    }
}

/// One pass of the construction with the given bins.
pub fn run_attempt<R: Rng + ?Sized>(
    trace: &ProcessTrace,
    setup: &Setup,
    config: &PipelineConfig,
    mut bins: BinAssignment,
    rng: &mut R,
) -> AttemptReport {
    let k = setup.k;
    let mut guard = ExposureGuard::new(trace, setup.s_minus, setup.s_plus);
    let classification = classify_vertices(&mut guard, &bins.bin_of, k, setup.good_min(config));
    let mut report = AttemptReport {
        bins: bins.clone(),
        classification,
        window_arcs: 0,
        r_star: None,
        m_star: None,
        handsome: None,
        paths: Vec::new(),
        contracted: None,
        u1: None,
        instance: None,
        audit: ExposureAudit::default(),
        result: Err(PipelineFailure::Internal("not started".into())),
    };
    let result = attempt_body(trace, setup, config, &mut bins, &mut guard, &mut report, rng);
    report.bins = bins;
    report.audit = guard.audit();
    report.result = result;
    report
}

fn attempt_body<R: Rng + ?Sized>(
    trace: &ProcessTrace,
    setup: &Setup,
    config: &PipelineConfig,
    bins: &mut BinAssignment,
    guard: &mut ExposureGuard,
    report: &mut AttemptReport,
    rng: &mut R,
) -> Result<CycleWitness, PipelineFailure> {
    let n = setup.n;
    let class = report.classification.clone();
    let dangerous = class.mask(|c| c == VertexClass::Dangerous);
    let non_good = class.mask(|c| c != VertexClass::Good);

    // Only dangerous vertices can violate A: good and bad ones have large degree.
    let mut deg: Vec<(u32, u32)> = class.degrees.iter().map(|d| d.unwrap_or((u32::MAX / 2, u32::MAX / 2))).collect();
    let deficient = |deg: &[(u32, u32)], v: usize| {
        dangerous[v] && !setup.variant.satisfied(deg[v].0 as usize, deg[v].1 as usize)
    };
    let mut missing = (0..n).filter(|&v| deficient(&deg, v)).count();
    let window = guard.window(&dangerous);
    report.window_arcs = window.len();
    if missing == 0 {
        return Err(PipelineFailure::AOutsideWindow);
    }
    let mut r_star = None;
    for (i, e) in window.iter().enumerate() {
        if let Some((t, h)) = *e {
            let before = [deficient(&deg, t as usize), deficient(&deg, h as usize)];
            deg[t as usize].1 += 1;
            deg[h as usize].0 += 1;
            missing -= usize::from(before[0] && !deficient(&deg, t as usize));
            missing -= usize::from(before[1] && !deficient(&deg, h as usize));
        }
        if missing == 0 {
            r_star = Some(i + 1);
            break;
        }
    }
    let r_star = r_star.ok_or(PipelineFailure::AOutsideWindow)?;
    guard.admit_window(r_star);
    let m_star = guard.early_arc_count() + r_star;
    report.r_star = Some(r_star);
    report.m_star = Some(m_star);

    let d_plus = trace.round_digraph(setup.s_plus);
    let h = check_handsome(&d_plus, &non_good, &dangerous, setup.handsome_params(config));
    let h_fail = h.first_failure();
    report.handsome = Some(h);
    if let (true, Some(c)) = (config.enforce_handsome, h_fail) {
        return Err(PipelineFailure::NotHandsome(c));
    }

    let mut builder = PathBuilder::new(guard, &class, bins, &setup.pi_bins);
    // dangerous vertices first; their few neighbours are kept out of other paths
    let mut centers: Vec<Vertex> = (0..n as Vertex).filter(|&v| dangerous[v as usize]).collect();
    for &d in &centers {
        builder.reserve_neighbours(d);
    }
    centers.extend((0..n as Vertex).filter(|&v| non_good[v as usize] && !dangerous[v as usize]));
    let mut paths = Vec::new();
    if centers.is_empty() {
        let goods: Vec<Vertex> = (0..n as Vertex).collect();
        let &w = goods.choose(rng).expect("n > 0");
        paths.push(builder.build(w, rng)?);
    }
    for w in centers {
        let p = builder.build(w, rng);
        match p {
            Ok(p) => paths.push(p),
            Err(e) => {
                report.paths = paths;
                return Err(e);
            }
        }
    }
    if setup.variant == DegreeVariant::Alternating && n % 4 == 2 {
        builder.extend_by_two(&mut paths[0], rng)?;
    }
    drop(builder);
    report.paths = paths.clone();

    let contracted = contract(&bins.bin_of, setup.k, &paths)?;
    report.contracted = Some(contracted.clone());
    let u1 = u1_minimum(guard, &contracted, &class, &bins.initial);
    report.u1 = u1;
    if let Some(u) = u1.filter(|u| u.count < 2) {
        return Err(PipelineFailure::U1Violated { vertex: u.vertex, bin: u.bin });
    }
    let inst = extract_instance(guard, &contracted, &bins.initial, rng)?;
    report.instance = Some(inst.clone());
    let cycle = lemma2_construct(&inst, &setup.pi_bins, config.hc_budget, rng)?;
    let full = contracted.expand(&cycle.witness, &paths);
    let target = trace
        .prefix_digraph(At::Count(m_star))
        .map_err(|e| PipelineFailure::Internal(e.to_string()))?;
    if !verify_pi_hc(&target, &full, &setup.pi) {
        return Err(PipelineFailure::VerificationFailed);
    }
    Ok(full)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub result: Result<CycleWitness, PipelineFailure>,
    /// Hitting index of `A` on the trace.
    pub m_star: Option<usize>,
    pub attempts: Vec<AttemptSummary>,
    pub used_fallback: bool,
}

/// Runs attempts with fresh bins until one succeeds, then optionally the exact fallback.
pub fn run_pipeline<R: Rng + ?Sized>(
    trace: &ProcessTrace,
    pi: &Pattern,
    config: &PipelineConfig,
    rng: &mut R,
) -> PipelineRun {
    let n = trace.n();
    let mut run = PipelineRun {
        result: Err(PipelineFailure::Internal("no attempt".into())),
        m_star: None,
        attempts: Vec::new(),
        used_fallback: false,
    };
    let setup = match Setup::new(n, pi) {
        Ok(s) => s,
        Err(e) => {
            run.result = Err(e);
            return run;
        }
    };
    run.m_star = hitting_index(trace, setup.variant);
    for attempt in 0..=config.retries {
        let bins = if attempt == 0 {
            assign_bins(n, pi)
        } else {
            assign_bins_shuffled(n, pi, rng)
        }
        .expect("checked in setup");
        let report = run_attempt(trace, &setup, config, bins, rng);
        if report.m_star.is_some() && report.m_star != run.m_star {
            run.result = Err(PipelineFailure::Internal(format!(
                "window walk stopped at {:?}, hitting index is {:?}",
                report.m_star, run.m_star
            )));
            return run;
        }
        run.attempts.push(report.summary());
        let stop = report.result.as_ref().map_or_else(PipelineFailure::is_final, |_| true);
        run.result = report.result;
        if stop {
            break;
        }
    }
    if run.result.is_err() && config.fallback_exact && n <= EXACT_PI_HC_CAP {
        if let Some(m) = run.m_star {
            let d = trace.prefix_digraph(At::Count(m)).expect("index within range");
            if let Ok(Some(w)) = exact_pi_hc(&d, pi) {
                run.result = Ok(w);
                run.used_fallback = true;
            }
        }
    }
    run
}
