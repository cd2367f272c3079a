//! `phc`: command-line access to the pattern Hamilton cycle toolkit.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pattern_hc::din_dout::{equal_bins, lemma2_construct, lemma2_matrices, sample_sin_tout};
use pattern_hc::directed_hc::HcBudget;
use pattern_hc::experiments::{emit, run_experiment, Experiment, ExperimentConfig, OutputFormat, SolverChoice};
use pattern_hc::model::{hitting_index, sample_dnm, sample_dnp, sample_trace};
use pattern_hc::pipeline::planted::{planted_trace, PlantedSpec};
use pattern_hc::pipeline::{run_pipeline, PipelineConfig};
use pattern_hc::rng::trial_rng;
use pattern_hc::solver::{exact_pi_hc, verify_pi_hc};
use pattern_hc::{At, DegreeVariant, LabeledDigraph, Pattern};
use serde_json::json;

#[derive(Parser)]
#[command(name = "phc", version, about = "Patterned Hamilton cycles in random digraphs")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for Monte Carlo runs (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    /// Two-round D(n, p).
    Dnp,
    /// Uniform m arcs.
    Dnm,
    /// Prefix of the random process at the hitting time of the pattern's degree condition.
    Hitting,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    #[value(name = "eventA")]
    EventA,
    Lowdeg,
    Hitting,
    Walkup,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Pipeline,
    Exact,
    #[value(name = "pipeline+fallback")]
    PipelineFallback,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical form and class of a pattern such as `>><`.
    Pattern { pattern: String },
    /// Sample a digraph and print it in the text format.
    Gen {
        #[arg(long, value_enum, default_value_t = Model::Dnp)]
        model: Model,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        /// Pattern whose degree condition defines the hitting time.
        #[arg(long, default_value = "><")]
        pattern: String,
    },
    /// Exact pattern Hamilton cycle search on a digraph file (n <= 16).
    SolveExact {
        input: PathBuf,
        #[arg(long)]
        pattern: String,
    },
    /// Sample a binned 2-in/2-out instance and build a pattern Hamilton cycle in it.
    Sintout {
        #[arg(long)]
        pattern: String,
        /// Vertices per bin.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
    },
    /// Run the hitting-time construction on a random trace.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 3)]
        retries: usize,
        /// Fall back to the exact solver when n <= 16.
        #[arg(long)]
        fallback: bool,
        /// Use a planted trace with dense vertices and skip the structural gate.
        #[arg(long)]
        planted: bool,
        /// Include per-attempt diagnostics.
        #[arg(long)]
        emit_diagnostics: bool,
    },
    /// Monte Carlo experiments.
    Mc {
        #[arg(long, value_enum)]
        experiment: ExperimentArg,
        /// Comma-separated sizes (bin size m for walkup).
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value = "><")]
        pattern: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = SolverArg::PipelineFallback)]
        solver: SolverArg,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn parse_pattern(s: &str) -> Result<Pattern> {
    s.parse().with_context(|| format!("invalid pattern {s:?}"))
}

fn write_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn main() -> Result<()> {
    match run(Cli::parse()) {
        // a closed pipe (e.g. `| head`) is not an error
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => Ok(()),
        r => r,
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut out = output(&cli.out)?;
    let mut rng = trial_rng(cli.seed, 0);
    match cli.cmd {
        Cmd::Pattern { pattern } => {
            let p = parse_pattern(&pattern)?;
            let variant = DegreeVariant::for_pattern(&p).map(|v| v.name());
            write_json(
                &mut out,
                &json!({
                    "pattern": p.to_string(),
                    "canonical": p.canonical_form().to_string(),
                    "class": p.canonical_form().classify().to_string(),
                    "primitive": p.is_primitive(),
                    "degree_condition": variant,
                }),
            )?;
        }
        Cmd::Gen { model, n, p, m, pattern } => {
            let d = match model {
                Model::Dnp => sample_dnp(n, p.context("--p is required for dnp")?, &mut rng)?,
                Model::Dnm => sample_dnm(n, m.context("--m is required for dnm")?, &mut rng)?,
                Model::Hitting => {
                    let pi = parse_pattern(&pattern)?;
                    let variant = DegreeVariant::for_pattern(&pi).context("pattern has no degree condition")?;
                    let trace = sample_trace(n, cli.seed)?;
                    let m = hitting_index(&trace, variant).context("degree condition never holds")?;
                    trace.prefix_digraph(At::Count(m))?
                }
            };
            d.write_text(&mut out)?;
        }
        Cmd::SolveExact { input, pattern } => {
            let pi = parse_pattern(&pattern)?;
            let file = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let d = LabeledDigraph::read_text(BufReader::new(file))?;
            let found = exact_pi_hc(&d, &pi)?;
            let v = match found {
                Some(w) => json!({
                    "found": true,
                    "verified": verify_pi_hc(&d, &w, &pi),
                    "order": w.order,
                    "orientations": w.orientation_string(),
                }),
                None => json!({ "found": false }),
            };
            write_json(&mut out, &v)?;
        }
        Cmd::Sintout { pattern, m, restarts } => {
            let pi = parse_pattern(&pattern)?;
            let k = pi.len();
            let (s, t) = lemma2_matrices(k);
            let inst = sample_sin_tout(equal_bins(k, m), s, t, &mut rng)?;
            let budget = HcBudget {
                restarts,
                ..HcBudget::default()
            };
            let v = match lemma2_construct(&inst, &pi, budget, &mut rng) {
                Ok(c) => json!({
                    "found": true,
                    "verified": verify_pi_hc(&inst.digraph(), &c.witness, &pi),
                    "n": inst.n(),
                    "order": c.witness.order,
                    "orientations": c.witness.orientation_string(),
                }),
                Err(e) => json!({ "found": false, "n": inst.n(), "error": e.to_string() }),
            };
            write_json(&mut out, &v)?;
        }
        Cmd::Construct {
            n,
            pattern,
            retries,
            fallback,
            planted,
            emit_diagnostics,
        } => {
            let pi = parse_pattern(&pattern)?;
            let config = PipelineConfig {
                retries,
                fallback_exact: fallback,
                enforce_handsome: !planted,
                ..PipelineConfig::default()
            };
            let trace = if planted {
                planted_trace(n, &pi, &PlantedSpec::default(), &mut rng)?.0
            } else {
                sample_trace(n, cli.seed)?
            };
            let run = run_pipeline(&trace, &pi, &config, &mut rng);
            let mut v = match &run.result {
                Ok(w) => json!({
                    "found": true,
                    "m_star": run.m_star,
                    "used_fallback": run.used_fallback,
                    "order": w.order,
                    "orientations": w.orientation_string(),
                }),
                Err(e) => json!({
                    "found": false,
                    "m_star": run.m_star,
                    "stage": e.stage(),
                    "error": e.to_string(),
                }),
            };
            if emit_diagnostics {
                v["attempts"] = serde_json::to_value(&run.attempts)?;
            }
            write_json(&mut out, &v)?;
        }
        Cmd::Mc {
            experiment,
            n,
            pattern,
            c,
            trials,
            solver,
        } => {
            let cfg = ExperimentConfig {
                experiment: match experiment {
                    ExperimentArg::EventA => Experiment::EventA,
                    ExperimentArg::Lowdeg => Experiment::LowDegree,
                    ExperimentArg::Hitting => Experiment::Hitting,
                    ExperimentArg::Walkup => Experiment::Walkup,
                },
                ns: n,
                pattern: parse_pattern(&pattern)?,
                c,
                trials,
                seed: cli.seed,
                solver: match solver {
                    SolverArg::Pipeline => SolverChoice::Pipeline,
                    SolverArg::Exact => SolverChoice::Exact,
                    SolverArg::PipelineFallback => SolverChoice::PipelineFallback,
                },
                threads: cli.threads,
            };
            let rows = run_experiment(&cfg)?;
            let format = match cli.format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            };
            emit(&rows, format, &mut out)?;
        }
    }
    out.flush()?;
    if let Some(p) = &cli.out {
        if !p.exists() {
            bail!("output {} was not written", p.display());
        }
    }
    Ok(())
}
