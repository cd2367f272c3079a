//! Patterned Hamilton cycles in random digraphs.
//!
//! The crate covers orientation patterns, labeled random digraph models and
//! their coupled arrival process, exact Hamilton-cycle solvers, the
//! `D_{S-in,T-out}` construction, the hitting-time pipeline that assembles a
//! pattern-following Hamilton cycle, and a seeded Monte Carlo harness.

pub mod digraph;
pub mod din_dout;
pub mod experiments;
pub mod directed_hc;
pub mod matching;
pub mod model;
pub mod pattern;
pub mod pipeline;
pub mod rng;
pub mod solver;

pub use digraph::{Arc, DigraphError, Labels, LabeledDigraph, Vertex};
pub use model::{At, DegreeVariant, ModelError, ProcessTrace};
pub use pattern::{Dir, Pattern, PatternClass, PatternError};
pub use solver::{verify_pi_hc, CycleWitness};
