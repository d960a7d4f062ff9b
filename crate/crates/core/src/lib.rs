//! Engine-based computation models.
//!
//! A computation is a path of configurations produced by a transition engine
//! and judged by an accepting engine. [`model_v`] is the standard Turing
//! machine. [`model_e`] replaces the accepting engine with one that embeds
//! [`pet::PartialDfa`], an automaton that grows as it is queried and never
//! changes an answer once given. Under model E a fixed procedure has a
//! language that depends on the order in which strings are asked about;
//! [`experiments`] reproduces the finite manipulations built on that fact.

pub mod error;
pub mod experiments;
pub mod framework;
pub mod model_e;
pub mod model_v;
pub mod pet;
pub mod procfile;
pub mod scenario;
pub mod symbol;

pub use error::Error;
pub use framework::{
    compute_function, run, select_instruction, CostMeter, Direction, EngineAnswer, Instruction,
    Model, Procedure, RunResult, StateName, Verdict,
};
pub use model_e::{aeng_e, snapshot_decode, snapshot_encode, EngineE};
pub use model_v::{ModelV, TapeConfiguration};
pub use pet::{evolve_query, g_query, machine_stats, Answer, GState, PartialDfa, QueryOutcome};
pub use symbol::{Bit, Symbol};
