//! Synchronous CONGEST simulator.

mod engine;
pub mod programs;
mod randomness;
mod trace;
pub mod wire;

pub use engine::{run, run_audited, Ctx, EngineConfig, ExecMode, NodeProgram, RunOutcome, SimError, DEFAULT_KAPPA};
pub use randomness::{distribute_seed, SharedRandomness, SEED_BITS, SEED_BYTES};
pub use trace::{MessageRecord, RoundTrace};
pub use wire::{Wire, WireError, WireFormat};
