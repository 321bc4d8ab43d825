//! Shortcut construction as simulated distributed programs.

mod core_common;
mod core_fast;
mod core_slow;
mod find;
mod strategy;

use thiserror::Error;

use crate::congest::SimError;
use crate::routing::RoutingError;

pub use core_common::{all_parts, Assignment, CoreOutcome, NodeView};
pub use core_fast::{activation_probability, core_fast, is_active, DEFAULT_GAMMA};
pub use core_slow::core_slow;
pub use find::{
    default_max_iterations, find_shortcut, find_shortcut_doubling, verification, DoublingOutcome, FindOutcome, FindParams,
    FindStatus, IterationRecord, TrialRecord, VerificationOutcome,
};
pub use strategy::{ConstructionOutcome, ConstructionParams, ConstructionStrategy, StrategyRegistry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no shortcut found after {trials} trials with c and b at their ceiling")]
    DoublingExhausted { trials: usize },
    #[error("unknown construction mode `{0}`")]
    UnknownStrategy(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
}
