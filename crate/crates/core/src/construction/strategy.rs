//! Construction modes behind one interface, selectable by name.

use std::collections::BTreeMap;

use crate::congest::{distribute_seed, EngineConfig, RoundTrace, SharedRandomness};
use crate::graph::{Instance, PartId};
use crate::shortcut::Shortcut;

use super::core_common::all_parts;
use super::{core_fast, core_slow, find_shortcut, find_shortcut_doubling, ConstructionError, FindParams, FindStatus, TrialRecord};

#[derive(Debug, Clone)]
pub struct ConstructionParams {
    pub c: u32,
    pub b: u32,
    pub gamma: f64,
    pub seed: u64,
    pub max_iterations: Option<usize>,
    pub engine: EngineConfig,
}

impl Default for ConstructionParams {
    /// `c = b = 1`, default gamma and engine, seed 0.
    fn default() -> Self {
        Self { c: 1, b: 1, gamma: super::DEFAULT_GAMMA, seed: 0, max_iterations: None, engine: EngineConfig::default() }
    }
}

impl ConstructionParams {
    fn find(&self) -> FindParams {
        FindParams { c: self.c, b: self.b, gamma: self.gamma, max_iterations: self.max_iterations }
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionOutcome {
    pub mode: &'static str,
    pub shortcut: Shortcut,
    pub trace: RoundTrace,
    pub iterations: usize,
    /// Parameters the result was obtained with.
    pub c: u32,
    pub b: u32,
    pub surviving: Vec<PartId>,
    pub trials: Vec<TrialRecord>,
}

impl ConstructionOutcome {
    pub fn is_complete(&self) -> bool {
        self.surviving.is_empty()
    }
}

pub trait ConstructionStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn construct(&self, instance: &Instance, params: &ConstructionParams) -> Result<ConstructionOutcome, ConstructionError>;
}

struct Slow;
struct Fast;
struct Find;
struct Doubling;

fn single(mode: &'static str, params: &ConstructionParams, shortcut: Shortcut, trace: RoundTrace) -> ConstructionOutcome {
    ConstructionOutcome { mode, shortcut, trace, iterations: 1, c: params.c, b: params.b, surviving: Vec::new(), trials: Vec::new() }
}

impl ConstructionStrategy for Slow {
    fn name(&self) -> &'static str {
        "slow"
    }

    fn construct(&self, instance: &Instance, params: &ConstructionParams) -> Result<ConstructionOutcome, ConstructionError> {
        let out = core_slow(instance, params.c, &all_parts(instance), &params.engine)?;
        Ok(single(self.name(), params, out.shortcut, out.trace))
    }
}

impl ConstructionStrategy for Fast {
    fn name(&self) -> &'static str {
        "fast"
    }

    fn construct(&self, instance: &Instance, params: &ConstructionParams) -> Result<ConstructionOutcome, ConstructionError> {
        let (seeds, mut trace) =
            distribute_seed(&instance.graph, &instance.tree, SharedRandomness::from_u64(params.seed), &params.engine)?;
        let out = core_fast(instance, params.c, params.gamma, &seeds[instance.tree.root()], &all_parts(instance), &params.engine)?;
        trace.then(&out.trace);
        Ok(single(self.name(), params, out.shortcut, trace))
    }
}

impl ConstructionStrategy for Find {
    fn name(&self) -> &'static str {
        "find"
    }

    fn construct(&self, instance: &Instance, params: &ConstructionParams) -> Result<ConstructionOutcome, ConstructionError> {
        let out = find_shortcut(instance, params.find(), SharedRandomness::from_u64(params.seed), &params.engine)?;
        let surviving = match out.status {
            FindStatus::Complete => Vec::new(),
            FindStatus::GaveUp { surviving } => surviving,
        };
        Ok(ConstructionOutcome {
            mode: self.name(),
            shortcut: out.shortcut,
            trace: out.trace,
            iterations: out.iterations,
            c: params.c,
            b: params.b,
            surviving,
            trials: Vec::new(),
        })
    }
}

impl ConstructionStrategy for Doubling {
    fn name(&self) -> &'static str {
        "doubling"
    }

    fn construct(&self, instance: &Instance, params: &ConstructionParams) -> Result<ConstructionOutcome, ConstructionError> {
        let out = find_shortcut_doubling(instance, params.find(), SharedRandomness::from_u64(params.seed), &params.engine)?;
        Ok(ConstructionOutcome {
            mode: self.name(),
            shortcut: out.shortcut,
            trace: out.trace,
            iterations: out.iterations,
            c: out.c,
            b: out.b,
            surviving: Vec::new(),
            trials: out.trials,
        })
    }
}

pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Box<dyn ConstructionStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        Self { strategies: BTreeMap::new() }
    }

    /// `slow`, `fast`, `find` and `doubling`.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(Slow));
        r.register(Box::new(Fast));
        r.register(Box::new(Find));
        r.register(Box::new(Doubling));
        r
    }

    pub fn register(&mut self, strategy: Box<dyn ConstructionStrategy>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<&dyn ConstructionStrategy, ConstructionError> {
        self.strategies.get(name).map(|s| s.as_ref()).ok_or_else(|| ConstructionError::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
