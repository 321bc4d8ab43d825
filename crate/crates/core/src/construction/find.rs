//! Verification, the FindShortcut loop and the doubling wrapper.

use serde::Serialize;

use crate::congest::programs::Echo;
use crate::congest::wire::ceil_log2;
use crate::congest::{distribute_seed, run, EngineConfig, RoundTrace, SharedRandomness};
use crate::graph::{Instance, PartId};
use crate::routing::ShortcutRouter;
use crate::shortcut::Shortcut;

use super::core_fast::core_fast;
use super::ConstructionError;

#[derive(Debug, Clone)]
pub struct VerificationOutcome {
    /// Per part: at most `b_limit` blocks.
    pub good: Vec<bool>,
    /// Block-family congestion the run was scheduled against.
    pub congestion: u32,
    pub trace: RoundTrace,
}

/// Finds the parts whose shortcut subgraph has at most `b_limit` blocks.
pub fn verification(
    instance: &Instance,
    tentative: &Shortcut,
    b_limit: usize,
    config: &EngineConfig,
) -> Result<VerificationOutcome, ConstructionError> {
    let router = ShortcutRouter::new(instance, tentative, config)?;
    let verdicts = router.count_blocks(b_limit)?;
    Ok(VerificationOutcome { good: verdicts.good, congestion: router.congestion(), trace: verdicts.trace })
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub remaining: usize,
    pub good: usize,
    pub unusable_edges: usize,
    pub p: f64,
    pub exact_counting: bool,
    pub core_rounds: u64,
    pub verification_rounds: u64,
    pub check_rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FindStatus {
    Complete,
    GaveUp { surviving: Vec<PartId> },
}

#[derive(Debug, Clone)]
pub struct FindOutcome {
    pub shortcut: Shortcut,
    pub trace: RoundTrace,
    pub iterations: usize,
    pub records: Vec<IterationRecord>,
    pub status: FindStatus,
}

impl FindOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == FindStatus::Complete
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FindParams {
    pub c: u32,
    pub b: u32,
    pub gamma: f64,
    pub max_iterations: Option<usize>,
}

/// `4 ceil(log2 N) + 8`.
pub fn default_max_iterations(part_count: usize) -> usize {
    4 * ceil_log2(part_count.max(1) as u64) as usize + 8
}

/// Repeats core + verification on the parts that are still bad, freezing
/// good parts, until every part has at most `3b` blocks.
pub fn find_shortcut(
    instance: &Instance,
    params: FindParams,
    randomness: SharedRandomness,
    config: &EngineConfig,
) -> Result<FindOutcome, ConstructionError> {
    if params.b == 0 {
        return Err(ConstructionError::InvalidParams("b must be at least 1".into()));
    }
    let n = instance.node_count();
    let budget = config.wire_format(n).budget;
    let mut trace = RoundTrace::empty(budget, config.log_messages);
    let (seeds, t) = distribute_seed(&instance.graph, &instance.tree, randomness, config)?;
    trace.then(&t);
    let shared = seeds[instance.tree.root()];

    let limit = params.max_iterations.unwrap_or_else(|| default_max_iterations(instance.part_count()));
    let mut remaining = vec![true; instance.part_count()];
    let mut result = Shortcut::empty(&instance.tree, instance.part_count());
    let mut records = Vec::new();
    let mut any_left = instance.part_count() > 0;
    let mut iteration = 0;
    while any_left {
        if iteration == limit {
            let surviving = (0..remaining.len()).filter(|&i| remaining[i]).collect();
            return Ok(FindOutcome { shortcut: result, trace, iterations: iteration, records, status: FindStatus::GaveUp { surviving } });
        }
        iteration += 1;
        let core = core_fast(instance, params.c, params.gamma, &shared.derive("iteration", iteration as u64), &remaining, config)?;
        trace.then(&core.trace);
        let verdict = verification(instance, &core.shortcut, 3 * params.b as usize, config)?;
        trace.then(&verdict.trace);
        let before = remaining.iter().filter(|&&r| r).count();
        for i in 0..remaining.len() {
            if remaining[i] && verdict.good[i] {
                result.adopt(&core.shortcut, i);
                remaining[i] = false;
            }
        }
        // whole-tree count of nodes whose part is still bad
        let still_bad: Vec<u64> = (0..n)
            .map(|v| u64::from(instance.partition.part_of(v).is_some_and(|i| remaining[i])))
            .collect();
        let check = run(&instance.graph, Echo::programs(&instance.tree, &still_bad), config)?;
        trace.then(&check.trace);
        any_left = check.outputs[instance.tree.root()].is_some_and(|x| x > 0);
        records.push(IterationRecord {
            iteration,
            remaining: before,
            good: before - remaining.iter().filter(|&&r| r).count(),
            unusable_edges: core.unusable.len(),
            p: core.p,
            exact_counting: core.exact_counting,
            core_rounds: core.trace.rounds_elapsed,
            verification_rounds: verdict.trace.rounds_elapsed,
            check_rounds: check.trace.rounds_elapsed,
        });
    }
    Ok(FindOutcome { shortcut: result, trace, iterations: iteration, records, status: FindStatus::Complete })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub c: u32,
    pub b: u32,
    pub iterations: usize,
    pub complete: bool,
    pub rounds: u64,
}

#[derive(Debug, Clone)]
pub struct DoublingOutcome {
    pub shortcut: Shortcut,
    pub trace: RoundTrace,
    pub c: u32,
    pub b: u32,
    pub trials: Vec<TrialRecord>,
    /// Iterations of the successful trial.
    pub iterations: usize,
}

/// Runs [`find_shortcut`] from the initial guesses, doubling `c` and `b`
/// alternately (`c` first) after each failed trial. Guesses are capped at
/// `n`; failing with both at `n` is an error.
pub fn find_shortcut_doubling(
    instance: &Instance,
    initial: FindParams,
    randomness: SharedRandomness,
    config: &EngineConfig,
) -> Result<DoublingOutcome, ConstructionError> {
    if initial.c == 0 || initial.b == 0 {
        return Err(ConstructionError::InvalidParams("initial guesses must be at least 1".into()));
    }
    let cap = instance.node_count().max(1) as u32;
    let budget = config.wire_format(instance.node_count()).budget;
    let mut trace = RoundTrace::empty(budget, config.log_messages);
    let mut params = FindParams { c: initial.c.min(cap), b: initial.b.min(cap), ..initial };
    let mut trials = Vec::new();
    let mut grow_c = true;
    loop {
        let outcome = find_shortcut(instance, params, randomness.derive("trial", trials.len() as u64), config)?;
        trace.then(&outcome.trace);
        trials.push(TrialRecord {
            c: params.c,
            b: params.b,
            iterations: outcome.iterations,
            complete: outcome.is_complete(),
            rounds: outcome.trace.rounds_elapsed,
        });
        if outcome.is_complete() {
            return Ok(DoublingOutcome {
                shortcut: outcome.shortcut,
                trace,
                c: params.c,
                b: params.b,
                trials,
                iterations: outcome.iterations,
            });
        }
        if params.c == cap && params.b == cap {
            return Err(ConstructionError::DoublingExhausted { trials: trials.len() });
        }
        if (grow_c && params.c < cap) || params.b == cap {
            params.c = (params.c * 2).min(cap);
        } else {
            params.b = (params.b * 2).min(cap);
        }
        grow_c = !grow_c;
    }
}
