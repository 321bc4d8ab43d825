//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines show up in plain `cargo test` output.

mod common;

use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use shortcut_core::congest::{EngineConfig, ExecMode, RoundTrace, SharedRandomness};
use shortcut_core::construction::{
    all_parts, core_fast, core_slow, default_max_iterations, find_shortcut, find_shortcut_doubling, ConstructionParams,
    FindParams, StrategyRegistry, DEFAULT_GAMMA,
};
use shortcut_core::generators::{generate, Family, InstanceSpec, Scheme, WeightScheme};
use shortcut_core::graph::{Instance, TreeEdge};
use shortcut_core::mst::{boruvka_mst, MstParams};
use shortcut_core::oracle::{block_count, kruskal, Certificate};
use shortcut_core::routing::{multi_convergecast, AggOp, ShortcutRouter, Subtree, SubtreeFamily};
use shortcut_core::shortcut::{measure_dilation, measure_quality, Shortcut};

/// Round-bound constants for the shortcut routing operations: one superstep
/// costs at most `2(D + c) + 1 <= 3(D + c)` rounds when `D + c >= 1`.
const K_ELECT: u64 = 3;
const K_BROADCAST: u64 = 3;
const K_CONVERGECAST: u64 = 6;
const K_COUNT_BLOCKS: u64 = 13;

/// Seeds per instance for the CoreFast congestion check.
const FAST_SEEDS: u64 = 100;
const FIND_SEEDS: u64 = 20;
const DOUBLING_SEEDS: u64 = 10;

type Verdict = Result<String, String>;

/// Every trace produced by any criterion, checked against its budget at the end.
static TRACES: Mutex<(u64, Vec<String>)> = Mutex::new((0, Vec::new()));

fn audit(label: &str, trace: &RoundTrace) {
    let mut t = TRACES.lock().unwrap();
    t.0 += 1;
    if !trace.within_budget() {
        t.1.push(format!("{label}: {} bits > budget {}", trace.max_bits_on_edge_per_round, trace.budget_bits));
    }
}

fn h_load(inst: &Instance, s: &Shortcut) -> Vec<usize> {
    let mut load = vec![0; inst.node_count()];
    for i in 0..s.part_count() {
        for e in s.edges(i) {
            load[e.0] += 1;
        }
    }
    load
}

fn blocks(inst: &Instance, s: &Shortcut, i: usize) -> usize {
    block_count(&inst.tree, inst.partition.part(i), s.edges(i).iter().copied())
}

fn first_failure(results: Vec<Result<(), String>>) -> Result<usize, String> {
    let n = results.len();
    match results.into_iter().find_map(Result::err) {
        Some(e) => Err(e),
        None => Ok(n),
    }
}

fn criterion_1() -> Verdict {
    let cfg = EngineConfig::default();
    let cases: Vec<(String, Instance, u32)> = common::matrix(32, 1)
        .into_iter()
        .flat_map(|(name, inst)| [1u32, 2, 4, 8].map(|c| (name.clone(), inst.clone(), c)))
        .collect();
    let worst = Mutex::new(0f64);
    let results = cases
        .par_iter()
        .map(|(name, inst, c)| {
            let out = core_slow(inst, *c, &all_parts(inst), &cfg).map_err(|e| format!("{name} c={c}: {e}"))?;
            audit(name, &out.trace);
            let max = h_load(inst, &out.shortcut).into_iter().max().unwrap_or(0);
            let mut w = worst.lock().unwrap();
            *w = w.max(max as f64 / (2 * c) as f64);
            if max > 2 * *c as usize {
                return Err(format!("{name} c={c}: edge load {max} > {}", 2 * c));
            }
            Ok(())
        })
        .collect();
    let n = first_failure(results)?;
    Ok(format!("{n} runs, max load / 2c = {:.2}", worst.into_inner().unwrap()))
}

fn criterion_2(certs: &[(String, Instance, Certificate)]) -> Verdict {
    let cfg = EngineConfig::default();
    let mut runs = 0;
    for (name, inst, cert) in certs {
        let n_parts = inst.part_count();
        for p in &cert.pareto {
            let c = p.c.max(1) as u32;
            let out = core_slow(inst, c, &all_parts(inst), &cfg).map_err(|e| format!("{name}: {e}"))?;
            audit(name, &out.trace);
            let good = (0..n_parts).filter(|&i| blocks(inst, &out.shortcut, i) <= 3 * p.b).count();
            if good < n_parts.div_ceil(2) {
                return Err(format!("{name} (c*, b*) = ({}, {}): {good} of {n_parts} parts good", p.c, p.b));
            }
            runs += 1;
        }
    }
    Ok(format!("{} instances, {runs} certified points", certs.len()))
}

fn criterion_3() -> Verdict {
    let cfg = EngineConfig::default();
    let mut cases = Vec::new();
    for side in [8, 16, 24] {
        let family = Family::Grid { rows: side, cols: side };
        for scheme in common::schemes(&family) {
            for c in [1u32, 2, 4, 8, 32, 64] {
                cases.push((format!("{family:?} {scheme:?} c={c}"), common::instance(family, scheme, 3), c));
            }
        }
    }
    let sampled = Mutex::new(0usize);
    let results = cases
        .par_iter()
        .flat_map(|(name, inst, c)| (0..FAST_SEEDS).into_par_iter().map(move |seed| (name, inst, *c, seed)))
        .map(|(name, inst, c, seed)| {
            let r = SharedRandomness::from_u64(seed);
            let out = core_fast(inst, c, DEFAULT_GAMMA, &r, &all_parts(inst), &cfg).map_err(|e| format!("{name}: {e}"))?;
            audit(name, &out.trace);
            if !out.exact_counting {
                *sampled.lock().unwrap() += 1;
            }
            let max = h_load(inst, &out.shortcut).into_iter().max().unwrap_or(0);
            if max > 8 * c as usize {
                return Err(format!("{name} seed {seed}: edge load {max} > {}", 8 * c));
            }
            Ok(())
        })
        .collect();
    let n = first_failure(results)?;
    Ok(format!("{n} runs ({} with p < 1), no edge above 8c", sampled.into_inner().unwrap()))
}

/// Certified `(c, b)` targets: oracle Pareto points on tiny instances, plus
/// medium instances where the empty shortcut certifies `(1, max |P_i|)` and
/// the union of root paths certifies `(N, 1)`.
fn find_targets(certs: &[(String, Instance, Certificate)]) -> Vec<(String, Instance, u32, u32)> {
    let mut out: Vec<(String, Instance, u32, u32)> = certs
        .iter()
        .flat_map(|(name, inst, cert)| cert.pareto.iter().map(move |p| (name.clone(), inst.clone(), p.c.max(1) as u32, p.b as u32)))
        .collect();
    for (family, scheme) in [
        (Family::Grid { rows: 8, cols: 8 }, Scheme::BfsBalls { k: 4 }),
        (Family::Grid { rows: 12, cols: 12 }, Scheme::RandomConnected { k: 10 }),
        (Family::Grid { rows: 10, cols: 10 }, Scheme::Rows),
        (Family::RandomPlanarTriangulation { n: 80 }, Scheme::RandomConnected { k: 8 }),
    ] {
        let inst = common::instance(family, scheme, 5);
        let name = format!("{family:?} {scheme:?}");
        let max_part = inst.partition.parts().iter().map(Vec::len).max().unwrap() as u32;
        out.push((name.clone(), inst.clone(), 1, max_part));
        out.push((name, inst.clone(), inst.part_count() as u32, 1));
    }
    out
}

fn criterion_4(certs: &[(String, Instance, Certificate)]) -> Verdict {
    let cfg = EngineConfig::default();
    let targets = find_targets(certs);
    let max_iter = Mutex::new(0usize);
    let results = targets
        .par_iter()
        .flat_map(|t| (0..FIND_SEEDS).into_par_iter().map(move |seed| (t, seed)))
        .map(|((name, inst, c, b), seed)| {
            let params = FindParams { c: *c, b: *b, gamma: DEFAULT_GAMMA, max_iterations: None };
            let out = find_shortcut(inst, params, SharedRandomness::from_u64(seed), &cfg).map_err(|e| format!("{name}: {e}"))?;
            audit(name, &out.trace);
            let ctx = format!("{name} (c, b) = ({c}, {b}) seed {seed}");
            if !out.is_complete() {
                return Err(format!("{ctx}: gave up after {} iterations", out.iterations));
            }
            let limit = default_max_iterations(inst.part_count());
            if out.iterations > limit {
                return Err(format!("{ctx}: {} iterations > {limit}", out.iterations));
            }
            if let Some(i) = (0..inst.part_count()).find(|&i| blocks(inst, &out.shortcut, i) > 3 * *b as usize) {
                return Err(format!("{ctx}: part {i} has {} blocks > 3b", blocks(inst, &out.shortcut, i)));
            }
            let congestion = h_load(inst, &out.shortcut).into_iter().max().unwrap_or(0);
            if congestion > 8 * *c as usize * out.iterations {
                return Err(format!("{ctx}: congestion {congestion} > 8c * {}", out.iterations));
            }
            let mut m = max_iter.lock().unwrap();
            *m = (*m).max(out.iterations);
            Ok(())
        })
        .collect();
    let n = first_failure(results)?;
    Ok(format!("{n} runs over {} targets, max iterations {}", targets.len(), max_iter.into_inner().unwrap()))
}

/// Random family of connected subtrees: each grows downward from a random
/// root, taking each child edge with probability `keep`.
fn random_family(inst: &Instance, count: usize, keep: f64, rng: &mut ChaCha8Rng) -> SubtreeFamily {
    let tree = &inst.tree;
    let n = inst.node_count();
    let subtrees = (0..count)
        .map(|key| {
            let root = rng.gen_range(0..n);
            let mut edges = Vec::new();
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &c in tree.children(x) {
                    if rng.gen_bool(keep) {
                        edges.push(TreeEdge(c));
                        stack.push(c);
                    }
                }
            }
            Subtree { key, root, edges }
        })
        .collect();
    SubtreeFamily::new(tree, subtrees, u32::MAX).expect("valid family")
}

fn criterion_5() -> Verdict {
    let cfg = EngineConfig::default().with_log(true);
    let mut cases = Vec::new();
    for (family, count, keep) in [
        (Family::Path { n: 30 }, 12, 0.9),
        (Family::Star { leaves: 20 }, 15, 0.5),
        (Family::Grid { rows: 8, cols: 8 }, 20, 0.7),
        (Family::Grid { rows: 16, cols: 16 }, 60, 0.8),
        (Family::RandomPlanarTriangulation { n: 100 }, 40, 0.8),
        (Family::Torus { rows: 6, cols: 9 }, 25, 0.9),
    ] {
        for seed in 0..10u64 {
            cases.push((family, count, keep, seed));
        }
    }
    let messages = Mutex::new(0usize);
    let results = cases
        .par_iter()
        .map(|&(family, count, keep, seed)| {
            let name = format!("{family:?} seed {seed}");
            let inst = common::instance(family, Scheme::Singletons, seed);
            let tree = &inst.tree;
            let fam = random_family(&inst, count, keep, &mut ChaCha8Rng::seed_from_u64(seed));
            let out = multi_convergecast(&inst.graph, tree, &fam, |_, _| Some(1), AggOp::Sum, &cfg).map_err(|e| format!("{name}: {e}"))?;
            audit(&name, &out.trace);
            let bound = tree.max_depth() as u64 + fam.load() as u64;
            if out.trace.rounds_elapsed > bound {
                return Err(format!("{name}: {} rounds > D + c = {bound}", out.trace.rounds_elapsed));
            }
            for x in &out.crossings {
                let rank = fam.through_parent_edge(x.node).iter().position(|&s| s == x.subtree).expect("listed") as u64 + 1;
                if x.round > tree.height(x.node) as u64 + rank {
                    return Err(format!("{name}: subtree {} crosses above node {} in round {} > h + {rank}", x.subtree, x.node, x.round));
                }
            }
            let log = out.trace.log.as_ref().expect("logging on");
            for r in log {
                let ok = tree.parent(r.sender) == Some(r.receiver)
                    && r.round <= tree.height(r.sender) as u64 + fam.through_parent_edge(r.sender).len() as u64;
                if !ok {
                    return Err(format!("{name}: logged message {r:?} outside its bound"));
                }
            }
            if out.crossings.len() != log.len() {
                return Err(format!("{name}: {} crossings but {} logged messages", out.crossings.len(), log.len()));
            }
            for (i, s) in fam.subtrees().iter().enumerate() {
                if out.results[i] != Some(s.edges.len() as u64 + 1) {
                    return Err(format!("{name}: subtree {i} sum {:?}", out.results[i]));
                }
            }
            *messages.lock().unwrap() += log.len();
            Ok(())
        })
        .collect();
    let n = first_failure(results)?;
    Ok(format!("{n} families, {} logged messages within h_v + i", messages.into_inner().unwrap()))
}

fn criterion_6() -> Verdict {
    let cfg = EngineConfig::default();
    let registry = StrategyRegistry::with_builtins();
    let cases: Vec<(String, Instance, u64)> = common::matrix(16, 2)
        .into_iter()
        .filter(|(_, inst)| inst.node_count() > 1)
        .flat_map(|(name, inst)| (0..3u64).map(move |seed| (name.clone(), inst.clone(), seed)))
        .collect();
    let worst = Mutex::new([0f64; 4]);
    let results = cases
        .par_iter()
        .map(|(name, inst, seed)| {
            let params = ConstructionParams { seed: *seed, ..ConstructionParams::default() };
            let mode = ["fast", "doubling", "slow"][*seed as usize % 3];
            let built = registry.get(mode).unwrap().construct(inst, &params).map_err(|e| format!("{name}: {e}"))?;
            let ctx = format!("{name} {mode} seed {seed}");
            let b = measure_quality(inst, &built.shortcut).block_parameter;
            let router = ShortcutRouter::new(inst, &built.shortcut, &cfg).map_err(|e| format!("{ctx}: {e}"))?;
            let dc = inst.depth() as u64 + router.congestion() as u64;
            let check = |what: usize, k: u64, trace: &RoundTrace, b: usize| -> Result<(), String> {
                audit(&ctx, trace);
                let r = trace.rounds_elapsed;
                let mut w = worst.lock().unwrap();
                w[what] = w[what].max(r as f64 / (b as u64 * dc) as f64);
                if r > k * b as u64 * dc {
                    return Err(format!("{ctx}: op {what} took {r} rounds > {k} * {b} * {dc}"));
                }
                Ok(())
            };
            let leaders = router.elect_leaders(b).map_err(|e| format!("{ctx}: {e}"))?;
            check(0, K_ELECT, &leaders.trace, b)?;
            for part in inst.partition.parts() {
                if let Some(&v) = part.iter().find(|&&v| leaders.per_node[v] != Some(part[0])) {
                    return Err(format!("{ctx}: node {v} has leader {:?}, expected {}", leaders.per_node[v], part[0]));
                }
            }
            // aggregates must fit a value field, so sum ones: the part size
            let values: Vec<Option<u64>> = vec![Some(1); inst.node_count()];
            let agg = router.part_convergecast(b, &leaders.per_node, &values, AggOp::Sum).map_err(|e| format!("{ctx}: {e}"))?;
            check(1, K_CONVERGECAST, &agg.trace, b)?;
            for (i, part) in inst.partition.parts().iter().enumerate() {
                let expect = part.len() as u64;
                if agg.per_part[i] != Some(expect) {
                    return Err(format!("{ctx}: part {i} sum {:?} != {expect}", agg.per_part[i]));
                }
            }
            let msg: Vec<Option<u64>> = (0..inst.node_count()).map(|v| Some(v as u64)).collect();
            let cast = router.part_broadcast(b, &leaders.per_node, &msg).map_err(|e| format!("{ctx}: {e}"))?;
            check(2, K_BROADCAST, &cast.trace, b)?;
            for part in inst.partition.parts() {
                if let Some(&v) = part.iter().find(|&&v| cast.per_node[v] != Some(part[0] as u64)) {
                    return Err(format!("{ctx}: node {v} got {:?}", cast.per_node[v]));
                }
            }
            let verdicts = router.count_blocks(b).map_err(|e| format!("{ctx}: {e}"))?;
            check(3, K_COUNT_BLOCKS, &verdicts.trace, b)?;
            if verdicts.good.iter().any(|g| !g) {
                return Err(format!("{ctx}: count_blocks({b}) rejected a part"));
            }
            Ok(())
        })
        .collect();
    let n = first_failure(results)?;
    let w = worst.into_inner().unwrap();
    Ok(format!(
        "{n} instances; K = {K_ELECT}/{K_CONVERGECAST}/{K_BROADCAST}/{K_COUNT_BLOCKS}, max rounds / b(D+c) = {:.2}/{:.2}/{:.2}/{:.2}",
        w[0], w[1], w[2], w[3]
    ))
}

fn criterion_7() -> Verdict {
    let registry = StrategyRegistry::with_builtins();
    let cases: Vec<(String, Instance, &'static str, u64)> = common::matrix(16, 4)
        .into_iter()
        .flat_map(|(name, inst)| {
            ["slow", "fast", "find", "doubling"]
                .into_iter()
                .flat_map(move |mode| [1u32, 4].map(|c| (name.clone(), inst.clone(), mode, c as u64)))
        })
        .collect();
    let shortcuts = Mutex::new(0usize);
    let results = cases
        .par_iter()
        .map(|(name, inst, mode, c)| {
            let params = ConstructionParams { c: *c as u32, b: 2, seed: *c, max_iterations: Some(6), ..ConstructionParams::default() };
            let built = registry.get(mode).unwrap().construct(inst, &params).map_err(|e| format!("{name} {mode}: {e}"))?;
            audit(name, &built.trace);
            let q = measure_quality(inst, &built.shortcut);
            let bound = q.block_parameter as u32 * (2 * inst.depth() + 1);
            let dilation = measure_dilation(inst, &built.shortcut).into_iter().max().unwrap_or(0);
            *shortcuts.lock().unwrap() += 1;
            if dilation > bound {
                return Err(format!("{name} {mode} c={c}: dilation {dilation} > b(2D+1) = {bound}"));
            }
            Ok(())
        })
        .collect();
    first_failure(results)?;
    Ok(format!("{} constructed shortcuts", shortcuts.into_inner().unwrap()))
}

fn criterion_8() -> Verdict {
    let mut phase_means = Vec::new();
    for (label, family, count) in [
        ("grid 8x8", Family::Grid { rows: 8, cols: 8 }, 50u64),
        ("tree+chords 40", Family::RandomTreePlusChords { n: 40, chords: 30 }, 20),
    ] {
        let results: Vec<Result<usize, String>> = (0..count)
            .into_par_iter()
            .map(|seed| {
                let g = generate(&InstanceSpec::new(family, Scheme::Singletons, seed).with_weights(WeightScheme::UniformDistinct))
                    .unwrap()
                    .graph;
                let out = boruvka_mst(&g, &MstParams { seed, ..MstParams::default() }).map_err(|e| format!("{label} seed {seed}: {e}"))?;
                audit(label, &out.trace);
                let oracle = kruskal(&g).unwrap();
                if out.edges != oracle.edges || out.weight != oracle.weight {
                    return Err(format!("{label} seed {seed}: edge set differs from Kruskal"));
                }
                Ok(out.phases)
            })
            .collect();
        let phases: Vec<usize> = results.into_iter().collect::<Result<_, _>>()?;
        let n = match family {
            Family::Grid { rows, cols } => rows * cols,
            Family::RandomTreePlusChords { n, .. } => n,
            _ => unreachable!(),
        };
        let mean = phases.iter().sum::<usize>() as f64 / phases.len() as f64;
        let bound = 4.0 * (n as f64).log2();
        if mean > bound {
            return Err(format!("{label}: mean phases {mean:.2} > 4 log2 n = {bound:.2}"));
        }
        phase_means.push(format!("{label} {mean:.1}/{bound:.1}"));
    }
    let mut rounds = Vec::new();
    for side in [4, 6, 8, 10] {
        let total: u64 = (0..5u64)
            .into_par_iter()
            .map(|seed| {
                let spec = InstanceSpec::new(Family::Grid { rows: side, cols: side }, Scheme::Singletons, 100 + seed)
                    .with_weights(WeightScheme::UniformDistinct);
                let g = generate(&spec).unwrap().graph;
                boruvka_mst(&g, &MstParams { seed, ..MstParams::default() }).map(|o| o.trace.rounds_elapsed).unwrap_or(u64::MAX)
            })
            .sum();
        rounds.push(total / 5);
    }
    if rounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("mean rounds not increasing in n on grids 4..10: {rounds:?}"));
    }
    Ok(format!("70 graphs equal Kruskal; mean phases {}; grid rounds {rounds:?}", phase_means.join(", ")))
}

fn criterion_9(certs: &[(String, Instance, Certificate)]) -> Verdict {
    let cfg = EngineConfig::default();
    let max_trials = Mutex::new(0usize);
    let results = certs
        .par_iter()
        .flat_map(|t| (0..DOUBLING_SEEDS).into_par_iter().map(move |seed| (t, seed)))
        .map(|((name, inst, cert), seed)| {
            let initial = FindParams { c: 1, b: 1, gamma: DEFAULT_GAMMA, max_iterations: None };
            let out = find_shortcut_doubling(inst, initial, SharedRandomness::from_u64(seed), &cfg).map_err(|e| format!("{name}: {e}"))?;
            audit(name, &out.trace);
            let trials = out.trials.len();
            let within = cert.pareto.iter().any(|p| {
                let (c_star, b_star) = (p.c.max(1), p.b);
                let allowed = (c_star.max(b_star) as f64).log2().ceil() as usize + 2;
                out.c as usize <= 2 * c_star && out.b as usize <= 2 * b_star && trials <= allowed
            });
            let mut m = max_trials.lock().unwrap();
            *m = (*m).max(trials);
            if !within {
                let pts: Vec<(usize, usize)> = cert.pareto.iter().map(|p| (p.c, p.b)).collect();
                return Err(format!("{name} seed {seed}: ended at ({}, {}) after {trials} trials; frontier {pts:?}", out.c, out.b));
            }
            Ok(())
        })
        .collect();
    let n = first_failure(results)?;
    Ok(format!("{n} runs from (1, 1), max trials {}", max_trials.into_inner().unwrap()))
}

fn criterion_10() -> Verdict {
    let logged = EngineConfig::default().with_log(true);
    let parallel = logged.clone().with_mode(ExecMode::Parallel);
    let inst = common::instance(Family::Grid { rows: 12, cols: 12 }, Scheme::RandomConnected { k: 12 }, 9);
    let registry = StrategyRegistry::with_builtins();
    let mut compared = 0;
    for mode in ["slow", "fast", "find", "doubling"] {
        let mut traces: Vec<RoundTrace> = Vec::new();
        let mut edges: Vec<String> = Vec::new();
        for engine in [&logged, &logged, &parallel] {
            let params = ConstructionParams { c: 2, b: 2, seed: 77, engine: engine.clone(), ..ConstructionParams::default() };
            let out = registry.get(mode).unwrap().construct(&inst, &params).map_err(|e| e.to_string())?;
            audit(mode, &out.trace);
            edges.push(out.shortcut.to_text(&inst.tree));
            traces.push(out.trace);
        }
        if traces[0] != traces[1] || traces[0] != traces[2] || edges[0] != edges[1] || edges[0] != edges[2] {
            return Err(format!("{mode}: traces differ between identical runs"));
        }
        compared += 1;
    }
    let g = generate(&InstanceSpec::new(Family::Grid { rows: 6, cols: 6 }, Scheme::Singletons, 4).with_weights(WeightScheme::UniformDistinct))
        .unwrap()
        .graph;
    let runs: Vec<_> = [&logged, &logged, &parallel]
        .into_iter()
        .map(|engine| boruvka_mst(&g, &MstParams { seed: 5, engine: engine.clone(), ..MstParams::default() }).unwrap())
        .collect();
    for r in &runs {
        audit("mst", &r.trace);
    }
    if runs[0].trace != runs[1].trace || runs[0].trace != runs[2].trace {
        return Err("mst: traces differ between identical runs".into());
    }
    compared += 1;
    let different = boruvka_mst(&g, &MstParams { seed: 6, engine: logged.clone(), ..MstParams::default() }).unwrap();
    if different.trace.digest == runs[0].trace.digest {
        return Err("mst: different seeds gave the same digest".into());
    }
    let t = TRACES.lock().unwrap();
    if let Some(v) = t.1.first() {
        return Err(format!("{} traces over budget, first: {v}", t.1.len()));
    }
    Ok(format!("{compared} pipelines bit-identical (sequential x2, parallel); {} traces within budget", t.0))
}

fn main() {
    let start = Instant::now();
    let certs = common::certified();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("CoreSlow congestion <= 2c", Box::new(criterion_1)),
        ("CoreSlow good fraction >= N/2", Box::new(|| criterion_2(&certs))),
        ("CoreFast congestion <= 8c over 100 seeds", Box::new(criterion_3)),
        ("FindShortcut blocks <= 3b, congestion <= 8c*iterations", Box::new(|| criterion_4(&certs))),
        ("routing rounds <= D + c and h_v + i", Box::new(criterion_5)),
        ("shortcut routing rounds <= K b (D + c)", Box::new(criterion_6)),
        ("dilation <= b(2D + 1)", Box::new(criterion_7)),
        ("MST equals Kruskal, mean phases <= 4 log2 n", Box::new(criterion_8)),
        ("doubling trials and final guesses", Box::new(|| criterion_9(&certs))),
        ("determinism and per-edge budget", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", criteria.len() - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

