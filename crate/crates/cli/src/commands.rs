use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use shortcut_core::congest::{EngineConfig, ExecMode, RoundTrace};
use shortcut_core::construction::{all_parts, core_slow, verification, ConstructionError, ConstructionParams, StrategyRegistry};
use shortcut_core::generators::{generate, Family, Generated, InstanceSpec, Scheme, WeightScheme};
use shortcut_core::graph::{parse_graph, parse_partition, write_graph, write_partition, Instance, Partition, TreeEdge};
use shortcut_core::mst::{boruvka_mst, MstError, MstParams};
use shortcut_core::oracle::{block_count, exhaustive_best_shortcut, instance_hash, kruskal, reference_core, SearchLimits};
use shortcut_core::shortcut::{measure_quality, Shortcut};

use crate::{AuditArgs, Cli, Command, ConstructArgs, EngineArgs, FamilyArg, GenerateArgs, InstanceArgs, MstArgs, SchemeArg, VerifyArgs, WeightsArg};

pub const SCHEMA: &str = "shortcut/1";

pub enum Status {
    Ok,
    AlgorithmFailed(String),
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Generate(a) => generate_cmd(a),
        Command::Construct(a) => construct(a),
        Command::VerifyQuality(a) => verify(a),
        Command::Mst(a) => mst(a),
        Command::Audit(a) => audit(a),
    }
}

fn need(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.with_context(|| format!("--{flag} is required for the {family} family"))
}

fn spec_from_flags(a: &InstanceArgs, family: FamilyArg) -> Result<InstanceSpec> {
    let family = match family {
        FamilyArg::Path => Family::Path { n: need(a.n, "n", "path")? },
        FamilyArg::Star => Family::Star { leaves: need(a.leaves, "leaves", "star")? },
        FamilyArg::Grid => Family::Grid { rows: need(a.rows, "rows", "grid")?, cols: need(a.cols, "cols", "grid")? },
        FamilyArg::Torus => Family::Torus { rows: need(a.rows, "rows", "torus")?, cols: need(a.cols, "cols", "torus")? },
        FamilyArg::RandomPlanarTriangulation => Family::RandomPlanarTriangulation { n: need(a.n, "n", "triangulation")? },
        FamilyArg::RandomTreePlusChords => {
            Family::RandomTreePlusChords { n: need(a.n, "n", "tree")?, chords: a.chords.unwrap_or(0) }
        }
    };
    let partition = match a.scheme {
        SchemeArg::Singletons => Scheme::Singletons,
        SchemeArg::Rows => Scheme::Rows,
        SchemeArg::BfsBalls => Scheme::BfsBalls { k: need(a.k, "k", "bfs-balls scheme")? },
        SchemeArg::RandomConnected => Scheme::RandomConnected { k: need(a.k, "k", "random-connected scheme")? },
    };
    let weights = match a.weights {
        WeightsArg::Unit => WeightScheme::Unit,
        WeightsArg::UniformDistinct => WeightScheme::UniformDistinct,
    };
    Ok(InstanceSpec { family, partition, seed: a.spec_seed, weights, root: a.root })
}

fn generated(a: &InstanceArgs) -> Result<Option<Generated>> {
    let spec = if let Some(path) = &a.spec {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut spec: InstanceSpec = serde_json::from_str(&text).with_context(|| format!("parsing spec {}", path.display()))?;
        if a.root.is_some() {
            spec.root = a.root;
        }
        spec
    } else if let Some(family) = a.family {
        spec_from_flags(a, family)?
    } else {
        return Ok(None);
    };
    Ok(Some(generate(&spec)?))
}

fn load_instance(a: &InstanceArgs) -> Result<Instance> {
    if let Some(gen) = generated(a)? {
        return Ok(gen.instance());
    }
    let path = a.instance.as_ref().context("give --instance, --spec or --family")?;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let graph = parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
    let partition = match &a.partition {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_partition(&text, &graph).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Partition::singletons(graph.node_count()),
    };
    Ok(Instance::with_bfs_tree(graph, a.root.unwrap_or(0), partition)?)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(path: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    write_out(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn engine(a: &EngineArgs) -> EngineConfig {
    let mode = if a.parallel { ExecMode::Parallel } else { ExecMode::Sequential };
    EngineConfig { kappa: a.kappa, ..EngineConfig::default() }.with_log(a.trace.is_some()).with_mode(mode)
}

fn write_trace(a: &EngineArgs, trace: &RoundTrace) -> Result<()> {
    if let (Some(path), Some(dump)) = (&a.trace, trace.dump()) {
        fs::write(path, dump).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn trace_json(t: &RoundTrace) -> serde_json::Value {
    json!({
        "rounds": t.rounds_elapsed,
        "messages": t.messages_sent,
        "bits": t.bits_sent,
        "max_bits_on_edge_per_round": t.max_bits_on_edge_per_round,
        "budget_bits": t.budget_bits,
        "digest": format!("{:016x}", t.digest),
    })
}

fn generate_cmd(a: GenerateArgs) -> Result<Status> {
    let gen = generated(&a.source)?.context("give --spec or --family")?;
    match &a.out {
        Some(out) => {
            fs::write(out, write_graph(&gen.graph)).with_context(|| format!("writing {}", out.display()))?;
            if let Some(p) = &a.partition_out {
                fs::write(p, write_partition(&gen.partition)).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        None => print!("{}", gen.to_text()),
    }
    Ok(Status::Ok)
}

fn construct(a: ConstructArgs) -> Result<Status> {
    let inst = load_instance(&a.source)?;
    let registry = StrategyRegistry::with_builtins();
    let strategy = registry.get(&a.mode)?;
    let params = ConstructionParams {
        c: a.c,
        b: a.b,
        gamma: a.gamma,
        seed: a.seed,
        max_iterations: a.max_iter,
        engine: engine(&a.engine),
    };
    let out = match strategy.construct(&inst, &params) {
        Ok(out) => out,
        Err(e @ ConstructionError::DoublingExhausted { .. }) => return Ok(Status::AlgorithmFailed(e.to_string())),
        Err(e @ ConstructionError::InvalidParams(_)) => bail!(e),
        Err(e) => return Err(e.into()),
    };
    write_trace(&a.engine, &out.trace)?;
    if let Some(path) = &a.shortcut_out {
        fs::write(path, out.shortcut.to_text(&inst.tree)).with_context(|| format!("writing {}", path.display()))?;
    }
    let q = measure_quality(&inst, &out.shortcut);
    emit_json(
        a.out.as_deref(),
        &json!({
            "schema": SCHEMA,
            "command": "construct",
            "mode": out.mode,
            "seed": a.seed,
            "params": { "c": a.c, "b": a.b, "gamma": a.gamma, "max_iter": a.max_iter },
            "instance_hash": instance_hash(&inst),
            "complete": out.is_complete(),
            "surviving": out.surviving,
            "c_final": out.c,
            "b_final": out.b,
            "c_measured": q.shortcut_congestion,
            "c_measured_definitional": q.congestion,
            "b_measured": q.block_parameter,
            "d_measured": q.dilation,
            "rounds": out.trace.rounds_elapsed,
            "iterations": out.iterations,
            "trials": out.trials,
            "per_part_blocks": q.per_part_blocks,
            "trace": trace_json(&out.trace),
        }),
    )?;
    if !out.is_complete() {
        return Ok(Status::AlgorithmFailed(format!("{} parts still bad after {} iterations", out.surviving.len(), out.iterations)));
    }
    Ok(Status::Ok)
}

fn verify(a: VerifyArgs) -> Result<Status> {
    let inst = load_instance(&a.source)?;
    let text = fs::read_to_string(&a.shortcut).with_context(|| format!("reading {}", a.shortcut.display()))?;
    let shortcut = Shortcut::from_text(&text, &inst.graph, &inst.tree, inst.part_count())?;
    let q = measure_quality(&inst, &shortcut);
    let mut value = json!({
        "schema": SCHEMA,
        "command": "verify-quality",
        "instance_hash": instance_hash(&inst),
        "quality": q,
    });
    if let Some(limit) = a.b_limit {
        let v = verification(&inst, &shortcut, limit, &EngineConfig::default())?;
        value["verification"] = json!({ "b_limit": limit, "good": v.good, "rounds": v.trace.rounds_elapsed });
    }
    emit_json(a.out.as_deref(), &value)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct PhaseRow {
    phase: usize,
    parts: usize,
    c: u32,
    b: u32,
    rounds: u64,
}

fn mst(a: MstArgs) -> Result<Status> {
    let inst = load_instance(&a.source)?;
    let params = MstParams { seed: a.seed, gamma: a.gamma, perturb: a.perturb, max_phases: a.max_phases, engine: engine(&a.engine) };
    let out = match boruvka_mst(&inst.graph, &params) {
        Ok(out) => out,
        Err(e @ (MstError::PhaseLimit(_) | MstError::Construction(ConstructionError::DoublingExhausted { .. }))) => {
            return Ok(Status::AlgorithmFailed(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    write_trace(&a.engine, &out.trace)?;
    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for s in &out.stats {
            w.serialize(PhaseRow { phase: s.phase, parts: s.parts, c: s.c, b: s.b, rounds: s.rounds })?;
        }
        w.flush()?;
    }
    emit_json(
        a.out.as_deref(),
        &json!({
            "schema": SCHEMA,
            "command": "mst",
            "seed": a.seed,
            "weight": out.weight,
            "phases": out.phases,
            "total_rounds": out.trace.rounds_elapsed,
            "edges": out.edges,
            "per_phase": out.stats,
            "trace": trace_json(&out.trace),
        }),
    )?;
    Ok(Status::Ok)
}

fn audit(a: AuditArgs) -> Result<Status> {
    let inst = load_instance(&a.source)?;
    let cfg = EngineConfig::default();
    let mut mismatches = Vec::new();

    let slow = core_slow(&inst, a.c, &all_parts(&inst), &cfg)?;
    let (unusable, visible) = reference_core(&inst.tree, inst.partition.labels(), |_| true, |k| k > 2 * a.c as usize);
    let mut assigned = vec![BTreeSet::new(); inst.node_count()];
    for i in 0..inst.part_count() {
        for e in slow.shortcut.edges(i) {
            assigned[e.0].insert(i);
        }
    }
    let slow_ok = slow.unusable.iter().copied().collect::<BTreeSet<TreeEdge>>() == unusable && assigned == visible;
    if !slow_ok {
        mismatches.push("core_slow assignment differs from visibility replay");
    }

    let v = verification(&inst, &slow.shortcut, a.b_limit, &cfg)?;
    let oracle_good: Vec<bool> = (0..inst.part_count())
        .map(|i| block_count(&inst.tree, inst.partition.part(i), slow.shortcut.edges(i).iter().copied()) <= a.b_limit)
        .collect();
    if v.good != oracle_good {
        mismatches.push("verification differs from the block-count oracle");
    }

    let mut value = json!({
        "schema": SCHEMA,
        "command": "audit",
        "seed": a.seed,
        "instance_hash": instance_hash(&inst),
        "core_slow_matches_replay": slow_ok,
        "verification_matches_oracle": v.good == oracle_good,
    });
    match exhaustive_best_shortcut(&inst, SearchLimits::default()) {
        Ok(cert) => value["pareto"] = serde_json::to_value(&cert.pareto)?,
        Err(e) => value["pareto"] = json!({ "skipped": e.to_string() }),
    }
    if inst.graph.is_weighted() && inst.graph.has_distinct_weights() {
        let out = boruvka_mst(&inst.graph, &MstParams { seed: a.seed, ..MstParams::default() })?;
        let k = kruskal(&inst.graph)?;
        let ok = out.edges == k.edges;
        if !ok {
            mismatches.push("boruvka_mst differs from Kruskal");
        }
        value["mst_matches_kruskal"] = json!(ok);
        value["mst_weight"] = json!(k.weight);
    }
    value["mismatches"] = json!(mismatches);
    emit_json(a.out.as_deref(), &value)?;
    if mismatches.is_empty() {
        Ok(Status::Ok)
    } else {
        Ok(Status::AlgorithmFailed(mismatches.join("; ")))
    }
}
