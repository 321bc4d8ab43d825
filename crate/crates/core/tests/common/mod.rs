#![allow(dead_code)]

use shortcut_core::generators::{generate, Family, InstanceSpec, Scheme};
use shortcut_core::graph::Instance;
use shortcut_core::oracle::{exhaustive_best_shortcut, Certificate, SearchLimits};

pub fn instance(family: Family, scheme: Scheme, seed: u64) -> Instance {
    generate(&InstanceSpec::new(family, scheme, seed)).expect("feasible spec").instance()
}

fn node_count(family: &Family) -> usize {
    match *family {
        Family::Path { n } | Family::RandomPlanarTriangulation { n } | Family::RandomTreePlusChords { n, .. } => n,
        Family::Star { leaves } => leaves + 1,
        Family::Grid { rows, cols } | Family::Torus { rows, cols } => rows * cols,
    }
}

/// The four partition schemes, sized for `family`; `rows` only where defined.
pub fn schemes(family: &Family) -> Vec<Scheme> {
    let n = node_count(family);
    let mut out = vec![Scheme::Singletons, Scheme::BfsBalls { k: (n / 6).max(1) }, Scheme::RandomConnected { k: (n / 4).max(1) }];
    if matches!(family, Family::Path { .. } | Family::Grid { .. } | Family::Torus { .. }) {
        out.push(Scheme::Rows);
    }
    out
}

/// Paths, stars and grids up to `max_side` x `max_side`, each with every scheme.
pub fn matrix(max_side: usize, seed: u64) -> Vec<(String, Instance)> {
    let mut families = vec![
        Family::Path { n: 2 },
        Family::Path { n: 9 },
        Family::Path { n: 40 },
        Family::Star { leaves: 1 },
        Family::Star { leaves: 12 },
        Family::Star { leaves: 60 },
    ];
    for side in [2, 3, 5, 8, 16, 24, 32] {
        if side <= max_side {
            families.push(Family::Grid { rows: side, cols: side });
        }
    }
    if max_side >= 7 {
        families.push(Family::Grid { rows: 3, cols: 7 });
    }
    let mut out = Vec::new();
    for f in families {
        for s in schemes(&f) {
            out.push((format!("{f:?} {s:?}"), instance(f, s, seed)));
        }
    }
    out
}

/// Instances small enough for the exhaustive oracle (|E_T| <= 14, N <= 4).
pub fn tiny() -> Vec<(String, Instance)> {
    let mut specs = Vec::new();
    for seed in 0..3 {
        specs.push(InstanceSpec::new(Family::Path { n: 8 }, Scheme::RandomConnected { k: 3 }, seed));
        specs.push(InstanceSpec::new(Family::Path { n: 12 }, Scheme::BfsBalls { k: 4 }, seed));
        specs.push(InstanceSpec::new(Family::Star { leaves: 3 }, Scheme::RandomConnected { k: 4 }, seed));
        specs.push(InstanceSpec::new(Family::Grid { rows: 3, cols: 3 }, Scheme::RandomConnected { k: 3 }, seed));
        specs.push(InstanceSpec::new(Family::Grid { rows: 3, cols: 4 }, Scheme::RandomConnected { k: 4 }, seed));
        specs.push(InstanceSpec::new(Family::Grid { rows: 3, cols: 5 }, Scheme::BfsBalls { k: 4 }, seed));
        specs.push(InstanceSpec::new(Family::Torus { rows: 3, cols: 4 }, Scheme::RandomConnected { k: 4 }, seed));
        specs.push(InstanceSpec::new(Family::RandomTreePlusChords { n: 12, chords: 6 }, Scheme::RandomConnected { k: 4 }, seed));
        specs.push(InstanceSpec::new(Family::RandomPlanarTriangulation { n: 10 }, Scheme::BfsBalls { k: 3 }, seed));
    }
    specs.push(InstanceSpec::new(Family::Grid { rows: 3, cols: 3 }, Scheme::Rows, 0));
    specs.push(InstanceSpec::new(Family::Grid { rows: 3, cols: 5 }, Scheme::Rows, 0));
    specs.push(InstanceSpec::new(Family::Grid { rows: 4, cols: 3 }, Scheme::Rows, 0));
    specs.push(InstanceSpec::new(Family::Path { n: 4 }, Scheme::Singletons, 0));
    specs.push(InstanceSpec::new(Family::Path { n: 15 }, Scheme::Rows, 0));
    specs
        .into_iter()
        .map(|s| (format!("{:?} {:?} seed {}", s.family, s.partition, s.seed), generate(&s).unwrap().instance()))
        .collect()
}

pub fn certified() -> Vec<(String, Instance, Certificate)> {
    tiny()
        .into_iter()
        .map(|(name, inst)| {
            let cert = exhaustive_best_shortcut(&inst, SearchLimits::default()).expect("within limits");
            (name, inst, cert)
        })
        .collect()
}
