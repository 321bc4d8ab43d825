use std::collections::VecDeque;

use proptest::prelude::*;

use shortcut_core::generators::{generate, Family, InstanceSpec, Scheme, WeightScheme};
use shortcut_core::graph::{bfs_tree, parse_graph, parse_partition, validate_partition, write_graph, write_partition, Graph};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (1usize..40).prop_map(|n| Family::Path { n }),
        (0usize..30).prop_map(|leaves| Family::Star { leaves }),
        (1usize..9, 1usize..9).prop_map(|(rows, cols)| Family::Grid { rows, cols }),
        (3usize..7, 3usize..7).prop_map(|(rows, cols)| Family::Torus { rows, cols }),
        (3usize..60).prop_map(|n| Family::RandomPlanarTriangulation { n }),
        (1usize..40, 0usize..20).prop_map(|(n, chords)| Family::RandomTreePlusChords { n, chords: chords.min(n * (n - 1) / 2 - (n - 1)) }),
    ]
}

fn scheme() -> impl Strategy<Value = Scheme> {
    prop_oneof![
        Just(Scheme::Singletons),
        Just(Scheme::Rows),
        (1usize..8).prop_map(|k| Scheme::BfsBalls { k }),
        (1usize..8).prop_map(|k| Scheme::RandomConnected { k }),
    ]
}

/// Independent eccentricity: plain queue BFS over the edge list.
fn eccentricity(g: &Graph, s: usize) -> u32 {
    let mut adj = vec![Vec::new(); g.node_count()];
    for e in g.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut dist = vec![u32::MAX; g.node_count()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist.into_iter().max().unwrap()
}

/// Brute-force check: non-empty, disjoint, and each part connected by
/// repeated closure over member edges.
fn brute_valid(g: &Graph, parts: &[Vec<usize>]) -> bool {
    let mut used = vec![false; g.node_count()];
    for p in parts {
        if p.is_empty() || p.iter().any(|&v| v >= g.node_count() || std::mem::replace(&mut used[v], true)) {
            return false;
        }
        let mut reached = vec![p[0]];
        loop {
            let before = reached.len();
            for e in g.edges() {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if reached.contains(&a) && p.contains(&b) && !reached.contains(&b) {
                        reached.push(b);
                    }
                }
            }
            if reached.len() == before {
                break;
            }
        }
        if reached.len() != p.len() {
            return false;
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_instances_are_valid_and_reproducible(f in family(), s in scheme(), seed in 0u64..1000, distinct in any::<bool>()) {
        let weights = if distinct { WeightScheme::UniformDistinct } else { WeightScheme::Unit };
        let spec = InstanceSpec::new(f, s, seed).with_weights(weights);
        let Ok(a) = generate(&spec) else { return Ok(()) };
        let b = generate(&spec).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
        prop_assert!(validate_partition(&a.graph, a.partition.parts()).is_valid());
        prop_assert!(a.graph.is_connected());
        if distinct {
            prop_assert!(a.graph.has_distinct_weights());
        }
    }

    #[test]
    fn bfs_depth_is_root_eccentricity(f in family(), seed in 0u64..1000, root_pick in any::<prop::sample::Index>()) {
        let g = generate(&InstanceSpec::new(f, Scheme::Singletons, seed)).unwrap().graph;
        let root = root_pick.index(g.node_count());
        let t = bfs_tree(&g, root).unwrap();
        prop_assert_eq!(t.max_depth(), eccentricity(&g, root));
        let d = t.max_depth();
        for v in 0..g.node_count() {
            prop_assert!(t.depth(v) + t.height(v) <= d);
        }
        // the root-to-deepest-leaf path attains equality at every node
        let mut x = (0..g.node_count()).max_by_key(|&v| (t.depth(v), std::cmp::Reverse(v))).unwrap();
        loop {
            prop_assert_eq!(t.depth(x) + t.height(x), d);
            match t.parent(x) {
                Some(p) => x = p,
                None => break,
            }
        }
    }

    #[test]
    fn validate_partition_matches_brute_force(
        f in family(),
        seed in 0u64..100,
        labels in proptest::collection::vec(proptest::option::of(0usize..4), 60),
    ) {
        let g = generate(&InstanceSpec::new(f, Scheme::Singletons, seed)).unwrap().graph;
        let mut parts = vec![Vec::new(); 4];
        for v in 0..g.node_count() {
            if let Some(l) = labels[v % labels.len()] {
                parts[l].push(v);
            }
        }
        prop_assert_eq!(validate_partition(&g, &parts).is_valid(), brute_valid(&g, &parts));
    }

    #[test]
    fn text_formats_round_trip(f in family(), s in scheme(), seed in 0u64..1000) {
        let spec = InstanceSpec::new(f, s, seed).with_weights(WeightScheme::UniformDistinct);
        let Ok(gen) = generate(&spec) else { return Ok(()) };
        let text = write_graph(&gen.graph);
        let g = parse_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&g), text);
        let p = parse_partition(&write_partition(&gen.partition), &g).unwrap();
        prop_assert_eq!(p.parts(), gen.partition.parts());
    }
}

#[test]
fn examples_from_the_contract() {
    let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
    assert!(!validate_partition(&g, &[vec![0, 2]]).is_valid());
    assert!(validate_partition(&g, &[vec![0], vec![1], vec![2]]).is_valid());
    let grid = generate(&InstanceSpec::new(Family::Grid { rows: 3, cols: 3 }, Scheme::Rows, 0)).unwrap();
    assert!(validate_partition(&grid.graph, grid.partition.parts()).is_valid());
    let t = bfs_tree(&grid.graph, 0).unwrap();
    assert_eq!(t.max_depth(), eccentricity(&grid.graph, 0));
}
