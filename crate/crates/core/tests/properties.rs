use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lcllab_core::depsim::{cluster, partition_d};
use lcllab_core::gadgets::{
    apply_mutation, check_proper, compress, enumerate_mutations, lift, BipartiteInstance, Family, Instance,
};
use lcllab_core::ghz::{ghz_measure, GhzTriple};
use lcllab_core::graph::{ball, bfs, from_json, power_graph, to_json, view, GraphJson, LabeledGraph, Scope};
use lcllab_core::lcl::toy::Coloring;
use lcllab_core::lcl::{brute_force_solve, check_all, enumerate_solutions, Labeling, SearchOptions};

type G = LabeledGraph<(), ()>;

/// Up to 9 nodes, each new node attached to an earlier one, plus extras.
fn small_graph() -> impl Strategy<Value = G> {
    (1usize..=9).prop_flat_map(|n| {
        let tree = (1..n).map(|v| 0..v).collect::<Vec<_>>();
        let extra = prop::collection::vec((0..n, 0..n), 0..n);
        (Just(n), tree, extra).prop_map(|(n, parents, extra)| {
            let mut g = G::new();
            for _ in 0..n {
                g.add_node(());
            }
            for (i, p) in parents.into_iter().enumerate() {
                g.add_edge(p, i + 1, (), ());
            }
            for (u, v) in extra {
                if u != v && !g.neighbors(u).any(|w| w == v) {
                    g.add_edge(u, v, (), ());
                }
            }
            g
        })
    })
}

fn bipartite() -> impl Strategy<Value = BipartiteInstance> {
    (1usize..=10, 3usize..=5, any::<u64>())
        .prop_map(|(w, d, seed)| BipartiteInstance::random(w, d, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn lifted() -> impl Strategy<Value = Instance> {
    (bipartite(), 1u32..=3).prop_map(|(b, h)| lift(&b, h).unwrap().graph)
}

/// Number of proper 3-colorings by direct enumeration.
fn count_colorings(g: &G) -> usize {
    let n = g.n();
    (0..3usize.pow(n as u32))
        .filter(|&code| {
            let col: Vec<usize> = (0..n).map(|v| code / 3usize.pow(v as u32) % 3).collect();
            g.edges().iter().all(|e| col[e.u] != col[e.v])
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balls_and_views_agree(g in small_graph(), t in 0usize..4) {
        for v in g.nodes() {
            let b = ball(&g, &[v], t);
            let vw = view(&g, &[v], t);
            prop_assert_eq!(&vw.nodes, &b);
            let d = bfs(&g, &[v], None, Scope::FULL);
            for (i, &u) in vw.nodes.iter().enumerate() {
                prop_assert_eq!(vw.dist[i], d[u]);
                prop_assert!(d[u] <= t);
            }
            // Views keep the edges inside the ball, except those joining two
            // boundary nodes, which t rounds cannot reveal.
            let inside = g
                .edges()
                .iter()
                .filter(|e| b.contains(&e.u) && b.contains(&e.v) && !(d[e.u] == t && d[e.v] == t))
                .count();
            prop_assert_eq!(vw.graph.m(), inside);
        }
    }

    #[test]
    fn distances_are_symmetric(g in small_graph()) {
        let d: Vec<Vec<usize>> = g.nodes().map(|v| bfs(&g, &[v], None, Scope::FULL)).collect();
        for u in g.nodes() {
            for v in g.nodes() {
                prop_assert_eq!(d[u][v], d[v][u]);
            }
        }
    }

    #[test]
    fn power_graph_joins_nodes_within_k(g in small_graph(), k in 1usize..4) {
        let p = power_graph(&g, k);
        for u in g.nodes() {
            let d = bfs(&g, &[u], None, Scope::FULL);
            for v in g.nodes() {
                let joined = p.neighbors(u).any(|w| w == v);
                prop_assert_eq!(joined, u != v && d[v] <= k);
            }
        }
    }

    #[test]
    fn search_counts_match_enumeration(g in small_graph()) {
        let p = Coloring::<(), ()>::new(3);
        let sols = enumerate_solutions(&p, &g, &SearchOptions::default()).unwrap();
        prop_assert_eq!(sols.len(), count_colorings(&g));
        for s in &sols {
            prop_assert!(check_all(&p, &g, s).is_empty());
        }
    }

    #[test]
    fn partial_checks_only_report_definite_violations(
        g in small_graph(),
        cols in prop::collection::vec(0u8..3, 9),
        keep in prop::collection::vec(any::<bool>(), 9),
    ) {
        let p = Coloring::<(), ()>::new(3);
        let total = Labeling::from_nodes(cols[..g.n()].to_vec(), g.m());
        let partial = Labeling::partial_from(
            (0..g.n()).map(|v| keep[v].then_some(cols[v])).collect(),
            g.m(),
        );
        let full = check_all(&p, &g, &total);
        for viol in check_all(&p, &g, &partial) {
            prop_assert!(full.contains(&viol));
        }
        // The search returns only valid extensions and finds one whenever the
        // full coloring is itself valid.
        let found = brute_force_solve(&p, &g, &partial, &SearchOptions::default()).unwrap();
        if let Some(sol) = &found {
            prop_assert!(check_all(&p, &g, sol).is_empty());
            for v in g.nodes().filter(|&v| keep[v]) {
                prop_assert_eq!(sol.node(v), Some(&cols[v]));
            }
        }
        if full.is_empty() {
            prop_assert!(found.is_some());
        }
    }

    #[test]
    fn json_round_trip_is_identity(g in lifted()) {
        let doc = to_json(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: Instance = from_json(serde_json::from_str::<GraphJson<_, _>>(&text).unwrap()).unwrap();
        prop_assert_eq!(serde_json::to_string(&to_json(&back)).unwrap(), text);
    }

    #[test]
    fn lifts_are_proper_and_compress_back(b in bipartite(), h in 1u32..=3) {
        let l = lift(&b, h).unwrap();
        prop_assert!(check_proper(&l.graph).is_empty());
        let (c, _) = compress(&l.graph).unwrap();
        prop_assert_eq!(c.whites, b.whites);
        prop_assert_eq!(c.blacks, b.blacks);
        let mut d1: Vec<usize> = (0..b.whites).map(|w| b.white_degree(w)).collect();
        let mut d2: Vec<usize> = (0..c.whites).map(|w| c.white_degree(w)).collect();
        d1.sort_unstable();
        d2.sort_unstable();
        prop_assert_eq!(d1, d2);
        // Compression is a canonical form: lifting it again and compressing
        // reproduces it exactly.
        let again = compress(&lift(&c, h).unwrap().graph).unwrap().0;
        prop_assert_eq!(again.signature(), c.signature());
    }

    #[test]
    fn single_mutations_of_lifts_are_flagged(g in lifted(), pick in any::<prop::sample::Index>()) {
        let ms = enumerate_mutations(&g, Family::Proper);
        let m = ms[pick.index(ms.len())];
        prop_assert!(!check_proper(&apply_mutation(&g, m)).is_empty(), "{:?}", m);
    }

    #[test]
    fn clustering_invariants(g in small_graph(), r in 1usize..4, eps in 0.05f64..=1.0, t in 1usize..3) {
        let c = cluster(&g, r, eps);
        prop_assert!(c.check(&g).is_ok(), "{:?}", c.check(&g));
        let dp = partition_d(&g, &c.d, t);
        prop_assert!(dp.check(&g).is_ok());
        let mut all: Vec<usize> = dp.parts.concat();
        all.sort_unstable();
        let mut d = c.d.clone();
        d.sort_unstable();
        prop_assert_eq!(all, d);
    }

    #[test]
    fn ghz_even_inputs_win(seed in any::<u64>(), inp in 0u8..8) {
        let x = [inp & 1 != 0, inp & 2 != 0, inp & 4 != 0];
        let mut t = GhzTriple::new();
        let y = ghz_measure(&mut t, x, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-12);
        if x.iter().filter(|&&b| b).count() % 2 == 0 {
            prop_assert_eq!(y[0] ^ y[1] ^ y[2], x[0] | x[1] | x[2]);
        }
    }
}
