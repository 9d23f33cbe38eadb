use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lcllab_core::depsim::{
    cluster, complete_clusters, online_adapter, online_law, partition_d, sample_d, sample_d_law, simulate,
    Clustering, DPartition, Enumerable, Outcome, QuantumPi, SimOptions, TableOutcome,
};
use lcllab_core::gadgets::{lift, BipartiteInstance, Instance};
use lcllab_core::ghz::{check_pi, iterghz_as_linearizable, Pi};
use lcllab_core::graph::{LabeledGraph, NodeId};
use lcllab_core::lcl::toy::{Coloring, FreeLabels};
use lcllab_core::lcl::{check_all, Budget, Labeling};

type G = LabeledGraph<(), ()>;

fn graph(n: usize, edges: &[(usize, usize)]) -> G {
    let mut g = G::new();
    for _ in 0..n {
        g.add_node(());
    }
    for &(u, v) in edges {
        g.add_edge(u, v, (), ());
    }
    g
}

fn path(n: usize) -> G {
    graph(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
}

fn cycle(n: usize) -> G {
    graph(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

fn grid(w: usize) -> G {
    let mut e = Vec::new();
    for i in 0..w {
        for j in 0..w {
            if i + 1 < w {
                e.push((i * w + j, (i + 1) * w + j));
            }
            if j + 1 < w {
                e.push((i * w + j, i * w + j + 1));
            }
        }
    }
    graph(w * w, &e)
}

fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> G {
    let mut e: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..n / 3 {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && !e.contains(&(u, v)) && !e.contains(&(v, u)) {
            e.push((u, v));
        }
    }
    graph(n, &e)
}

/// Parity of the coins in N_t[v]: 2t-dependent and non-signaling beyond t.
fn parity_outcome(g: &G, t: usize) -> TableOutcome<u8> {
    TableOutcome::from_local_rule(g, t, 2, |_, c| (c.iter().sum::<u64>() % 2) as u8)
}

#[test]
fn clustering_invariants_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut graphs: Vec<G> = vec![path(100), cycle(64), grid(12)];
    for _ in 0..10 {
        let n = rng.gen_range(10..200);
        graphs.push(random_graph(n, &mut rng));
    }
    for g in &graphs {
        for r in 1..=3 {
            for eps in [0.05, 0.2, 1.0] {
                let c = cluster(g, r, eps);
                c.check(g).unwrap();
                let bound = (g.n() as f64).ln() / (1.0 + eps).ln() + 1.0;
                assert!(c.carve_radius.iter().all(|&k| k as f64 <= bound));
            }
        }
    }
    let g = path(100);
    assert!(cluster(&g, 1, 0.1).d.len() <= 10);
}

#[test]
fn lift_clustering_invariants_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let b = BipartiteInstance::random(rng.gen_range(3..=12), 3, &mut rng);
        let g = lift(&b, rng.gen_range(1..=3)).unwrap().graph;
        for eps in [0.01, 0.3, 1.0] {
            cluster(&g, 5, eps).check(&g).unwrap();
        }
    }
}

#[test]
fn partition_separates_parts() {
    let g = path(20);
    assert_eq!(partition_d(&g, &[3, 8], 1).parts.len(), 2);
    assert_eq!(partition_d(&g, &[3, 5], 1).parts.len(), 1);
    let g = grid(12);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let mut d: Vec<NodeId> = g.nodes().collect();
        d.shuffle(&mut rng);
        d.truncate(rng.gen_range(1..20));
        let t = rng.gen_range(1..=3);
        let dp = partition_d(&g, &d, t);
        dp.check(&g).unwrap();
        assert_eq!(dp.parts.iter().map(Vec::len).sum::<usize>(), d.len());
        assert!(dp.locality() <= d.len() * 2 * t);
    }
}

/// c · W^{h-1} = Π c_i for every labeling of D.
fn product_matches_joint(o: &TableOutcome<u8>, g: &G, dp: &DPartition) -> bool {
    let (prod, total) = sample_d_law(o, g, dp);
    let law = o.law(g);
    let mut d: Vec<NodeId> = dp.parts.concat();
    d.sort_unstable();
    let joint = law.marginal(&d);
    let scale = total / law.total as u128;
    joint.len() == prod.len() && joint.iter().all(|(k, &c)| prod.get(k) == Some(&(c as u128 * scale)))
}

#[test]
fn sample_d_law_is_exact_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut graphs = vec![path(8), cycle(8), path(5)];
    for _ in 0..5 {
        let n = rng.gen_range(4..=8);
        graphs.push(random_graph(n, &mut rng));
    }
    for g in &graphs {
        for t in 0..=1 {
            let o = parity_outcome(g, t);
            for _ in 0..10 {
                let mut d: Vec<NodeId> = g.nodes().collect();
                d.shuffle(&mut rng);
                d.truncate(rng.gen_range(1..=g.n()));
                let dp = partition_d(g, &d, t);
                assert!(product_matches_joint(&o, g, &dp));
            }
        }
    }
    // Control: parts only 2 apart at T = 1 share a coin. Parities of
    // overlapping sets stay pairwise independent, so use the maximum.
    let g = path(3);
    let bad = DPartition { parts: vec![vec![0], vec![2]], t: 1, iterations: 1 };
    let max = TableOutcome::from_local_rule(&g, 1, 2, |_, c| *c.iter().max().unwrap() as u8);
    assert!(!product_matches_joint(&max, &g, &bad));
    assert!(product_matches_joint(&max, &g, &partition_d(&g, &[0, 2], 1)));
}

#[test]
fn sample_d_follows_its_law() {
    let g = path(8);
    let o = parity_outcome(&g, 1);
    let dp = partition_d(&g, &[0, 1, 6, 7], 1);
    assert_eq!(dp.parts.len(), 2);
    let (law, total) = sample_d_law(&o, &g, &dp);
    let trials = 10_000;
    let mut counts: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for s in 0..trials {
        let x = sample_d(&o, &g, &dp, s);
        *counts.entry([0, 1, 6, 7].iter().map(|&v| x[v].unwrap()).collect()).or_default() += 1;
    }
    let chi2: f64 = law
        .iter()
        .map(|(k, &w)| {
            let e = trials as f64 * w as f64 / total as f64;
            let o = *counts.get(k).unwrap_or(&0) as f64;
            (o - e).powi(2) / e
        })
        .sum();
    // 15 degrees of freedom; the 0.999 quantile is about 37.7.
    assert_eq!(law.len(), 16);
    assert!(chi2 < 37.7, "χ² = {chi2}");
}

fn manual(d: Vec<NodeId>, clusters: Vec<Vec<NodeId>>, r: usize) -> Clustering {
    let k = clusters.len();
    Clustering { d, clusters, eps: 1.0, r, carve_radius: vec![0; k] }
}

#[test]
fn completion_cases() {
    let p = Coloring::<(), ()>::new(2);
    let g = path(9);
    // D restricted from a proper 2-coloring extends.
    let c = manual(vec![0, 4, 8], vec![vec![1, 2, 3], vec![5, 6, 7]], 1);
    let mut partial = vec![None; 9];
    for v in [0, 4, 8] {
        partial[v] = Some((v % 2) as u8);
    }
    let out = complete_clusters(&p, &g, &c, &partial, Budget::default()).unwrap().unwrap();
    assert!(check_all(&p, &g, &Labeling::from_nodes(out, g.m())).is_empty());
    // Node 1 between two different colors has no extension.
    let c = manual(vec![0, 2], vec![vec![1]], 1);
    let partial = vec![Some(0), None, Some(1)];
    assert_eq!(complete_clusters(&p, &path(3), &c, &partial, Budget::default()).unwrap(), None);
}

struct ZeroRound;

impl Outcome<(), ()> for ZeroRound {
    type Label = u8;
    fn locality(&self, _: &G) -> usize {
        0
    }
    fn sample(&self, g: &G, seed: u64) -> Vec<u8> {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        g.nodes().map(|_| r.gen_range(0..3)).collect()
    }
}

#[test]
fn zero_round_outcome_always_succeeds_with_sublinear_locality() {
    let p = FreeLabels::<(), ()>::new(3);
    let mut pts = Vec::new();
    for k in 8..=12 {
        let g = cycle(1 << k);
        let res = simulate(&ZeroRound, &p, &g, k, SimOptions::default()).unwrap();
        assert!(res.labeling.is_some());
        res.clustering.check(&g).unwrap();
        pts.push(((g.n() as f64).ln(), (res.locality.total().max(1) as f64).ln()));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    assert!(slope < 0.8, "locality grows like n^{slope}");
}

fn union(gs: &[Instance]) -> Instance {
    gs.iter().skip(1).fold(gs[0].clone(), |a, b| a.disjoint_union(b))
}

#[test]
fn quantum_outcome_simulation() {
    let pi = Pi { problem: iterghz_as_linearizable() };
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..6 {
        let parts: Vec<Instance> = (0..3)
            .map(|_| lift(&BipartiteInstance::random(6, 3, &mut rng), 3).unwrap().graph)
            .collect();
        let g = union(&parts);
        let res = simulate(&QuantumPi, &pi, &g, i, SimOptions { eps: Some(1.0), ..Default::default() }).unwrap();
        res.clustering.check(&g).unwrap();
        res.partition.check(&g).unwrap();
        assert!(res.partition.parts.len() >= 3);
        let out = res.labeling.expect("completion exists");
        assert!(check_pi(&g, &pi.problem, &out).is_empty());
    }
}

#[test]
fn online_first_reveal_is_the_marginal() {
    let g = cycle(6);
    let o = parity_outcome(&g, 1);
    let law = online_law(&o, &g, &[3]);
    let m = o.law(&g).marginal(&[3]);
    for (k, w) in m {
        assert!((law[&k] - w as f64 / 64.0).abs() < 1e-12);
    }
}

#[test]
fn online_far_components_are_independent() {
    let g = path(8);
    let o = parity_outcome(&g, 1);
    let law = online_law(&o, &g, &[0, 7]);
    let m0 = o.law(&g).marginal(&[0]);
    let m7 = o.law(&g).marginal(&[7]);
    for (a, &wa) in &m0 {
        for (b, &wb) in &m7 {
            let want = wa as f64 * wb as f64 / 256.0 / 256.0;
            assert!((law[&vec![a[0], b[0]]] - want).abs() < 1e-12);
        }
    }
}

fn tv(a: &BTreeMap<Vec<u8>, f64>, b: &BTreeMap<Vec<u8>, f64>) -> f64 {
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    keys.into_iter().map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs()).sum::<f64>() / 2.0
}

#[test]
fn online_full_reveal_matches_outcome() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in [cycle(6), path(6), graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])] {
        let o = TableOutcome::from_local_rule(&g, 1, 3, |v, c| {
            ((c.iter().sum::<u64>() + v as u64) % 3 == 0) as u8
        });
        let mut order: Vec<NodeId> = g.nodes().collect();
        order.shuffle(&mut rng);
        let want: BTreeMap<Vec<u8>, f64> =
            o.law(&g).marginal(&order).into_iter().map(|(k, w)| (k, w as f64 / o.law.total as f64)).collect();
        assert!(tv(&online_law(&o, &g, &order), &want) < 1e-12);
        let trials = 10_000;
        let mut emp: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
        for s in 0..trials {
            *emp.entry(online_adapter(&o, &g, &order, s)).or_default() += 1.0 / trials as f64;
        }
        assert!(tv(&emp, &want) < 0.05);
    }
}
