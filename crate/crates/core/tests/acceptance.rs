//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so each line is printed as soon as it is known.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lcllab_core::depsim::{
    online_adapter, online_law, partition_d, sample_d_law, simulate, DPartition, Enumerable, QuantumPi, SimOptions,
    TableOutcome,
};
use lcllab_core::detectors::{
    audit_badgraph, audit_badoctopus, audit_badtree, badtree_radius, enumerate_badoctopus, fit_locality, solve_badgraph,
    solve_badoctopus, solve_badtree, BadTree, OctContext, OctOut, TreeOut,
};
use lcllab_core::gadgets::{
    base_instances, build_octopus, build_tree_gadget, check_octopus, check_proper, check_tree, lift, mutation_corpus,
    BipartiteInstance, Family, Instance, NodeKind, OctopusSpec, TreeGadgetSpec,
};
use lcllab_core::ghz::{
    bits_to_labels, check_iterghz, check_pi, check_promise, ghz_measure, iterghz_as_linearizable, labels_to_bits,
    linearizable_to_promise, promise_to_linearizable, quantum_solve_iterghz, solve_pi, GhzLabel, GhzTriple, Pi,
};
use lcllab_core::graph::{bfs, LabeledGraph, NodeId, Scope};
use lcllab_core::lcl::{enumerate_solutions, SearchOptions, Violation};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let el = start.elapsed();
    ensure(el < limit, || format!("took {el:.1?}, limit {limit:?}"))
}

fn family_check(f: Family, g: &Instance) -> Vec<Violation> {
    match f {
        Family::Tree => check_tree(g),
        Family::Octopus => check_octopus(g),
        Family::Proper => check_proper(g),
    }
}

/// Per-base cap that keeps each family's corpus at 1000+ cases.
fn corpus_cap(f: Family) -> usize {
    match f {
        Family::Tree | Family::Octopus => usize::MAX,
        Family::Proper => 400,
    }
}

const FAMILIES: [Family; 3] = [Family::Tree, Family::Octopus, Family::Proper];

fn gadget_soundness() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut canonical = 0;
    for f in FAMILIES {
        for (name, g) in base_instances(f, 1) {
            let v = family_check(f, &g);
            ensure(v.is_empty(), || format!("canonical {name}: {:?}", v[0]))?;
            canonical += 1;
        }
    }
    for h in 1..=5 {
        let g = build_tree_gadget(TreeGadgetSpec { height: h });
        ensure(check_tree(&g).is_empty(), || format!("tree height {h}"))?;
        canonical += 1;
    }
    for spec in OctopusSpec::all_up_to(14) {
        let (g, _) = build_octopus(&spec).map_err(|e| format!("{spec:?}: {e}"))?;
        ensure(check_octopus(&g).is_empty(), || format!("octopus {spec:?}"))?;
        canonical += 1;
    }
    for _ in 0..50 {
        let b = BipartiteInstance::random(rng.gen_range(1..=50), rng.gen_range(3..=8), &mut rng);
        let g = lift(&b, rng.gen_range(1..=3)).map_err(|e| e.to_string())?.graph;
        ensure(check_proper(&g).is_empty(), || "canonical lift flagged".into())?;
        canonical += 1;
    }
    let mut sizes = Vec::new();
    for f in FAMILIES {
        let corpus = mutation_corpus(f, corpus_cap(f), 1);
        ensure(corpus.len() >= 1000, || format!("{f:?} corpus has only {} cases", corpus.len()))?;
        for c in &corpus {
            ensure(!family_check(f, &c.graph).is_empty(), || format!("{} {:?} not flagged", c.base, c.mutation))?;
        }
        sizes.push(format!("{f:?}={}", corpus.len()));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{canonical} canonical builds clean; mutants all flagged ({}); {:.1?}", sizes.join(" "), start.elapsed()))
}

fn unique_bot() -> Verdict {
    let start = Instant::now();
    for height in 1..=3 {
        let g = build_tree_gadget(TreeGadgetSpec { height });
        let sols = enumerate_solutions(&BadTree, &g, &SearchOptions::default()).map_err(|e| e.to_string())?;
        ensure(sols.len() == 1, || format!("badTree height {height}: {} solutions", sols.len()))?;
        let all_bot = sols[0].node_values().is_some_and(|v| v.iter().all(|o| *o == TreeOut::Bot));
        ensure(all_bot, || format!("badTree height {height}: sole solution is not all-⊥"))?;
    }
    let specs = OctopusSpec::all_up_to(10);
    for spec in &specs {
        let (g, _) = build_octopus(spec).map_err(|e| e.to_string())?;
        let ctx = OctContext::new(&g, None);
        let sols = enumerate_badoctopus(&ctx, &vec![false; g.n()], &SearchOptions::default())
            .map_err(|e| format!("{spec:?}: {e}"))?;
        ensure(sols.len() == 1, || format!("badOctopus {spec:?}: {} solutions", sols.len()))?;
        ensure(sols[0].iter().all(|o| *o == OctOut::Bot), || format!("badOctopus {spec:?}: not all-⊥"))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("trees h1..3 and {} octopi (≤10 nodes) have only all-⊥; {:.1?}", specs.len(), start.elapsed()))
}

/// Distance from which a node decided at `round` can have heard anything:
/// its round count, capped by its eccentricity in its component.
fn view_radius(g: &Instance, rounds: &[usize]) -> usize {
    g.nodes()
        .map(|v| {
            let d = bfs(g, &[v], Some(rounds[v]), Scope::FULL);
            d.into_iter().filter(|&x| x != usize::MAX).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

fn liveness() -> Verdict {
    let mut report = Vec::new();
    let mut worst: f64 = 0.0;
    for f in FAMILIES {
        let corpus = mutation_corpus(f, corpus_cap(f), 1);
        let mut pts = Vec::with_capacity(corpus.len());
        let mut raw = Vec::with_capacity(corpus.len());
        for c in &corpus {
            let g = &c.graph;
            let (a, rounds) = match f {
                Family::Tree => (audit_badtree(g), badtree_radius(&solve_badtree(g))),
                Family::Octopus => (audit_badoctopus(g), solve_badoctopus(g).round),
                Family::Proper => (audit_badgraph(g), solve_badgraph(g).round),
            };
            ensure(a.ok(), || format!("{} {:?}: {a:?}", c.base, c.mutation))?;
            pts.push((a.n, view_radius(g, &rounds)));
            raw.push((a.n, a.max_round));
        }
        let fit = fit_locality(&pts);
        worst = worst.max(fit.max_ratio);
        report.push(format!(
            "{f:?}: C={:.2} (fit {:.2}+{:.2}·log n; decision rounds alone give {:.2})",
            fit.max_ratio,
            fit.intercept,
            fit.slope,
            fit_locality(&raw).max_ratio
        ));
    }
    ensure(worst <= 10.0, || format!("fitted C = {worst:.2} > 10; {}", report.join("; ")))?;
    Ok(report.join("; "))
}

fn ghz_probability_one() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut drift: f64 = 0.0;
    let mut games = 0usize;
    for inp in 0..8u8 {
        let x = [inp & 1 != 0, inp & 2 != 0, inp & 4 != 0];
        let even = x.iter().filter(|&&b| b).count() % 2 == 0;
        for _ in 0..12_500 {
            let mut t = GhzTriple::new();
            let y = ghz_measure(&mut t, x, &mut rng).map_err(|e| e.to_string())?;
            drift = drift.max((t.norm_sqr() - 1.0).abs());
            games += 1;
            if even {
                ensure(y[0] ^ y[1] ^ y[2] == (x[0] | x[1] | x[2]), || format!("lost game x={x:?} y={y:?}"))?;
            }
        }
    }
    // All-first games inside iterated instances: degree-1 whites make
    // every black all-first; mixed instances cover the rest.
    let mut all_first = 0usize;
    for i in 0..400u64 {
        let b = if i % 2 == 0 {
            BipartiteInstance::random(3 * rng.gen_range(1..=20), 1, &mut rng)
        } else {
            BipartiteInstance::random(rng.gen_range(3..=40), rng.gen_range(1..=6).max(2), &mut rng)
        };
        let run = quantum_solve_iterghz(&b, i);
        drift = drift.max(run.norm_drift);
        let v = check_iterghz(&b, &run.out);
        ensure(v.is_empty(), || format!("iterated instance {i}: {:?}", v[0]))?;
        let pos = b.positions();
        for k in 0..b.blacks {
            let es = b.black_edges(k);
            if es.len() == 3 && es.iter().all(|&e| pos[e] == 1) {
                let mut ys: Vec<u8> = es.iter().map(|&e| u8::from(run.out[e].y)).collect();
                ys.sort_unstable();
                ensure(ys == [0, 0, 1], || format!("all-first game gave {ys:?}"))?;
                all_first += 1;
            }
        }
    }
    ensure(all_first >= 1000, || format!("only {all_first} all-first games"))?;
    ensure(drift < 1e-12, || format!("norm drift {drift:e}"))?;
    Ok(format!("{games} standalone games, {all_first} all-first games; drift {drift:.1e}"))
}

fn log2_ceil(n: usize) -> u32 {
    (n as f64).log2().ceil() as u32
}

/// Random instance with at most 200 whites, white degree at most 8,
/// lifted with h = ⌈log₂ n⌉. Whites are drawn log-uniformly.
fn random_lift(rng: &mut ChaCha8Rng) -> Instance {
    loop {
        let whites = (200f64.powf(rng.gen::<f64>()).round() as usize).clamp(1, 200);
        let d = rng.gen_range(1..=8usize);
        if whites * d < 3 || (d == 1 && whites % 3 != 0) {
            continue;
        }
        let b = BipartiteInstance::random(whites, d, rng);
        return lift(&b, log2_ceil(b.whites + b.blacks).max(1)).expect("valid instance").graph;
    }
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn end_to_end_pi() -> Verdict {
    let p = iterghz_as_linearizable();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut largest = 0;
    for seed in 0..100u64 {
        let g = random_lift(&mut rng);
        largest = largest.max(g.n());
        let run = solve_pi(&g, seed).map_err(|e| format!("run {seed}: {e}"))?;
        let v = check_pi(&g, &p, &run.out);
        ensure(v.is_empty(), || format!("run {seed} (n′={}): {:?}", g.n(), v[0]))?;
    }
    // Eight instances per size class n′ ∈ [2^k, 2^{k+1}), k = 9..14.
    let mut fill = [0usize; 6];
    let mut pts: Vec<(usize, (f64, f64))> = Vec::new();
    while fill.iter().any(|&f| f < 8) {
        let g = random_lift(&mut rng);
        let k = (g.n() as f64).log2().floor() as usize;
        if !(9..15).contains(&k) || fill[k - 9] >= 8 {
            continue;
        }
        fill[k - 9] += 1;
        let run = solve_pi(&g, k as u64).map_err(|e| e.to_string())?;
        ensure(check_pi(&g, &p, &run.out).is_empty(), || format!("slope instance n′={}", g.n()))?;
        pts.push((k, ((g.n() as f64).log2(), run.locality as f64)));
    }
    let all: Vec<(f64, f64)> = pts.iter().map(|p| p.1).collect();
    let s = slope(&all);
    let mut devs = Vec::new();
    for drop in 9..15 {
        let kept: Vec<(f64, f64)> = pts.iter().filter(|p| p.0 != drop).map(|p| p.1).collect();
        devs.push(slope(&kept) / s - 1.0);
    }
    let half = |lo: usize, hi: usize| {
        let h: Vec<(f64, f64)> = pts.iter().filter(|p| (lo..hi).contains(&p.0)).map(|p| p.1).collect();
        slope(&h)
    };
    let worst = devs.iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let detail = format!(
        "100/100 valid (n′ ≤ {largest}); radius ≈ {s:.2}·log₂ n′ over 2^9..2^14, leave-one-size-out drift ≤ {:.1}%, half-range slopes {:.2}/{:.2}",
        worst * 100.0,
        half(9, 12),
        half(12, 15)
    );
    ensure(s > 0.0 && worst <= 0.15, || detail.clone())?;
    Ok(detail)
}

fn bijection() -> Verdict {
    let p = iterghz_as_linearizable();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for i in 0..100 {
        let b = BipartiteInstance::random(rng.gen_range(1..=12), rng.gen_range(3..=5), &mut rng);
        let l = lift(&b, rng.gen_range(1..=3)).map_err(|e| e.to_string())?;
        let bits = quantum_solve_iterghz(&b, i).out;
        let sol = bits_to_labels(&b, &bits);
        ensure(p.check(&b, &sol).is_empty(), || format!("instance {i}: solution invalid"))?;
        let out = linearizable_to_promise(&l.comp, &sol);
        ensure(check_promise(&l.graph, &p, &out, None).is_empty(), || format!("instance {i}: image invalid"))?;
        ensure(promise_to_linearizable(&l.comp, b.edges.len(), &out).as_ref() == Some(&sol), || {
            format!("instance {i}: promise → linearizable is not the inverse")
        })?;
        ensure(linearizable_to_promise(&l.comp, &sol) == out, || format!("instance {i}: not deterministic"))?;
        ensure(labels_to_bits(&sol) == bits, || format!("instance {i}: bits round trip"))?;
        ensure(l.graph.nodes().all(|v| out[v].is_some() == (*l.graph.label(v) == NodeKind::Port)), || {
            format!("instance {i}: labels outside the ports")
        })?;
        let e = rng.gen_range(0..b.edges.len());
        let mut bad = sol.clone();
        bad[e] = GhzLabel::ALL[rng.gen_range(0..6)];
        let lin_ok = p.check(&b, &bad).is_empty();
        let pro_ok = check_promise(&l.graph, &p, &linearizable_to_promise(&l.comp, &bad), None).is_empty();
        ensure(lin_ok == pro_ok, || format!("instance {i}: validity not preserved under corruption"))?;
    }
    Ok("100 random solutions round trip both ways and keep validity".into())
}

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

fn union(gs: &[Instance]) -> Instance {
    gs.iter().skip(1).fold(gs[0].clone(), |a, b| a.disjoint_union(b))
}

fn product_matches_joint(o: &TableOutcome<u8>, g: &G, dp: &DPartition) -> bool {
    let (prod, total) = sample_d_law(o, g, dp);
    let law = o.law(g);
    let mut d: Vec<NodeId> = dp.parts.concat();
    d.sort_unstable();
    let joint = law.marginal(&d);
    let scale = total / law.total as u128;
    joint.len() == prod.len() && joint.iter().all(|(k, &c)| prod.get(k) == Some(&(c as u128 * scale)))
}

fn depsim_pipeline() -> Verdict {
    let start = Instant::now();
    let pi = Pi { problem: iterghz_as_linearizable() };
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    type Make = Box<dyn Fn(&mut ChaCha8Rng) -> Instance>;
    let configs: Vec<(&str, Option<f64>, Make)> = vec![
        (
            "3×lift(w6,h3) ε=1",
            Some(1.0),
            Box::new(|r| union(&(0..3).map(|_| lift(&BipartiteInstance::random(6, 3, r), 3).unwrap().graph).collect::<Vec<_>>())),
        ),
        ("lift(w12,h3) ε=0.5", Some(0.5), Box::new(|r| lift(&BipartiteInstance::random(12, 3, r), 3).unwrap().graph)),
        (
            "lift(w≤8,h≤2) default ε",
            None,
            Box::new(|r| {
                let w = r.gen_range(1..=8);
                lift(&BipartiteInstance::random(w, 3, r), r.gen_range(1..=2)).unwrap().graph
            }),
        ),
    ];
    let mut report = Vec::new();
    for (name, eps, make) in &configs {
        let mut ok = 0;
        let mut parts = 0;
        for trial in 0..200u64 {
            let g = make(&mut rng);
            let res = simulate(&QuantumPi, &pi, &g, trial, SimOptions { eps: *eps, ..Default::default() })
                .map_err(|e| format!("{name} trial {trial}: {e}"))?;
            res.clustering.check(&g).map_err(|e| format!("{name} trial {trial}: clustering {e}"))?;
            res.partition.check(&g).map_err(|e| format!("{name} trial {trial}: partition {e}"))?;
            parts += res.partition.parts.len();
            if res.labeling.is_some_and(|l| check_pi(&g, &pi.problem, &l).is_empty()) {
                ok += 1;
            }
        }
        ensure(ok >= 198, || format!("{name}: {ok}/200 valid"))?;
        report.push(format!("{name}: {ok}/200 (mean parts {:.1})", parts as f64 / 200.0));
    }
    // Exact law of sample_D on enumerable outcomes, graphs ≤ 8 nodes.
    let mut exact = 0;
    let mut graphs = vec![path(8), cycle(8), path(5), cycle(6)];
    for _ in 0..6 {
        let n = rng.gen_range(4..=8);
        graphs.push(random_graph(n, &mut rng));
    }
    for g in &graphs {
        for t in 0..=1 {
            let parity = TableOutcome::from_local_rule(g, t, 2, |_, c| (c.iter().sum::<u64>() % 2) as u8);
            let max = TableOutcome::from_local_rule(g, t, 2, |_, c| c.iter().copied().max().unwrap_or(0) as u8);
            for _ in 0..10 {
                let mut d: Vec<NodeId> = g.nodes().collect();
                d.shuffle(&mut rng);
                d.truncate(rng.gen_range(1..=g.n()));
                let dp = partition_d(g, &d, t);
                for o in [&parity, &max] {
                    ensure(product_matches_joint(o, g, &dp), || format!("sample_D law differs on n={}", g.n()))?;
                    exact += 1;
                }
            }
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("{}; {exact} exact sample_D laws; {:.1?}", report.join("; "), start.elapsed()))
}

fn tv(a: &BTreeMap<Vec<u8>, f64>, b: &BTreeMap<Vec<u8>, f64>) -> f64 {
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    keys.into_iter().map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs()).sum::<f64>() / 2.0
}

fn online_adapter_law() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst: f64 = 0.0;
    let graphs = [cycle(6), path(6), graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])];
    for g in &graphs {
        let o = TableOutcome::from_local_rule(g, 1, 3, |v, c| ((c.iter().sum::<u64>() + v as u64) % 3 == 0) as u8);
        let mut order: Vec<NodeId> = g.nodes().collect();
        order.shuffle(&mut rng);
        let law = o.law(g);
        let want: BTreeMap<Vec<u8>, f64> =
            law.marginal(&order).into_iter().map(|(k, w)| (k, w as f64 / law.total as f64)).collect();
        ensure(tv(&online_law(&o, g, &order), &want) < 1e-12, || "online law is not the outcome law".into())?;
        let trials = 10_000;
        let mut emp: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
        for s in 0..trials {
            *emp.entry(online_adapter(&o, g, &order, s)).or_default() += 1.0 / trials as f64;
        }
        let d = tv(&emp, &want);
        worst = worst.max(d);
        ensure(d < 0.05, || format!("TV {d:.4}"))?;
    }
    // Far-apart reveals: exact product of the two marginals.
    for (g, a, b) in [(path(8), 0, 7), (path(6), 0, 5), (graph(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]), 1, 4)] {
        let o = TableOutcome::from_local_rule(&g, 1, 2, |_, c| (c.iter().sum::<u64>() % 2) as u8);
        let law = o.law(&g);
        let joint = online_law(&o, &g, &[a, b]);
        let (ma, mb) = (law.marginal(&[a]), law.marginal(&[b]));
        let tot = law.total as f64;
        for (x, &wa) in &ma {
            for (y, &wb) in &mb {
                let want = wa as f64 * wb as f64 / tot / tot;
                let got = joint.get(&vec![x[0], y[0]]).copied().unwrap_or(0.0);
                ensure((got - want).abs() < 1e-12, || format!("reveal {a},{b}: {got} vs {want}"))?;
            }
        }
    }
    Ok(format!("full-reveal TV ≤ {worst:.4} over 10^4 trials on 3 graphs; far reveals factor exactly"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("gadget soundness and completeness", gadget_soundness),
        ("unique all-⊥ solutions", unique_bot),
        ("detection liveness", liveness),
        ("GHZ wins with probability 1", ghz_probability_one),
        ("end-to-end Π", end_to_end_pi),
        ("promise/linearizable bijection", bijection),
        ("dependent-outcome simulation", depsim_pipeline),
        ("online adapter", online_adapter_law),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match verdict {
            Ok(d) => println!("PASS {}. {name}: {d} [{:.1?}]", i + 1, start.elapsed()),
            Err(e) => {
                failed += 1;
                println!("FAIL {}. {name}: {e} [{:.1?}]", i + 1, start.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
