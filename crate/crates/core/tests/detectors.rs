use lcllab_core::detectors::{
    audit_badgraph, audit_badoctopus, audit_badtree, enumerate_badoctopus, fit_locality, solve_badgraph,
    solve_badoctopus, solve_badtree, BadGraph, BadOctopus, BadTree, GraphOut, OctContext, OctOut, TreeOut,
};
use lcllab_core::gadgets::{
    apply_mutation, build_octopus, build_tree_gadget, enumerate_mutations, lift, mutation_corpus, BipartiteInstance, Family, OctopusSpec, TreeGadgetSpec,
};
use lcllab_core::lcl::{enumerate_solutions, SearchOptions};

#[test]
fn badtree_bot_is_unique_on_small_gadgets() {
    for height in 1..=3 {
        let g = build_tree_gadget(TreeGadgetSpec { height });
        let sols = enumerate_solutions(&BadTree, &g, &SearchOptions::default()).unwrap();
        assert_eq!(sols.len(), 1, "height {height}");
        assert!(sols[0].node_values().unwrap().iter().all(|o| *o == TreeOut::Bot));
    }
}

#[test]
fn badoctopus_bot_is_unique_on_small_octopi() {
    let specs = OctopusSpec::all_up_to(10);
    assert!(specs.len() > 10);
    for spec in specs {
        let (g, _) = build_octopus(&spec).unwrap();
        let ctx = OctContext::new(&g, None);
        let sols = enumerate_badoctopus(&ctx, &vec![false; g.n()], &SearchOptions::default()).unwrap();
        assert_eq!(sols.len(), 1, "{spec:?}");
        assert!(sols[0].iter().all(|o| *o == OctOut::Bot));
    }
}

fn sorted(mut v: Vec<Vec<OctOut>>) -> Vec<Vec<OctOut>> {
    v.sort();
    v
}

#[test]
fn staged_enumeration_matches_generic_search() {
    let opts = SearchOptions::default();
    let mut cases = Vec::new();
    for spec in OctopusSpec::all_up_to(5) {
        let (g, _) = build_octopus(&spec).unwrap();
        cases.push(g.clone());
        let mut m = g.clone();
        m.input_mut(0).mark = true;
        cases.push(m);
    }
    let (g, _) = build_octopus(&OctopusSpec::uniform(1, vec![1], 1)).unwrap();
    for mu in enumerate_mutations(&g, Family::Octopus) {
        cases.push(apply_mutation(&g, mu));
    }
    for g in cases {
        let generic: Vec<Vec<OctOut>> = enumerate_solutions(&BadOctopus, &g, &opts)
            .unwrap()
            .into_iter()
            .map(|l| l.node_values().unwrap())
            .collect();
        let marks: Vec<bool> = g.nodes().map(|v| g.input(v).mark).collect();
        let staged = enumerate_badoctopus(&OctContext::new(&g, None), &marks, &opts).unwrap();
        assert_eq!(sorted(generic), sorted(staged));
    }
}

#[test]
fn badgraph_bot_is_unique_on_tiny_lifts() {
    for b in [
        BipartiteInstance::new(1, 1, vec![(0, 0)]),
        BipartiteInstance::new(1, 1, vec![(0, 0), (0, 0), (0, 0)]),
        BipartiteInstance::new(3, 1, vec![(0, 0), (1, 0), (2, 0)]),
    ] {
        let g = lift(&b, 1).unwrap().graph;
        let sols = enumerate_solutions(&BadGraph, &g, &SearchOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].node_values().unwrap().iter().all(|o| *o == GraphOut::Bot));
    }
}

#[test]
fn marked_nodes_force_errors() {
    let mut g = build_tree_gadget(TreeGadgetSpec { height: 3 });
    g.input_mut(5).mark = true;
    let run = solve_badtree(&g);
    assert!(run.out.iter().all(|o| !o.is_bot()));

    let (mut g, lay) = build_octopus(&OctopusSpec::uniform(2, vec![2, 2], 2)).unwrap();
    g.input_mut(lay.head_root).mark = true;
    let run = solve_badoctopus(&g);
    assert!(run.out.iter().all(|o| !o.is_bot()));
}

#[test]
fn liveness_on_tree_corpus() {
    let corpus = mutation_corpus(Family::Tree, usize::MAX, 1);
    assert!(corpus.len() >= 1000);
    let mut pts = Vec::new();
    for c in &corpus {
        let a = audit_badtree(&c.graph);
        assert!(a.ok(), "{} {:?}: {a:?}", c.base, c.mutation);
        pts.push((a.n, a.max_round));
    }
    assert!(fit_locality(&pts).slope <= 10.0);
}

#[test]
fn liveness_on_octopus_corpus() {
    let corpus = mutation_corpus(Family::Octopus, 400, 2);
    let mut pts = Vec::new();
    for c in &corpus {
        let a = audit_badoctopus(&c.graph);
        assert!(a.ok(), "{} {:?}: {a:?}", c.base, c.mutation);
        pts.push((a.n, a.max_round));
    }
    assert!(fit_locality(&pts).slope <= 10.0);
}

#[test]
fn badgraph_postcondition_on_proper_corpus() {
    let corpus = mutation_corpus(Family::Proper, 150, 3);
    for c in &corpus {
        let a = audit_badgraph(&c.graph);
        assert!(a.ok(), "{} {:?}: {a:?}", c.base, c.mutation);
    }
}

#[test]
fn clean_lift_is_all_bot() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
    let b = BipartiteInstance::random(20, 6, &mut rng);
    let g = lift(&b, 3).unwrap().graph;
    assert!(solve_badgraph(&g).out.iter().all(|o| o.is_bot()));
}
