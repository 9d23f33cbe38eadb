use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    apply_mutation, build_octopus, build_tree_gadget, enumerate_mutations, lift, BipartiteInstance, Family, Instance,
    Mutation, OctopusSpec, TreeGadgetSpec,
};

/// One perturbed gadget.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub family: Family,
    pub base: String,
    pub mutation: Mutation,
    pub graph: Instance,
}

/// Canonical gadgets the corpus perturbs: tree heights 2..=5, octopi up to
/// 60 nodes, lifts of random bipartite graphs up to 50 whites.
pub fn base_instances(family: Family, seed: u64) -> Vec<(String, Instance)> {
    match family {
        Family::Tree => (2..=5).map(|h| (format!("tree-h{h}"), build_tree_gadget(TreeGadgetSpec { height: h }))).collect(),
        Family::Octopus => {
            let specs = [
                OctopusSpec::uniform(1, vec![1], 1),
                OctopusSpec::uniform(1, vec![2], 2),
                OctopusSpec::uniform(2, vec![2, 1], 2),
                OctopusSpec::from_flat(3, vec![1, 2, 1, 2], &[1, 3, 2, 1, 2, 1]).unwrap(),
                OctopusSpec::uniform(3, vec![2, 2, 2, 2], 2),
                OctopusSpec::uniform(3, vec![1, 1, 1, 1], 3),
                OctopusSpec::uniform(2, vec![2, 2], 3),
            ];
            specs
                .iter()
                .map(|s| {
                    let name = format!("octopus-x{}-{:?}-{}", s.x, s.eta, s.node_count());
                    (name, build_octopus(s).unwrap().0)
                })
                .collect()
        }
        Family::Proper => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::new();
            let b = BipartiteInstance::new(2, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1), (0, 0), (1, 1)]);
            out.push(("lift-2x2".to_string(), lift(&b, 1).unwrap().graph));
            for (whites, deg, h) in [(3, 3, 1), (6, 4, 2), (12, 8, 2), (50, 8, 1)] {
                let b = BipartiteInstance::random(whites, deg, &mut rng);
                out.push((format!("lift-w{whites}-d{deg}-h{h}"), lift(&b, h).unwrap().graph));
            }
            out
        }
    }
}

/// Every single mutation of each base, capped at `cap` per base by a
/// seeded sample.
pub fn mutation_corpus(family: Family, cap: usize, seed: u64) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = Vec::new();
    for (base, g) in base_instances(family, seed) {
        let mut ms = enumerate_mutations(&g, family);
        if ms.len() > cap {
            ms.shuffle(&mut rng);
            ms.truncate(cap);
        }
        for m in ms {
            out.push(CorpusCase { family, base: base.clone(), mutation: m, graph: apply_mutation(&g, m) });
        }
    }
    out
}
