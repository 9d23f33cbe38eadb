use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gadgets::{lift, BipartiteInstance, LiftResult};

/// Random (Δ, 3)-biregular bipartite graph: every white has degree
/// exactly `delta`, every black degree 3, σ_w a random permutation.
/// `whites` is rounded up until the stub count is a multiple of 3.
pub fn biregular(whites: usize, delta: usize, seed: u64) -> BipartiteInstance {
    assert!(whites >= 1 && delta >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = whites;
    while (w * delta) % 3 != 0 {
        w += 1;
    }
    let mut stubs: Vec<usize> = (0..w).flat_map(|u| std::iter::repeat(u).take(delta)).collect();
    stubs.shuffle(&mut rng);
    let edges = stubs.iter().enumerate().map(|(i, &u)| (u, i / 3)).collect();
    let mut b = BipartiteInstance::new(w, stubs.len() / 3, edges);
    for o in &mut b.order {
        o.shuffle(&mut rng);
    }
    b
}

/// Lower-bound style instance of roughly `n` nodes: about n^{1/3} players
/// of degree Δ, lifted with port gadgets of about n^{1/3} nodes each.
pub fn hard_instance(delta: usize, n: usize, seed: u64) -> (BipartiteInstance, LiftResult) {
    let third = (n.max(8) as f64).cbrt();
    let whites = (third.round() as usize).max(3);
    // A port gadget of height h has 2^h - 1 nodes.
    let h = (third.log2().round() as u32).max(1);
    let b = biregular(whites, delta, seed);
    let l = lift(&b, h).expect("biregular instances are valid");
    (b, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::check_proper;

    #[test]
    fn biregular_degrees() {
        let b = biregular(10, 4, 1);
        assert_eq!((b.whites * 4) % 3, 0);
        assert!((0..b.whites).all(|w| b.white_degree(w) == 4));
        assert!((0..b.blacks).all(|k| b.black_edges(k).len() == 3));
        b.validate().unwrap();
    }

    #[test]
    fn hard_instance_is_proper() {
        let (_, l) = hard_instance(5, 4096, 2);
        assert!(check_proper(&l.graph).is_empty());
        assert!(l.graph.n() > 1000);
    }
}
