use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::topology::Network;
use crate::Label;

/// Random digraph with source 1 where every node is reachable from the source.
///
/// A random spanning arborescence rooted at the source is laid down first,
/// then up to `n` extra edges are sprinkled on top. Deterministic in `seed`.
pub fn random_reachable_digraph(n: usize, seed: u64) -> Network {
    let n = n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Label> = (2..=n).collect();
    order.shuffle(&mut rng);
    order.insert(0, 1);

    let mut edges = BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.insert((parent, order[i]));
    }
    if n > 1 {
        let extra = rng.gen_range(0..=n);
        for _ in 0..extra {
            let u = rng.gen_range(1..=n);
            let v = rng.gen_range(1..=n);
            if u != v {
                edges.insert((u, v));
            }
        }
    }
    Network::new(n, 1, edges).expect("generated edges are valid")
}

/// A chain over a random permutation of `1..=n` that starts at label 1.
pub fn random_chain_order(n: usize, seed: u64) -> Vec<Label> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rest: Vec<Label> = (2..=n.max(1)).collect();
    rest.shuffle(&mut rng);
    rest.insert(0, 1);
    rest
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton() {
        let g = random_reachable_digraph(1, 99);
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn deterministic_and_reachable() {
        let a = random_reachable_digraph(10, 7);
        let b = random_reachable_digraph(10, 7);
        assert_eq!(a, b);
        assert!(a.all_reachable());
        assert_ne!(a, random_reachable_digraph(10, 8));
    }

    #[test]
    fn many_seeds_reachable() {
        for seed in 0..200 {
            let n = 1 + (seed as usize % 40);
            assert!(random_reachable_digraph(n, seed).all_reachable());
        }
    }

    #[test]
    fn chain_order_is_permutation() {
        let mut order = random_chain_order(12, 3);
        assert_eq!(order[0], 1);
        order.sort_unstable();
        assert_eq!(order, (1..=12).collect::<Vec<_>>());
    }
}
