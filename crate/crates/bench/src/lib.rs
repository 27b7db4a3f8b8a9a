//! Seeded instances shared by the benchmarks.

use transopt_core::generate::{random_gas, random_tree, seeded, star_polygon};
use transopt_core::{FuelInstance, OvrpInstance, RootedTree, SimplePolygon, ValueMode};

pub fn tree(n: usize, seed: u64) -> RootedTree {
    let edges = random_tree(&mut seeded(seed), n, None, 9);
    RootedTree::new(n, &edges, 0).expect("generated trees are valid")
}

pub fn ovrp(n: usize, p: usize, seed: u64) -> OvrpInstance {
    OvrpInstance::new(tree(n, seed), p).expect("p ≥ 1")
}

pub fn fuel(n: usize, seed: u64) -> FuelInstance {
    let mut rng = seeded(seed);
    let edges = random_tree(&mut rng, n, None, 9);
    let gas = random_gas(&mut rng, n, 9);
    let tree = RootedTree::new(n, &edges, 0).expect("generated trees are valid");
    FuelInstance::new(tree, gas, ValueMode::Integer).expect("integer gas")
}

pub fn polygon(n: usize, seed: u64) -> SimplePolygon {
    star_polygon(&mut seeded(seed), n)
}
