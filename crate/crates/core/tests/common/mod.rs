//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use nakamura_core::{FiniteGame, NakamuraValue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// ν by the definition: the smallest subfamily of winning coalitions with
/// empty intersection, trying every subfamily of each size in turn.
pub fn naive_nakamura(universe: usize, winning: &[u64]) -> NakamuraValue {
    let full = if universe == 0 { 0 } else { (1u64 << universe) - 1 };
    // the whole family has the smallest intersection
    if winning.is_empty() || winning.iter().fold(full, |acc, &w| acc & w) != 0 {
        return NakamuraValue::Infinite;
    }
    for size in 1..=winning.len() {
        let hit = winning
            .iter()
            .combinations(size)
            .any(|family| family.into_iter().fold(full, |acc, &w| acc & w) == 0);
        if hit {
            return NakamuraValue::Finite(size);
        }
    }
    NakamuraValue::Infinite
}

/// Every winning mask, listed from the membership test.
pub fn winning_list(g: &FiniteGame) -> Vec<u64> {
    (0..1u64 << g.universe()).filter(|&m| g.wins(m)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each coalition wins independently with probability `density`.
pub fn random_family(rng: &mut impl Rng, universe: usize, density: f64) -> FiniteGame {
    FiniteGame::from_predicate(universe, |_| rng.gen_bool(density)).unwrap()
}

/// Upward closure of a few random coalitions.
pub fn random_monotone(rng: &mut impl Rng, universe: usize) -> FiniteGame {
    let count = rng.gen_range(1..=4);
    let full = (1u64 << universe) - 1;
    let gens = (0..count).map(|_| rng.gen_range(1..=full)).collect::<Vec<_>>();
    FiniteGame::from_predicate(universe, |m| gens.iter().any(|&g| g & m == g)).unwrap()
}

/// A mix of unstructured, sparse and monotone games, with the empty
/// coalition losing.
pub fn random_game(rng: &mut impl Rng, universe: usize) -> FiniteGame {
    let g = match rng.gen_range(0..4) {
        0 => random_family(rng, universe, 0.5),
        1 => random_family(rng, universe, 0.15),
        2 => random_family(rng, universe, 0.85),
        _ => random_monotone(rng, universe),
    };
    let masks = g.winning_masks().iter().copied().filter(|&m| m != 0).collect::<Vec<_>>();
    FiniteGame::from_masks(universe, masks).unwrap()
}
