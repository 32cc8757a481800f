//! Witness games for the classification table.

use crate::coalition::{universe_mask, Coalition};
use crate::error::{Error, Result};
use crate::game::{check_enumerable, FiniteGame};

fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParams {
        name: name.into(),
        reason: reason.into(),
    }
}

/// Winning iff more than half of the `n` players, `n` odd.
pub fn majority(n: usize) -> Result<FiniteGame> {
    if n % 2 == 0 {
        return Err(invalid("majority", format!("n = {n} must be odd")));
    }
    FiniteGame::from_predicate(n, |m| 2 * m.count_ones() as usize > n)
}

/// All coalitions containing player `i`.
pub fn dictator(i: usize, n: usize) -> Result<FiniteGame> {
    if i >= n {
        return Err(Error::PlayerOutOfRange { player: i, universe: n });
    }
    FiniteGame::from_predicate(n, |m| m >> i & 1 == 1)
}

/// All coalitions containing every member of `t`.
pub fn unanimity(t: &[usize], n: usize) -> Result<FiniteGame> {
    let t = Coalition::from_members(t.iter().copied(), n)?.mask();
    FiniteGame::from_predicate(n, |m| m & t == t)
}

/// Consecutive blocks `T_0, …, T_{k-1}` with the given sizes.
pub fn partition_blocks(sizes: &[usize]) -> Result<Vec<u64>> {
    if sizes.contains(&0) {
        return Err(invalid("partition", "block sizes must be positive"));
    }
    let total: usize = sizes.iter().sum();
    check_enumerable(total)?;
    let mut start = 0;
    Ok(sizes
        .iter()
        .map(|&s| {
            let block = universe_mask(s) << start;
            start += s;
            block
        })
        .collect())
}

fn blocks_included(blocks: &[u64], m: u64) -> usize {
    blocks.iter().filter(|&&b| m & b == b).count()
}

/// `S` wins iff it includes at least `k − 1` of the `k` blocks.
///
/// Three singleton blocks give the strong majority game, so that case needs
/// `allow_singletons`.
pub fn partition_type3(sizes: &[usize], allow_singletons: bool) -> Result<FiniteGame> {
    let k = sizes.len();
    if k < 3 {
        return Err(invalid("partition_type3", format!("needs k >= 3 blocks, got {k}")));
    }
    if !allow_singletons && k == 3 && sizes.iter().all(|&s| s == 1) {
        return Err(invalid(
            "partition_type3",
            "three singleton blocks give a strong game; set allow_singletons to build it",
        ));
    }
    let blocks = partition_blocks(sizes)?;
    FiniteGame::from_predicate(sizes.iter().sum(), |m| blocks_included(&blocks, m) + 1 >= k)
}

/// `S` wins iff it includes exactly `k − 1` of the `k` blocks.
pub fn partition_type11(sizes: &[usize]) -> Result<FiniteGame> {
    let k = sizes.len();
    if k < 3 {
        return Err(invalid("partition_type11", format!("needs k >= 3 blocks, got {k}")));
    }
    let blocks = partition_blocks(sizes)?;
    FiniteGame::from_predicate(sizes.iter().sum(), |m| blocks_included(&blocks, m) + 1 == k)
}

/// Carrier `{0,1,2}`; restrictions `{0}` and `{1}` win.
pub fn type11_k2() -> FiniteGame {
    FiniteGame::from_masks(3, [0b001, 0b010]).expect("static game")
}

/// Carrier `{0,1,2}`; `{0,1,2}`, `{0}`, `{1}`, `{2}` win.
pub fn example_type9() -> FiniteGame {
    FiniteGame::from_masks(3, [0b111, 0b001, 0b010, 0b100]).expect("static game")
}

/// Carrier `{0,1,2}`; `{0,1,2}`, `{1,2}`, `{0}`, `{1}`, `{2}` win.
pub fn example_type13() -> FiniteGame {
    FiniteGame::from_masks(3, [0b111, 0b110, 0b001, 0b010, 0b100]).expect("static game")
}

/// Carrier `{0,1,2}`; `{0,1,2}`, `{1,2}`, `{0}`, `{1}` win.
pub fn example_type15() -> FiniteGame {
    FiniteGame::from_masks(3, [0b111, 0b110, 0b001, 0b010]).expect("static game")
}

/// Coalitions excluding at most one of the `k` players.
pub fn veto_free_rule(k: usize) -> Result<FiniteGame> {
    if k < 2 {
        return Err(invalid("veto_free_rule", format!("needs k >= 2, got {k}")));
    }
    FiniteGame::from_predicate(k, |m| m.count_ones() as usize + 1 >= k)
}

/// Unanimity of `{0,1}`: monotonic, proper, nonstrong, weak.
pub fn type4_witness() -> FiniteGame {
    unanimity(&[0, 1], 2).expect("static game")
}

/// `S ∩ {0,1} ≠ ∅`: monotonic, nonproper, strong, nonweak.
pub fn type5_witness() -> FiniteGame {
    FiniteGame::from_masks(2, [0b01, 0b10, 0b11]).expect("static game")
}

/// `S ∩ T ⊇ {0,1}` or `S ∩ T ⊇ {2,3}` on `T = {0,1,2,3}`.
pub fn type7_witness() -> FiniteGame {
    FiniteGame::from_predicate(4, |m| m & 0b0011 == 0b0011 || m & 0b1100 == 0b1100).expect("static game")
}

/// Only `{0}` wins on the carrier `{0,1}`.
pub fn type12_witness() -> FiniteGame {
    FiniteGame::from_masks(2, [0b01]).expect("static game")
}
