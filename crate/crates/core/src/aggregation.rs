//! Preference profiles, the dominance relation and the core.
//!
//! With `m` alternatives, the core is nonempty for every profile of acyclic
//! preferences exactly when `m` is below the Nakamura number. Both sides are
//! checked here: by enumeration or sampling for `m < ν`, and by exhibiting a
//! profile with empty core for `m ≥ ν`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{check_enumerable, FiniteGame};
use crate::nakamura::{nakamura_number, NakamuraValue};

/// Largest number of alternatives handled.
pub const MAX_ALTERNATIVES: usize = 64;

/// Cap on enumerated profiles.
pub const MAX_PROFILES: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeSet {
    labels: Vec<String>,
}

impl AlternativeSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() || labels.len() > MAX_ALTERNATIVES {
            return Err(Error::InvalidParams {
                name: "alternatives".into(),
                reason: format!("need 1..={MAX_ALTERNATIVES} alternatives, got {}", labels.len()),
            });
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(Error::InvalidParams {
                name: "alternatives".into(),
                reason: "labels must be distinct".into(),
            });
        }
        Ok(AlternativeSet { labels })
    }

    /// `x0, x1, …`
    pub fn numbered(m: usize) -> Result<Self> {
        Self::new((0..m).map(|i| format!("x{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A binary relation on `0..m`; `succ[x]` has bit `y` set iff `x ≻ y`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrictRelation {
    m: usize,
    succ: Vec<u64>,
}

impl StrictRelation {
    pub fn empty(m: usize) -> Self {
        StrictRelation { m, succ: vec![0; m] }
    }

    /// Any set of pairs within range; acyclicity is checked separately.
    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if m > MAX_ALTERNATIVES {
            return Err(Error::InvalidRelation(format!("{m} alternatives exceed {MAX_ALTERNATIVES}")));
        }
        let mut r = Self::empty(m);
        for &(x, y) in pairs {
            if x >= m || y >= m {
                return Err(Error::InvalidRelation(format!("pair ({x}, {y}) outside 0..{m}")));
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// `order[0] ≻ order[1] ≻ …`, transitively closed.
    pub fn linear_order(order: &[usize]) -> Result<Self> {
        let m = order.len();
        if order.iter().collect::<BTreeSet<_>>().len() != m || order.iter().any(|&x| x >= m) {
            return Err(Error::InvalidRelation(format!("{order:?} is not a permutation")));
        }
        let mut r = Self::empty(m);
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i + 1..] {
                r.insert(x, y);
            }
        }
        Ok(r)
    }

    pub fn alternatives(&self) -> usize {
        self.m
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.succ[x] |= 1 << y;
    }

    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.succ[x] >> y & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|x| (0..self.m).filter(move |&y| self.prefers(x, y)).map(move |y| (x, y)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.succ.iter().map(|s| s.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(|&s| s == 0)
    }

    /// No chain `x1 ≻ x2 ≻ … ≻ x1`, self-loops and 2-cycles included.
    pub fn is_acyclic(&self) -> bool {
        // repeatedly strip alternatives with no successor left
        let mut alive: u64 = if self.m == 64 { u64::MAX } else { (1u64 << self.m) - 1 };
        loop {
            let sinks = (0..self.m)
                .filter(|&x| alive >> x & 1 == 1 && self.succ[x] & alive == 0)
                .fold(0u64, |acc, x| acc | 1 << x);
            if sinks == 0 {
                return alive == 0;
            }
            alive &= !sinks;
        }
    }
}

impl fmt::Debug for StrictRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.pairs())
    }
}

pub fn is_acyclic(r: &StrictRelation) -> bool {
    r.is_acyclic()
}

/// One acyclic relation per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    relations: Vec<StrictRelation>,
}

impl Profile {
    pub fn new(relations: Vec<StrictRelation>) -> Result<Self> {
        let m = relations.first().map_or(0, |r| r.m);
        for (i, r) in relations.iter().enumerate() {
            if r.m != m {
                return Err(Error::InvalidProfile(format!("player {i} ranks {} alternatives, not {m}", r.m)));
            }
            if !r.is_acyclic() {
                return Err(Error::InvalidProfile(format!("player {i} has a cyclic relation {r:?}")));
            }
        }
        Ok(Profile { m, relations })
    }

    pub fn players(&self) -> usize {
        self.relations.len()
    }

    pub fn alternatives(&self) -> usize {
        self.m
    }

    pub fn relations(&self) -> &[StrictRelation] {
        &self.relations
    }

    /// Players with `x ≻_i y`, as a mask.
    pub fn supporters(&self, x: usize, y: usize) -> u64 {
        self.relations
            .iter()
            .enumerate()
            .filter(|(_, r)| r.prefers(x, y))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// A list of pair lists, one per player.
impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let lists = self.relations.iter().map(StrictRelation::pairs).collect::<Vec<_>>();
        lists.serialize(serializer)
    }
}

impl Profile {
    /// Parses the pair-list form for `m` alternatives.
    pub fn from_pair_lists(m: usize, lists: &[Vec<(usize, usize)>]) -> Result<Self> {
        let relations = lists
            .iter()
            .map(|l| StrictRelation::from_pairs(m, l))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self::new(relations)?;
        p.m = m;
        Ok(p)
    }
}

/// `has_subset[mask]`: some winning coalition is contained in `mask`.
pub struct WinningSubsets {
    table: Vec<bool>,
}

impl WinningSubsets {
    pub fn new(g: &FiniteGame) -> Result<Self> {
        let mut table = g.winning_table()?;
        for i in 0..g.universe() {
            let bit = 1usize << i;
            for m in 0..table.len() {
                if m & bit != 0 && table[m ^ bit] {
                    table[m] = true;
                }
            }
        }
        Ok(WinningSubsets { table })
    }

    pub fn contains_winner(&self, mask: u64) -> bool {
        self.table[mask as usize]
    }
}

fn check_profile(g: &FiniteGame, p: &Profile) -> Result<()> {
    if p.players() != g.universe() {
        return Err(Error::InvalidProfile(format!(
            "{} relations for a universe of {} players",
            p.players(),
            g.universe()
        )));
    }
    Ok(())
}

fn dominance_with(w: &WinningSubsets, p: &Profile) -> StrictRelation {
    let mut d = StrictRelation::empty(p.m);
    for x in 0..p.m {
        for y in 0..p.m {
            if x != y && w.contains_winner(p.supporters(x, y)) {
                d.insert(x, y);
            }
        }
    }
    d
}

fn core_with(w: &WinningSubsets, p: &Profile) -> Vec<usize> {
    let d = dominance_with(w, p);
    (0..p.m).filter(|&x| (0..p.m).all(|y| !d.prefers(y, x))).collect()
}

/// `x ≻ y` iff some winning coalition unanimously prefers `x` to `y`.
pub fn dominance(g: &FiniteGame, p: &Profile) -> Result<StrictRelation> {
    check_profile(g, p)?;
    let w = WinningSubsets::new(g)?;
    let mut d = dominance_with(&w, p);
    // a winning empty coalition supports every pair, including x over x
    if g.empty_is_winning() {
        for x in 0..p.m {
            d.insert(x, x);
        }
    }
    Ok(d)
}

/// Undominated alternatives.
pub fn core(g: &FiniteGame, p: &Profile) -> Result<Vec<usize>> {
    if g.empty_is_winning() {
        return Err(Error::EmptyCoalitionWinning);
    }
    check_profile(g, p)?;
    Ok(core_with(&WinningSubsets::new(g)?, p))
}

/// Every acyclic relation on `0..m`.
pub fn all_acyclic_relations(m: usize) -> Result<Vec<StrictRelation>> {
    let pairs = (0..m)
        .flat_map(|x| (0..m).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect::<Vec<_>>();
    if pairs.len() > 20 {
        return Err(Error::EnumerationTooLarge(1u128 << pairs.len()));
    }
    let mut out = Vec::new();
    for subset in 0u64..1 << pairs.len() {
        let mut r = StrictRelation::empty(m);
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if subset >> i & 1 == 1 {
                r.insert(x, y);
            }
        }
        if r.is_acyclic() {
            out.push(r);
        }
    }
    Ok(out)
}

/// Every linear order on `0..m`, in lexicographic order of the ranking.
pub fn all_linear_orders(m: usize) -> Result<Vec<StrictRelation>> {
    if m > 8 {
        return Err(Error::EnumerationTooLarge((1..=m as u128).product()));
    }
    let mut perms = Vec::new();
    permute(&mut (0..m).collect::<Vec<_>>(), 0, &mut perms);
    perms.sort();
    perms.iter().map(|p| StrictRelation::linear_order(p)).collect()
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// A uniformly random linear order with each implied pair kept with
/// probability 3/4; always acyclic.
pub fn random_relation(m: usize, rng: &mut impl Rng) -> StrictRelation {
    let mut order = (0..m).collect::<Vec<_>>();
    order.shuffle(rng);
    let mut r = StrictRelation::empty(m);
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            if rng.gen_bool(0.75) {
                r.insert(x, y);
            }
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleSource {
    Construction,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreTheoremVerdict {
    pub nu: NakamuraValue,
    pub alternatives: usize,
    pub mode: CheckMode,
    /// Profiles whose core was computed.
    pub profiles_checked: usize,
    /// `m < ν`: the core should never be empty.
    pub expect_nonempty: bool,
    /// A profile with empty core, when one was found.
    pub counterexample: Option<Profile>,
    pub counterexample_source: Option<CounterexampleSource>,
    /// The observed behaviour matches the expectation.
    pub holds: bool,
}

/// Profile whose core is empty, built from a witness `B_0, …, B_{ν−1}`.
///
/// Player `i` is missing from `B_{j(i)}` for the least such `j`; it ranks
/// `x_{j(i)} ≻ x_{j(i)−1} ≻ … ≻ x_{j(i)+1}` cyclically, and the remaining
/// alternatives below. Each `B_t` then unanimously prefers `x_{t+1}` to `x_t`.
pub fn cyclic_profile(g: &FiniteGame, m: usize) -> Result<Option<Profile>> {
    let nu = nakamura_number(g);
    let Some(v) = nu.value.finite() else {
        return Err(Error::WeakGame);
    };
    if m < v {
        return Ok(None);
    }
    let blocks = nu.witness.iter().map(|c| c.mask()).collect::<Vec<_>>();
    let mut relations = Vec::new();
    for i in 0..g.universe() {
        let j = blocks
            .iter()
            .position(|b| b >> i & 1 == 0)
            .expect("witness has empty intersection");
        let mut order = (0..v).map(|d| (j + v - d) % v).collect::<Vec<_>>();
        order.extend(v..m);
        relations.push(StrictRelation::linear_order(&order)?);
    }
    let mut p = Profile::new(relations)?;
    p.m = m;
    Ok(Some(p))
}

fn search_empty_core(w: &WinningSubsets, n: usize, m: usize) -> Result<Option<Profile>> {
    let orders = all_linear_orders(m)?;
    let total = (orders.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_PROFILES {
        return Err(Error::EnumerationTooLarge(total));
    }
    let mut found = None;
    for_each_profile(&orders, n, |rels| {
        let p = Profile {
            m,
            relations: rels.to_vec(),
        };
        if core_with(w, &p).is_empty() {
            found = Some(p);
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Calls `f` on every tuple of `n` relations from `pool` until it returns false.
fn for_each_profile(pool: &[StrictRelation], n: usize, mut f: impl FnMut(&[StrictRelation]) -> bool) {
    if pool.is_empty() {
        return;
    }
    let mut idx = vec![0usize; n];
    let mut current = vec![pool[0].clone(); n];
    loop {
        if !f(&current) {
            return;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                current[pos] = pool[idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            current[pos] = pool[0].clone();
            pos += 1;
        }
    }
}

/// Checks "core nonempty for all profiles ⟺ m < ν" for one `m`.
///
/// For `m < ν` every enumerated or sampled profile must have a nonempty core.
/// Exhaustive mode uses all acyclic relations for `m ≤ 3` and linear orders
/// otherwise. For `m ≥ ν` a profile with empty core must be produced.
pub fn verify_core_theorem(g: &FiniteGame, m: usize, mode: CheckMode) -> Result<CoreTheoremVerdict> {
    if g.empty_is_winning() {
        return Err(Error::EmptyCoalitionWinning);
    }
    if m == 0 || m > MAX_ALTERNATIVES {
        return Err(Error::InvalidParams {
            name: "alternatives".into(),
            reason: format!("m = {m} must lie in 1..={MAX_ALTERNATIVES}"),
        });
    }
    check_enumerable(g.universe())?;
    let nu = nakamura_number(g).value;
    let Some(v) = nu.finite() else {
        return Err(Error::WeakGame);
    };
    let n = g.universe();
    let w = WinningSubsets::new(g)?;
    let mut verdict = CoreTheoremVerdict {
        nu,
        alternatives: m,
        mode,
        profiles_checked: 0,
        expect_nonempty: m < v,
        counterexample: None,
        counterexample_source: None,
        holds: false,
    };
    if m < v {
        let mut empty = None;
        match mode {
            CheckMode::Exhaustive => {
                let pool = if m <= 3 {
                    all_acyclic_relations(m)?
                } else {
                    all_linear_orders(m)?
                };
                let total = (pool.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
                if total > MAX_PROFILES {
                    return Err(Error::EnumerationTooLarge(total));
                }
                for_each_profile(&pool, n, |rels| {
                    verdict.profiles_checked += 1;
                    let p = Profile {
                        m,
                        relations: rels.to_vec(),
                    };
                    if core_with(&w, &p).is_empty() {
                        empty = Some(p);
                        return false;
                    }
                    true
                });
            }
            CheckMode::Sampled { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let p = Profile {
                        m,
                        relations: (0..n).map(|_| random_relation(m, &mut rng)).collect(),
                    };
                    verdict.profiles_checked += 1;
                    if core_with(&w, &p).is_empty() {
                        empty = Some(p);
                        break;
                    }
                }
            }
        }
        verdict.holds = empty.is_none();
        verdict.counterexample = empty;
        return Ok(verdict);
    }
    let constructed = cyclic_profile(g, m)?.filter(|p| core_with(&w, p).is_empty());
    verdict.profiles_checked = 1;
    if let Some(p) = constructed {
        verdict.counterexample = Some(p);
        verdict.counterexample_source = Some(CounterexampleSource::Construction);
    } else {
        log::warn!("cyclic profile failed to empty the core; searching linear-order profiles");
        if let Some(p) = search_empty_core(&w, n, m)? {
            verdict.counterexample = Some(p);
            verdict.counterexample_source = Some(CounterexampleSource::Search);
        }
    }
    verdict.holds = verdict.counterexample.is_some();
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;

    fn condorcet() -> Profile {
        Profile::new(vec![
            StrictRelation::linear_order(&[0, 1, 2]).unwrap(),
            StrictRelation::linear_order(&[1, 2, 0]).unwrap(),
            StrictRelation::linear_order(&[2, 0, 1]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn acyclicity() {
        let r = |p: &[(usize, usize)]| StrictRelation::from_pairs(3, p).unwrap();
        assert!(r(&[(0, 1), (1, 2)]).is_acyclic());
        assert!(!r(&[(0, 1), (1, 0)]).is_acyclic());
        assert!(!r(&[(0, 1), (1, 2), (2, 0)]).is_acyclic());
        assert!(!r(&[(1, 1)]).is_acyclic());
    }

    #[test]
    fn acyclic_relation_counts() {
        assert_eq!(all_acyclic_relations(1).unwrap().len(), 1);
        assert_eq!(all_acyclic_relations(2).unwrap().len(), 3);
        assert_eq!(all_acyclic_relations(3).unwrap().len(), 25);
        assert_eq!(all_linear_orders(4).unwrap().len(), 24);
    }

    #[test]
    fn condorcet_dominance_and_core() {
        let g = catalog::majority(3).unwrap();
        let d = dominance(&g, &condorcet()).unwrap();
        assert_eq!(d.pairs(), vec![(0, 1), (1, 2), (2, 0)]);
        assert!(core(&g, &condorcet()).unwrap().is_empty());
    }

    #[test]
    fn unanimous_and_trivial_cores() {
        let g = catalog::majority(3).unwrap();
        let all_x = Profile::new(vec![StrictRelation::linear_order(&[0, 1]).unwrap(); 3]).unwrap();
        assert_eq!(dominance(&g, &all_x).unwrap().pairs(), vec![(0, 1)]);
        assert_eq!(core(&g, &all_x).unwrap(), vec![0]);
        let single = Profile::new(vec![StrictRelation::empty(1); 3]).unwrap();
        assert_eq!(core(&g, &single).unwrap(), vec![0]);
        let empty = FiniteGame::from_masks(3, []).unwrap();
        assert!(dominance(&empty, &condorcet()).unwrap().is_empty());
    }

    #[test]
    fn majority_core_theorem() {
        let g = catalog::majority(3).unwrap();
        let v = verify_core_theorem(&g, 2, CheckMode::Exhaustive).unwrap();
        assert!(v.holds);
        assert_eq!(v.profiles_checked, 27);
        let v = verify_core_theorem(&g, 3, CheckMode::Exhaustive).unwrap();
        assert!(v.holds);
        assert_eq!(v.counterexample_source, Some(CounterexampleSource::Construction));
        assert!(core(&g, v.counterexample.as_ref().unwrap()).unwrap().is_empty());
    }

    #[test]
    fn weak_and_degenerate_inputs() {
        let d = catalog::dictator(0, 3).unwrap();
        assert_eq!(verify_core_theorem(&d, 2, CheckMode::Exhaustive), Err(Error::WeakGame));
        let e = FiniteGame::from_masks(2, [0]).unwrap();
        assert_eq!(core(&e, &Profile::new(vec![StrictRelation::empty(2); 2]).unwrap()), Err(Error::EmptyCoalitionWinning));
        let p = Profile::new(vec![StrictRelation::empty(2); 2]).unwrap();
        assert!(core(&catalog::majority(3).unwrap(), &p).is_err());
    }

    #[test]
    fn profile_serializes_as_pair_lists() {
        let text = serde_json::to_string(&condorcet()).unwrap();
        assert_eq!(text, "[[[0,1],[0,2],[1,2]],[[1,0],[1,2],[2,0]],[[0,1],[2,0],[2,1]]]");
        let lists: Vec<Vec<(usize, usize)>> = serde_json::from_str(&text).unwrap();
        assert_eq!(Profile::from_pair_lists(3, &lists).unwrap(), condorcet());
    }
}
