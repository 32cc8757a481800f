//! Game representations and membership evaluation.
//!
//! A [`FiniteGame`] lists its winning coalitions explicitly over a bounded
//! universe, which is then a carrier of the game. A [`PrefixGame`] is the
//! operational form of a computable infinite game: a classifier telling, for
//! each finite string, whether every coalition extending it is winning,
//! every one is losing, or neither. Membership of a coalition given as a
//! [`MembershipStream`] is decided by scanning its initial segments.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalition::{mask_members, universe_mask, BitString, Coalition, MAX_BITSTRING_LEN, MAX_UNIVERSE};
use crate::error::{Error, Result};

/// Largest universe for which we enumerate all `2^n` coalitions.
pub const MAX_ENUMERABLE_UNIVERSE: usize = 24;

/// Default depth bound for stream evaluation.
pub const DEFAULT_MAX_DEPTH: usize = 64;

/// A simple game with an explicit list of winning coalitions.
///
/// The universe `0..n` is a carrier: a coalition over any larger player set
/// is winning iff its restriction to the universe is listed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGame {
    universe: usize,
    winning: Vec<u64>,
}

impl FiniteGame {
    pub fn from_masks<I: IntoIterator<Item = u64>>(universe: usize, masks: I) -> Result<Self> {
        if universe > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge(universe));
        }
        let full = universe_mask(universe);
        let mut winning = Vec::new();
        for m in masks {
            if m & !full != 0 {
                return Err(Error::PlayerOutOfRange {
                    player: 63 - m.leading_zeros() as usize,
                    universe,
                });
            }
            winning.push(m);
        }
        winning.sort_unstable();
        winning.dedup();
        let game = FiniteGame { universe, winning };
        if game.empty_is_winning() {
            log::warn!("empty coalition is winning; Nakamura number will be 1");
        }
        Ok(game)
    }

    pub fn new<I: IntoIterator<Item = Coalition>>(universe: usize, winning: I) -> Result<Self> {
        let mut masks = Vec::new();
        for c in winning {
            if c.universe() != universe {
                return Err(Error::UniverseMismatch {
                    expected: universe,
                    found: c.universe(),
                });
            }
            masks.push(c.mask());
        }
        Self::from_masks(universe, masks)
    }

    /// Builds a game from member-id lists, as found in the JSON schema.
    pub fn from_lists(universe: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let coalitions = lists
            .iter()
            .map(|l| Coalition::from_members(l.iter().copied(), universe))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, coalitions)
    }

    /// Evaluates `is_winning` on every coalition of the universe.
    pub fn from_predicate(universe: usize, mut is_winning: impl FnMut(u64) -> bool) -> Result<Self> {
        check_enumerable(universe)?;
        let masks = (0..1u64 << universe).filter(|&m| is_winning(m)).collect::<Vec<_>>();
        Self::from_masks(universe, masks)
    }

    /// The game on `0..universe` whose restriction to `carrier` is `restricted`.
    pub fn from_restriction(universe: usize, carrier: u64, restricted: &[u64]) -> Result<Self> {
        if carrier & !universe_mask(universe) != 0 {
            return Err(Error::PlayerOutOfRange {
                player: 63 - carrier.leading_zeros() as usize,
                universe,
            });
        }
        let mut r = restricted.iter().map(|m| m & carrier).collect::<Vec<_>>();
        r.sort_unstable();
        r.dedup();
        Self::from_predicate(universe, |m| r.binary_search(&(m & carrier)).is_ok())
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Winning coalitions as bitmasks, in increasing order.
    pub fn winning_masks(&self) -> &[u64] {
        &self.winning
    }

    pub fn winning(&self) -> impl Iterator<Item = Coalition> + '_ {
        self.winning
            .iter()
            .map(move |&m| Coalition::from_mask(m, self.universe).expect("validated on construction"))
    }

    pub fn winning_count(&self) -> usize {
        self.winning.len()
    }

    /// Membership by bitmask; bits outside the universe are ignored.
    pub fn wins(&self, mask: u64) -> bool {
        self.winning
            .binary_search(&(mask & universe_mask(self.universe)))
            .is_ok()
    }

    pub fn is_winning(&self, s: &Coalition) -> Result<bool> {
        if s.universe() != self.universe {
            return Err(Error::UniverseMismatch {
                expected: self.universe,
                found: s.universe(),
            });
        }
        Ok(self.wins(s.mask()))
    }

    pub fn empty_is_winning(&self) -> bool {
        self.winning.first() == Some(&0)
    }

    /// No coalition wins.
    pub fn is_empty_game(&self) -> bool {
        self.winning.is_empty()
    }

    pub fn full_mask(&self) -> u64 {
        universe_mask(self.universe)
    }

    /// Membership indicator for every coalition, indexed by mask.
    pub fn winning_table(&self) -> Result<Vec<bool>> {
        check_enumerable(self.universe)?;
        let mut table = vec![false; 1 << self.universe];
        for &m in &self.winning {
            table[m as usize] = true;
        }
        Ok(table)
    }

    /// Inclusion-minimal winning coalitions, in increasing mask order.
    pub fn minimal_winning(&self) -> Vec<u64> {
        minimal_elements(&self.winning)
    }

    /// The same game seen on a larger universe (extra players are dummies).
    pub fn embed(&self, universe: usize) -> Result<FiniteGame> {
        if universe < self.universe {
            return Err(Error::InvalidParams {
                name: "embed".into(),
                reason: format!("cannot embed a {}-player game into {universe} players", self.universe),
            });
        }
        let base = self.universe;
        let extra = universe - base;
        check_enumerable(universe)?;
        let mut masks = Vec::with_capacity(self.winning.len() << extra);
        for &w in &self.winning {
            for d in 0..1u64 << extra {
                masks.push(w | d << base);
            }
        }
        Self::from_masks(universe, masks)
    }

    /// Cuts the universe down to `0..universe`; the new universe must still be a carrier.
    pub fn restrict(&self, universe: usize) -> Result<FiniteGame> {
        if universe >= self.universe {
            return self.embed(universe);
        }
        let keep = universe_mask(universe);
        for m in 0..1u64 << self.universe {
            if self.wins(m) != self.wins(m & keep) {
                return Err(Error::CarrierViolation(format!(
                    "players {universe}.. are relevant: {:?}",
                    mask_members(m).collect::<Vec<_>>()
                )));
            }
        }
        Self::from_masks(universe, self.winning.iter().copied().filter(|m| m & !keep == 0))
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.winning.iter().map(|&m| mask_members(m).collect()).collect()
    }
}

impl fmt::Debug for FiniteGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGame")
            .field("universe", &self.universe)
            .field("winning", &self.to_lists())
            .finish()
    }
}

pub(crate) fn check_enumerable(universe: usize) -> Result<()> {
    if universe > MAX_ENUMERABLE_UNIVERSE {
        Err(Error::EnumerationTooLarge(1u128 << universe))
    } else {
        Ok(())
    }
}

/// Inclusion-minimal members of a family of masks.
pub(crate) fn minimal_elements(family: &[u64]) -> Vec<u64> {
    let mut by_size = family.to_vec();
    by_size.sort_unstable_by_key(|m| (m.count_ones(), *m));
    by_size.dedup();
    let mut minimal: Vec<u64> = Vec::new();
    for m in by_size {
        if !minimal.iter().any(|&s| s & !m == 0) {
            minimal.push(m);
        }
    }
    minimal.sort_unstable();
    minimal
}

/// How a finite string relates to the game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Determination {
    /// Every coalition extending the string is winning.
    WinningDetermining,
    /// Every coalition extending the string is losing.
    LosingDetermining,
    Nondetermining,
    /// The classifier ran out of oracle entries before deciding.
    Truncated,
}

impl Determination {
    pub fn is_determining(self) -> bool {
        matches!(self, Determination::WinningDetermining | Determination::LosingDetermining)
    }

    pub fn opposite(self) -> Determination {
        match self {
            Determination::WinningDetermining => Determination::LosingDetermining,
            Determination::LosingDetermining => Determination::WinningDetermining,
            other => other,
        }
    }
}

/// Outcome of evaluating a coalition against a [`PrefixGame`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Winning { witness: BitString },
    Losing { witness: BitString },
    Undetermined { depth: usize },
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning { .. })
    }

    pub fn is_losing(&self) -> bool {
        matches!(self, Verdict::Losing { .. })
    }

    pub fn is_determined(&self) -> bool {
        !matches!(self, Verdict::Undetermined { .. })
    }

    pub fn witness(&self) -> Option<BitString> {
        match self {
            Verdict::Winning { witness } | Verdict::Losing { witness } => Some(*witness),
            Verdict::Undetermined { .. } => None,
        }
    }
}

type BitFn = dyn Fn(usize) -> bool + Send + Sync;

/// The characteristic function of a decidable coalition, read one player at a time.
#[derive(Clone)]
pub enum MembershipStream {
    /// `prefix` followed by `period` repeated forever.
    EventuallyPeriodic { prefix: BitString, period: BitString },
    Procedural(Arc<BitFn>),
}

impl MembershipStream {
    pub fn eventually_periodic(prefix: BitString, period: BitString) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParams {
                name: "eventually_periodic".into(),
                reason: "period must be nonempty".into(),
            });
        }
        Ok(MembershipStream::EventuallyPeriodic { prefix, period })
    }

    pub fn procedural(f: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        MembershipStream::Procedural(Arc::new(f))
    }

    /// The coalition `c`, with every player outside its universe absent.
    pub fn from_coalition(c: &Coalition) -> Self {
        MembershipStream::EventuallyPeriodic {
            prefix: c.to_bitstring(c.universe()).expect("universe fits in a string"),
            period: BitString::empty().with(false),
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        match self {
            MembershipStream::EventuallyPeriodic { prefix, period } => {
                if i < prefix.len() {
                    prefix.get(i)
                } else {
                    period.get((i - prefix.len()) % period.len())
                }
            }
            MembershipStream::Procedural(f) => f(i),
        }
    }

    /// `S[k]`, the first `k` membership bits.
    pub fn initial_segment(&self, k: usize) -> BitString {
        assert!(k <= MAX_BITSTRING_LEN);
        let mut s = BitString::empty();
        for i in 0..k {
            s.push(self.bit(i));
        }
        s
    }

    pub fn complement(&self) -> MembershipStream {
        match self {
            MembershipStream::EventuallyPeriodic { prefix, period } => MembershipStream::EventuallyPeriodic {
                prefix: crate::coalition::string_complement(prefix),
                period: crate::coalition::string_complement(period),
            },
            MembershipStream::Procedural(f) => {
                let f = Arc::clone(f);
                MembershipStream::procedural(move |i| !f(i))
            }
        }
    }

    /// Every eventually periodic stream with `|prefix| <= max_prefix` and
    /// `1 <= |period| <= max_period`.
    pub fn all_eventually_periodic(max_prefix: usize, max_period: usize) -> Vec<MembershipStream> {
        let mut out = Vec::new();
        for prefix in BitString::all_up_to(max_prefix) {
            for period in (1..=max_period).flat_map(BitString::all_of_len) {
                out.push(MembershipStream::EventuallyPeriodic { prefix, period });
            }
        }
        out
    }
}

impl fmt::Debug for MembershipStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipStream::EventuallyPeriodic { prefix, period } => write!(f, "{prefix}({period})*"),
            MembershipStream::Procedural(_) => f.write_str("<procedural>"),
        }
    }
}

type ClassifyFn = dyn Fn(&BitString) -> Determination + Send + Sync;

/// A game given by a classifier of finite strings.
#[derive(Clone)]
pub struct PrefixGame {
    classify: Arc<ClassifyFn>,
    max_depth: usize,
    description: String,
}

impl PrefixGame {
    pub fn new(
        description: impl Into<String>,
        classify: impl Fn(&BitString) -> Determination + Send + Sync + 'static,
    ) -> Self {
        PrefixGame {
            classify: Arc::new(classify),
            max_depth: DEFAULT_MAX_DEPTH,
            description: description.into(),
        }
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth.min(MAX_BITSTRING_LEN);
        self
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn classify(&self, s: &BitString) -> Determination {
        (self.classify)(s)
    }

    /// Scans `S[0], S[1], …, S[max_depth]` and stops at the first determining one.
    pub fn eval_stream(&self, s: &MembershipStream) -> Verdict {
        let mut prefix = BitString::empty();
        for k in 0..=self.max_depth {
            if k > 0 {
                prefix.push(s.bit(k - 1));
            }
            match self.classify(&prefix) {
                Determination::WinningDetermining => return Verdict::Winning { witness: prefix },
                Determination::LosingDetermining => return Verdict::Losing { witness: prefix },
                _ => {}
            }
        }
        Verdict::Undetermined { depth: self.max_depth }
    }

    /// Like [`eval_stream`](Self::eval_stream) but only looks at the prefixes of `s`.
    pub fn eval_string(&self, s: &BitString) -> Verdict {
        for k in 0..=s.len().min(self.max_depth) {
            let p = s.prefix(k);
            match self.classify(&p) {
                Determination::WinningDetermining => return Verdict::Winning { witness: p },
                Determination::LosingDetermining => return Verdict::Losing { witness: p },
                _ => {}
            }
        }
        Verdict::Undetermined { depth: s.len().min(self.max_depth) }
    }
}

impl fmt::Debug for PrefixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrefixGame")
            .field("description", &self.description)
            .field("max_depth", &self.max_depth)
            .finish()
    }
}

/// Classifies a string against a finite game: determining once the whole
/// universe is fixed, or earlier when every completion agrees.
pub fn classify_finite_prefix(g: &FiniteGame, s: &BitString) -> Determination {
    let n = g.universe();
    let known = s.len().min(n);
    let base = s.bits() & universe_mask(known);
    let free = n - known;
    let verdict = |w: bool| {
        if w {
            Determination::WinningDetermining
        } else {
            Determination::LosingDetermining
        }
    };
    if free == 0 {
        return verdict(g.wins(base));
    }
    let first = g.wins(base);
    let all_agree = (1..1u64 << free).all(|ext| g.wins(base | ext << known) == first);
    if all_agree {
        verdict(first)
    } else {
        Determination::Nondetermining
    }
}

/// The prefix form of a finite game.
pub fn finite_as_prefix(g: &FiniteGame) -> PrefixGame {
    let g = Arc::new(g.clone());
    let description = format!("finite game on {} players", g.universe());
    PrefixGame::new(description, move |s| classify_finite_prefix(&g, s))
}

/// Either representation.
#[derive(Clone, Debug)]
pub enum Game {
    Finite(FiniteGame),
    Prefix(PrefixGame),
}

impl Game {
    pub fn as_prefix(&self) -> PrefixGame {
        match self {
            Game::Finite(g) => finite_as_prefix(g),
            Game::Prefix(p) => p.clone(),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGame> {
        match self {
            Game::Finite(g) => Some(g),
            Game::Prefix(_) => None,
        }
    }

    pub fn into_finite(self) -> Option<FiniteGame> {
        match self {
            Game::Finite(g) => Some(g),
            Game::Prefix(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn finite_membership_examples() {
        let maj = catalog::majority(3).unwrap();
        assert!(maj.is_winning(&Coalition::from_members([0, 1], 3).unwrap()).unwrap());
        assert!(!maj.is_winning(&Coalition::from_members([2], 3).unwrap()).unwrap());
        let t9 = catalog::example_type9();
        assert!(t9.is_winning(&Coalition::from_members([0], 3).unwrap()).unwrap());
        assert_eq!(
            maj.is_winning(&Coalition::from_members([0], 4).unwrap()),
            Err(Error::UniverseMismatch { expected: 3, found: 4 })
        );
    }

    #[test]
    fn finite_prefix_examples() {
        let p = finite_as_prefix(&catalog::majority(3).unwrap());
        assert_eq!(p.classify(&bs("110")), Determination::WinningDetermining);
        assert_eq!(p.classify(&bs("10")), Determination::Nondetermining);
        assert_eq!(p.classify(&bs("11")), Determination::WinningDetermining);
        assert_eq!(p.classify(&bs("1000000")), Determination::LosingDetermining);
    }

    #[test]
    fn majority_00_is_losing_determining_by_brute_force() {
        let maj = catalog::majority(3).unwrap();
        // every extension of 00 up to length 6 is losing
        for ext in BitString::all_up_to(4) {
            let s = bs("00").concat(&ext).unwrap();
            let c = s.bits() & 0b111;
            assert!(!maj.wins(c));
        }
        assert_eq!(finite_as_prefix(&maj).classify(&bs("00")), Determination::LosingDetermining);
    }

    #[test]
    fn eval_stream_stops_at_first_determining_prefix() {
        let p = finite_as_prefix(&catalog::majority(3).unwrap());
        let s = MembershipStream::eventually_periodic(bs("1"), bs("1")).unwrap();
        assert_eq!(p.eval_stream(&s), Verdict::Winning { witness: bs("11") });
        let z = MembershipStream::eventually_periodic(bs(""), bs("0")).unwrap();
        assert_eq!(p.eval_stream(&z), Verdict::Losing { witness: bs("00") });
    }

    #[test]
    fn undetermined_at_depth_bound() {
        let never = PrefixGame::new("never", |_| Determination::Nondetermining).with_max_depth(5);
        let s = MembershipStream::procedural(|i| i % 2 == 0);
        assert_eq!(never.eval_stream(&s), Verdict::Undetermined { depth: 5 });
    }

    #[test]
    fn stream_complement_and_bits() {
        let s = MembershipStream::eventually_periodic(bs("10"), bs("011")).unwrap();
        assert_eq!(s.initial_segment(8), bs("10011011"));
        assert_eq!(s.complement().initial_segment(8), bs("01100100"));
        assert!(MembershipStream::eventually_periodic(bs("1"), bs("")).is_err());
    }

    #[test]
    fn restrict_and_embed() {
        let maj = catalog::majority(3).unwrap();
        let big = maj.embed(5).unwrap();
        assert_eq!(big.winning_count(), 4 * 4);
        assert_eq!(big.restrict(3).unwrap(), maj);
        assert!(maj.restrict(2).is_err());
    }

    #[test]
    fn minimal_winning_of_majority() {
        let maj = catalog::majority(3).unwrap();
        assert_eq!(maj.minimal_winning(), vec![0b011, 0b101, 0b110]);
    }
}
