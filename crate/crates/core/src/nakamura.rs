//! Nakamura numbers: the size of the smallest family of winning coalitions
//! with empty intersection.
//!
//! For finite games the search runs over minimal winning coalitions. It is a
//! hitting-set style branch and bound: the running intersection must be
//! emptied, and for the lowest player still in it some chosen coalition has
//! to exclude that player, so we branch only on such coalitions. Iterative
//! deepening on the family size gives the exact value; a second pass picks
//! the lexicographically least witness (coalitions sorted by bitmask).

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::axioms::{classify, is_dictatorial, TypeSignature};
use crate::coalition::{universe_mask, BitString, Coalition, MAX_UNIVERSE};
use crate::error::{Error, Result};
use crate::game::{Determination, FiniteGame, PrefixGame};

/// A positive integer or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NakamuraValue {
    Finite(usize),
    Infinite,
}

impl NakamuraValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            NakamuraValue::Finite(v) => Some(*v),
            NakamuraValue::Infinite => None,
        }
    }
}

impl fmt::Display for NakamuraValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NakamuraValue::Finite(v) => write!(f, "{v}"),
            NakamuraValue::Infinite => f.write_str("infinity"),
        }
    }
}

/// A number, or the string `"infinity"`.
impl Serialize for NakamuraValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NakamuraValue::Finite(v) => serializer.serialize_u64(*v as u64),
            NakamuraValue::Infinite => serializer.serialize_str("infinity"),
        }
    }
}

impl<'de> Deserialize<'de> for NakamuraValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(NakamuraValue::Finite(v)),
            Raw::Text(s) if s == "infinity" => Ok(NakamuraValue::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected a number or \"infinity\", got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NakamuraResult {
    pub value: NakamuraValue,
    /// `value` winning coalitions with empty intersection; empty when infinite.
    pub witness: Vec<Coalition>,
    /// The empty coalition wins, so `value` is 1.
    pub empty_winning: bool,
}

/// Exact Nakamura number of a finite game.
pub fn nakamura_number(g: &FiniteGame) -> NakamuraResult {
    let n = g.universe();
    let coalition = |m: u64| Coalition::from_mask(m, n).expect("mask within universe");
    if g.empty_is_winning() {
        return NakamuraResult {
            value: NakamuraValue::Finite(1),
            witness: vec![coalition(0)],
            empty_winning: true,
        };
    }
    let full = g.full_mask();
    let meet = g.winning_masks().iter().fold(full, |acc, &w| acc & w);
    if g.is_empty_game() || meet != 0 {
        return NakamuraResult {
            value: NakamuraValue::Infinite,
            witness: Vec::new(),
            empty_winning: false,
        };
    }
    let minimal = g.minimal_winning();
    let picks = smallest_empty_meet(&minimal, full, minimal.len())
        .expect("nonweak finite game has a witness among minimal winning coalitions");
    NakamuraResult {
        value: NakamuraValue::Finite(picks.len()),
        witness: picks.into_iter().map(|i| coalition(minimal[i])).collect(),
        empty_winning: false,
    }
}

/// Lexicographically least index set (at most `limit` members) whose
/// coalitions meet `start` in the empty set, minimizing the size first.
pub(crate) fn smallest_empty_meet(candidates: &[u64], start: u64, limit: usize) -> Option<Vec<usize>> {
    let mut search = MeetSearch {
        candidates,
        failed: HashSet::new(),
    };
    let size = (0..=limit).find(|&r| search.feasible(start, r, 0))?;
    let mut picks = Vec::with_capacity(size);
    let mut running = start;
    let mut lo = 0;
    for step in 0..size {
        let remaining = size - step - 1;
        let idx = (lo..candidates.len())
            .find(|&i| search.feasible(running & candidates[i], remaining, i + 1))
            .expect("feasibility was established for this size");
        picks.push(idx);
        running &= candidates[idx];
        lo = idx + 1;
    }
    debug_assert_eq!(running, 0);
    Some(picks)
}

struct MeetSearch<'a> {
    candidates: &'a [u64],
    failed: HashSet<(u64, usize, usize)>,
}

impl MeetSearch<'_> {
    /// Can at most `budget` candidates with index `>= lo` empty `running`?
    fn feasible(&mut self, running: u64, budget: usize, lo: usize) -> bool {
        if running == 0 {
            return true;
        }
        if budget == 0 || self.failed.contains(&(running, budget, lo)) {
            return false;
        }
        let e = running.trailing_zeros();
        let mut next: Vec<u64> = self.candidates[lo..]
            .iter()
            .filter(|&&c| c >> e & 1 == 0)
            .map(|&c| running & c)
            .collect();
        if budget == 1 {
            if next.contains(&0) {
                return true;
            }
            self.failed.insert((running, budget, lo));
            return false;
        }
        next.sort_unstable_by_key(|m| (m.count_ones(), *m));
        next.dedup();
        // a strictly smaller meet dominates any of its supersets
        let mut kept: Vec<u64> = Vec::with_capacity(next.len());
        for m in next {
            if !kept.iter().any(|&k| k & !m == 0) {
                kept.push(m);
            }
        }
        for m in kept {
            if self.feasible(m, budget - 1, lo) {
                return true;
            }
        }
        self.failed.insert((running, budget, lo));
        false
    }
}

/// Upper end of a Nakamura-number interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperBound {
    AtMost(usize),
    /// Finite, with no uniform bound.
    Finite,
    /// No restriction; `+∞` allowed.
    Unbounded,
}

/// Interval of Nakamura numbers compatible with a type signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NakamuraConstraint {
    pub lower: NakamuraValue,
    pub upper: UpperBound,
    pub provenance: Vec<&'static str>,
}

impl NakamuraConstraint {
    pub fn contains(&self, v: NakamuraValue) -> bool {
        if v < self.lower {
            return false;
        }
        match (self.upper, v) {
            (UpperBound::AtMost(u), NakamuraValue::Finite(x)) => x <= u,
            (UpperBound::AtMost(_), NakamuraValue::Infinite) => false,
            (UpperBound::Finite, x) => x != NakamuraValue::Infinite,
            (UpperBound::Unbounded, _) => true,
        }
    }

    /// The single value allowed, if the interval is a point.
    pub fn exact(&self) -> Option<NakamuraValue> {
        match (self.lower, self.upper) {
            (NakamuraValue::Infinite, _) => Some(NakamuraValue::Infinite),
            (NakamuraValue::Finite(l), UpperBound::AtMost(u)) if l == u => Some(self.lower),
            _ => None,
        }
    }

    fn tighten(&mut self, lower: NakamuraValue, upper: UpperBound, source: &'static str) {
        self.lower = self.lower.max(lower);
        self.upper = match (self.upper, upper) {
            (UpperBound::AtMost(a), UpperBound::AtMost(b)) => UpperBound::AtMost(a.min(b)),
            (UpperBound::AtMost(a), _) | (_, UpperBound::AtMost(a)) => UpperBound::AtMost(a),
            (UpperBound::Finite, _) | (_, UpperBound::Finite) => UpperBound::Finite,
            _ => UpperBound::Unbounded,
        };
        self.provenance.push(source);
    }

    fn is_empty(&self) -> bool {
        match (self.lower, self.upper) {
            (NakamuraValue::Infinite, UpperBound::Unbounded) => false,
            (NakamuraValue::Infinite, _) => true,
            (NakamuraValue::Finite(l), UpperBound::AtMost(u)) => l > u,
            _ => false,
        }
    }
}

/// Every bound the small-Nakamura lemmas place on a computable game with the
/// given signature. Requires the empty coalition to be losing.
pub fn lemma_constraints(sig: &TypeSignature, empty_losing: bool) -> Result<NakamuraConstraint> {
    if !empty_losing {
        return Err(Error::EmptyCoalitionWinning);
    }
    let mut c = NakamuraConstraint {
        lower: NakamuraValue::Finite(2),
        upper: UpperBound::Unbounded,
        provenance: vec!["empty coalition losing: at least 2"],
    };
    if sig.weak() {
        c.tighten(NakamuraValue::Infinite, UpperBound::Unbounded, "weak: infinite by definition");
    } else {
        c.tighten(NakamuraValue::Finite(2), UpperBound::Finite, "computable and nonweak: finite");
    }
    if !sig.proper {
        c.tighten(NakamuraValue::Finite(2), UpperBound::AtMost(2), "nonproper: exactly 2");
    }
    if sig.strong && sig.nonweak {
        c.tighten(NakamuraValue::Finite(2), UpperBound::AtMost(3), "strong and nonweak: 2 or 3");
    }
    if sig.monotonic && sig.proper {
        c.tighten(NakamuraValue::Finite(3), UpperBound::Unbounded, "monotonic and proper: at least 3");
    }
    if !sig.monotonic && sig.strong {
        c.tighten(NakamuraValue::Finite(2), UpperBound::AtMost(2), "nonmonotonic and strong: exactly 2");
    }
    if c.is_empty() {
        return Err(Error::InconsistentSignature(format!(
            "{} admits no Nakamura number ({})",
            sig,
            c.provenance.join("; ")
        )));
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessMember {
    /// A winning-determining string.
    pub string: BitString,
    /// The zero-extended coalition of its ones.
    pub coalition: Coalition,
}

/// Upper-bound certificate for a prefix game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedWitness {
    pub depth: usize,
    pub members: Vec<WitnessMember>,
}

impl BoundedWitness {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Winning-determining strings reachable without passing a determining
/// prefix, up to length `depth`.
pub fn winning_determining_strings(g: &PrefixGame, depth: usize) -> Vec<BitString> {
    let depth = depth.min(g.max_depth()).min(MAX_UNIVERSE);
    let mut out = Vec::new();
    let mut stack = vec![BitString::empty()];
    while let Some(s) = stack.pop() {
        match g.classify(&s) {
            Determination::WinningDetermining => out.push(s),
            Determination::LosingDetermining | Determination::Truncated => {}
            Determination::Nondetermining => {
                if s.len() < depth {
                    stack.push(s.with(true));
                    stack.push(s.with(false));
                }
            }
        }
    }
    out.sort();
    out
}

/// Searches winning-determining strings up to `depth` for the smallest family
/// (of at most `family_limit`) whose zero-extended coalitions have empty
/// intersection. Every returned member is winning, so the size bounds the
/// Nakamura number from above.
pub fn nakamura_witness_bounded(g: &PrefixGame, depth: usize, family_limit: usize) -> Option<BoundedWitness> {
    let depth = depth.min(g.max_depth()).min(MAX_UNIVERSE);
    let mut by_mask: BTreeMap<u64, BitString> = BTreeMap::new();
    for s in winning_determining_strings(g, depth) {
        by_mask.entry(s.bits()).or_insert(s);
    }
    let all = by_mask.keys().copied().collect::<Vec<_>>();
    let minimal = crate::game::minimal_elements(&all);
    let picks = smallest_empty_meet(&minimal, universe_mask(depth), family_limit)?;
    if picks.is_empty() {
        return None;
    }
    let members = picks
        .into_iter()
        .map(|i| {
            let mask = minimal[i];
            WitnessMember {
                string: by_mask[&mask],
                coalition: Coalition::from_mask(mask, depth).expect("depth within universe bound"),
            }
        })
        .collect();
    Some(BoundedWitness { depth, members })
}

/// One small-Nakamura lemma evaluated on one game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub applicable: bool,
    pub holds: bool,
}

/// Evaluates the axiom and Nakamura lemmas on a finite game with the empty
/// coalition losing. Each entry is `holds = true` when not applicable.
pub fn check_lemmas(g: &FiniteGame) -> Result<Vec<LemmaCheck>> {
    if g.empty_is_winning() {
        return Err(Error::EmptyCoalitionWinning);
    }
    let sig = classify(g)?.signature;
    let nu = nakamura_number(g).value;
    let two = NakamuraValue::Finite(2);
    let three = NakamuraValue::Finite(3);
    let mut checks = Vec::new();
    let mut push = |lemma, applicable: bool, holds: bool| {
        checks.push(LemmaCheck {
            lemma,
            applicable,
            holds: !applicable || holds,
        })
    };
    push("weak implies proper", sig.weak(), sig.proper);
    let dictatorial = is_dictatorial(g).is_some();
    push(
        "dictatorial iff strong and weak",
        true,
        dictatorial == (sig.strong && sig.weak()),
    );
    push("nonproper implies nonweak with nu 2", !sig.proper, sig.nonweak && nu == two);
    push(
        "strong nonweak implies nu 2 or 3",
        sig.strong && sig.nonweak,
        nu == two || nu == three,
    );
    push(
        "monotonic proper nonempty implies nu at least 3",
        sig.monotonic && sig.proper && !g.is_empty_game(),
        nu >= three,
    );
    push(
        "nonmonotonic strong implies nonweak with nu 2",
        !sig.monotonic && sig.strong,
        sig.nonweak && nu == two,
    );
    push("weak iff nu infinite", true, sig.weak() == (nu == NakamuraValue::Infinite));
    let constraint = lemma_constraints(&sig, true);
    push(
        "nu within lemma constraints",
        true,
        constraint.map(|c| c.contains(nu)).unwrap_or(false),
    );
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;
    use crate::game::finite_as_prefix;

    fn members(r: &NakamuraResult) -> Vec<Vec<usize>> {
        r.witness.iter().map(|c| c.members()).collect()
    }

    #[test]
    fn majority_three() {
        let r = nakamura_number(&catalog::majority(3).unwrap());
        assert_eq!(r.value, NakamuraValue::Finite(3));
        assert_eq!(members(&r), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn partition_type3_equals_block_count() {
        let g = catalog::partition_type3(&[2, 1, 1, 1, 1], false).unwrap();
        assert_eq!(nakamura_number(&g).value, NakamuraValue::Finite(5));
    }

    #[test]
    fn weak_and_degenerate_games() {
        assert_eq!(
            nakamura_number(&catalog::dictator(0, 3).unwrap()).value,
            NakamuraValue::Infinite
        );
        assert_eq!(nakamura_number(&catalog::example_type15()).value, NakamuraValue::Finite(2));
        let with_empty = FiniteGame::from_masks(2, [0, 1]).unwrap();
        let r = nakamura_number(&with_empty);
        assert_eq!(r.value, NakamuraValue::Finite(1));
        assert!(r.empty_winning);
        assert_eq!(
            nakamura_number(&FiniteGame::from_masks(3, []).unwrap()).value,
            NakamuraValue::Infinite
        );
    }

    #[test]
    fn constraints_per_type() {
        let t = |i| TypeSignature::from_type_index(i, true).unwrap();
        let c1 = lemma_constraints(&t(1), true).unwrap();
        assert_eq!(c1.exact(), Some(NakamuraValue::Finite(3)));
        let c9 = lemma_constraints(&t(9), true).unwrap();
        assert_eq!(c9.exact(), Some(NakamuraValue::Finite(2)));
        let c3 = lemma_constraints(&t(3), true).unwrap();
        assert_eq!(c3.lower, NakamuraValue::Finite(3));
        assert_eq!(c3.upper, UpperBound::Finite);
        assert!(c3.contains(NakamuraValue::Finite(17)));
        assert!(!c3.contains(NakamuraValue::Infinite));
        let c2 = lemma_constraints(&t(2), true).unwrap();
        assert_eq!(c2.exact(), Some(NakamuraValue::Infinite));
        for empty in crate::axioms::EMPTY_TYPES {
            assert!(matches!(
                lemma_constraints(&t(empty), true),
                Err(Error::InconsistentSignature(_))
            ));
        }
        assert_eq!(lemma_constraints(&t(1), false), Err(Error::EmptyCoalitionWinning));
    }

    #[test]
    fn bounded_witness_on_finite_prefix_game() {
        let maj = catalog::majority(3).unwrap();
        let w = nakamura_witness_bounded(&finite_as_prefix(&maj), 3, 5).unwrap();
        assert_eq!(w.size(), 3);
        let exact = nakamura_number(&maj);
        let got = w.members.iter().map(|m| m.coalition.mask()).collect::<Vec<_>>();
        let want = exact.witness.iter().map(|c| c.mask()).collect::<Vec<_>>();
        assert_eq!(got, want);
        assert!(nakamura_witness_bounded(&finite_as_prefix(&maj), 3, 2).is_none());
    }

    #[test]
    fn value_serialization() {
        assert_eq!(serde_json::to_string(&NakamuraValue::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&NakamuraValue::Infinite).unwrap(), "\"infinity\"");
        let back: NakamuraValue = serde_json::from_str("\"infinity\"").unwrap();
        assert_eq!(back, NakamuraValue::Infinite);
    }

    #[test]
    fn lemma_checks_hold_on_catalog() {
        for g in [
            catalog::majority(5).unwrap(),
            catalog::example_type9(),
            catalog::example_type13(),
            catalog::type11_k2(),
        ] {
            assert!(check_lemmas(&g).unwrap().iter().all(|c| c.holds));
        }
    }
}
