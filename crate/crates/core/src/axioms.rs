//! The four conventional axioms, veto players, dictators and carriers.
//!
//! Complements are taken within the game's universe. Because the universe
//! is a carrier, this agrees with complementation in the full player set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::{mask_members, Coalition};
use crate::error::{Error, Result};
use crate::game::{check_enumerable, FiniteGame};

/// Axiom profile of a game. `type_index` follows the row numbering of the
/// classification table: 1 = (++++) through 16 = (----), in the order
/// monotonic, proper, strong, nonweak.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeSignature {
    pub monotonic: bool,
    pub proper: bool,
    pub strong: bool,
    pub nonweak: bool,
    pub finite: bool,
}

impl TypeSignature {
    pub fn type_index(&self) -> u8 {
        let minus = |b: bool| u8::from(!b);
        1 + 8 * minus(self.monotonic) + 4 * minus(self.proper) + 2 * minus(self.strong) + minus(self.nonweak)
    }

    /// Inverse of [`type_index`](Self::type_index).
    pub fn from_type_index(index: u8, finite: bool) -> Result<Self> {
        if !(1..=16).contains(&index) {
            return Err(Error::InvalidParams {
                name: "type_index".into(),
                reason: format!("{index} is not in 1..=16"),
            });
        }
        let bits = index - 1;
        Ok(TypeSignature {
            monotonic: bits & 8 == 0,
            proper: bits & 4 == 0,
            strong: bits & 2 == 0,
            nonweak: bits & 1 == 0,
            finite,
        })
    }

    /// The axiom pattern as four `+`/`-` characters.
    pub fn pattern(&self) -> String {
        [self.monotonic, self.proper, self.strong, self.nonweak]
            .iter()
            .map(|&b| if b { '+' } else { '-' })
            .collect()
    }

    pub fn weak(&self) -> bool {
        !self.nonweak
    }
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type {} ({}) {}",
            self.type_index(),
            self.pattern(),
            if self.finite { "finite" } else { "infinite" }
        )
    }
}

/// Types that no game can have.
pub const EMPTY_TYPES: [u8; 5] = [6, 8, 10, 14, 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    pub winning: Coalition,
    pub losing_superset: Coalition,
}

/// Certificates for every failed axiom, plus the veto players of a weak game.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    /// A winning coalition with a losing one-player extension.
    pub nonmonotonic: Option<MonotonicityViolation>,
    /// A winning coalition whose complement also wins.
    pub nonproper: Option<Coalition>,
    /// A losing coalition whose complement also loses.
    pub nonstrong: Option<Coalition>,
    /// Winning coalitions with empty intersection.
    pub nonweak: Option<Vec<Coalition>>,
    pub veto_players: Option<Coalition>,
}

impl AxiomWitness {
    /// Re-checks every certificate against `g`.
    pub fn verify(&self, g: &FiniteGame) -> bool {
        let full = g.full_mask();
        if let Some(v) = &self.nonmonotonic {
            if !(g.wins(v.winning.mask())
                && !g.wins(v.losing_superset.mask())
                && v.winning.is_subset(&v.losing_superset))
            {
                return false;
            }
        }
        if let Some(s) = &self.nonproper {
            if !(g.wins(s.mask()) && g.wins(!s.mask() & full)) {
                return false;
            }
        }
        if let Some(s) = &self.nonstrong {
            if g.wins(s.mask()) || g.wins(!s.mask() & full) {
                return false;
            }
        }
        if let Some(family) = &self.nonweak {
            let all_win = family.iter().all(|c| g.wins(c.mask()));
            let meet = family.iter().fold(full, |acc, c| acc & c.mask());
            if !all_win || meet != 0 || family.is_empty() {
                return false;
            }
        }
        if let Some(v) = &self.veto_players {
            if g.winning_masks().iter().fold(full, |acc, &w| acc & w) != v.mask() {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub signature: TypeSignature,
    pub witness: AxiomWitness,
}

/// Decides the four axioms for a finite game and returns certificates.
pub fn classify(g: &FiniteGame) -> Result<Classification> {
    let n = g.universe();
    check_enumerable(n)?;
    let full = g.full_mask();
    let coalition = |m: u64| Coalition::from_mask(m, n).expect("mask within universe");

    let nonmonotonic = g.winning_masks().iter().find_map(|&w| {
        mask_members(!w & full)
            .map(|i| w | 1 << i)
            .find(|&t| !g.wins(t))
            .map(|t| MonotonicityViolation {
                winning: coalition(w),
                losing_superset: coalition(t),
            })
    });

    let nonproper = g
        .winning_masks()
        .iter()
        .copied()
        .find(|&w| g.wins(!w & full))
        .map(coalition);

    let nonstrong = (0..=full).find(|&s| !g.wins(s) && !g.wins(!s & full)).map(coalition);

    let meet = g.winning_masks().iter().fold(full, |acc, &w| acc & w);
    let weak = g.is_empty_game() || meet != 0;
    let nonweak = if weak {
        None
    } else {
        let mut family = Vec::new();
        let mut running = full;
        while running != 0 {
            let e = running.trailing_zeros();
            let w = g
                .winning_masks()
                .iter()
                .copied()
                .find(|w| w >> e & 1 == 0)
                .expect("nonweak game excludes every player somewhere");
            family.push(coalition(w));
            running &= w;
        }
        if family.is_empty() {
            // universe of size zero: the empty coalition wins
            family.push(coalition(0));
        }
        Some(family)
    };
    let veto_players = if weak && !g.is_empty_game() {
        Some(coalition(meet))
    } else {
        None
    };

    let signature = TypeSignature {
        monotonic: nonmonotonic.is_none(),
        proper: nonproper.is_none(),
        strong: nonstrong.is_none(),
        nonweak: !weak,
        finite: true,
    };
    debug_assert!(
        !EMPTY_TYPES.contains(&signature.type_index()),
        "impossible signature {signature}"
    );
    Ok(Classification {
        signature,
        witness: AxiomWitness {
            nonmonotonic,
            nonproper,
            nonstrong,
            nonweak,
            veto_players,
        },
    })
}

/// Players belonging to every winning coalition.
pub fn veto_players(g: &FiniteGame) -> Result<Coalition> {
    if g.is_empty_game() {
        return Err(Error::EmptyGame);
    }
    let meet = g.winning_masks().iter().fold(g.full_mask(), |acc, &w| acc & w);
    Coalition::from_mask(meet, g.universe())
}

/// The dictator, if the winning coalitions are exactly those containing one player.
pub fn is_dictatorial(g: &FiniteGame) -> Option<usize> {
    let n = g.universe();
    if n == 0 || n >= 64 {
        return None;
    }
    let veto = veto_players(g).ok()?;
    // every winner contains the veto player, so counting is enough
    if veto.len() == 1 && g.winning_count() as u128 == 1u128 << (n - 1) {
        veto.members().first().copied()
    } else {
        None
    }
}

/// `carrier` satisfies `T ∈ ω ⟺ carrier ∩ T ∈ ω` for every `T` in the universe.
pub fn is_carrier(g: &FiniteGame, carrier: u64) -> Result<bool> {
    check_enumerable(g.universe())?;
    Ok((0..=g.full_mask()).all(|t| g.wins(t) == g.wins(t & carrier)))
}

/// Players whose membership changes the outcome of some coalition.
pub fn relevant_players(g: &FiniteGame) -> Result<u64> {
    check_enumerable(g.universe())?;
    let mut relevant = 0u64;
    for i in 0..g.universe() {
        let bit = 1u64 << i;
        if (0..=g.full_mask())
            .filter(|t| t & bit == 0)
            .any(|t| g.wins(t) != g.wins(t | bit))
        {
            relevant |= bit;
        }
    }
    Ok(relevant)
}

/// The smallest carrier of a finite game.
pub fn minimal_carrier(g: &FiniteGame) -> Result<Coalition> {
    let relevant = relevant_players(g)?;
    if is_carrier(g, relevant)? {
        return Coalition::from_mask(relevant, g.universe());
    }
    log::warn!("relevant players do not form a carrier; searching exhaustively");
    let mut candidates = (0..=g.full_mask()).collect::<Vec<_>>();
    candidates.sort_by_key(|m| (m.count_ones(), *m));
    for c in candidates {
        if is_carrier(g, c)? {
            return Coalition::from_mask(c, g.universe());
        }
    }
    Coalition::grand(g.universe())
}

/// The smallest monotonic game containing `g`: every superset of a winner wins.
pub fn monotone_closure(g: &FiniteGame) -> Result<FiniteGame> {
    let mut table = g.winning_table()?;
    for m in 0..table.len() {
        if !table[m] {
            table[m] = mask_members(m as u64).any(|i| table[m & !(1 << i)]);
        }
    }
    FiniteGame::from_predicate(g.universe(), |m| table[m as usize])
}

/// How many games of each type exist over a small universe, counting only
/// games in which the empty coalition loses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub universe: usize,
    pub total: usize,
    /// `by_type[t - 1]` counts games of type `t`.
    pub by_type: [usize; 16],
}

impl Census {
    pub fn count(&self, type_index: u8) -> usize {
        self.by_type[usize::from(type_index) - 1]
    }

    pub fn empty_types_absent(&self) -> bool {
        EMPTY_TYPES.iter().all(|&t| self.count(t) == 0)
    }
}

/// Enumerates every family of nonempty coalitions over `0..universe`.
pub fn census(universe: usize) -> Result<Census> {
    if universe > 4 {
        return Err(Error::EnumerationTooLarge(1u128 << ((1u32 << universe) - 1)));
    }
    let nonempty = (1u64..1 << universe).collect::<Vec<_>>();
    let mut by_type = [0usize; 16];
    let mut total = 0;
    for family in 0u64..1 << nonempty.len() {
        let masks = mask_members(family).map(|i| nonempty[i]);
        let g = FiniteGame::from_masks(universe, masks)?;
        let c = classify(&g)?;
        by_type[usize::from(c.signature.type_index()) - 1] += 1;
        total += 1;
    }
    Ok(Census {
        universe,
        total,
        by_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;

    #[test]
    fn type_index_encoding() {
        for t in 1..=16u8 {
            let sig = TypeSignature::from_type_index(t, true).unwrap();
            assert_eq!(sig.type_index(), t);
        }
        let sig = TypeSignature::from_type_index(3, true).unwrap();
        assert_eq!(sig.pattern(), "++-+");
        assert_eq!(TypeSignature::from_type_index(16, false).unwrap().pattern(), "----");
        assert!(TypeSignature::from_type_index(0, true).is_err());
    }

    #[test]
    fn classify_catalog_examples() {
        let cases = [
            (catalog::majority(3).unwrap(), 1),
            (catalog::example_type13(), 13),
            (catalog::example_type15(), 15),
            (catalog::example_type9(), 9),
            (catalog::type11_k2(), 11),
            (catalog::dictator(1, 3).unwrap(), 2),
        ];
        for (g, expected) in cases {
            let c = classify(&g).unwrap();
            assert_eq!(c.signature.type_index(), expected, "{g:?}");
            assert!(c.witness.verify(&g));
        }
    }

    #[test]
    fn empty_game_is_type_4() {
        let g = FiniteGame::from_masks(3, []).unwrap();
        let c = classify(&g).unwrap();
        assert_eq!(c.signature.type_index(), 4);
        assert_eq!(veto_players(&g), Err(Error::EmptyGame));
        assert!(minimal_carrier(&g).unwrap().is_empty());
    }

    #[test]
    fn veto_examples() {
        assert_eq!(veto_players(&catalog::dictator(0, 3).unwrap()).unwrap().members(), vec![0]);
        assert!(veto_players(&catalog::majority(3).unwrap()).unwrap().is_empty());
        let u = catalog::unanimity(&[0, 1], 3).unwrap();
        assert_eq!(veto_players(&u).unwrap().members(), vec![0, 1]);
    }

    #[test]
    fn dictator_examples() {
        assert_eq!(is_dictatorial(&catalog::dictator(2, 4).unwrap()), Some(2));
        assert_eq!(is_dictatorial(&catalog::majority(3).unwrap()), None);
        assert_eq!(is_dictatorial(&catalog::unanimity(&[0, 1], 3).unwrap()), None);
    }

    #[test]
    fn carrier_examples() {
        let embedded = catalog::majority(3).unwrap().embed(5).unwrap();
        assert_eq!(minimal_carrier(&embedded).unwrap().members(), vec![0, 1, 2]);
        // oracle: smallest carrier by exhaustive search
        let smallest = (0..32u64)
            .filter(|&c| is_carrier(&embedded, c).unwrap())
            .min_by_key(|c| c.count_ones())
            .unwrap();
        assert_eq!(smallest, 0b111);
        assert_eq!(minimal_carrier(&catalog::dictator(0, 4).unwrap()).unwrap().members(), vec![0]);
    }

    #[test]
    fn closure_is_monotonic() {
        let g = catalog::example_type15();
        let closed = monotone_closure(&g).unwrap();
        assert!(classify(&closed).unwrap().signature.monotonic);
        assert!(g.winning_masks().iter().all(|&m| closed.wins(m)));
    }

    #[test]
    fn three_player_census() {
        let c = census(3).unwrap();
        assert_eq!(c.total, 128);
        assert!(c.empty_types_absent());
        assert_eq!(c.by_type.iter().sum::<usize>(), 128);
    }
}
