//! Disjoint images and products of games.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalition::{mask_members, BitString, Coalition, MAX_UNIVERSE};
use crate::error::{Error, Result};
use crate::game::{Determination, FiniteGame, Game, PrefixGame, DEFAULT_MAX_DEPTH};

/// A pair of injections whose images partition the players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pairing {
    /// `T = N`, `f1: i ↦ 2i`, `f2: i ↦ 2i + 1`.
    EvenOdd,
    /// `T = {0, …, k−1}`, `f1: i ↦ i`, `f2: i ↦ i + k`.
    Shift { k: usize },
}

/// Which factor a player of the product belongs to, and its preimage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left(usize),
    Right(usize),
}

impl Pairing {
    /// `f1(i)`, or `None` when `i ∉ T`.
    pub fn f1(&self, i: usize) -> Option<usize> {
        match *self {
            Pairing::EvenOdd => Some(2 * i),
            Pairing::Shift { k } => (i < k).then_some(i),
        }
    }

    pub fn f2(&self, i: usize) -> usize {
        match *self {
            Pairing::EvenOdd => 2 * i + 1,
            Pairing::Shift { k } => i + k,
        }
    }

    pub fn in_domain(&self, i: usize) -> bool {
        self.f1(i).is_some()
    }

    /// The inverse of the two injections.
    pub fn split(&self, p: usize) -> Side {
        match *self {
            Pairing::EvenOdd if p % 2 == 0 => Side::Left(p / 2),
            Pairing::EvenOdd => Side::Right(p / 2),
            Pairing::Shift { k } if p < k => Side::Left(p),
            Pairing::Shift { k } => Side::Right(p - k),
        }
    }

    /// Smallest universe holding `f1(0..n1)` and `f2(0..n2)`.
    pub fn image_universe(&self, n1: usize, n2: usize) -> usize {
        let left = (0..n1).filter_map(|i| self.f1(i)).map(|p| p + 1).max().unwrap_or(0);
        let right = if n2 == 0 { 0 } else { self.f2(n2 - 1) + 1 };
        match *self {
            Pairing::Shift { k } => left.max(right).max(k),
            Pairing::EvenOdd => left.max(right),
        }
    }

    /// On `0..n`, the images are disjoint and cover everything.
    pub fn partitions(&self, n: usize) -> bool {
        let mut seen = vec![0u8; n];
        for i in 0..n {
            if let Some(p) = self.f1(i).filter(|&p| p < n) {
                seen[p] += 1;
            }
            let p = self.f2(i);
            if p < n {
                seen[p] += 1;
            }
        }
        seen.iter().all(|&c| c == 1)
    }

    /// `(S1, S2)` with `S = S1 * S2`, as masks over `0..n`.
    pub fn decompose_mask(&self, s: u64) -> (u64, u64) {
        let (mut a, mut b) = (0u64, 0u64);
        for p in mask_members(s) {
            match self.split(p) {
                Side::Left(i) => a |= 1 << i,
                Side::Right(j) => b |= 1 << j,
            }
        }
        (a, b)
    }

    /// Splits a string into the initial segments read by each factor.
    pub fn decompose_string(&self, s: &BitString) -> (BitString, BitString) {
        let mut a = BitString::empty();
        let mut b = BitString::empty();
        for p in 0..s.len() {
            match self.split(p) {
                Side::Left(_) => a.push(s.get(p)),
                Side::Right(_) => b.push(s.get(p)),
            }
        }
        (a, b)
    }
}

/// `S1 * S2 = f1(S1) ∪ f2(S2)` over the image universe.
pub fn disjoint_image(s1: &Coalition, s2: &Coalition, pr: &Pairing) -> Result<Coalition> {
    let mut out = Vec::new();
    for i in s1.members() {
        out.push(pr.f1(i).ok_or(Error::OutsidePairingDomain)?);
    }
    out.extend(s2.members().into_iter().map(|j| pr.f2(j)));
    let universe = pr.image_universe(s1.universe(), s2.universe());
    if universe > MAX_UNIVERSE {
        return Err(Error::UniverseTooLarge(universe));
    }
    Coalition::from_members(out, universe)
}

/// Restricts `g1` to `T` for a shift pairing, checking that `T` carries it.
fn fit_left(g1: &FiniteGame, pr: &Pairing) -> Result<FiniteGame> {
    match *pr {
        Pairing::EvenOdd => Ok(g1.clone()),
        Pairing::Shift { k } => g1.restrict(k),
    }
}

/// `ω1 ⊗ ω2` for two finite games, over the image universe.
pub fn product_finite(g1: &FiniteGame, g2: &FiniteGame, pr: &Pairing) -> Result<FiniteGame> {
    let g1 = fit_left(g1, pr)?;
    let n = pr.image_universe(g1.universe(), g2.universe());
    FiniteGame::from_predicate(n, |m| {
        let (a, b) = pr.decompose_mask(m);
        g1.wins(a) && g2.wins(b)
    })
}

fn combine(d1: Determination, d2: Determination) -> Determination {
    use Determination::*;
    match (d1, d2) {
        (LosingDetermining, _) | (_, LosingDetermining) => LosingDetermining,
        (WinningDetermining, WinningDetermining) => WinningDetermining,
        (Truncated, _) | (_, Truncated) => Truncated,
        _ => Nondetermining,
    }
}

/// `ω1 ⊗ ω2` as a classifier: a string determines the product once both
/// halves determine winning, or either half determines losing.
pub fn product_prefix(g1: &Game, g2: &Game, pr: &Pairing) -> Result<PrefixGame> {
    let left = match (g1, pr) {
        (Game::Finite(f), _) => Game::Finite(fit_left(f, pr)?).as_prefix(),
        (Game::Prefix(p), Pairing::EvenOdd) => p.clone(),
        (Game::Prefix(_), Pairing::Shift { .. }) => {
            return Err(Error::CarrierViolation(
                "a game given by determining strings has no checkable finite carrier".into(),
            ))
        }
    };
    let right = g2.as_prefix();
    let description = format!("({}) x ({}) under {:?}", left.description(), right.description(), pr);
    let pr = *pr;
    let l = Arc::new(left);
    let r = Arc::new(right);
    Ok(PrefixGame::new(description, move |s| {
        let (a, b) = pr.decompose_string(s);
        combine(l.classify(&a), r.classify(&b))
    })
    .with_max_depth(DEFAULT_MAX_DEPTH))
}

/// Finite when both factors are, otherwise a prefix game.
pub fn product(g1: &Game, g2: &Game, pr: &Pairing) -> Result<Game> {
    match (g1, g2) {
        (Game::Finite(a), Game::Finite(b)) => Ok(Game::Finite(product_finite(a, b, pr)?)),
        _ => Ok(Game::Prefix(product_prefix(g1, g2, pr)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::classify;
    use crate::constructions::catalog;
    use crate::nakamura::{nakamura_number, NakamuraValue};

    fn c(members: &[usize], n: usize) -> Coalition {
        Coalition::from_members(members.iter().copied(), n).unwrap()
    }

    #[test]
    fn disjoint_image_examples() {
        let s = disjoint_image(&c(&[0, 2, 3], 5), &c(&[1, 2, 4], 5), &Pairing::EvenOdd).unwrap();
        assert_eq!(s.members(), vec![0, 3, 4, 5, 6, 9]);
        let s = disjoint_image(&c(&[0, 2, 3], 4), &c(&[1, 2, 4], 5), &Pairing::Shift { k: 4 }).unwrap();
        assert_eq!(s.members(), vec![0, 2, 3, 5, 6, 8]);
        let e = disjoint_image(&c(&[], 2), &c(&[], 2), &Pairing::EvenOdd).unwrap();
        assert!(e.is_empty());
        assert_eq!(
            disjoint_image(&c(&[5], 6), &c(&[], 1), &Pairing::Shift { k: 4 }),
            Err(Error::OutsidePairingDomain)
        );
    }

    #[test]
    fn pairings_partition() {
        for n in 0..=12 {
            assert!(Pairing::EvenOdd.partitions(n));
            assert!(Pairing::Shift { k: 4 }.partitions(n));
        }
    }

    #[test]
    fn majority_squared() {
        let m = catalog::majority(3).unwrap();
        let p = product_finite(&m, &m, &Pairing::EvenOdd).unwrap();
        assert_eq!(nakamura_number(&p).value, NakamuraValue::Finite(3));
    }

    #[test]
    fn type3_product() {
        let g1 = catalog::partition_type3(&[2, 1, 1, 1], false).unwrap();
        let p = product_finite(&g1, &catalog::majority(3).unwrap(), &Pairing::Shift { k: 5 }).unwrap();
        assert_eq!(nakamura_number(&p).value, NakamuraValue::Finite(4));
        assert_eq!(classify(&p).unwrap().signature.type_index(), 3);
    }

    #[test]
    fn type11_product_with_nonproper_factor() {
        let p = product_finite(&catalog::type11_k2(), &catalog::type5_witness(), &Pairing::EvenOdd).unwrap();
        assert_eq!(nakamura_number(&p).value, NakamuraValue::Finite(2));
        assert_eq!(classify(&p).unwrap().signature.type_index(), 11);
    }

    #[test]
    fn shift_carrier_check() {
        let d = catalog::dictator(0, 4).unwrap();
        assert!(product_finite(&d, &d, &Pairing::Shift { k: 1 }).is_ok());
        let m = catalog::majority(3).unwrap();
        assert!(matches!(
            product_finite(&m, &m, &Pairing::Shift { k: 2 }),
            Err(Error::CarrierViolation(_))
        ));
    }

    #[test]
    fn prefix_product_agrees_with_finite_product() {
        let g1 = catalog::majority(3).unwrap();
        let g2 = catalog::type11_k2();
        for pr in [Pairing::EvenOdd, Pairing::Shift { k: 3 }] {
            let fin = product_finite(&g1, &g2, &pr).unwrap();
            let pre = product_prefix(&Game::Finite(g1.clone()), &Game::Finite(g2.clone()), &pr).unwrap();
            let n = fin.universe();
            for m in 0..1u64 << n {
                let s = BitString::from_bits(m, n).unwrap();
                assert_eq!(pre.eval_string(&s).is_winning(), fin.wins(m), "{pr:?} {s}");
            }
        }
    }
}
