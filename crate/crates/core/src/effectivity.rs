//! Game forms and the simple games they induce through α-effectivity and
//! exact effectivity.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::coalition::{mask_members, Coalition};
use crate::error::{Error, Result};
use crate::game::{check_enumerable, FiniteGame};

/// Cap on `∏ |Σ_i|`.
pub const MAX_PROFILES: usize = 1 << 20;

/// Cap on the work of a derivation, `2^k · ∏ |Σ_i|`.
pub const MAX_DERIVATION_WORK: u128 = 1 << 32;

/// Largest outcome set.
pub const MAX_OUTCOMES: usize = 63;

/// `g: ∏ Σ_i → X`, stored as a table in mixed radix with player 0 varying
/// fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameForm {
    strategies: Vec<usize>,
    outcomes: Vec<String>,
    table: Vec<usize>,
}

impl GameForm {
    pub fn new(strategies: Vec<usize>, outcomes: Vec<String>, table: Vec<usize>) -> Result<Self> {
        let total = profile_count(&strategies)?;
        if outcomes.is_empty() || outcomes.len() > MAX_OUTCOMES {
            return Err(Error::InvalidGameForm(format!(
                "need 1..={MAX_OUTCOMES} outcomes, got {}",
                outcomes.len()
            )));
        }
        if outcomes.iter().collect::<BTreeSet<_>>().len() != outcomes.len() {
            return Err(Error::InvalidGameForm("outcome labels must be distinct".into()));
        }
        if table.len() != total {
            return Err(Error::InvalidGameForm(format!(
                "table has {} entries for {total} strategy profiles",
                table.len()
            )));
        }
        if let Some(&x) = table.iter().find(|&&x| x >= outcomes.len()) {
            return Err(Error::InvalidGameForm(format!("outcome index {x} out of range")));
        }
        Ok(GameForm {
            strategies,
            outcomes,
            table,
        })
    }

    pub fn from_fn(
        strategies: Vec<usize>,
        outcomes: Vec<String>,
        mut g: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self> {
        let total = profile_count(&strategies)?;
        let mut sigma = vec![0usize; strategies.len()];
        let mut table = Vec::with_capacity(total);
        for idx in 0..total {
            decode(idx, &strategies, &mut sigma);
            table.push(g(&sigma));
        }
        Self::new(strategies, outcomes, table)
    }

    /// `k` players with strategies `{0,1}`; outcome 1 iff at least `k − 1`
    /// of them play 1.
    pub fn veto_free(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams {
                name: "veto_free".into(),
                reason: format!("needs k >= 2, got {k}"),
            });
        }
        Self::from_fn(vec![2; k], vec!["0".into(), "1".into()], |s| {
            usize::from(s.iter().filter(|&&x| x == 1).count() + 1 >= k)
        })
    }

    /// Every profile yields `value`; the outcomes are `outcomes`.
    pub fn constant(strategies: Vec<usize>, outcomes: Vec<String>, value: usize) -> Result<Self> {
        Self::from_fn(strategies, outcomes, |_| value)
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn strategies(&self) -> &[usize] {
        &self.strategies
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    /// `g(σ)`.
    pub fn outcome(&self, sigma: &[usize]) -> Result<usize> {
        if sigma.len() != self.players() || sigma.iter().zip(&self.strategies).any(|(s, n)| s >= n) {
            return Err(Error::InvalidGameForm(format!("{sigma:?} is not a strategy profile")));
        }
        Ok(self.table[encode(sigma, &self.strategies)])
    }

    /// Outcome sets as masks over the outcome indices.
    pub fn outcome_set(&self, labels: &[&str]) -> Result<u64> {
        labels.iter().try_fold(0u64, |acc, l| {
            self.outcome_index(l)
                .map(|i| acc | 1 << i)
                .ok_or_else(|| Error::InvalidGameForm(format!("unknown outcome {l:?}")))
        })
    }

    fn check_coalition(&self, s: &Coalition) -> Result<()> {
        if s.universe() != self.players() {
            return Err(Error::UniverseMismatch {
                expected: self.players(),
                found: s.universe(),
            });
        }
        Ok(())
    }

    /// `{g(σ_S, σ_−S) : σ_−S}` for each `σ_S`, as outcome masks; one entry
    /// per `σ_S`.
    pub fn images(&self, s: u64) -> Vec<u64> {
        let inside = mask_members(s).collect::<Vec<_>>();
        let outside = (0..self.players()).filter(|i| s >> i & 1 == 0).collect::<Vec<_>>();
        let in_radix = inside.iter().map(|&i| self.strategies[i]).collect::<Vec<_>>();
        let out_radix = outside.iter().map(|&i| self.strategies[i]).collect::<Vec<_>>();
        let in_total: usize = in_radix.iter().product();
        let out_total: usize = out_radix.iter().product();
        let mut sigma = vec![0usize; self.players()];
        let mut part = vec![0usize; self.players()];
        let mut out = Vec::with_capacity(in_total);
        for a in 0..in_total {
            decode(a, &in_radix, &mut part);
            for (k, &i) in inside.iter().enumerate() {
                sigma[i] = part[k];
            }
            let mut image = 0u64;
            for b in 0..out_total {
                decode(b, &out_radix, &mut part);
                for (k, &i) in outside.iter().enumerate() {
                    sigma[i] = part[k];
                }
                image |= 1 << self.table[encode(&sigma, &self.strategies)];
            }
            out.push(image);
        }
        out
    }
}

fn profile_count(strategies: &[usize]) -> Result<usize> {
    if strategies.is_empty() {
        return Err(Error::InvalidGameForm("a game form needs at least one player".into()));
    }
    check_enumerable(strategies.len())?;
    if strategies.contains(&0) {
        return Err(Error::InvalidGameForm("every player needs a strategy".into()));
    }
    let mut total: u128 = 1;
    for &n in strategies {
        total = total.saturating_mul(n as u128);
    }
    if total > MAX_PROFILES as u128 {
        return Err(Error::EnumerationTooLarge(total));
    }
    Ok(total as usize)
}

fn decode(mut idx: usize, radix: &[usize], out: &mut [usize]) {
    for (k, &r) in radix.iter().enumerate() {
        out[k] = idx % r;
        idx /= r;
    }
}

fn encode(sigma: &[usize], radix: &[usize]) -> usize {
    sigma.iter().zip(radix).rev().fold(0, |acc, (&s, &r)| acc * r + s)
}

/// `∃σ_S ∀σ_−S: g(σ_S, σ_−S) ∈ B`.
pub fn alpha_effective(gf: &GameForm, s: &Coalition, b: u64) -> Result<bool> {
    gf.check_coalition(s)?;
    Ok(gf.images(s.mask()).iter().any(|&img| img & !b == 0))
}

/// `B = {g(σ_S, σ_−S) : σ_−S}` for some `σ_S`.
pub fn exactly_effective(gf: &GameForm, s: &Coalition, b: u64) -> Result<bool> {
    gf.check_coalition(s)?;
    Ok(gf.images(s.mask()).contains(&b))
}

fn check_work(gf: &GameForm) -> Result<()> {
    let work = (1u128 << gf.players()) * gf.table.len() as u128;
    if work > MAX_DERIVATION_WORK {
        return Err(Error::EnumerationTooLarge(work));
    }
    Ok(())
}

/// Coalitions α-effective for every nonempty outcome set.
///
/// α-effectivity is monotone in `B`, so it suffices that every singleton
/// can be forced.
pub fn derive_alpha_game(gf: &GameForm) -> Result<FiniteGame> {
    check_work(gf)?;
    let all = (1u64 << gf.outcomes.len()) - 1;
    FiniteGame::from_predicate(gf.players(), |s| {
        let forced = gf
            .images(s)
            .into_iter()
            .filter(|img| img.count_ones() == 1)
            .fold(0u64, |acc, img| acc | img);
        forced == all
    })
}

/// Coalitions exactly effective for every nonempty outcome set.
pub fn derive_exact_game(gf: &GameForm) -> Result<FiniteGame> {
    check_work(gf)?;
    let needed = (1u128 << gf.outcomes.len()) - 1;
    FiniteGame::from_predicate(gf.players(), |s| {
        let distinct = gf.images(s).into_iter().collect::<HashSet<_>>();
        distinct.len() as u128 == needed
    })
}

#[derive(Serialize, Deserialize)]
struct GameFormJson {
    players: usize,
    strategies: Vec<usize>,
    outcomes: Vec<String>,
    table: BTreeMap<String, String>,
}

impl Serialize for GameForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut sigma = vec![0usize; self.players()];
        let mut table = BTreeMap::new();
        for (idx, &x) in self.table.iter().enumerate() {
            decode(idx, &self.strategies, &mut sigma);
            let key = sigma.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            table.insert(key, self.outcomes[x].clone());
        }
        GameFormJson {
            players: self.players(),
            strategies: self.strategies.clone(),
            outcomes: self.outcomes.clone(),
            table,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GameForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = GameFormJson::deserialize(deserializer)?;
        GameForm::from_json_parts(raw).map_err(serde::de::Error::custom)
    }
}

impl GameForm {
    fn from_json_parts(raw: GameFormJson) -> Result<Self> {
        if raw.players != raw.strategies.len() {
            return Err(Error::InvalidGameForm(format!(
                "{} players but {} strategy counts",
                raw.players,
                raw.strategies.len()
            )));
        }
        let total = profile_count(&raw.strategies)?;
        let mut table = vec![None; total];
        for (key, label) in &raw.table {
            let sigma = key
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidGameForm(format!("bad profile key {key:?}")))?;
            if sigma.len() != raw.players || sigma.iter().zip(&raw.strategies).any(|(s, n)| s >= n) {
                return Err(Error::InvalidGameForm(format!("profile {key:?} outside the strategy sets")));
            }
            let x = raw
                .outcomes
                .iter()
                .position(|o| o == label)
                .ok_or_else(|| Error::InvalidGameForm(format!("unknown outcome {label:?}")))?;
            table[encode(&sigma, &raw.strategies)] = Some(x);
        }
        let table = table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidGameForm("table does not cover every strategy profile".into()))?;
        GameForm::new(raw.strategies, raw.outcomes, table)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGameForm(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::classify;
    use crate::constructions::catalog;

    fn c(members: &[usize], n: usize) -> Coalition {
        Coalition::from_members(members.iter().copied(), n).unwrap()
    }

    #[test]
    fn veto_free_effectivity() {
        let gf = GameForm::veto_free(4).unwrap();
        assert!(alpha_effective(&gf, &c(&[0, 1, 2], 4), 0b10).unwrap());
        assert!(!exactly_effective(&gf, &c(&[0, 1, 2, 3], 4), 0b11).unwrap());
        assert!(exactly_effective(&gf, &c(&[0, 1, 2], 4), 0b11).unwrap());
        assert!(!alpha_effective(&gf, &c(&[0, 1], 4), 0b10).unwrap());
        for m in 0..16 {
            let s = Coalition::from_mask(m, 4).unwrap();
            assert!(alpha_effective(&gf, &s, 0b11).unwrap());
            assert!(!alpha_effective(&gf, &s, 0).unwrap());
            assert!(!exactly_effective(&gf, &s, 0).unwrap());
        }
        assert!(exactly_effective(&gf, &c(&[0, 1, 2, 3], 4), 1 << gf.outcome(&[1, 0, 1, 1]).unwrap()).unwrap());
    }

    #[test]
    fn veto_free_derivations() {
        let gf = GameForm::veto_free(4).unwrap();
        let alpha = derive_alpha_game(&gf).unwrap();
        assert_eq!(alpha, catalog::veto_free_rule(4).unwrap());
        let exact = derive_exact_game(&gf).unwrap();
        assert_eq!(exact, catalog::partition_type11(&[1, 1, 1, 1]).unwrap());
        assert_eq!(classify(&exact).unwrap().signature.type_index(), 11);
        assert_eq!(derive_alpha_game(&GameForm::veto_free(3).unwrap()).unwrap(), catalog::majority(3).unwrap());
        let exact3 = derive_exact_game(&GameForm::veto_free(3).unwrap()).unwrap();
        assert_eq!(exact3.winning_masks(), &[0b011, 0b101, 0b110]);
    }

    #[test]
    fn constant_form_derives_empty_games() {
        let gf = GameForm::constant(vec![2, 3], vec!["a".into(), "b".into()], 0).unwrap();
        assert!(derive_alpha_game(&gf).unwrap().is_empty_game());
        assert!(derive_exact_game(&gf).unwrap().is_empty_game());
        assert!(alpha_effective(&gf, &c(&[], 2), gf.outcome_set(&["a"]).unwrap()).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let gf = GameForm::veto_free(3).unwrap();
        let text = serde_json::to_string(&gf).unwrap();
        assert!(text.contains(r#""1,1,0":"1""#));
        assert_eq!(GameForm::from_json(&text).unwrap(), gf);
        let missing = r#"{"players":1,"strategies":[2],"outcomes":["a"],"table":{"0":"a"}}"#;
        assert!(matches!(GameForm::from_json(missing), Err(Error::InvalidGameForm(_))));
    }

    #[test]
    fn invalid_forms() {
        assert!(GameForm::new(vec![2], vec!["a".into()], vec![0, 1]).is_err());
        assert!(GameForm::new(vec![0], vec!["a".into()], vec![]).is_err());
        assert!(GameForm::new(vec![2], vec!["a".into(), "a".into()], vec![0, 0]).is_err());
        assert!(matches!(GameForm::veto_free(21), Err(Error::EnumerationTooLarge(_))));
    }
}
