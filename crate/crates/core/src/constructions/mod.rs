//! Named witness games, products and the determining-string construction,
//! plus the JSON description of any of them.

pub mod appendix_a;
pub mod audit;
pub mod catalog;
pub mod product;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{FiniteGame, Game};

pub use appendix_a::{appendix_a_classify, appendix_a_game, appendix_a_tables, IndexOracle, OracleSpec};
pub use product::{disjoint_image, product, Pairing};

/// A catalog entry with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum Construction {
    Majority {
        n: usize,
    },
    Dictator {
        player: usize,
        n: usize,
    },
    Unanimity {
        members: Vec<usize>,
        n: usize,
    },
    PartitionType3 {
        sizes: Vec<usize>,
        #[serde(default)]
        allow_singletons: bool,
    },
    PartitionType11 {
        sizes: Vec<usize>,
    },
    Type11K2,
    ExampleType9,
    ExampleType13,
    ExampleType15,
    VetoFreeRule {
        k: usize,
    },
    Type4Witness,
    Type5Witness,
    Type7Witness,
    Type12Witness,
    #[serde(rename = "appendixA")]
    AppendixA {
        oracle: OracleSpec,
    },
}

impl Construction {
    pub const NAMES: [&'static str; 15] = [
        "majority",
        "dictator",
        "unanimity",
        "partition_type3",
        "partition_type11",
        "type11_k2",
        "example_type9",
        "example_type13",
        "example_type15",
        "veto_free_rule",
        "type4_witness",
        "type5_witness",
        "type7_witness",
        "type12_witness",
        "appendixA",
    ];

    pub fn build(&self) -> Result<Game> {
        use Construction::*;
        let finite = |g: FiniteGame| Ok(Game::Finite(g));
        match self {
            Majority { n } => finite(catalog::majority(*n)?),
            Dictator { player, n } => finite(catalog::dictator(*player, *n)?),
            Unanimity { members, n } => finite(catalog::unanimity(members, *n)?),
            PartitionType3 {
                sizes,
                allow_singletons,
            } => finite(catalog::partition_type3(sizes, *allow_singletons)?),
            PartitionType11 { sizes } => finite(catalog::partition_type11(sizes)?),
            Type11K2 => finite(catalog::type11_k2()),
            ExampleType9 => finite(catalog::example_type9()),
            ExampleType13 => finite(catalog::example_type13()),
            ExampleType15 => finite(catalog::example_type15()),
            VetoFreeRule { k } => finite(catalog::veto_free_rule(*k)?),
            Type4Witness => finite(catalog::type4_witness()),
            Type5Witness => finite(catalog::type5_witness()),
            Type7Witness => finite(catalog::type7_witness()),
            Type12Witness => finite(catalog::type12_witness()),
            AppendixA { oracle } => Ok(Game::Prefix(appendix_a_game(&IndexOracle::from_spec(oracle)?))),
        }
    }
}

/// JSON description of a game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameSpec {
    /// Winning coalitions as lists of player ids over `0..universe`.
    Finite {
        universe: usize,
        winning: Vec<Vec<usize>>,
    },
    Construction(Construction),
    Product {
        left: Box<GameSpec>,
        right: Box<GameSpec>,
        pairing: Pairing,
    },
}

impl GameSpec {
    pub fn from_finite(g: &FiniteGame) -> Self {
        GameSpec::Finite {
            universe: g.universe(),
            winning: g.to_lists(),
        }
    }

    pub fn to_game(&self) -> Result<Game> {
        match self {
            GameSpec::Finite { universe, winning } => Ok(Game::Finite(FiniteGame::from_lists(*universe, winning)?)),
            GameSpec::Construction(c) => c.build(),
            GameSpec::Product { left, right, pairing } => product(&left.to_game()?, &right.to_game()?, pairing),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }
}

/// Builds a catalog entry from its name and a JSON object of parameters.
pub fn build(name: &str, params: serde_json::Value) -> Result<Game> {
    if !Construction::NAMES.contains(&name) {
        return Err(Error::UnknownConstruction(name.to_string()));
    }
    let mut obj = serde_json::Map::new();
    obj.insert("name".into(), name.into());
    if !params.is_null() {
        obj.insert("params".into(), params);
    }
    let c: Construction = serde_json::from_value(obj.into()).map_err(|e| Error::InvalidParams {
        name: name.to_string(),
        reason: e.to_string(),
    })?;
    c.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::classify;
    use crate::nakamura::{nakamura_number, NakamuraValue};
    use serde_json::json;

    #[test]
    fn build_by_name() {
        let g = build("partition_type3", json!({"sizes": [2, 1, 1]})).unwrap();
        let g = g.as_finite().unwrap();
        assert_eq!(classify(g).unwrap().signature.type_index(), 3);
        assert_eq!(nakamura_number(g).value, NakamuraValue::Finite(3));
        let g = build("type11_k2", serde_json::Value::Null).unwrap();
        assert_eq!(classify(g.as_finite().unwrap()).unwrap().signature.type_index(), 11);
        assert!(matches!(build("nope", json!({})), Err(Error::UnknownConstruction(_))));
        assert!(matches!(
            build("partition_type3", json!({"sizes": [2, 1]})),
            Err(Error::InvalidParams { .. })
        ));
        assert!(build("appendixA", json!({"oracle": {"kind": "alternating"}}))
            .unwrap()
            .as_finite()
            .is_none());
    }

    #[test]
    fn spec_round_trip() {
        let spec = GameSpec::Product {
            left: Box::new(GameSpec::Construction(Construction::PartitionType3 {
                sizes: vec![2, 1, 1],
                allow_singletons: false,
            })),
            right: Box::new(GameSpec::Construction(Construction::AppendixA {
                oracle: OracleSpec::Seeded { seed: 3 },
            })),
            pairing: Pairing::Shift { k: 4 },
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(GameSpec::from_json(&text).unwrap(), spec);
        let unit = GameSpec::from_json(r#"{"kind":"construction","name":"example_type9"}"#).unwrap();
        assert_eq!(unit, GameSpec::Construction(Construction::ExampleType9));
        let fin = GameSpec::from_json(r#"{"kind":"finite","universe":3,"winning":[[0,1],[0,2],[1,2],[0,1,2]]}"#)
            .unwrap()
            .to_game()
            .unwrap();
        assert_eq!(fin.as_finite().unwrap(), &catalog::majority(3).unwrap());
    }
}
