//! Simple games and their Nakamura numbers.
//!
//! Finite games are stored as explicit families of winning coalitions over a
//! bounded universe; games without a finite carrier are represented by a
//! classifier of determining strings. On top of these sit the axiom
//! classifier, an exact Nakamura-number solver, the witness constructions,
//! the core of preference aggregation and effectivity of game forms.

pub mod aggregation;
pub mod axioms;
pub mod coalition;
pub mod constructions;
pub mod effectivity;
pub mod error;
pub mod game;
pub mod nakamura;
pub mod report;

pub use axioms::{classify, Classification, TypeSignature};
pub use coalition::{BitString, Coalition};
pub use error::{Error, Result};
pub use game::{Determination, FiniteGame, Game, MembershipStream, PrefixGame, Verdict};
pub use nakamura::{nakamura_number, NakamuraResult, NakamuraValue};
