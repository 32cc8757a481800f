use thiserror::Error;

/// Errors raised by game construction and analysis.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("universe of {0} players exceeds the supported bound of {max}", max = crate::coalition::MAX_UNIVERSE)]
    UniverseTooLarge(usize),

    #[error("bit string of length {0} exceeds the supported bound of {max}", max = crate::coalition::MAX_BITSTRING_LEN)]
    StringTooLong(usize),

    #[error("player {player} is outside the universe of {universe} players")]
    PlayerOutOfRange { player: usize, universe: usize },

    #[error("string of length {len} does not fit a universe of {universe} players")]
    StringExceedsUniverse { len: usize, universe: usize },

    #[error("coalition over universe {found} used with a game over universe {expected}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("invalid bit string {0:?}: only '0' and '1' are allowed")]
    InvalidBitString(String),

    #[error("the game has no winning coalitions")]
    EmptyGame,

    #[error("the empty coalition is winning, which the standing assumption excludes")]
    EmptyCoalitionWinning,

    #[error("the game is weak, so the statement does not apply")]
    WeakGame,

    #[error("inconsistent type signature: {0}")]
    InconsistentSignature(String),

    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },

    #[error("unknown construction `{0}`")]
    UnknownConstruction(String),

    #[error("carrier of the first factor is not contained in the pairing domain: {0}")]
    CarrierViolation(String),

    #[error("coalition is not contained in the pairing domain")]
    OutsidePairingDomain,

    #[error("invalid index oracle: {0}")]
    InvalidOracle(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid game form: {0}")]
    InvalidGameForm(String),

    #[error("enumeration of {0} items exceeds the configured limit")]
    EnumerationTooLarge(u128),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
