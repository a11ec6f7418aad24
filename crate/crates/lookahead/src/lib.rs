//! Exact-arithmetic toolkit for sequential play in congestion games:
//! k-lookahead outcomes, subgame-perfect outcomes, genericity and
//! perturbation, series/extension-parallel network structure, equilibrium and
//! inefficiency analysis, and seeded property-check suites.

pub mod analysis;
pub mod fixtures;
pub mod games;
pub mod instance;
pub mod model;
pub mod network;
pub mod rational;
pub mod solver;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("delay table too short: need {want} entries, have {have}")]
    TableTooShort { want: usize, have: usize },

    #[error("player {0} has no assigned action")]
    UnassignedPlayer(model::PlayerId),

    #[error("unknown player {0}")]
    UnknownPlayer(model::PlayerId),

    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("perturbation failed: {0}")]
    PerturbationFailed(String),

    #[error("delay functions are not non-increasing")]
    NotCostSharing,

    #[error("unknown check id {0}")]
    UnknownCheck(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
