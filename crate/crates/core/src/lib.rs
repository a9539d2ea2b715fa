//! Round-robin draws for two divisions run in tandem.
//!
//! A league season for `2n` clubs is an ordered one-factorisation of the
//! complete graph `K_{2n}`: one perfect matching per round, every pair of
//! clubs meeting exactly once. This crate builds seasons for a first
//! division of `2n` clubs and a second division of `2n + 2` clubs so that
//! the number of *common fixtures* is as large as possible. A pair of clubs
//! fielding a side in both divisions plays a common fixture when both of
//! its games land in compatible rounds, so that a single shared venue and
//! date serves both matches.
//!
//! The headline numbers: for `n >= 2` the best achievable count is
//! `2n^2 - 3n + 4` when the first division plays a double round robin
//! against the second division's single round robin, and two fewer when
//! both play a single round robin. The [`construction`] module builds
//! schedules meeting those bounds for every `n`, [`analysis`] certifies
//! them, and [`oracle`] proves optimality for small `n` by exhaustive
//! search.

pub mod analysis;
pub mod construction;
pub mod document;
pub mod graph;
pub mod oracle;

pub use analysis::{
    c_max, check_balance, check_bound_lemmas, check_common_orientation, common_fixtures,
    BalanceReport, FixtureReport, LemmaViolation, OrientationViolation,
};
pub use construction::{
    build_draws, build_schedule, build_starters, expand_double_round_robin, orient, starter_params,
    tail_factors, Mode, OrientedFixture, OrientedRound, Schedule, ScheduleViolation,
    StarterDecomposition, StarterParams, TailFactors,
};
pub use document::{
    document_from_schedule, schedule_from_document, to_csv, to_text, ScheduleDocument,
};
pub use graph::{
    all_orbits, edge, orbit_edges, Division, Draw, FactorViolation, Fixture, OneFactor, Orbit,
    OrbitId, Role, Rotation, Vertex, Violation,
};
pub use oracle::{
    collect_factorisations, count_factorisations, enumerate_factorisations, exhaustive_max_common,
    perfect_matchings, random_draw, random_factorisation, EnumerationTask, FactorisationView,
    OracleResult,
};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("n = {n} is too small here (need n >= {min})")]
    SizeTooSmall { n: u32, min: u32 },
    #[error("label {label} is out of range for n = {n}")]
    LabelOutOfRange { label: u32, n: u32 },
    #[error("rotating label {label} must be below 2n - 2 = {} for n = {n}", 2 * n - 2)]
    RotatingOutOfRange { label: u32, n: u32 },
    #[error("orbit distance {delta} must lie in 1..={} for n = {n}", n.saturating_sub(1))]
    OrbitDistance { delta: u32, n: u32 },
    #[error("a club cannot play itself (label {label})")]
    LoopEdge { label: u32 },
    #[error("draws disagree on the problem size: n = {left} vs n = {right}")]
    SizeMismatch { left: u32, right: u32 },
    #[error("division two never plays the game between its two extra clubs")]
    MissingExtraGame,
    #[error("vertex count {vertex_count} must be even and at least 4")]
    BadVertexCount { vertex_count: u32 },
    #[error("vertex count {vertex_count} exceeds the enumeration limit of 64")]
    TooManyVertices { vertex_count: u32 },
    #[error("exhaustive search is only feasible for n in 1..=3, got n = {n}")]
    OracleSize { n: u32 },
    #[error("invalid enumeration prefix: {reason}")]
    BadPrefix { reason: String },
    #[error("unknown mode {value:?} (expected \"double\" or \"single\")")]
    UnknownMode { value: String },
    #[error("malformed schedule document: {reason}")]
    DocumentShape { reason: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
