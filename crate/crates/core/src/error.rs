use std::path::PathBuf;

use thiserror::Error;

use crate::game::Player;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game {id:?}: {reason}")]
    InvalidGame { id: String, reason: String },

    #[error("action index {index} out of range for {player} ({count} actions)")]
    ActionOutOfRange {
        player: Player,
        index: usize,
        count: usize,
    },

    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid action distribution: {0}")]
    InvalidDistribution(String),

    #[error("unit factor must be positive and finite, got {0}")]
    InvalidUnitFactor(f64),

    #[error("game {id:?} is {rows}x{cols}; equilibrium enumeration is limited to {limit} cells")]
    GameTooLarge {
        id: String,
        rows: usize,
        cols: usize,
        limit: usize,
    },

    #[error("QRE continuation stalled at lambda {lambda} (target {target}), last residual {residual:e}")]
    QreNonConvergence {
        lambda: f64,
        target: f64,
        residual: f64,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown model {0:?}")]
    UnknownModel(String),

    #[error("parameters do not match model {model}: {reason}")]
    ParameterMismatch { model: String, reason: String },

    #[error("equilibrium index {index} out of range ({count} equilibria)")]
    EquilibriumIndex { index: usize, count: usize },

    #[error("observation references unknown game {0:?}")]
    UnknownGame(String),

    #[error("dataset has {units} fold units but {folds} folds were requested")]
    TooFewUnits { units: usize, folds: usize },

    #[error("invalid fold plan: {0}")]
    InvalidPlan(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid annealing schedule: {0}")]
    InvalidSchedule(String),

    #[error("all importance weights underflowed; increase the sample count or revise the schedule")]
    WeightCollapse,

    #[error("unknown parameter {0:?}")]
    UnknownParameter(String),

    #[error("degenerate sample set: {0}")]
    DegenerateSamples(String),

    #[error("source {source_name:?} has {available} observations, {needed} requested")]
    InsufficientObservations {
        source_name: String,
        needed: usize,
        available: usize,
    },

    #[error("unknown feature filter {0:?}")]
    UnknownFilter(String),

    #[error("classifying game {id:?}: {source}")]
    Classification {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
