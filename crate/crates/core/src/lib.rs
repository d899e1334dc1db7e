//! Behavioral models of initial play in two-player normal-form games.
//!
//! The crate covers the full workflow: game representation and equilibrium
//! analysis ([`game`], [`dominance`], [`nash`], [`qre`]), prediction models
//! ([`models`]), datasets ([`data`]), maximum likelihood fitting and
//! cross-validation ([`estimation`]), and Bayesian parameter analysis
//! ([`posterior`]).

pub mod data;
pub mod dominance;
pub mod error;
pub mod estimation;
pub mod fixtures;
pub mod game;
pub mod math;
pub mod models;
pub mod nash;
pub mod posterior;
pub mod qre;
pub mod rng;

pub use data::{Dataset, FeatureFilter, Observation};
pub use error::{Error, Result};
pub use game::{ActionDistribution, Game, Player, StrategyProfile};
pub use models::{ModelSpec, ParameterVector};
