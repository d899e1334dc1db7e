//! Bayesian parameter analysis: grid posteriors for one-parameter models,
//! annealed importance sampling for the rest, and marginal summaries.

pub mod ais;
pub mod grid;
pub mod prior;
pub mod samples;
pub mod schedule;

pub use ais::{ais_posterior, ais_with, AisOptions, ProposalSpec};
pub use grid::{grid_points, grid_posterior_1d, GridPosterior};
pub use prior::{FlatBound, PriorSpec};
pub use samples::{credible_interval, marginal_cdf, slope_reversals, PosteriorSampleSet, WeightedSample};
pub use schedule::AnnealingSchedule;
