//! Likelihood, maximum likelihood fitting and cross-validated model
//! comparison.

pub mod cv;
pub mod fit;
pub mod likelihood;
pub mod nee_bounds;
pub mod nelder_mead;
pub mod transform;

pub use cv::{
    cross_validate, cross_validate_with, likelihood_ratio_vs_uniform, t_half_width, CvReport, CvScore, FoldPlan,
    FoldUnit,
};
pub use fit::{embed_parameters, fit_counts, fit_mle, FitOptions, FitResult, DEFAULT_RESTARTS};
pub use likelihood::{log_likelihood, CountTable, GameCounts, PROBABILITY_FLOOR};
pub use nee_bounds::{fit_nee_epsilon, nee_bounds, nee_expected_log_likelihood, NeeBounds};
pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};
