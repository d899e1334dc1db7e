//! Datasets: loading, combining, feature filtering and synthetic generation.

mod combine;
mod dataset;
mod filter;
pub mod io;
mod synth;

pub use combine::subsample_combine;
pub use dataset::{Dataset, Observation};
pub use filter::{filter_by_feature, game_features, FeatureFilter, GameFeatures};
pub use io::{load_dataset, save_dataset, DatasetManifest};
pub use synth::generate_synthetic;
