mod common;

use bgt::data::generate_synthetic;
use bgt::fixtures;
use bgt::posterior::{ais_with, AisOptions, GridPosterior};
use bgt::{Dataset, ModelSpec, Observation};
use proptest::prelude::*;

fn pch_data(tau: f64, n: usize, seed: u64) -> Dataset {
    let m = ModelSpec::PoissonCh;
    let theta = m.parameter_vector(&[tau]).unwrap();
    generate_synthetic(&m, &theta, &fixtures::feature_pool()[..8], n, seed).unwrap()
}

/// One dataset per individual play, in row order.
fn single_plays(data: &Dataset) -> Vec<Dataset> {
    let mut out = vec![];
    for obs in data.observations() {
        for _ in 0..obs.count {
            let one = Observation::new(obs.game_id.clone(), obs.player, obs.action, 1);
            out.push(Dataset::new("one", data.games().cloned(), [one]).unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sequential_updates_equal_one_batch_update(seed in 0u64..1000, tau in 0.2..3.0f64) {
        let m = ModelSpec::PoissonCh;
        let data = pch_data(tau, 40, seed);
        let prior = GridPosterior::flat(&m, 0.0, 5.0, 0.05).unwrap();
        let batch = prior.updated(&m, &data).unwrap();
        let mut sequential = prior.clone();
        for one in single_plays(&data) {
            sequential = sequential.updated(&m, &one).unwrap();
        }
        for (a, b) in batch.log_probs.iter().zip(&sequential.log_probs) {
            if a.is_finite() || b.is_finite() {
                prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn ais_weights_are_finite_and_acceptance_moderate(seed in 0u64..1000, tau in 0.5..2.5f64) {
        let m = ModelSpec::PoissonCh;
        let theta = m.parameter_vector(&[tau]).unwrap();
        let data = generate_synthetic(&m, &theta, &fixtures::recovery_games(), 1000, seed).unwrap();
        let options = AisOptions::new(20, seed);
        let set = ais_with(&m, &data, &options).unwrap();
        let total: f64 = set.samples.iter().map(|s| s.weight).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for s in &set.samples {
            prop_assert!(s.weight.is_finite() && s.log_weight.is_finite() && s.weight >= 0.0);
        }
        let rate = set.acceptance_rate.unwrap();
        prop_assert!((0.2..=0.8).contains(&rate), "acceptance {rate}");
    }
}

// The proposal widths were tuned for experiment-sized data: payoffs in cents
// and around a thousand plays. On such problems the acceptance rate over the
// whole annealing run stays near one half.
#[test]
fn acceptance_is_moderate_for_multi_parameter_models() {
    let games = fixtures::recovery_games();
    for (name, values) in [("ah-QCH-sp", vec![1.5, 0.3, 0.2]), ("QLk", vec![0.4, 0.3, 0.1, 0.2, 0.1])] {
        let m = ModelSpec::parse(name).unwrap();
        let theta = m.parameter_vector(&values).unwrap();
        let data = generate_synthetic(&m, &theta, &games, 1000, 3).unwrap();
        let options = AisOptions::new(20, 5);
        let set = ais_with(&m, &data, &options).unwrap();
        let rate = set.acceptance_rate.unwrap();
        assert!((0.2..=0.8).contains(&rate), "{name}: acceptance {rate}");
    }
}
