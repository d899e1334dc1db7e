#![allow(dead_code)]

pub mod oracle;
pub mod strategies;

use bgt::fixtures;
use bgt::models::{ModelSpec, ParamKind};
use bgt::{Game, ParameterVector, Player};

/// Bundled games with at most three actions per player.
pub fn small_fixture_games() -> Vec<Game> {
    let mut games = fixtures::classic_games();
    games.extend(fixtures::feature_pool());
    games.retain(|g| {
        let (r, c) = g.shape();
        r <= 3 && c <= 3
    });
    games
}

/// A deterministic, valid parameter vector exercising every parameter of
/// `model` with distinct values.
pub fn test_parameters(model: &ModelSpec, variant: usize) -> ParameterVector {
    let layout = model.parameters();
    let n_prop = layout.iter().filter(|p| p.kind == ParamKind::Proportion).count();
    let weight_total: f64 = (1..=n_prop).map(|k| (k + variant) as f64).sum();
    let mut prop_seen = 0;
    let values: Vec<f64> = layout
        .iter()
        .enumerate()
        .map(|(i, p)| match p.kind {
            ParamKind::Proportion => {
                prop_seen += 1;
                0.85 * (prop_seen + variant) as f64 / weight_total
            }
            ParamKind::Precision => 0.35 + 0.23 * ((i + 3 * variant) % 7) as f64,
            ParamKind::Rate => 0.7 + 0.9 * variant as f64,
            ParamKind::Probability => 0.12 + 0.17 * ((i + variant) % 4) as f64,
        })
        .collect();
    model.parameter_vector(&values).unwrap()
}

/// Oracle prediction for any registered model.
pub fn oracle_predict(model: &ModelSpec, game: &Game, player: Player, theta: &ParameterVector) -> Vec<f64> {
    let v = |name: &str| theta.require(name).unwrap();
    let n = game.num_actions(player);
    match model {
        ModelSpec::Uniform => oracle::uniform(n),
        ModelSpec::Qre => {
            let (x, y) = oracle::qre(game, v("lambda"));
            if player == Player::Row { x } else { y }
        }
        ModelSpec::Lk => oracle::lk(game, player, v("alpha1"), v("alpha2"), v("epsilon1"), v("epsilon2")),
        ModelSpec::PoissonCh => oracle::poisson_ch(game, player, v("tau")),
        ModelSpec::Qlk => oracle::qlk(
            game,
            player,
            v("alpha1"),
            v("alpha2"),
            v("lambda1"),
            v("lambda2"),
            v("lambda1(2)"),
        ),
        ModelSpec::SpikePoissonQch => oracle::spike_qch(game, player, v("tau"), v("epsilon"), v("lambda")),
        ModelSpec::Nee => oracle::nee_average(game, player, v("epsilon")),
        ModelSpec::Variant(_) => {
            let pairs: Vec<(String, f64)> = theta.iter().map(|(n, x)| (n.to_string(), x)).collect();
            oracle::variant(game, player, &model.name(), &pairs)
        }
    }
}

/// Largest absolute difference between library and oracle predictions over
/// every registered model, every small fixture game, both players and two
/// parameter settings. Returns the difference and the number of predictions
/// compared.
pub fn oracle_max_difference() -> (f64, usize, String) {
    let games = small_fixture_games();
    let mut worst = (0.0f64, String::new());
    let mut compared = 0;
    for name in bgt::models::registry_names() {
        let model = ModelSpec::parse(name).unwrap();
        for variant in 0..2 {
            let theta = test_parameters(&model, variant);
            for game in &games {
                for player in Player::BOTH {
                    let lib = model.predict(game, player, &theta).unwrap();
                    let ora = oracle_predict(&model, game, player, &theta);
                    let d = lib
                        .probs()
                        .iter()
                        .zip(&ora)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    compared += 1;
                    if d > worst.0 || d.is_nan() {
                        worst = (d, format!("{name} on {} ({player:?}, {theta})", game.id()));
                    }
                }
            }
        }
    }
    (worst.0, compared, worst.1)
}
