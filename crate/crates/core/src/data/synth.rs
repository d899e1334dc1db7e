use rand::Rng;

use crate::data::{Dataset, Observation};
use crate::error::{Error, Result};
use crate::game::{Game, Player};
use crate::models::{ModelSpec, ParameterVector};
use crate::rng::stream_rng;

fn draw(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left `u` above the total; take the last action with mass
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

/// `n_obs` observations drawn from the model's predictions. Plays cycle
/// through `games` in order and each play yields one observation per role
/// (an odd `n_obs` ends with a lone row-player observation).
pub fn generate_synthetic(
    model: &ModelSpec,
    theta: &ParameterVector,
    games: &[Game],
    n_obs: usize,
    seed: u64,
) -> Result<Dataset> {
    if games.is_empty() {
        return Err(Error::InvalidPlan("no games to generate observations for".into()));
    }
    let predictions = games
        .iter()
        .map(|g| model.predict_profile(g, theta))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = stream_rng(seed, 0);
    let mut observations = Vec::with_capacity(n_obs);
    for k in 0..n_obs {
        let play = k / 2;
        let player = if k % 2 == 0 { Player::Row } else { Player::Col };
        let g = play % games.len();
        let action = draw(predictions[g].get(player).probs(), &mut rng);
        observations.push(Observation::new(games[g].id(), player, action, 1));
    }
    Dataset::new("synthetic", games.iter().cloned(), observations)
}
