//! Quantal cognitive hierarchy over a spike-Poisson level distribution.

use crate::error::Result;
use crate::game::{ActionDistribution, Game, Player};
use crate::models::levels::{mixture, truncated_mixture, LevelDistribution};
use crate::qre::quantal_best_response;

/// Every level `m ≥ 1` quantally responds, with the shared precision, to the
/// truncated mixture of levels `0..m`.
pub(crate) fn quantal_cognitive_hierarchy(
    game: &Game,
    levels: &LevelDistribution,
    lambda: f64,
) -> [Vec<f64>; 2] {
    let f = levels.masses();
    let mut plays: [Vec<Vec<f64>>; 2] = Player::BOTH.map(|p| {
        let n = game.num_actions(p);
        vec![vec![1.0 / n as f64; n]]
    });
    for m in 1..=levels.max_level() {
        let next = Player::BOTH.map(|p| {
            let belief = truncated_mixture(f, &plays[p.opponent().index()], m);
            quantal_best_response(game, p, &belief, lambda)
        });
        for (plays, level) in plays.iter_mut().zip(next) {
            plays.push(level);
        }
    }
    Player::BOTH.map(|p| mixture(f, &plays[p.index()]))
}

pub(crate) fn spike_both(game: &Game, tau: f64, epsilon: f64, lambda: f64) -> Result<[Vec<f64>; 2]> {
    let levels = LevelDistribution::spike_poisson(tau, epsilon)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(crate::Error::InvalidParameter {
            name: "lambda".into(),
            value: lambda,
            reason: "precision must be non-negative",
        });
    }
    Ok(quantal_cognitive_hierarchy(game, &levels, lambda))
}

pub fn predict_spike_poisson_qch(
    game: &Game,
    player: Player,
    tau: f64,
    epsilon: f64,
    lambda: f64,
) -> Result<ActionDistribution> {
    let [row, col] = spike_both(game, tau, epsilon, lambda)?;
    Ok(ActionDistribution::from_normalized(if player == Player::Row { row } else { col }))
}
