//! Quantal level-k with two levels and a free belief precision.

use crate::error::Result;
use crate::game::{ActionDistribution, Game, Player};
use crate::models::levels::{mixture, LevelDistribution};
use crate::qre::quantal_best_response;

fn check_precision(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::InvalidParameter {
            name: name.to_string(),
            value,
            reason: "precision must be non-negative",
        })
    }
}

pub(crate) fn qlk_both(
    game: &Game,
    alphas: [f64; 2],
    lambda1: f64,
    lambda2: f64,
    lambda1_2: f64,
) -> Result<[Vec<f64>; 2]> {
    let levels = LevelDistribution::tabular(&alphas)?;
    check_precision("lambda1", lambda1)?;
    check_precision("lambda2", lambda2)?;
    check_precision("lambda1(2)", lambda1_2)?;
    let uniform = Player::BOTH.map(|p| {
        let n = game.num_actions(p);
        vec![1.0 / n as f64; n]
    });
    Ok(Player::BOTH.map(|p| {
        let opp = p.opponent();
        let level1 = quantal_best_response(game, p, &uniform[opp.index()], lambda1);
        let believed = quantal_best_response(game, opp, &uniform[p.index()], lambda1_2);
        let level2 = quantal_best_response(game, p, &believed, lambda2);
        mixture(
            levels.masses(),
            &[uniform[p.index()].clone(), level1, level2],
        )
    }))
}

pub fn predict_qlk(
    game: &Game,
    player: Player,
    alpha1: f64,
    alpha2: f64,
    lambda1: f64,
    lambda2: f64,
    lambda1_2: f64,
) -> Result<ActionDistribution> {
    let [row, col] = qlk_both(game, [alpha1, alpha2], lambda1, lambda2, lambda1_2)?;
    Ok(ActionDistribution::from_normalized(if player == Player::Row { row } else { col }))
}
