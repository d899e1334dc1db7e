//! Poisson cognitive hierarchy: each level best responds, uniformly over
//! ties, to the renormalized mixture of the levels below it.

use crate::error::Result;
use crate::game::{best_responses, uniform_over, ActionDistribution, Game, Player};
use crate::models::levels::{mixture, truncated_mixture, LevelDistribution};

pub(crate) fn cognitive_hierarchy(game: &Game, levels: &LevelDistribution) -> [Vec<f64>; 2] {
    let f = levels.masses();
    let mut plays: [Vec<Vec<f64>>; 2] = Player::BOTH.map(|p| {
        let n = game.num_actions(p);
        vec![vec![1.0 / n as f64; n]]
    });
    for m in 1..=levels.max_level() {
        let next = Player::BOTH.map(|p| {
            let opp = p.opponent();
            let belief = truncated_mixture(f, &plays[opp.index()], m);
            uniform_over(
                game.num_actions(p),
                &best_responses(&game.utilities(p, &belief)),
            )
        });
        for (plays, level) in plays.iter_mut().zip(next) {
            plays.push(level);
        }
    }
    Player::BOTH.map(|p| mixture(f, &plays[p.index()]))
}

pub fn predict_poisson_ch(game: &Game, player: Player, tau: f64) -> Result<ActionDistribution> {
    let levels = LevelDistribution::poisson(tau)?;
    let [row, col] = cognitive_hierarchy(game, &levels);
    Ok(ActionDistribution::from_normalized(if player == Player::Row { row } else { col }))
}
