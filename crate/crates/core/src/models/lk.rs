//! Level-k with per-level error rates.

use crate::error::Result;
use crate::game::{best_responses, uniform_over, ActionDistribution, Game, Player};
use crate::models::levels::{mixture, LevelDistribution};

/// Iterated best-response sets for levels `0..=k_max`, per player.
///
/// A set-valued belief is treated as uniform play over the set.
pub fn iterated_best_responses(game: &Game, k_max: usize) -> Vec<[Vec<usize>; 2]> {
    let all = |p: Player| (0..game.num_actions(p)).collect::<Vec<_>>();
    let mut sets = vec![[all(Player::Row), all(Player::Col)]];
    for k in 1..=k_max {
        let prev = &sets[k - 1];
        let next = Player::BOTH.map(|p| {
            let opp = p.opponent();
            let belief = uniform_over(game.num_actions(opp), &prev[opp.index()]);
            best_responses(&game.utilities(p, &belief))
        });
        sets.push(next);
    }
    sets
}

/// Level-`k` play: `1 − ε` spread over the IBR set, `ε` over the rest.
/// When the IBR set covers every action the level plays uniformly.
fn level_play(n: usize, ibr: &[usize], epsilon: f64) -> Vec<f64> {
    if ibr.len() == n {
        return vec![1.0 / n as f64; n];
    }
    let inside = (1.0 - epsilon) / ibr.len() as f64;
    let outside = epsilon / (n - ibr.len()) as f64;
    (0..n)
        .map(|a| if ibr.contains(&a) { inside } else { outside })
        .collect()
}

pub(crate) fn lk_both(game: &Game, alphas: [f64; 2], epsilons: [f64; 2]) -> Result<[Vec<f64>; 2]> {
    let levels = LevelDistribution::tabular(&alphas)?;
    for (i, &e) in epsilons.iter().enumerate() {
        if !(0.0..=1.0).contains(&e) {
            return Err(crate::Error::InvalidParameter {
                name: format!("epsilon{}", i + 1),
                value: e,
                reason: "probability must lie in [0, 1]",
            });
        }
    }
    let ibr = iterated_best_responses(game, 2);
    Ok(Player::BOTH.map(|p| {
        let n = game.num_actions(p);
        let per_level: Vec<Vec<f64>> = (0..=2)
            .map(|k| {
                if k == 0 {
                    vec![1.0 / n as f64; n]
                } else {
                    level_play(n, &ibr[k][p.index()], epsilons[k - 1])
                }
            })
            .collect();
        mixture(levels.masses(), &per_level)
    }))
}

pub fn predict_lk(
    game: &Game,
    player: Player,
    alpha1: f64,
    alpha2: f64,
    epsilon1: f64,
    epsilon2: f64,
) -> Result<ActionDistribution> {
    let [row, col] = lk_both(game, [alpha1, alpha2], [epsilon1, epsilon2])?;
    let probs = if player == Player::Row { row } else { col };
    Ok(ActionDistribution::from_normalized(probs))
}
