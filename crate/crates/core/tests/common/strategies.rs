//! proptest generators for games, mixtures and parameter vectors.

#![allow(dead_code)]

use bgt::models::{ModelSpec, ParamKind};
use bgt::{Game, ParameterVector};
use proptest::prelude::*;

/// Random bimatrix games with integer payoffs in `0..=max_payoff`; small
/// payoff ranges make ties and weak dominance common.
pub fn game(max_actions: usize, max_payoff: i32) -> impl Strategy<Value = Game> {
    (1..=max_actions, 1..=max_actions).prop_flat_map(move |(r, c)| {
        proptest::collection::vec((0..=max_payoff, 0..=max_payoff), r * c).prop_map(move |cells| {
            let rows: Vec<Vec<(f64, f64)>> = cells
                .chunks(c)
                .map(|row| row.iter().map(|&(a, b)| (a as f64, b as f64)).collect())
                .collect();
            Game::from_bimatrix("g", &rows).unwrap()
        })
    })
}

/// Games with at least two actions per player and continuous payoffs.
pub fn generic_game(max_actions: usize) -> impl Strategy<Value = Game> {
    (2..=max_actions, 2..=max_actions).prop_flat_map(|(r, c)| {
        proptest::collection::vec((0.0..100.0f64, 0.0..100.0f64), r * c).prop_map(move |cells| {
            let rows: Vec<Vec<(f64, f64)>> = cells.chunks(c).map(<[_]>::to_vec).collect();
            Game::from_bimatrix("g", &rows).unwrap()
        })
    })
}

/// A probability vector of length `n`.
pub fn distribution(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..1.0f64, n).prop_map(|w| {
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            vec![1.0 / w.len() as f64; w.len()]
        } else {
            w.iter().map(|v| v / total).collect()
        }
    })
}

/// A valid parameter vector for `model`, frequently on the edges of the
/// valid region (zero precisions and rates, ε ∈ {0, 1}, proportions summing
/// to nearly 1).
pub fn parameters(model: &ModelSpec) -> impl Strategy<Value = ParameterVector> {
    let layout = model.parameters();
    let model = model.clone();
    let n = layout.len();
    (
        proptest::collection::vec(0.0..1.0f64, n),
        proptest::collection::vec(0u8..4, n),
        0.0..1.0f64,
    )
        .prop_map(move |(u, edge, keep)| {
            let n_prop = layout.iter().filter(|p| p.kind == ParamKind::Proportion).count();
            let prop_total: f64 = layout
                .iter()
                .zip(&u)
                .filter(|(p, _)| p.kind == ParamKind::Proportion)
                .map(|(_, v)| v + 1e-3)
                .sum();
            let values: Vec<f64> = layout
                .iter()
                .zip(u.iter().zip(&edge))
                .map(|(p, (&v, &e))| match p.kind {
                    ParamKind::Proportion => {
                        if n_prop == 0 {
                            0.0
                        } else {
                            keep * (v + 1e-3) / prop_total
                        }
                    }
                    ParamKind::Precision => match e {
                        0 => 0.0,
                        1 => 20.0 * v,
                        _ => 2.0 * v,
                    },
                    ParamKind::Rate => match e {
                        0 => 0.0,
                        _ => 6.0 * v,
                    },
                    ParamKind::Probability => match e {
                        0 => 0.0,
                        1 => 1.0,
                        _ => v,
                    },
                })
                .collect();
            model.parameter_vector(&values).unwrap()
        })
}
