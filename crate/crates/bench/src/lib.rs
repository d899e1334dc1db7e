//! Shared inputs for the benchmarks: deterministic games of a given size and
//! a synthetic dataset over the recovery games.

use bgt::data::generate_synthetic;
use bgt::{fixtures, Dataset, Game, ModelSpec};

/// An `n x n` game with pseudo-random payoffs in 0..100, the same for every
/// call with the same arguments.
pub fn square_game(n: usize, salt: u64) -> Game {
    let mut state = salt.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 100) as f64
    };
    let cells: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|_| (0..n).map(|_| (next(), next())).collect())
        .collect();
    Game::from_bimatrix(format!("bench_{n}x{n}_{salt}"), &cells).expect("valid bench game")
}

/// 2000 spike-Poisson QCH plays over the bundled recovery games.
pub fn recovery_dataset() -> Dataset {
    let model = ModelSpec::SpikePoissonQch;
    let theta = model.parameter_vector(&[1.5, 0.3, 0.2]).expect("valid parameters");
    generate_synthetic(&model, &theta, &fixtures::recovery_games(), 2000, 0).expect("synthetic data")
}
