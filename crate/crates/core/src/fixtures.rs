//! Bundled fixture games used by tests, benchmarks and the CLI's synthetic
//! workflows. The JSON sources live under `crates/core/fixtures/`.

use crate::game::Game;

const PRISONERS_DILEMMA: &str = include_str!("../fixtures/games/prisoners_dilemma.json");
const MATCHING_PENNIES: &str = include_str!("../fixtures/games/matching_pennies.json");
const BATTLE_OF_THE_SEXES: &str = include_str!("../fixtures/games/battle_of_the_sexes.json");
const DOMINANCE_CHAIN: &str = include_str!("../fixtures/games/dominance_chain.json");
const RECOVERY_GAMES: &str = include_str!("../fixtures/recovery_games.json");
const FEATURE_POOL: &str = include_str!("../fixtures/feature_pool.json");

fn parse(text: &str) -> Game {
    serde_json::from_str(text).expect("bundled fixture game is valid")
}

fn parse_many(text: &str) -> Vec<Game> {
    serde_json::from_str(text).expect("bundled fixture games are valid")
}

/// Cooperate/defect; defect strictly dominates for both players.
pub fn prisoners_dilemma() -> Game {
    parse(PRISONERS_DILEMMA)
}

pub fn matching_pennies() -> Game {
    parse(MATCHING_PENNIES)
}

/// Two pure equilibria and one mixed equilibrium ((2/3, 1/3), (1/3, 2/3)).
pub fn battle_of_the_sexes() -> Game {
    parse(BATTLE_OF_THE_SEXES)
}

/// 3x3 game solved by strict dominance in two sweeps, leaving (r0, c0).
pub fn dominance_chain() -> Game {
    parse(DOMINANCE_CHAIN)
}

/// The four hand-written games above.
pub fn classic_games() -> Vec<Game> {
    vec![
        prisoners_dilemma(),
        matching_pennies(),
        battle_of_the_sexes(),
        dominance_chain(),
    ]
}

/// Ten symmetric 5x5 and 6x6 games with payoffs between 0 and 100 cents, used
/// for generate-and-recover experiments. The payoffs were found by a local
/// search that minimized the asymptotic standard errors of the spike-Poisson
/// QCH parameters around (τ, ε, λ) = (1.5, 0.3, 0.2), so that all three are
/// well identified from a couple of thousand plays.
pub fn recovery_games() -> Vec<Game> {
    parse_many(RECOVERY_GAMES)
}

/// Thirty small games (the classics plus random 2x2 to 3x3 games with payoffs
/// in 0..=4, so ties and weak dominance are common).
pub fn feature_pool() -> Vec<Game> {
    parse_many(FEATURE_POOL)
}
