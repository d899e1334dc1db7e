use crate::data::Dataset;
use crate::error::Result;
use crate::game::{Game, Player};
use crate::models::{ModelSpec, ParameterVector};

/// Probabilities are floored here before taking logs.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

/// Action counts per game and role.
#[derive(Debug, Clone)]
pub struct GameCounts {
    pub game: Game,
    pub counts: [Vec<u64>; 2],
}

impl GameCounts {
    /// `Σ count · ln p` for the given per-role predictions.
    pub fn log_likelihood_of(&self, predictions: [&[f64]; 2]) -> f64 {
        let mut total = 0.0;
        for (counts, probs) in self.counts.iter().zip(predictions) {
            for (&c, &p) in counts.iter().zip(probs) {
                if c > 0 {
                    total += c as f64 * p.max(PROBABILITY_FLOOR).ln();
                }
            }
        }
        total
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// Observations grouped so each game is predicted once per evaluation.
#[derive(Debug, Clone)]
pub struct CountTable {
    entries: Vec<GameCounts>,
}

impl CountTable {
    pub fn from_dataset(dataset: &Dataset) -> Self {
        Self::from_row_counts(dataset, &dataset.observations().iter().map(|o| o.count).collect::<Vec<_>>())
    }

    /// Uses `counts[i]` in place of the count of observation row `i`.
    pub fn from_row_counts(dataset: &Dataset, counts: &[u64]) -> Self {
        let mut entries: Vec<GameCounts> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for (obs, &count) in dataset.observations().iter().zip(counts) {
            if count == 0 {
                continue;
            }
            let i = *index.entry(obs.game_id.as_str()).or_insert_with(|| {
                let game = dataset.game(&obs.game_id).expect("dataset validated").clone();
                let counts = Player::BOTH.map(|p| vec![0; game.num_actions(p)]);
                entries.push(GameCounts { game, counts });
                entries.len() - 1
            });
            entries[i].counts[obs.player.index()][obs.action] += count;
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[GameCounts] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(GameCounts::total).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn log_likelihood(&self, model: &ModelSpec, theta: &ParameterVector) -> Result<f64> {
        let mut total = 0.0;
        for e in &self.entries {
            let profile = model.predict_profile(&e.game, theta)?;
            total += e.log_likelihood_of([profile.row.probs(), profile.col.probs()]);
        }
        Ok(total)
    }

    /// Log likelihood of uniform play.
    pub fn uniform_log_likelihood(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                Player::BOTH
                    .iter()
                    .map(|&p| {
                        let n = e.game.num_actions(p) as f64;
                        e.counts[p.index()].iter().sum::<u64>() as f64 * -(n.ln())
                    })
                    .sum::<f64>()
            })
            .sum()
    }
}

/// `Σ count · ln Pr(action | game, θ)` over the dataset.
pub fn log_likelihood(model: &ModelSpec, theta: &ParameterVector, dataset: &Dataset) -> Result<f64> {
    CountTable::from_dataset(dataset).log_likelihood(model, theta)
}
