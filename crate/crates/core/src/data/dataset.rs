use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, Player};

/// `count` plays of `action` by the player in role `player` of `game_id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Observation {
    pub game_id: String,
    pub player: Player,
    pub action: usize,
    pub count: u64,
}

impl Observation {
    pub fn new(game_id: impl Into<String>, player: Player, action: usize, count: u64) -> Self {
        Self {
            game_id: game_id.into(),
            player,
            action,
            count,
        }
    }
}

/// Games keyed by id plus aggregated observations.
///
/// Observations with the same `(game, role, action)` are merged into one row
/// whose count is the sum; rows keep the order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    source: String,
    games: BTreeMap<String, Game>,
    observations: Vec<Observation>,
}

impl Dataset {
    pub fn new(
        source: impl Into<String>,
        games: impl IntoIterator<Item = Game>,
        observations: impl IntoIterator<Item = Observation>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for g in games {
            let id = g.id().to_string();
            if map.insert(id.clone(), g).is_some() {
                return Err(Error::InvalidGame {
                    id,
                    reason: "duplicate game id in dataset".into(),
                });
            }
        }
        let mut rows: Vec<Observation> = Vec::new();
        let mut index: HashMap<(String, Player, usize), usize> = HashMap::new();
        for obs in observations {
            let game = map
                .get(&obs.game_id)
                .ok_or_else(|| Error::UnknownGame(obs.game_id.clone()))?;
            let n = game.num_actions(obs.player);
            if obs.action >= n {
                return Err(Error::ActionOutOfRange {
                    player: obs.player,
                    index: obs.action,
                    count: n,
                });
            }
            if obs.count == 0 {
                continue;
            }
            let key = (obs.game_id.clone(), obs.player, obs.action);
            match index.get(&key) {
                Some(&i) => rows[i].count += obs.count,
                None => {
                    index.insert(key, rows.len());
                    rows.push(obs);
                }
            }
        }
        Ok(Self {
            source: source.into(),
            games: map,
            observations: rows,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn games(&self) -> impl Iterator<Item = &Game> {
        self.games.values()
    }

    pub fn game(&self, id: &str) -> Option<&Game> {
        self.games.get(id)
    }

    pub fn num_games(&self) -> usize {
        self.games.len()
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    /// Number of individual plays, counting multiplicity.
    pub fn total_count(&self) -> u64 {
        self.observations.iter().map(|o| o.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Expands counts: one entry per individual play, holding the row index.
    pub fn unit_rows(&self) -> Vec<usize> {
        self.observations
            .iter()
            .enumerate()
            .flat_map(|(i, o)| std::iter::repeat_n(i, o.count as usize))
            .collect()
    }

    /// Same games, observation counts replaced row by row.
    pub fn with_counts(&self, counts: &[u64]) -> Dataset {
        assert_eq!(counts.len(), self.observations.len());
        Dataset {
            source: self.source.clone(),
            games: self.games.clone(),
            observations: self
                .observations
                .iter()
                .zip(counts)
                .filter(|(_, &c)| c > 0)
                .map(|(o, &c)| Observation { count: c, ..o.clone() })
                .collect(),
        }
    }

    /// Only the games satisfying `keep`, with their observations.
    pub fn retain_games(&self, mut keep: impl FnMut(&Game) -> bool) -> Dataset {
        let games: BTreeMap<String, Game> = self
            .games
            .iter()
            .filter(|(_, g)| keep(g))
            .map(|(k, g)| (k.clone(), g.clone()))
            .collect();
        let observations = self
            .observations
            .iter()
            .filter(|o| games.contains_key(&o.game_id))
            .cloned()
            .collect();
        Dataset {
            source: self.source.clone(),
            games,
            observations,
        }
    }

    /// Combines datasets. With more than one input, game ids are prefixed
    /// with `"<source>/"` so that equal ids from different sources stay apart.
    pub fn merge(datasets: &[Dataset], source: impl Into<String>) -> Result<Dataset> {
        if let [only] = datasets {
            let mut out = only.clone();
            out.source = source.into();
            return Ok(out);
        }
        let mut games = Vec::new();
        let mut observations = Vec::new();
        for d in datasets {
            let prefix = |id: &str| format!("{}/{}", d.source, id);
            games.extend(d.games().map(|g| g.with_id(prefix(g.id()))));
            observations.extend(d.observations.iter().map(|o| Observation {
                game_id: prefix(&o.game_id),
                ..o.clone()
            }));
        }
        Dataset::new(source, games, observations)
    }
}
