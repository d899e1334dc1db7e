use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::dominance::{classify_dominance, DominanceClassification};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::nash::EquilibriumStructure;

/// Game-feature subsets of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureFilter {
    /// Weak dominance solvable in one round.
    D1,
    /// Weak dominance solvable in at most two rounds.
    D2,
    /// Strict dominance solvable in at most two rounds.
    D2s,
    /// Weak dominance solvable.
    DS,
    /// Strict dominance solvable.
    DSs,
    /// Not weak dominance solvable.
    ND,
    /// A single Nash equilibrium, which is pure.
    PSNE1,
    /// A single Nash equilibrium, which is mixed.
    MSNE1,
    /// More than one Nash equilibrium.
    MultiEqm,
}

impl FeatureFilter {
    pub const ALL: [FeatureFilter; 9] = [
        Self::D1,
        Self::D2,
        Self::D2s,
        Self::DS,
        Self::DSs,
        Self::ND,
        Self::PSNE1,
        Self::MSNE1,
        Self::MultiEqm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::D1 => "D1",
            Self::D2 => "D2",
            Self::D2s => "D2s",
            Self::DS => "DS",
            Self::DSs => "DSs",
            Self::ND => "ND",
            Self::PSNE1 => "PSNE1",
            Self::MSNE1 => "MSNE1",
            Self::MultiEqm => "MultiEqm",
        }
    }

    pub fn matches(self, features: &GameFeatures) -> bool {
        let d = &features.dominance;
        match self {
            Self::D1 => d.rounds_weak == Some(1),
            Self::D2 => d.rounds_weak.is_some_and(|r| r <= 2),
            Self::D2s => d.rounds_strict.is_some_and(|r| r <= 2),
            Self::DS => d.solvable_weak,
            Self::DSs => d.solvable_strict,
            Self::ND => !d.solvable_weak,
            Self::PSNE1 => features.structure == EquilibriumStructure::SinglePure,
            Self::MSNE1 => features.structure == EquilibriumStructure::SingleMixed,
            Self::MultiEqm => features.structure == EquilibriumStructure::Multiple,
        }
    }
}

impl fmt::Display for FeatureFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "");
        let exact = Self::ALL.into_iter().find(|f| f.name() == key);
        // D2/D2s and DS/DSs differ only in the case of their suffix, so those
        // names never match case-insensitively
        let loose = || {
            let lower = key.to_ascii_lowercase();
            (!matches!(lower.as_str(), "d2s" | "dss"))
                .then(|| Self::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(&key)))
                .flatten()
        };
        exact.or_else(loose).ok_or_else(|| Error::UnknownFilter(s.to_string()))
    }
}

/// Dominance and equilibrium features of one game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFeatures {
    pub dominance: DominanceClassification,
    pub structure: EquilibriumStructure,
    pub degenerate: bool,
}

pub fn game_features(game: &Game) -> Result<GameFeatures> {
    let set = game.equilibria().map_err(|e| Error::Classification {
        id: game.id().to_string(),
        source: Box::new(e),
    })?;
    Ok(GameFeatures {
        dominance: classify_dominance(game),
        structure: set.structure,
        degenerate: set.degenerate,
    })
}

/// The games of the combined `datasets` that have the feature, with all their
/// observations.
pub fn filter_by_feature(datasets: &[Dataset], filter: FeatureFilter) -> Result<Dataset> {
    let merged = Dataset::merge(datasets, filter.name())?;
    let mut keep = std::collections::HashSet::new();
    for g in merged.games() {
        if filter.matches(&game_features(g)?) {
            keep.insert(g.id().to_string());
        }
    }
    Ok(merged.retain_games(|g| keep.contains(g.id())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        for f in FeatureFilter::ALL {
            assert_eq!(f.name().parse::<FeatureFilter>().unwrap(), f);
        }
        assert_eq!("Multi-Eqm".parse::<FeatureFilter>().unwrap(), FeatureFilter::MultiEqm);
        assert_eq!("psne1".parse::<FeatureFilter>().unwrap(), FeatureFilter::PSNE1);
        assert_eq!("D2S".parse::<FeatureFilter>().ok(), None);
        assert!("D3".parse::<FeatureFilter>().is_err());
    }
}
