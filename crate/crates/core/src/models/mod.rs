//! Prediction models and the name registry used by the CLI and config files.
//!
//! Every model maps a game and a [`ParameterVector`] to one action
//! distribution per player. [`ModelSpec`] names a model, lists its parameters
//! and dispatches predictions.

pub mod levels;
pub mod lk;
pub mod nee;
pub mod params;
pub mod poisson_ch;
pub mod qlk;
pub mod spike;
pub mod variant;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionDistribution, Game, Player, StrategyProfile};

pub use levels::{LevelDistribution, LevelKind};
pub use lk::predict_lk;
pub use nee::{predict_nee, NeeSelection};
pub use params::{ParamInfo, ParamKind, ParameterVector};
pub use poisson_ch::predict_poisson_ch;
pub use qlk::predict_qlk;
pub use spike::predict_spike_poisson_qch;
pub use variant::{LevelSpec, PopulationBeliefs, PrecisionBeliefs, Precisions, VariantSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelFamily {
    Uniform,
    Qre,
    Lk,
    PoissonCh,
    Qlk,
    VariantGrid,
    SpikePoissonQch,
    Nee,
}

/// A named model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelSpec {
    /// Uniform play; the baseline every likelihood ratio is taken against.
    Uniform,
    Qre,
    Lk,
    PoissonCh,
    Qlk,
    Variant(VariantSpec),
    SpikePoissonQch,
    /// Nash equilibrium with error, averaged over all enumerated equilibria.
    Nee,
}

/// The variant family with the number of free parameters of each member.
pub const VARIANT_MODELS: [(&str, usize); 29] = [
    ("QLk1", 2),
    ("gi-QLk2", 5),
    ("ai-QLk2", 4),
    ("gh-QLk2", 4),
    ("ah-QLk2", 3),
    ("gi-QCH2", 5),
    ("ai-QCH2", 4),
    ("gh-QCH2", 4),
    ("ah-QCH2", 3),
    ("gi-QLk3", 9),
    ("ai-QLk3", 6),
    ("gh-QLk3", 7),
    ("ah-QLk3", 4),
    ("gi-QCH3", 10),
    ("ai-QCH3", 6),
    ("gh-QCH3", 8),
    ("ah-QCH3", 4),
    ("ai-QLk4", 8),
    ("ah-QLk4", 5),
    ("ah-QLk5", 6),
    ("ah-QLk6", 7),
    ("ah-QLk7", 8),
    ("ah-QLkp", 2),
    ("ai-QCH4", 8),
    ("ah-QCH4", 5),
    ("ah-QCH5", 6),
    ("ah-QCH6", 7),
    ("ah-QCH7", 8),
    ("ah-QCHp", 2),
];

/// Registry names of the non-variant models.
pub const NAMED_MODELS: [&str; 7] = ["uniform", "QRE", "Lk", "Poisson-CH", "QLk", "ah-QCH-sp", "NEE"];

/// Every name the registry resolves, named models first.
pub fn registry_names() -> Vec<&'static str> {
    NAMED_MODELS
        .iter()
        .copied()
        .chain(VARIANT_MODELS.iter().map(|(n, _)| *n))
        .collect()
}

impl ModelSpec {
    /// Resolves a registry name. Names of the fixed models are
    /// case-insensitive; variant names are not (`ah` and `gi` are significant).
    pub fn parse(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        let spec = match lower.as_str() {
            "uniform" | "u.a.r." | "uar" => Self::Uniform,
            "qre" => Self::Qre,
            "lk" => Self::Lk,
            "poisson-ch" | "poissonch" | "pch" => Self::PoissonCh,
            "qlk" => Self::Qlk,
            "ah-qch-sp" | "spike-poisson-qch" => Self::SpikePoissonQch,
            "nee" => Self::Nee,
            _ => {
                return VariantSpec::parse(name)
                    .map(Self::Variant)
                    .ok_or_else(|| Error::UnknownModel(name.to_string()))
            }
        };
        Ok(spec)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn family(&self) -> ModelFamily {
        match self {
            Self::Uniform => ModelFamily::Uniform,
            Self::Qre => ModelFamily::Qre,
            Self::Lk => ModelFamily::Lk,
            Self::PoissonCh => ModelFamily::PoissonCh,
            Self::Qlk => ModelFamily::Qlk,
            Self::Variant(_) => ModelFamily::VariantGrid,
            Self::SpikePoissonQch => ModelFamily::SpikePoissonQch,
            Self::Nee => ModelFamily::Nee,
        }
    }

    pub fn parameters(&self) -> Vec<ParamInfo> {
        use ParamKind::*;
        let list = |items: &[(&str, ParamKind)]| {
            items
                .iter()
                .map(|&(n, k)| ParamInfo::new(n, k))
                .collect::<Vec<_>>()
        };
        match self {
            Self::Uniform => Vec::new(),
            Self::Qre => list(&[("lambda", Precision)]),
            Self::Lk => list(&[
                ("alpha1", Proportion),
                ("alpha2", Proportion),
                ("epsilon1", Probability),
                ("epsilon2", Probability),
            ]),
            Self::PoissonCh => list(&[("tau", Rate)]),
            Self::Qlk => list(&[
                ("alpha1", Proportion),
                ("alpha2", Proportion),
                ("lambda1", Precision),
                ("lambda2", Precision),
                ("lambda1(2)", Precision),
            ]),
            Self::Variant(v) => v.parameters(),
            Self::SpikePoissonQch => list(&[
                ("tau", Rate),
                ("epsilon", Probability),
                ("lambda", Precision),
            ]),
            Self::Nee => list(&[("epsilon", Probability)]),
        }
    }

    pub fn parameter_names(&self) -> Vec<String> {
        self.parameters().into_iter().map(|p| p.name).collect()
    }

    pub fn num_parameters(&self) -> usize {
        self.parameters().len()
    }

    /// Builds a parameter vector from values in [`parameters`](Self::parameters) order.
    pub fn parameter_vector(&self, values: &[f64]) -> Result<ParameterVector> {
        let theta = ParameterVector::new(self.parameter_names(), values.to_vec())?;
        self.validate(&theta)?;
        Ok(theta)
    }

    pub fn validate(&self, theta: &ParameterVector) -> Result<()> {
        params::validate(&self.parameters(), theta).map_err(|e| match e {
            Error::ParameterMismatch { reason, .. } => Error::ParameterMismatch {
                model: self.name(),
                reason,
            },
            other => other,
        })
    }

    /// Predictions for both players.
    pub fn predict_profile(&self, game: &Game, theta: &ParameterVector) -> Result<StrategyProfile> {
        self.validate(theta)?;
        let [row, col] = self.predict_unchecked(game, theta)?;
        Ok(StrategyProfile::new(
            ActionDistribution::from_normalized(row),
            ActionDistribution::from_normalized(col),
        ))
    }

    pub fn predict(&self, game: &Game, player: Player, theta: &ParameterVector) -> Result<ActionDistribution> {
        Ok(self.predict_profile(game, theta)?.get(player).clone())
    }

    fn predict_unchecked(&self, game: &Game, theta: &ParameterVector) -> Result<[Vec<f64>; 2]> {
        let v = |name: &str| theta.require(name);
        match self {
            Self::Uniform => Ok(Player::BOTH.map(|p| {
                let n = game.num_actions(p);
                vec![1.0 / n as f64; n]
            })),
            Self::Qre => {
                let profile = crate::qre::solve_qre(game, v("lambda")?)?;
                Ok([profile.row.into_inner(), profile.col.into_inner()])
            }
            Self::Lk => lk::lk_both(
                game,
                [v("alpha1")?, v("alpha2")?],
                [v("epsilon1")?, v("epsilon2")?],
            ),
            Self::PoissonCh => Ok(poisson_ch::cognitive_hierarchy(
                game,
                &LevelDistribution::poisson(v("tau")?)?,
            )),
            Self::Qlk => qlk::qlk_both(
                game,
                [v("alpha1")?, v("alpha2")?],
                v("lambda1")?,
                v("lambda2")?,
                v("lambda1(2)")?,
            ),
            Self::Variant(spec) => spec.predict_both(game, theta),
            Self::SpikePoissonQch => spike::spike_both(game, v("tau")?, v("epsilon")?, v("lambda")?),
            Self::Nee => {
                let eps = v("epsilon")?;
                let row = predict_nee(game, Player::Row, eps, NeeSelection::Average)?;
                let col = predict_nee(game, Player::Col, eps, NeeSelection::Average)?;
                Ok([row.into_inner(), col.into_inner()])
            }
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => write!(f, "uniform"),
            Self::Qre => write!(f, "QRE"),
            Self::Lk => write!(f, "Lk"),
            Self::PoissonCh => write!(f, "Poisson-CH"),
            Self::Qlk => write!(f, "QLk"),
            Self::Variant(v) => write!(f, "{v}"),
            Self::SpikePoissonQch => write!(f, "ah-QCH-sp"),
            Self::Nee => write!(f, "NEE"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Convenience wrapper for a registered variant.
pub fn predict_variant(
    game: &Game,
    player: Player,
    spec: &VariantSpec,
    theta: &ParameterVector,
) -> Result<ActionDistribution> {
    ModelSpec::Variant(*spec).predict(game, player, theta)
}
