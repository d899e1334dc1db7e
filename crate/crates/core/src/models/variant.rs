//! The quantal level-k / cognitive-hierarchy variant family.
//!
//! A variant is a point on four axes:
//!
//! * level distribution — explicit proportions over levels `0..=K`, or Poisson(τ);
//! * population beliefs — level `k` responds to level `k−1` only (`QLk`), or to
//!   the truncated mixture of levels `0..k` (`QCH`);
//! * precisions — one shared `λ` (`h`), or one `λ_k` per level (`i`);
//! * precision beliefs — accurate (`a`): believed lower levels use their true
//!   precisions; general (`g`): every believed agent carries its own free
//!   belief precision.
//!
//! Under general beliefs a believed agent is identified by its *path*: the
//! chain of levels from the real agent down to the believed one. Level 3
//! believing that level 2 believes in level 1 is the path `[3, 2, 1]`, whose
//! precision parameter is named `lambda1(2(3))`. Believed agents reason about
//! their own lower levels recursively, so a level-`k` QCH agent carries
//! `2^(k−1) − 1` belief precisions and a level-`k` QLk agent `k − 1`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, Player};
use crate::models::levels::{mixture, truncated_mixture, LevelDistribution};
use crate::models::params::{ParamInfo, ParamKind, ParameterVector};
use crate::qre::quantal_best_response;

/// Largest tabular level count accepted by [`VariantSpec::new`].
pub const MAX_TABULAR_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LevelSpec {
    Tabular(usize),
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PopulationBeliefs {
    Lk,
    Ch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Precisions {
    Homogeneous,
    Inhomogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrecisionBeliefs {
    Accurate,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariantSpec {
    levels: LevelSpec,
    population: PopulationBeliefs,
    precisions: Precisions,
    beliefs: PrecisionBeliefs,
}

impl VariantSpec {
    /// Poisson level distributions are only defined with homogeneous precision
    /// and accurate beliefs (the level count is unbounded).
    pub fn new(
        levels: LevelSpec,
        population: PopulationBeliefs,
        precisions: Precisions,
        beliefs: PrecisionBeliefs,
    ) -> Result<Self> {
        let spec = Self {
            levels,
            population,
            precisions,
            beliefs,
        };
        match levels {
            LevelSpec::Tabular(k) if k == 0 || k > MAX_TABULAR_LEVELS => {
                Err(Error::UnknownModel(format!(
                    "{spec}: level count must lie in 1..={MAX_TABULAR_LEVELS}"
                )))
            }
            LevelSpec::Poisson
                if precisions != Precisions::Homogeneous
                    || beliefs != PrecisionBeliefs::Accurate =>
            {
                Err(Error::UnknownModel(format!(
                    "{spec}: Poisson levels need homogeneous precision and accurate beliefs"
                )))
            }
            _ => Ok(spec),
        }
    }

    pub fn levels(&self) -> LevelSpec {
        self.levels
    }

    pub fn population(&self) -> PopulationBeliefs {
        self.population
    }

    pub fn precisions(&self) -> Precisions {
        self.precisions
    }

    pub fn beliefs(&self) -> PrecisionBeliefs {
        self.beliefs
    }

    /// Parses registry names such as `gi-QLk2`, `ah-QCHp` or `QLk1`.
    pub fn parse(name: &str) -> Option<Self> {
        if name == "QLk1" {
            return Self::new(
                LevelSpec::Tabular(1),
                PopulationBeliefs::Lk,
                Precisions::Inhomogeneous,
                PrecisionBeliefs::Accurate,
            )
            .ok();
        }
        let (prefix, rest) = name.split_once('-')?;
        let mut chars = prefix.chars();
        let beliefs = match chars.next()? {
            'a' => PrecisionBeliefs::Accurate,
            'g' => PrecisionBeliefs::General,
            _ => return None,
        };
        let precisions = match chars.next()? {
            'h' => Precisions::Homogeneous,
            'i' => Precisions::Inhomogeneous,
            _ => return None,
        };
        if chars.next().is_some() {
            return None;
        }
        let (population, suffix) = if let Some(s) = rest.strip_prefix("QLk") {
            (PopulationBeliefs::Lk, s)
        } else if let Some(s) = rest.strip_prefix("QCH") {
            (PopulationBeliefs::Ch, s)
        } else {
            return None;
        };
        let levels = match suffix {
            "p" => LevelSpec::Poisson,
            digits if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                LevelSpec::Tabular(digits.parse().ok()?)
            }
            _ => return None,
        };
        Self::new(levels, population, precisions, beliefs).ok()
    }

    /// Highest level with its own precision parameter(s).
    fn top_level(&self) -> usize {
        match self.levels {
            LevelSpec::Tabular(k) => k,
            LevelSpec::Poisson => 0,
        }
    }

    /// Believed-agent paths carrying a free precision, in parameter order.
    pub fn belief_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.beliefs == PrecisionBeliefs::General {
            for k in 2..=self.top_level() {
                self.collect_paths(&mut vec![k], &mut out);
            }
        }
        out
    }

    fn collect_paths(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let level = *path.last().expect("non-empty path");
        let lower: Vec<usize> = match self.population {
            PopulationBeliefs::Lk => (level > 1).then_some(level - 1).into_iter().collect(),
            PopulationBeliefs::Ch => (1..level).collect(),
        };
        for j in lower {
            path.push(j);
            out.push(path.clone());
            self.collect_paths(path, out);
            path.pop();
        }
    }

    pub fn parameters(&self) -> Vec<ParamInfo> {
        let mut out = Vec::new();
        match self.levels {
            LevelSpec::Tabular(k) => {
                out.extend((1..=k).map(|i| ParamInfo::new(format!("alpha{i}"), ParamKind::Proportion)))
            }
            LevelSpec::Poisson => out.push(ParamInfo::new("tau", ParamKind::Rate)),
        }
        match self.precisions {
            Precisions::Homogeneous => out.push(ParamInfo::new("lambda", ParamKind::Precision)),
            Precisions::Inhomogeneous => out.extend(
                (1..=self.top_level())
                    .map(|i| ParamInfo::new(format!("lambda{i}"), ParamKind::Precision)),
            ),
        }
        out.extend(
            self.belief_paths()
                .iter()
                .map(|p| ParamInfo::new(belief_name(p), ParamKind::Precision)),
        );
        out
    }

    /// Predicted action distributions for both players. `theta` must already
    /// be validated against [`parameters`](Self::parameters).
    pub(crate) fn predict_both(&self, game: &Game, theta: &ParameterVector) -> Result<[Vec<f64>; 2]> {
        let levels = match self.levels {
            LevelSpec::Tabular(k) => {
                let alphas: Vec<f64> = (1..=k)
                    .map(|i| theta.require(&format!("alpha{i}")))
                    .collect::<Result<_>>()?;
                LevelDistribution::tabular(&alphas)?
            }
            LevelSpec::Poisson => LevelDistribution::poisson(theta.require("tau")?)?,
        };
        let true_lambda: Vec<f64> = (0..=levels.max_level())
            .map(|k| match self.precisions {
                _ if k == 0 => Ok(0.0),
                Precisions::Homogeneous => theta.require("lambda"),
                Precisions::Inhomogeneous => theta.require(&format!("lambda{k}")),
            })
            .collect::<Result<_>>()?;
        let belief_lambda = self
            .belief_paths()
            .into_iter()
            .map(|p| {
                let v = theta.require(&belief_name(&p))?;
                Ok((p, v))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        let mut engine = Engine {
            game,
            spec: self,
            masses: levels.masses(),
            true_lambda,
            belief_lambda,
            memo: HashMap::new(),
        };
        Ok(Player::BOTH.map(|p| {
            let plays: Vec<Vec<f64>> = (0..=levels.max_level())
                .map(|k| engine.play(p, &[k]))
                .collect();
            mixture(levels.masses(), &plays)
        }))
    }
}

/// `[3, 2, 1]` → `lambda1(2(3))`.
pub fn belief_name(path: &[usize]) -> String {
    let (believed, believers) = path.split_last().expect("non-empty path");
    let mut name = format!("lambda{believed}");
    for b in believers.iter().rev() {
        name.push_str(&format!("({b}"));
    }
    name.push_str(&")".repeat(believers.len()));
    name
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let canonical_qlk1 = self.levels == LevelSpec::Tabular(1)
            && self.population == PopulationBeliefs::Lk
            && self.precisions == Precisions::Inhomogeneous
            && self.beliefs == PrecisionBeliefs::Accurate;
        if canonical_qlk1 {
            return write!(f, "QLk1");
        }
        let b = match self.beliefs {
            PrecisionBeliefs::Accurate => 'a',
            PrecisionBeliefs::General => 'g',
        };
        let h = match self.precisions {
            Precisions::Homogeneous => 'h',
            Precisions::Inhomogeneous => 'i',
        };
        let pop = match self.population {
            PopulationBeliefs::Lk => "QLk",
            PopulationBeliefs::Ch => "QCH",
        };
        match self.levels {
            LevelSpec::Tabular(k) => write!(f, "{b}{h}-{pop}{k}"),
            LevelSpec::Poisson => write!(f, "{b}{h}-{pop}p"),
        }
    }
}

struct Engine<'a> {
    game: &'a Game,
    spec: &'a VariantSpec,
    masses: &'a [f64],
    true_lambda: Vec<f64>,
    belief_lambda: HashMap<Vec<usize>, f64>,
    memo: HashMap<(usize, Vec<usize>), Vec<f64>>,
}

impl Engine<'_> {
    /// Play of the (possibly believed) agent at the end of `path`, in the
    /// role of `player`.
    fn play(&mut self, player: Player, path: &[usize]) -> Vec<f64> {
        let level = *path.last().expect("non-empty path");
        if level == 0 {
            let n = self.game.num_actions(player);
            return vec![1.0 / n as f64; n];
        }
        let accurate = self.spec.beliefs == PrecisionBeliefs::Accurate;
        let key = if accurate { vec![level] } else { path.to_vec() };
        if let Some(hit) = self.memo.get(&(player.index(), key.clone())) {
            return hit.clone();
        }
        let lambda = if accurate || path.len() == 1 {
            self.true_lambda[level]
        } else {
            self.belief_lambda[&key]
        };
        let opp = player.opponent();
        let mut child = key.clone();
        child.push(0);
        let belief = match self.spec.population {
            PopulationBeliefs::Lk => {
                *child.last_mut().expect("pushed") = level - 1;
                self.play(opp, &child)
            }
            PopulationBeliefs::Ch => {
                let lower: Vec<Vec<f64>> = (0..level)
                    .map(|j| {
                        *child.last_mut().expect("pushed") = j;
                        self.play(opp, &child)
                    })
                    .collect();
                truncated_mixture(self.masses, &lower, level)
            }
        };
        let out = quantal_best_response(self.game, player, &belief, lambda);
        self.memo.insert((player.index(), key), out.clone());
        out
    }
}
