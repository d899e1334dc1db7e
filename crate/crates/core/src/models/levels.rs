//! Distributions over cognitive levels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::poisson_pmf;

/// Poisson-type level distributions are cut at the first level where the
/// cumulative mass reaches `1 - TRUNCATION_MASS`.
pub const TRUNCATION_MASS: f64 = 1e-6;

/// Hard cap on the truncation level.
pub const MAX_TRUNCATED_LEVEL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelKind {
    Tabular,
    Poisson,
    SpikePoisson,
}

/// Level masses `f(0..=L)`, summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDistribution {
    pub kind: LevelKind,
    masses: Vec<f64>,
}

fn check(name: &str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: name.to_string(),
            value,
            reason,
        })
    }
}

impl LevelDistribution {
    /// Explicit proportions `α₁..α_K`; level 0 receives `1 − Σα`.
    pub fn tabular(alphas: &[f64]) -> Result<Self> {
        for (i, &a) in alphas.iter().enumerate() {
            check(
                &format!("alpha{}", i + 1),
                a,
                (0.0..=1.0).contains(&a),
                "proportion must lie in [0, 1]",
            )?;
        }
        let total: f64 = alphas.iter().sum();
        check("alpha", total, total <= 1.0 + 1e-12, "proportions sum above 1")?;
        let mut masses = Vec::with_capacity(alphas.len() + 1);
        masses.push((1.0 - total).max(0.0));
        masses.extend_from_slice(alphas);
        Ok(Self {
            kind: LevelKind::Tabular,
            masses,
        })
    }

    pub fn poisson(tau: f64) -> Result<Self> {
        check("tau", tau, tau >= 0.0, "Poisson mean must be non-negative")?;
        Ok(Self {
            kind: LevelKind::Poisson,
            masses: truncate(|m| poisson_pmf(m, tau)),
        })
    }

    /// Extra mass `ε` on level 0 on top of `(1 − ε)·Poisson(τ)`.
    pub fn spike_poisson(tau: f64, epsilon: f64) -> Result<Self> {
        check("tau", tau, tau >= 0.0, "Poisson mean must be non-negative")?;
        check(
            "epsilon",
            epsilon,
            (0.0..=1.0).contains(&epsilon),
            "spike probability must lie in [0, 1]",
        )?;
        Ok(Self {
            kind: LevelKind::SpikePoisson,
            masses: truncate(|m| {
                let base = (1.0 - epsilon) * poisson_pmf(m, tau);
                if m == 0 {
                    epsilon + base
                } else {
                    base
                }
            }),
        })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn max_level(&self) -> usize {
        self.masses.len() - 1
    }
}

fn truncate(pmf: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut masses = Vec::new();
    let mut cumulative = 0.0;
    for m in 0..=MAX_TRUNCATED_LEVEL {
        let f = pmf(m);
        masses.push(f);
        cumulative += f;
        if cumulative >= 1.0 - TRUNCATION_MASS {
            break;
        }
    }
    masses.iter_mut().for_each(|f| *f /= cumulative);
    masses
}

/// Mixture of `dists[0..upto]` weighted by `masses[0..upto]`, renormalized.
/// A zero-mass prefix falls back to equal weights over those levels.
pub(crate) fn truncated_mixture(masses: &[f64], dists: &[Vec<f64>], upto: usize) -> Vec<f64> {
    let n = dists[0].len();
    let total: f64 = masses[..upto].iter().sum();
    let mut out = vec![0.0; n];
    for (level, dist) in dists[..upto].iter().enumerate() {
        let w = if total > 0.0 {
            masses[level] / total
        } else {
            1.0 / upto as f64
        };
        if w == 0.0 {
            continue;
        }
        for (o, p) in out.iter_mut().zip(dist) {
            *o += w * p;
        }
    }
    out
}

/// `Σ_ℓ masses[ℓ]·dists[ℓ]`.
pub(crate) fn mixture(masses: &[f64], dists: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; dists[0].len()];
    for (w, dist) in masses.iter().zip(dists) {
        for (o, p) in out.iter_mut().zip(dist) {
            *o += w * p;
        }
    }
    out
}
