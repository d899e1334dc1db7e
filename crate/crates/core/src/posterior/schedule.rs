use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inverse temperatures `γ₀ = 0 ≤ γ₁ ≤ … ≤ γ_n = 1` for annealed importance
/// sampling, with the number of Metropolis updates made at each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealingSchedule {
    gammas: Vec<f64>,
    pub metropolis_updates: usize,
}

impl AnnealingSchedule {
    pub fn new(gammas: Vec<f64>, metropolis_updates: usize) -> Result<Self> {
        if gammas.len() < 2 {
            return Err(Error::InvalidSchedule("need at least two temperatures".into()));
        }
        if gammas[0] != 0.0 || *gammas.last().expect("non-empty") != 1.0 {
            return Err(Error::InvalidSchedule("must start at 0 and end at exactly 1".into()));
        }
        if gammas.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidSchedule("temperatures must be non-decreasing".into()));
        }
        if metropolis_updates == 0 {
            return Err(Error::InvalidSchedule("need at least one Metropolis update".into()));
        }
        Ok(Self {
            gammas,
            metropolis_updates,
        })
    }

    /// 200 temperatures: 40 evenly spaced on `[0, 0.01)`, then 160 spaced
    /// geometrically from 0.01 to 1; five Metropolis updates at each.
    pub fn standard() -> Self {
        Self::blocks(40, 160, 5)
    }

    /// `linear` evenly spaced values on `[0, 0.01)` followed by `geometric`
    /// values from 0.01 to 1.
    pub fn blocks(linear: usize, geometric: usize, metropolis_updates: usize) -> Self {
        let mut gammas: Vec<f64> = (0..linear).map(|i| 0.01 * i as f64 / linear as f64).collect();
        let last = geometric.saturating_sub(1).max(1) as f64;
        gammas.extend((0..geometric).map(|i| 0.01 * 100f64.powf(i as f64 / last)));
        if let Some(g) = gammas.last_mut() {
            *g = 1.0;
        }
        if gammas.first() != Some(&0.0) {
            gammas.insert(0, 0.0);
        }
        Self::new(gammas, metropolis_updates).expect("well-formed block schedule")
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }
}
