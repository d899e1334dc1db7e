//! Nash equilibrium play mixed with uniform noise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ActionDistribution, Game, Player};

/// Which equilibrium a prediction is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeeSelection {
    /// The `i`-th equilibrium in enumeration order.
    Index(usize),
    /// Equal-weight mixture over all enumerated equilibria.
    Average,
}

fn noisy(eq: &[f64], epsilon: f64) -> Vec<f64> {
    let u = 1.0 / eq.len() as f64;
    eq.iter().map(|&p| (1.0 - epsilon) * p + epsilon * u).collect()
}

pub fn predict_nee(
    game: &Game,
    player: Player,
    epsilon: f64,
    selection: NeeSelection,
) -> Result<ActionDistribution> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter {
            name: "epsilon".into(),
            value: epsilon,
            reason: "probability must lie in [0, 1]",
        });
    }
    let set = game.equilibria()?;
    let probs = match selection {
        NeeSelection::Index(i) => {
            let eq = set.equilibria.get(i).ok_or(Error::EquilibriumIndex {
                index: i,
                count: set.len(),
            })?;
            noisy(eq.get(player).probs(), epsilon)
        }
        NeeSelection::Average => {
            let n = game.num_actions(player);
            let w = 1.0 / set.len() as f64;
            let mut out = vec![0.0; n];
            for eq in &set.equilibria {
                for (o, p) in out.iter_mut().zip(noisy(eq.get(player).probs(), epsilon)) {
                    *o += w * p;
                }
            }
            out
        }
    };
    Ok(ActionDistribution::from_normalized(probs))
}
