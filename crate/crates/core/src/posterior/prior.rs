//! Prior distributions over model parameters.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ParamInfo, ParamKind};

/// Per-parameter priors.
///
/// * proportions: Dirichlet over the level simplex (including the implied
///   level-0 share), all concentrations equal;
/// * precisions and Poisson means: half-normal with the given standard
///   deviations;
/// * probabilities: uniform on `[0, 1]`;
/// * any scalar parameter may instead be given a flat prior on explicit bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub dirichlet_concentration: f64,
    pub precision_sd: f64,
    pub rate_sd: f64,
    pub flat: Vec<FlatBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatBound {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            dirichlet_concentration: 1.0,
            precision_sd: 2.0,
            rate_sd: 2.0,
            flat: Vec::new(),
        }
    }
}

fn half_normal_log_density(x: f64, sd: f64) -> f64 {
    if x < 0.0 {
        return f64::NEG_INFINITY;
    }
    // 2 · N(x; 0, sd²)
    std::f64::consts::LN_2 - 0.5 * (2.0 * std::f64::consts::PI).ln() - sd.ln() - 0.5 * (x / sd).powi(2)
}

impl PriorSpec {
    /// Replaces the prior of a scalar parameter with a flat one on `[lo, hi]`.
    pub fn with_flat(mut self, name: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidGrid(format!("flat prior bounds [{lo}, {hi}]")));
        }
        let name = name.into();
        self.flat.retain(|f| f.name != name);
        self.flat.push(FlatBound { name, lo, hi });
        Ok(self)
    }

    fn flat_for(&self, name: &str) -> Option<&FlatBound> {
        self.flat.iter().find(|f| f.name == name)
    }

    fn check(&self, layout: &[ParamInfo]) -> Result<()> {
        for f in &self.flat {
            match layout.iter().find(|p| p.name == f.name) {
                None => return Err(Error::UnknownParameter(f.name.clone())),
                Some(p) if p.kind == ParamKind::Proportion => {
                    return Err(Error::InvalidParameter {
                        name: f.name.clone(),
                        value: f.lo,
                        reason: "proportions cannot take a flat prior",
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// One draw of all parameters, in `layout` order.
    pub fn sample(&self, layout: &[ParamInfo], rng: &mut impl Rng) -> Result<Vec<f64>> {
        self.check(layout)?;
        let mut out = vec![0.0; layout.len()];
        let proportions: Vec<usize> = (0..layout.len())
            .filter(|&i| layout[i].kind == ParamKind::Proportion)
            .collect();
        if !proportions.is_empty() {
            let gamma = Gamma::new(self.dirichlet_concentration, 1.0).expect("positive shape");
            // the extra draw is the level-0 share
            let draws: Vec<f64> = (0..=proportions.len()).map(|_| gamma.sample(rng)).collect();
            let total: f64 = draws.iter().sum();
            for (&i, d) in proportions.iter().zip(&draws[1..]) {
                out[i] = d / total;
            }
        }
        for (i, info) in layout.iter().enumerate() {
            if let Some(f) = self.flat_for(&info.name) {
                out[i] = rng.random_range(f.lo..f.hi);
                continue;
            }
            out[i] = match info.kind {
                ParamKind::Proportion => continue,
                ParamKind::Precision => Normal::new(0.0, self.precision_sd).expect("sd > 0").sample(rng).abs(),
                ParamKind::Rate => Normal::new(0.0, self.rate_sd).expect("sd > 0").sample(rng).abs(),
                ParamKind::Probability => rng.random::<f64>(),
            };
        }
        Ok(out)
    }

    /// Log prior density; `-inf` outside the support.
    pub fn log_density(&self, layout: &[ParamInfo], values: &[f64]) -> f64 {
        let mut total = 0.0;
        let mut alpha_sum = 0.0;
        let mut alphas = Vec::new();
        for (info, &v) in layout.iter().zip(values) {
            if let Some(f) = self.flat_for(&info.name) {
                if v < f.lo || v > f.hi {
                    return f64::NEG_INFINITY;
                }
                total -= (f.hi - f.lo).ln();
                continue;
            }
            total += match info.kind {
                ParamKind::Proportion => {
                    if !(0.0..=1.0).contains(&v) {
                        return f64::NEG_INFINITY;
                    }
                    alpha_sum += v;
                    alphas.push(v);
                    0.0
                }
                ParamKind::Precision => half_normal_log_density(v, self.precision_sd),
                ParamKind::Rate => half_normal_log_density(v, self.rate_sd),
                ParamKind::Probability => {
                    if (0.0..=1.0).contains(&v) {
                        0.0
                    } else {
                        return f64::NEG_INFINITY;
                    }
                }
            };
        }
        if !alphas.is_empty() {
            if alpha_sum > 1.0 + 1e-12 {
                return f64::NEG_INFINITY;
            }
            alphas.push((1.0 - alpha_sum).max(0.0));
            total += dirichlet_log_density(&alphas, self.dirichlet_concentration);
        }
        total
    }
}

/// Symmetric Dirichlet log density at a point of the simplex.
pub(crate) fn dirichlet_log_density(point: &[f64], concentration: f64) -> f64 {
    dirichlet_log_density_general(point, &vec![concentration; point.len()])
}

pub(crate) fn dirichlet_log_density_general(point: &[f64], conc: &[f64]) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let total: f64 = conc.iter().sum();
    let mut out = ln_gamma(total);
    for (&x, &a) in point.iter().zip(conc) {
        out -= ln_gamma(a);
        if a != 1.0 {
            if x <= 0.0 {
                return if a < 1.0 { f64::INFINITY } else { f64::NEG_INFINITY };
            }
            out += (a - 1.0) * x.ln();
        }
    }
    out
}
