//! Maps between constrained parameters and the unconstrained space searched
//! by the optimizer: softmax (level 0 as reference) for proportions, softplus
//! for precisions and Poisson means, logistic for probabilities.

use crate::math::{logistic, logit, softplus, softplus_inv};
use crate::models::{ParamInfo, ParamKind};

const PROPORTION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Transform {
    kinds: Vec<ParamKind>,
    proportions: Vec<usize>,
}

impl Transform {
    pub fn new(layout: &[ParamInfo]) -> Self {
        Self {
            kinds: layout.iter().map(|p| p.kind).collect(),
            proportions: (0..layout.len())
                .filter(|&i| layout[i].kind == ParamKind::Proportion)
                .collect(),
        }
    }

    pub fn to_unconstrained(&self, values: &[f64]) -> Vec<f64> {
        let alpha0 = (1.0 - self.proportions.iter().map(|&i| values[i]).sum::<f64>()).max(PROPORTION_FLOOR);
        self.kinds
            .iter()
            .zip(values)
            .map(|(kind, &v)| match kind {
                ParamKind::Proportion => (v.max(PROPORTION_FLOOR) / alpha0).ln(),
                ParamKind::Precision | ParamKind::Rate => softplus_inv(v),
                ParamKind::Probability => logit(v),
            })
            .collect()
    }

    pub fn to_constrained(&self, z: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .kinds
            .iter()
            .zip(z)
            .map(|(kind, &x)| match kind {
                ParamKind::Proportion => 0.0,
                ParamKind::Precision | ParamKind::Rate => softplus(x),
                ParamKind::Probability => logistic(x),
            })
            .collect();
        if !self.proportions.is_empty() {
            let max = self.proportions.iter().map(|&i| z[i]).fold(0.0f64, f64::max);
            let denom = (-max).exp() + self.proportions.iter().map(|&i| (z[i] - max).exp()).sum::<f64>();
            for &i in &self.proportions {
                out[i] = (z[i] - max).exp() / denom;
            }
        }
        out
    }
}
