//! Named parameter vectors and their constraints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What constraint a parameter obeys, and how it is reparameterized for
/// unconstrained optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamKind {
    /// A level proportion `α_k`; all proportions of one model share the
    /// simplex `α_k ≥ 0, Σα_k ≤ 1`.
    Proportion,
    /// A logit precision `λ ≥ 0`.
    Precision,
    /// A Poisson mean `τ ≥ 0`.
    Rate,
    /// An error or spike probability in `[0, 1]`.
    Probability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamInfo {
    pub name: String,
    pub kind: ParamKind,
}

impl ParamInfo {
    pub fn new(name: impl Into<String>, kind: ParamKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }
}

/// Ordered `(name, value)` pairs. The order follows the owning model's
/// [`parameters`](crate::models::ModelSpec::parameters) list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl ParameterVector {
    pub fn new(names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if names.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: names.len(),
                got: values.len(),
            });
        }
        Ok(Self { names, values })
    }

    pub fn from_pairs(pairs: &[(&str, f64)]) -> Self {
        Self {
            names: pairs.iter().map(|(n, _)| n.to_string()).collect(),
            values: pairs.iter().map(|&(_, v)| v).collect(),
        }
    }

    pub fn empty() -> Self {
        Self {
            names: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }

    /// Like [`get`](Self::get) but reports a missing name as an error.
    pub fn require(&self, name: &str) -> Result<f64> {
        self.get(name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))
    }

    /// Copy with `name` set to `value`.
    pub fn with(&self, name: &str, value: f64) -> Result<Self> {
        let i = self
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))?;
        let mut out = self.clone();
        out.values[i] = value;
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.names.iter().map(String::as_str).zip(self.values.iter().copied())
    }
}

impl fmt::Display for ParameterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{n}={v:.6}")?;
        }
        Ok(())
    }
}

fn invalid(name: &str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        value,
        reason,
    }
}

/// Checks `values` against `layout`: names in order, finiteness, bounds,
/// and the shared proportion simplex.
pub fn validate(layout: &[ParamInfo], theta: &ParameterVector) -> Result<()> {
    if theta.len() != layout.len()
        || layout.iter().zip(theta.names()).any(|(p, n)| &p.name != n)
    {
        return Err(Error::ParameterMismatch {
            model: String::new(),
            reason: format!(
                "expected parameters [{}], got [{}]",
                layout.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(", "),
                theta.names().join(", ")
            ),
        });
    }
    let mut proportion_sum = 0.0;
    for (info, (name, v)) in layout.iter().zip(theta.iter()) {
        if !v.is_finite() {
            return Err(invalid(name, v, "parameter must be finite"));
        }
        match info.kind {
            ParamKind::Proportion => {
                if !(0.0..=1.0).contains(&v) {
                    return Err(invalid(name, v, "proportion must lie in [0, 1]"));
                }
                proportion_sum += v;
            }
            ParamKind::Precision if v < 0.0 => {
                return Err(invalid(name, v, "precision must be non-negative"))
            }
            ParamKind::Rate if v < 0.0 => {
                return Err(invalid(name, v, "Poisson mean must be non-negative"))
            }
            ParamKind::Probability if !(0.0..=1.0).contains(&v) => {
                return Err(invalid(name, v, "probability must lie in [0, 1]"))
            }
            _ => {}
        }
    }
    if proportion_sum > 1.0 + 1e-12 {
        return Err(invalid("alpha", proportion_sum, "proportions sum above 1"));
    }
    Ok(())
}
