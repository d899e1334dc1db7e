//! Small numerical helpers shared by the solvers and models.

/// `ln(Σ exp(xᵢ))` without overflow. Returns `-inf` for an empty slice or
/// when every entry is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Logit choice probabilities: `exp(λ·uᵢ) / Σ exp(λ·uⱼ)`, evaluated by
/// shifting by the maximum utility.
pub fn logit_choice(utilities: &[f64], precision: f64) -> Vec<f64> {
    if precision == 0.0 {
        let n = utilities.len() as f64;
        return vec![1.0 / n; utilities.len()];
    }
    let max = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = utilities
        .iter()
        .map(|u| (precision * (u - max)).exp())
        .collect();
    let total: f64 = out.iter().sum();
    for p in &mut out {
        *p /= total;
    }
    out
}

pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Inverse of [`logistic`], clamped so that 0 and 1 map to finite values.
pub fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-15, 1.0 - 1e-15);
    (p / (1.0 - p)).ln()
}

/// `ln(1 + eˣ)`, stable for large |x|.
pub fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else if x < -30.0 {
        x.exp()
    } else {
        x.exp().ln_1p()
    }
}

/// Inverse of [`softplus`] for `y > 0`; `y = 0` maps to a large negative value.
pub fn softplus_inv(y: f64) -> f64 {
    if y <= 0.0 {
        -50.0
    } else if y > 30.0 {
        y
    } else if y < 1e-12 {
        y.ln()
    } else {
        y.exp_m1().ln()
    }
}

/// Poisson probability mass `τᵐ e^{-τ} / m!`.
pub fn poisson_pmf(m: usize, tau: f64) -> f64 {
    if tau == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let m_f = m as f64;
    (m_f * tau.ln() - tau - statrs::function::gamma::ln_gamma(m_f + 1.0)).exp()
}

/// Sample mean and unbiased standard deviation.
pub fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
