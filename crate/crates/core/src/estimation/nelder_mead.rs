//! Derivative-free simplex minimization.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Converged when every vertex is within this distance (max norm) of the best.
    pub x_tolerance: f64,
    /// Also converged when all vertex values agree to this (relative) spread,
    /// which stops searches drifting along flat ridges.
    pub f_tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            x_tolerance: 1e-8,
            f_tolerance: 1e-10,
            max_evaluations: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. NaN values are treated as `+inf`.
pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evaluations);
        return Minimum {
            x: Vec::new(),
            value,
            evaluations,
            converged: true,
        };
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evaluations)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let spread = simplex[n].1 - best.1;
        if diameter < opts.x_tolerance
            || (spread.is_finite() && spread <= opts.f_tolerance * (1.0 + best.1.abs()))
        {
            converged = true;
            break;
        }
        if evaluations >= opts.max_evaluations {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + t * (c - w)).collect()
        };
        let worst = simplex[n].0.clone();
        let xr = along(1.0, &worst);
        let fr = eval(&xr, &mut evaluations);
        if fr < simplex[0].1 {
            let xe = along(2.0, &worst);
            let fe = eval(&xe, &mut evaluations);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        // outside contraction if the reflection improved on the worst vertex
        let t = if fr < simplex[n].1 { 0.5 } else { -0.5 };
        let xc = along(t, &worst);
        let fc = eval(&xc, &mut evaluations);
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink towards the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
            let v = eval(&x, &mut evaluations);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        evaluations,
        converged,
    }
}
