//! Straight-line reference implementations of every model, written from the
//! model definitions without reusing any library prediction code. Only the
//! payoff accessors of `Game` are shared.

#![allow(dead_code)]

use bgt::{Game, Player};

pub fn n_actions(g: &Game, p: Player) -> usize {
    g.num_actions(p)
}

/// Expected payoff of each of `p`'s actions against `opp`.
pub fn eu(g: &Game, p: Player, opp: &[f64]) -> Vec<f64> {
    (0..n_actions(g, p))
        .map(|a| {
            opp.iter()
                .enumerate()
                .map(|(b, q)| {
                    let (r, c) = if p == Player::Row { (a, b) } else { (b, a) };
                    q * g.payoff(p, r, c)
                })
                .sum()
        })
        .collect()
}

pub fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

pub fn logit(u: &[f64], lambda: f64) -> Vec<f64> {
    let m = u.iter().cloned().fold(f64::MIN, f64::max);
    let w: Vec<f64> = u.iter().map(|x| (lambda * (x - m)).exp()).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn argmax_set(u: &[f64]) -> Vec<usize> {
    let m = u.iter().cloned().fold(f64::MIN, f64::max);
    (0..u.len()).filter(|&i| u[i] >= m - 1e-9).collect()
}

pub fn uniform_on(n: usize, set: &[usize]) -> Vec<f64> {
    (0..n)
        .map(|i| if set.contains(&i) { 1.0 / set.len() as f64 } else { 0.0 })
        .collect()
}

fn mix(weights: &[f64], dists: &[Vec<f64>]) -> Vec<f64> {
    let n = dists[0].len();
    let mut out = vec![0.0; n];
    for (w, d) in weights.iter().zip(dists) {
        for i in 0..n {
            out[i] += w * d[i];
        }
    }
    out
}

fn pois(m: usize, tau: f64) -> f64 {
    let mut p = (-tau).exp();
    for k in 1..=m {
        p *= tau / k as f64;
    }
    p
}

/// Level masses: Poisson (with optional spike on level 0), cut at the first
/// level whose cumulative raw mass reaches 1 − 1e-6 (at most level 20).
pub fn poisson_levels(tau: f64, spike: f64) -> Vec<f64> {
    let mut f = Vec::new();
    let mut total = 0.0;
    for m in 0..=20 {
        let v = (1.0 - spike) * pois(m, tau) + if m == 0 { spike } else { 0.0 };
        f.push(v);
        total += v;
        if total >= 1.0 - 1e-6 {
            break;
        }
    }
    f.iter().map(|v| v / total).collect()
}

/// Normalized mixture of the first `upto` levels; equal weights when they
/// carry no mass.
fn lower_mixture(f: &[f64], dists: &[Vec<f64>], upto: usize) -> Vec<f64> {
    let s: f64 = f[..upto].iter().sum();
    let w: Vec<f64> = if s > 0.0 {
        f[..upto].iter().map(|x| x / s).collect()
    } else {
        vec![1.0 / upto as f64; upto]
    };
    mix(&w, &dists[..upto])
}

pub fn lk(g: &Game, p: Player, a1: f64, a2: f64, e1: f64, e2: f64) -> Vec<f64> {
    let n = |q: Player| n_actions(g, q);
    let q = p.opponent();
    // IBR for level 1: best responses to uniform play over all opponent actions
    let ibr1_p = argmax_set(&eu(g, p, &uniform(n(q))));
    let ibr1_q = argmax_set(&eu(g, q, &uniform(n(p))));
    let ibr2_p = argmax_set(&eu(g, p, &uniform_on(n(q), &ibr1_q)));
    let level = |ibr: &[usize], e: f64| -> Vec<f64> {
        let k = n(p);
        if ibr.len() == k {
            return uniform(k);
        }
        (0..k)
            .map(|a| {
                if ibr.contains(&a) {
                    (1.0 - e) / ibr.len() as f64
                } else {
                    e / (k - ibr.len()) as f64
                }
            })
            .collect()
    };
    mix(
        &[1.0 - a1 - a2, a1, a2],
        &[uniform(n(p)), level(&ibr1_p, e1), level(&ibr2_p, e2)],
    )
}

/// Behaviour per level for both players, bottom up.
fn hierarchy(g: &Game, f: &[f64], respond: &dyn Fn(Player, &[f64], usize) -> Vec<f64>) -> [Vec<Vec<f64>>; 2] {
    let mut row = vec![uniform(n_actions(g, Player::Row))];
    let mut col = vec![uniform(n_actions(g, Player::Col))];
    for m in 1..f.len() {
        let r = respond(Player::Row, &lower_mixture(f, &col, m), m);
        let c = respond(Player::Col, &lower_mixture(f, &row, m), m);
        row.push(r);
        col.push(c);
    }
    [row, col]
}

pub fn poisson_ch(g: &Game, p: Player, tau: f64) -> Vec<f64> {
    let f = poisson_levels(tau, 0.0);
    let h = hierarchy(g, &f, &|pl, belief, _| uniform_on(n_actions(g, pl), &argmax_set(&eu(g, pl, belief))));
    mix(&f, &h[if p == Player::Row { 0 } else { 1 }])
}

pub fn spike_qch(g: &Game, p: Player, tau: f64, eps: f64, lambda: f64) -> Vec<f64> {
    let f = poisson_levels(tau, eps);
    let h = hierarchy(g, &f, &|pl, belief, _| logit(&eu(g, pl, belief), lambda));
    mix(&f, &h[if p == Player::Row { 0 } else { 1 }])
}

pub fn qlk(g: &Game, p: Player, a1: f64, a2: f64, l1: f64, l2: f64, l12: f64) -> Vec<f64> {
    let q = p.opponent();
    let level1 = logit(&eu(g, p, &uniform(n_actions(g, q))), l1);
    let believed = logit(&eu(g, q, &uniform(n_actions(g, p))), l12);
    let level2 = logit(&eu(g, p, &believed), l2);
    mix(&[1.0 - a1 - a2, a1, a2], &[uniform(n_actions(g, p)), level1, level2])
}

/// Axes of a variant, parsed from its registry name.
#[derive(Clone, Copy)]
pub struct Axes {
    pub general: bool,
    pub inhomogeneous: bool,
    pub ch: bool,
    /// `None` for Poisson levels.
    pub levels: Option<usize>,
}

pub fn axes(name: &str) -> Axes {
    if name == "QLk1" {
        return Axes { general: false, inhomogeneous: true, ch: false, levels: Some(1) };
    }
    let b = name.as_bytes();
    let rest = &name[3..];
    let suffix = &rest[3..];
    Axes {
        general: b[0] == b'g',
        inhomogeneous: b[1] == b'i',
        ch: rest.starts_with("QCH"),
        levels: if suffix == "p" { None } else { Some(suffix.parse().unwrap()) },
    }
}

/// Value of a named parameter in `(name, value)` pairs.
pub fn get(params: &[(String, f64)], name: &str) -> f64 {
    params.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("missing {name}")).1
}

/// Belief precision name for a path of levels, outermost believer first:
/// `[3, 2, 1]` is level 3's belief about level 2's belief about level 1.
pub fn belief_param(path: &[usize]) -> String {
    let mut s = format!("lambda{}", path[path.len() - 1]);
    for b in path[..path.len() - 1].iter().rev() {
        s += &format!("({b}");
    }
    s + &")".repeat(path.len() - 1)
}

pub fn variant(g: &Game, p: Player, name: &str, params: &[(String, f64)]) -> Vec<f64> {
    let ax = axes(name);
    let f: Vec<f64> = match ax.levels {
        Some(k) => {
            let alphas: Vec<f64> = (1..=k).map(|i| get(params, &format!("alpha{i}"))).collect();
            let mut f = vec![1.0 - alphas.iter().sum::<f64>()];
            f.extend(alphas);
            f
        }
        None => poisson_levels(get(params, "tau"), 0.0),
    };
    let true_lambda = |k: usize| {
        if ax.inhomogeneous {
            get(params, &format!("lambda{k}"))
        } else {
            get(params, "lambda")
        }
    };
    // accurate beliefs: bottom-up table where the belief of level m is
    // built from the true behaviour of lower levels
    if !ax.general {
        let mut row = vec![uniform(n_actions(g, Player::Row))];
        let mut col = vec![uniform(n_actions(g, Player::Col))];
        for m in 1..f.len() {
            let (br, bc) = if ax.ch {
                (lower_mixture(&f, &col, m), lower_mixture(&f, &row, m))
            } else {
                (col[m - 1].clone(), row[m - 1].clone())
            };
            let r = logit(&eu(g, Player::Row, &br), true_lambda(m));
            let c = logit(&eu(g, Player::Col, &bc), true_lambda(m));
            row.push(r);
            col.push(c);
        }
        return mix(&f, if p == Player::Row { &row } else { &col });
    }
    // general beliefs: recursion over believed agents, no caching
    fn believed(
        g: &Game,
        pl: Player,
        path: &[usize],
        f: &[f64],
        ch: bool,
        params: &[(String, f64)],
        top: &dyn Fn(usize) -> f64,
    ) -> Vec<f64> {
        let level = *path.last().unwrap();
        if level == 0 {
            return uniform(n_actions(g, pl));
        }
        let lambda = if path.len() == 1 { top(level) } else { get(params, &belief_param(path)) };
        let q = pl.opponent();
        let child = |j: usize| {
            let mut c = path.to_vec();
            c.push(j);
            believed(g, q, &c, f, ch, params, top)
        };
        let belief = if ch {
            let lower: Vec<Vec<f64>> = (0..level).map(child).collect();
            lower_mixture(f, &lower, level)
        } else {
            child(level - 1)
        };
        logit(&eu(g, pl, &belief), lambda)
    }
    let per_level: Vec<Vec<f64>> = (0..f.len())
        .map(|k| believed(g, p, &[k], &f, ax.ch, params, &true_lambda))
        .collect();
    mix(&f, &per_level)
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting; `None`
/// when a pivot is (numerically) zero.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let factor = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= factor * a[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Vertices of `mixer`'s best-response polytope: choose zero coordinates Z
/// and tight opponent constraints T with |Z| + |T| = n.
fn polytope_vertices(g: &Game, mixer: Player) -> Vec<Vec<f64>> {
    let resp = mixer.opponent();
    let n = n_actions(g, mixer);
    let m = n_actions(g, resp);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for z in subsets(n) {
        if z.len() == n {
            continue;
        }
        for t in subsets(m) {
            if z.len() + t.len() != n {
                continue;
            }
            // unknowns: x_0..x_{n-1}, v
            let mut a = Vec::new();
            let mut b = Vec::new();
            let mut ones = vec![1.0; n];
            ones.push(0.0);
            a.push(ones);
            b.push(1.0);
            for &i in &z {
                let mut row = vec![0.0; n + 1];
                row[i] = 1.0;
                a.push(row);
                b.push(0.0);
            }
            for &j in &t {
                let mut row: Vec<f64> = (0..n)
                    .map(|i| {
                        let (r, c) = if resp == Player::Row { (j, i) } else { (i, j) };
                        g.payoff(resp, r, c)
                    })
                    .collect();
                row.push(-1.0);
                a.push(row);
                b.push(0.0);
            }
            let Some(sol) = solve(a, b) else { continue };
            let x: Vec<f64> = sol[..n].to_vec();
            if x.iter().any(|&v| v < -1e-9) {
                continue;
            }
            let x: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
            let s: f64 = x.iter().sum();
            let x: Vec<f64> = x.iter().map(|v| v / s).collect();
            let best = eu(g, resp, &x).into_iter().fold(f64::MIN, f64::max);
            if best > sol[n] + 1e-9 * sol[n].abs().max(1.0) {
                continue;
            }
            if !out.iter().any(|y| y.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-8)) {
                out.push(x);
            }
        }
    }
    out
}

/// Extreme Nash equilibria as (row, col) pairs.
pub fn equilibria(g: &Game) -> Vec<(Vec<f64>, Vec<f64>)> {
    let xs = polytope_vertices(g, Player::Row);
    let ys = polytope_vertices(g, Player::Col);
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            let ok = |own: &[f64], utils: Vec<f64>| {
                let best = utils.iter().cloned().fold(f64::MIN, f64::max);
                own.iter().zip(&utils).all(|(p, u)| *p <= 1e-9 || *u >= best - 1e-9)
            };
            if ok(x, eu(g, Player::Row, y)) && ok(y, eu(g, Player::Col, x)) {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

pub fn nee_average(g: &Game, p: Player, eps: f64) -> Vec<f64> {
    let eqs = equilibria(g);
    let n = n_actions(g, p);
    let mut out = vec![0.0; n];
    for (x, y) in &eqs {
        let e = if p == Player::Row { x } else { y };
        for i in 0..n {
            out[i] += ((1.0 - eps) * e[i] + eps / n as f64) / eqs.len() as f64;
        }
    }
    out
}

/// Logit QRE by slow continuation: many small precision steps, each solved by
/// heavily damped fixed-point iteration to 1e-14.
pub fn qre(g: &Game, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let mut x = uniform(n_actions(g, Player::Row));
    let mut y = uniform(n_actions(g, Player::Col));
    let steps = 200;
    for s in 1..=steps {
        let l = lambda * s as f64 / steps as f64;
        for _ in 0..100_000 {
            let nx = logit(&eu(g, Player::Row, &y), l);
            let ny = logit(&eu(g, Player::Col, &x), l);
            let diff = nx.iter().zip(&x).chain(ny.iter().zip(&y)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            x = x.iter().zip(&nx).map(|(a, b)| 0.7 * a + 0.3 * b).collect();
            y = y.iter().zip(&ny).map(|(a, b)| 0.7 * a + 0.3 * b).collect();
            if diff < 1e-14 {
                break;
            }
        }
    }
    (x, y)
}
