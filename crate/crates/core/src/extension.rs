//! Extension of a dominated linear functional, one direction at a time.
//!
//! For a functional `g` on `G` with `|g| <= p` and a new direction `z`, the
//! admissible values `γ = r(z)` form the interval
//! `[sup_x (-g(x) - p(x+z)), inf_x (-g(x) + p(x+z))]` over `x ∈ G`. Any value in
//! it keeps `|r| <= p` on `G ⊕ span{z}`; walking the complement basis of the
//! initial domain in index order reaches the whole space.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::Seminorm;
use crate::linalg::{norm, PartialFunctional, Subspace, Vector};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::par;

/// Slack allowed when checking `|g(b)| <= p(b)` on stored basis vectors.
pub const TOL_STEP_DOMINATION: f64 = 1e-7;
/// Searched intervals are certified only to this; endpoints crossing by less
/// are read as a single point.
pub const TOL_SEARCH_GAP: f64 = 1e-6;
/// Iteration cap of the gradient-sampling stage after the coordinate search.
const POLISH_ITERS: usize = 400;
/// Box half-width used by the exact domination LP for unbounded unit balls.
const DOMINATION_BOX: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaRule {
    /// `γ = inf_x (-g(x) + p(x+z))`
    #[default]
    Upper,
    Lower,
    Midpoint,
}

impl GammaRule {
    pub fn pick(self, interval: GammaInterval) -> f64 {
        if interval.lo > interval.hi {
            // within tolerance of a single point
            return 0.5 * (interval.lo + interval.hi);
        }
        match self {
            GammaRule::Upper => interval.hi,
            GammaRule::Lower => interval.lo,
            GammaRule::Midpoint => 0.5 * (interval.lo + interval.hi),
        }
    }
}

impl FromStr for GammaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(GammaRule::Upper),
            "lower" => Ok(GammaRule::Lower),
            "midpoint" => Ok(GammaRule::Midpoint),
            other => Err(Error::input(format!("unknown gamma rule '{other}'"))),
        }
    }
}

impl fmt::Display for GammaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaRule::Upper => "upper",
            GammaRule::Lower => "lower",
            GammaRule::Midpoint => "midpoint",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaInterval {
    pub lo: f64,
    pub hi: f64,
}

impl GammaInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, gamma: f64) -> bool {
        gamma >= self.lo && gamma <= self.hi
    }
}

/// Tuning of the derivative-free interval search used for non-polyhedral gauges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub iterations: usize,
    pub restarts: usize,
    pub shrink: f64,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            iterations: 200,
            restarts: 8,
            shrink: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum IntervalMethod {
    /// LP for polyhedral gauges, search otherwise.
    #[default]
    Auto,
    Lp,
    Search(SearchOptions),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionStep {
    pub direction: Vector,
    pub interval: GammaInterval,
    pub gamma: f64,
}

/// A dominated functional on a subspace together with the seminorm and the
/// steps taken so far. Every transition returns a new state.
#[derive(Debug, Clone)]
pub struct ExtensionState {
    functional: PartialFunctional,
    seminorm: Seminorm,
    history: Vec<ExtensionStep>,
    method: IntervalMethod,
}

impl ExtensionState {
    /// Starts from `f`, requiring `|f(b)| <= p(b) + 1e-7` on its domain basis.
    pub fn new(f: PartialFunctional, p: Seminorm) -> Result<Self> {
        if f.ambient_dim() != p.dim() {
            return Err(Error::input("functional and seminorm dimensions differ"));
        }
        for (b, val) in f.domain().basis().iter().zip(f.values()) {
            let pb = p.eval(b.as_slice());
            if val.abs() > pb + TOL_STEP_DOMINATION {
                return Err(Error::input(format!(
                    "f not dominated: |f(b)| = {:.6e} > p(b) = {pb:.6e}",
                    val.abs()
                )));
            }
        }
        Ok(ExtensionState {
            functional: f,
            seminorm: p,
            history: Vec::new(),
            method: IntervalMethod::Auto,
        })
    }

    pub fn with_method(mut self, method: IntervalMethod) -> Self {
        self.method = method;
        self
    }

    pub fn domain(&self) -> &Subspace {
        self.functional.domain()
    }

    pub fn functional(&self) -> &PartialFunctional {
        &self.functional
    }

    pub fn seminorm(&self) -> &Seminorm {
        &self.seminorm
    }

    pub fn history(&self) -> &[ExtensionStep] {
        &self.history
    }

    /// Full-space coefficients once the domain is `R^n`; before that, the
    /// extension by zero on the orthogonal complement.
    pub fn coefficients(&self) -> Vector {
        self.functional.representer()
    }

    /// The admissible interval for the value at `z`.
    pub fn extension_interval(&self, z: &Vector) -> Result<GammaInterval> {
        z.check_dim(self.seminorm.dim(), "direction")?;
        if self.domain().contains(z) {
            return Err(Error::degenerate(
                "direction already lies in the current domain",
            ));
        }
        let hi = self.upper_bound(z)?;
        let lo = -self.upper_bound(&z.scale(-1.0))?;
        Ok(GammaInterval { lo, hi })
    }

    /// Whether intervals come from the exact LP rather than the search.
    pub fn uses_lp(&self) -> bool {
        match self.method {
            IntervalMethod::Search(_) => false,
            IntervalMethod::Auto | IntervalMethod::Lp => self.seminorm.is_polyhedral(),
        }
    }

    /// `inf_{x ∈ G} (-g(x) + p(x + z))`
    fn upper_bound(&self, z: &Vector) -> Result<f64> {
        let k = self.domain().dim();
        if k == 0 {
            return Ok(self.seminorm.eval(z.as_slice()));
        }
        match (self.method, self.seminorm.lp_rows()) {
            (IntervalMethod::Auto | IntervalMethod::Lp, Some(rows)) => {
                self.upper_bound_lp(z, &rows)
            }
            (IntervalMethod::Lp, None) => Err(Error::input("LP interval needs a polyhedral gauge")),
            (IntervalMethod::Auto, None) => {
                Ok(self.upper_bound_search(z, SearchOptions::default()))
            }
            (IntervalMethod::Search(opts), _) => Ok(self.upper_bound_search(z, opts)),
        }
    }

    /// minimize `-w·c + t` s.t. `a_i·(Bc + z) <= t b_i`, `t >= 0`.
    fn upper_bound_lp(&self, z: &Vector, rows: &[(Vector, f64)]) -> Result<f64> {
        let basis = self.domain().basis();
        let k = basis.len();
        let mut obj: Vec<f64> = self.functional.values().iter().map(|v| -v).collect();
        obj.push(1.0);
        let mut lp = LinearProgram::minimize(obj);
        for j in 0..k {
            lp.set_free(j);
        }
        for (a, b) in rows {
            let mut c: Vec<f64> = basis.iter().map(|bj| a.dot(bj)).collect();
            c.push(-b);
            lp.add(c, Relation::Le, -a.dot(z));
        }
        match lp.solve()? {
            LpOutcome::Optimal(s) => Ok(s.objective),
            LpOutcome::Unbounded { .. } => Err(Error::solver(
                "interval LP unbounded: current functional is not dominated",
            )),
            LpOutcome::Infeasible => Err(Error::solver(format!(
                "interval LP infeasible ({} rows, {} domain vectors)",
                rows.len(),
                k
            ))),
        }
    }

    /// Derivative-free minimization over coordinates `c` of `x = Bc`.
    fn upper_bound_search(&self, z: &Vector, opts: SearchOptions) -> f64 {
        let basis = self.domain().basis();
        let k = basis.len();
        let values = self.functional.values();
        let objective = |c: &[f64]| -> f64 {
            let mut pt = z.as_slice().to_vec();
            let mut gx = 0.0;
            for ((cj, bj), vj) in c.iter().zip(basis).zip(values) {
                gx += cj * vj;
                for (p, b) in pt.iter_mut().zip(bj.as_slice()) {
                    *p += cj * b;
                }
            }
            -gx + self.seminorm.eval(&pt)
        };
        minimize_convex(&objective, k, z.norm().max(1.0), opts).0
    }

    /// Extends to `G ⊕ span{z}` with the value chosen by `rule`.
    pub fn extend_one(&self, z: &Vector, rule: GammaRule) -> Result<ExtensionState> {
        let interval = self.extension_interval(z)?;
        let slack = if self.uses_lp() {
            TOL_STEP_DOMINATION
        } else {
            TOL_SEARCH_GAP
        };
        if interval.lo > interval.hi + slack {
            return Err(Error::solver(format!(
                "empty gamma interval [{:.6e}, {:.6e}]",
                interval.lo, interval.hi
            )));
        }
        let gamma = rule.pick(interval);
        self.extend_with_gamma(z, gamma, interval)
    }

    /// Extends with an explicit value at `z`; domination on the stored basis is
    /// re-checked.
    pub fn extend_with_gamma(
        &self,
        z: &Vector,
        gamma: f64,
        interval: GammaInterval,
    ) -> Result<ExtensionState> {
        let functional = self.extend_unchecked(z, gamma)?;
        for (b, val) in functional.domain().basis().iter().zip(functional.values()) {
            let pb = self.seminorm.eval(b.as_slice());
            if val.abs() > pb + TOL_STEP_DOMINATION {
                return Err(Error::solver(format!(
                    "domination lost after extension: |g(b)| = {:.6e} > p(b) = {pb:.6e}",
                    val.abs()
                )));
            }
        }
        let mut history = self.history.clone();
        history.push(ExtensionStep {
            direction: z.clone(),
            interval,
            gamma,
        });
        Ok(ExtensionState {
            functional,
            seminorm: self.seminorm.clone(),
            history,
            method: self.method,
        })
    }

    /// The linear extension to `G ⊕ span{z}` taking the value `gamma` at `z`,
    /// with no domination check.
    pub fn extend_unchecked(&self, z: &Vector, gamma: f64) -> Result<PartialFunctional> {
        let (domain, _) = self.domain().with_direction(z)?;
        let z_par = self.domain().project(z);
        let z_perp_norm = z.sub(&z_par).norm();
        let g_par = self.functional.representer().dot(&z_par);
        let mut values = self.functional.values().to_vec();
        values.push((gamma - g_par) / z_perp_norm);
        PartialFunctional::new(domain, values)
    }

    /// Walks `complement_basis` of the current domain.
    pub fn extend_full(&self, rule: GammaRule) -> Result<ExtensionState> {
        let mut state = self.clone();
        for z in self.domain().complement_basis() {
            state = state.extend_one(&z, rule)?;
        }
        Ok(state)
    }
}

/// Full-space coefficients of a dominated extension of `f`.
pub fn extend_full(f: &PartialFunctional, p: &Seminorm, rule: GammaRule) -> Result<Vector> {
    let state = ExtensionState::new(f.clone(), p.clone())?.extend_full(rule)?;
    Ok(state.coefficients())
}

/// Minimizes a convex function of `k` variables: rotating-frame coordinate
/// search from `opts.restarts` seeded starts, then gradient sampling from the
/// best one. Returns the value and the minimizer.
fn minimize_convex<F>(objective: &F, k: usize, scale: f64, opts: SearchOptions) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let runs = par::map_collect(opts.restarts.max(1), |r| {
        let mut rng = par::trial_rng(opts.seed, r as u64);
        let mut x: Vec<f64> = if r == 0 {
            vec![0.0; k]
        } else {
            (0..k)
                .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        let mut fx = objective(&x);
        let mut step = scale;
        let mut trial = vec![0.0; k];
        // last successful direction, polled first
        let mut last: Option<Vec<f64>> = None;
        for _ in 0..opts.iterations {
            let mut dirs = random_frame(k, &mut rng);
            if let Some(d) = last.take() {
                dirs.insert(0, d);
            }
            let mut improved = false;
            'poll: for d in &dirs {
                for sign in [1.0, -1.0] {
                    for ((t, xi), di) in trial.iter_mut().zip(&x).zip(d) {
                        *t = xi + sign * step * di;
                    }
                    let ft = objective(&trial);
                    if ft < fx {
                        x.copy_from_slice(&trial);
                        fx = ft;
                        let d: Vec<f64> = d.iter().map(|c| sign * c).collect();
                        // keep going along a good direction while it pays
                        let mut reach = step;
                        loop {
                            reach *= 2.0;
                            for ((t, xi), di) in trial.iter_mut().zip(&x).zip(&d) {
                                *t = xi + reach * di;
                            }
                            let ft = objective(&trial);
                            if ft < fx {
                                x.copy_from_slice(&trial);
                                fx = ft;
                            } else {
                                break;
                            }
                        }
                        last = Some(d);
                        improved = true;
                        break 'poll;
                    }
                }
            }
            if improved {
                step *= 2.0;
            } else {
                step *= opts.shrink;
                if step < 1e-15 * scale {
                    break;
                }
            }
        }
        (fx, x)
    });
    let (fx, x) = runs.into_iter().fold(
        (f64::INFINITY, Vec::new()),
        |a, b| if b.0 < a.0 { b } else { a },
    );
    let mut rng = par::trial_rng(opts.seed, opts.restarts as u64);
    polish(objective, x, fx, scale, &mut rng)
}

/// Gradient sampling from `x`: the negative min-norm element of the convex
/// hull of finite-difference gradients at points within `eps` of `x` is a
/// descent direction even at kinks, where coordinate polls stall.
fn polish<F, R>(f: &F, mut x: Vec<f64>, mut fx: f64, scale: f64, rng: &mut R) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> f64,
    R: Rng,
{
    let k = x.len();
    if k == 0 || !fx.is_finite() {
        return (fx, x);
    }
    let mut eps = 1e-2 * scale;
    let mut y = vec![0.0; k];
    for _ in 0..POLISH_ITERS {
        if eps < 1e-11 * scale {
            break;
        }
        let grads: Vec<Vec<f64>> = (0..2 * k + 2)
            .map(|j| {
                let u: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
                let un = norm(&u).max(f64::MIN_POSITIVE);
                let r = if j == 0 {
                    0.0
                } else {
                    eps * rng.random::<f64>().powf(1.0 / k as f64)
                };
                let base: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + r * b / un).collect();
                let h = (1e-6 * eps.min(1.0)).max(1e-9) * (1.0 + norm(&base));
                (0..k)
                    .map(|i| {
                        y.copy_from_slice(&base);
                        y[i] += h;
                        let up = f(&y);
                        y[i] -= 2.0 * h;
                        (up - f(&y)) / (2.0 * h)
                    })
                    .collect()
            })
            .collect();
        let d: Vec<f64> = min_norm_in_hull(&grads).into_iter().map(|c| -c).collect();
        let dn = norm(&d);
        if dn < 1e-12 {
            eps *= 0.1;
            continue;
        }
        // Armijo backtracking, starting from a step that reaches eps
        let mut t = (eps / dn).max(1.0);
        let mut moved = false;
        while t * dn > 1e-16 * scale {
            for ((yi, xi), di) in y.iter_mut().zip(&x).zip(&d) {
                *yi = xi + t * di;
            }
            let fy = f(&y);
            if fy < fx - 1e-8 * t * dn * dn {
                x.copy_from_slice(&y);
                fx = fy;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            eps *= 0.1;
        }
    }
    (fx, x)
}

/// Minimum-norm point of the convex hull of `pts` by projected gradient on
/// the simplex of weights.
fn min_norm_in_hull(pts: &[Vec<f64>]) -> Vec<f64> {
    let m = pts.len();
    let k = pts[0].len();
    let gram: Vec<Vec<f64>> = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| a.iter().zip(b).map(|(p, q)| p * q).sum())
                .collect()
        })
        .collect();
    let lip = (0..m)
        .map(|i| gram[i][i])
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let mut w = vec![1.0 / m as f64; m];
    for _ in 0..500 {
        let grad: Vec<f64> = (0..m)
            .map(|i| (0..m).map(|j| gram[i][j] * w[j]).sum())
            .collect();
        let step: Vec<f64> = w.iter().zip(&grad).map(|(wi, gi)| wi - gi / lip).collect();
        w = project_simplex(step);
    }
    (0..k)
        .map(|c| pts.iter().zip(&w).map(|(p, wi)| wi * p[c]).sum())
        .collect()
}

fn project_simplex(v: Vec<f64>) -> Vec<f64> {
    let mut u = v.clone();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.into_iter().map(|x| (x - theta).max(0.0)).collect()
}

/// A random orthonormal frame of `R^k`, so the polled coordinate system turns
/// from one iteration to the next.
fn random_frame<R: Rng>(k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(k);
    while frame.len() < k {
        let mut v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for f in &frame {
                let c: f64 = v.iter().zip(f).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(f).for_each(|(a, b)| *a -= c * b);
            }
        }
        let vn = norm(&v);
        if vn > 1e-8 {
            frame.push(v.into_iter().map(|c| c / vn).collect());
        }
    }
    frame
}

/// `max |g·e| - p(e)` over sampled unit vectors, plus, for polyhedral gauges,
/// the LP-optimal directions of `max ±g·e` over the unit ball, and otherwise
/// the minimizer of `p` over the slice `{g·e = 1}`.
pub fn domination_check(g: &Vector, p: &Seminorm, seed: u64, trials: usize) -> Result<f64> {
    g.check_dim(p.dim(), "functional")?;
    if trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    let n = g.dim();
    let sampled = par::map_reduce(
        trials,
        f64::NEG_INFINITY,
        |i| {
            let mut rng = par::trial_rng(seed, i as u64);
            let mut e: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let en = norm(&e).max(f64::MIN_POSITIVE);
            e.iter_mut().for_each(|c| *c /= en);
            crate::linalg::dot(g.as_slice(), &e).abs() - p.eval(&e)
        },
        par::max_f64,
    );
    let mut worst = sampled;
    if let Some(rows) = p.lp_rows() {
        for sign in [1.0, -1.0] {
            let e = maximize_over_unit_ball(&g.scale(sign), &rows)?;
            let en = norm(&e);
            if en > 0.0 {
                let v = (crate::linalg::dot(g.as_slice(), &e).abs() - p.eval(&e)) / en;
                worst = par::max_f64(worst, v);
            }
        }
    } else if let Some(kernel) = g
        .normalized()
        .and_then(|u| Subspace::full(n).kernel_of(&u).ok())
    {
        // |g| <= p  iff  min { p(e) : g·e = 1 } >= 1
        let base = g.scale(1.0 / g.dot(g));
        let basis = kernel.basis();
        let point = |c: &[f64]| -> Vec<f64> {
            let mut e = base.as_slice().to_vec();
            for (cj, bj) in c.iter().zip(basis) {
                for (ei, bi) in e.iter_mut().zip(bj.as_slice()) {
                    *ei += cj * bi;
                }
            }
            e
        };
        let objective = |c: &[f64]| p.eval(&point(c));
        let opts = SearchOptions {
            seed,
            ..SearchOptions::default()
        };
        let (m, c) = minimize_convex(&objective, basis.len(), base.norm().max(1.0), opts);
        let e = point(&c);
        let en = norm(&e);
        if m.is_finite() && en > 0.0 {
            worst = par::max_f64(worst, (1.0 - m) / en);
        }
    }
    Ok(worst)
}

/// Vertex of `max g·e` over `{a_i·e <= b_i} ∩ [-R, R]^n`.
fn maximize_over_unit_ball(g: &Vector, rows: &[(Vector, f64)]) -> Result<Vec<f64>> {
    let n = g.dim();
    let mut lp = LinearProgram::minimize(g.scale(-1.0).into_inner());
    lp.set_all_free();
    for (a, b) in rows {
        lp.add(a.as_slice().to_vec(), Relation::Le, *b);
    }
    for j in 0..n {
        let mut c = vec![0.0; n];
        c[j] = 1.0;
        lp.add(c.clone(), Relation::Le, DOMINATION_BOX);
        lp.add(c, Relation::Ge, -DOMINATION_BOX);
    }
    match lp.solve()? {
        LpOutcome::Optimal(s) => Ok(s.x),
        other => Err(Error::solver(format!("domination LP failed: {other:?}"))),
    }
}
