//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Problems here are tiny (a handful of variables, a few dozen rows), so the
//! full tableau is kept in memory and every pivot touches every entry.

use crate::error::{Error, Result};

/// Entries smaller than this are never pivoted on; reduced costs above `-PIVOT_TOL`
/// count as optimal.
pub const PIVOT_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;
/// Relative slack in the ratio test when choosing among near-tied rows.
const RATIO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `minimize objective · x` subject to the constraints; variables are
/// nonnegative unless flagged free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    /// Objective decreases without bound along `ray` (in original variables).
    Unbounded {
        ray: Vec<f64>,
    },
}

impl LinearProgram {
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            free: vec![false; n],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn set_all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        if self
            .objective
            .iter()
            .chain(self.constraints.iter().flat_map(|c| c.coeffs.iter()))
            .chain(self.constraints.iter().map(|c| &c.rhs))
            .any(|v| !v.is_finite())
        {
            return Err(Error::solver("non-finite LP data"));
        }
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// rows 0..m are constraints, row m is the objective; last column is the rhs
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// structural columns after splitting free variables
    n_struct: usize,
    n_slack: usize,
    n_art: usize,
    /// original var -> (plus column, optional minus column)
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.num_vars());
        let mut n_struct = 0;
        for &free in &lp.free {
            let plus = n_struct;
            n_struct += 1;
            let minus = free.then(|| {
                n_struct += 1;
                n_struct - 1
            });
            var_cols.push((plus, minus));
        }
        let m = lp.constraints.len();
        // normalize to rhs >= 0
        let rows: Vec<(Vec<f64>, Relation, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = vec![0.0; n_struct];
                for (j, &(p, mi)) in var_cols.iter().enumerate() {
                    coeffs[p] = c.coeffs[j];
                    if let Some(mi) = mi {
                        coeffs[mi] = -c.coeffs[j];
                    }
                }
                if c.rhs < 0.0 {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (coeffs.iter().map(|v| -v).collect(), rel, -c.rhs)
                } else {
                    (coeffs, c.relation, c.rhs)
                }
            })
            .collect();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let width = n_struct + n_slack + n_art + 1;
        let mut t = vec![vec![0.0; width]; m + 1];
        let mut basis = vec![0; m];
        let (mut s, mut a) = (n_struct, n_struct + n_slack);
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            t[i][..n_struct].copy_from_slice(&coeffs);
            t[i][width - 1] = rhs;
            match rel {
                Relation::Le => {
                    t[i][s] = 1.0;
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t[i][s] = -1.0;
                    s += 1;
                    t[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    t[i][a] = 1.0;
                    basis[i] = a;
                    a += 1;
                }
            }
        }
        Tableau {
            t,
            basis,
            n_struct,
            n_slack,
            n_art,
            var_cols,
        }
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn width(&self) -> usize {
        self.n_struct + self.n_slack + self.n_art + 1
    }

    fn rhs(&self) -> usize {
        self.width() - 1
    }

    fn is_art(&self, col: usize) -> bool {
        col >= self.n_struct + self.n_slack && col < self.rhs()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let p = self.t[row][col];
        for k in 0..w {
            self.t[row][k] /= p;
        }
        self.t[row][col] = 1.0;
        let prow = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f == 0.0 {
                continue;
            }
            for k in 0..w {
                r[k] -= f * prow[k];
            }
            r[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Loads `cost` (per column, rhs excluded) into the objective row in
    /// reduced form for the current basis.
    fn load_objective(&mut self, cost: &[f64]) {
        let m = self.m();
        let w = self.width();
        let mut z = vec![0.0; w];
        z[..cost.len()].copy_from_slice(cost);
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for k in 0..w {
                    z[k] -= cb * self.t[i][k];
                }
            }
        }
        self.t[m] = z;
    }

    /// Runs Bland-rule simplex; `Ok(None)` on optimality, `Ok(Some(col))` if
    /// column `col` is an unbounded direction. In phase one the objective is
    /// bounded below, so a column without a pivot entry only carries round-off
    /// in its reduced cost and is passed over instead.
    fn iterate(&mut self, phase_one: bool) -> Result<Option<usize>> {
        let m = self.m();
        let rhs = self.rhs();
        let mut passed = vec![false; rhs];
        for _ in 0..MAX_PIVOTS {
            let entering = (0..rhs)
                .filter(|&j| (phase_one || !self.is_art(j)) && !passed[j])
                .find(|&j| self.t[m][j] < -PIVOT_TOL);
            let Some(col) = entering else {
                return Ok(None);
            };
            // two-pass ratio test: smallest ratio, then the largest pivot among
            // rows within a tolerance of it
            let min_ratio = (0..m)
                .filter(|&i| self.t[i][col] > PIVOT_TOL)
                .map(|i| self.t[i][rhs].max(0.0) / self.t[i][col])
                .fold(f64::INFINITY, f64::min);
            let mut best: Option<(usize, f64)> = None;
            if min_ratio.is_finite() {
                let cap = min_ratio + RATIO_TOL * (1.0 + min_ratio);
                for i in 0..m {
                    let a = self.t[i][col];
                    if a > PIVOT_TOL && self.t[i][rhs].max(0.0) / a <= cap {
                        let better = match best {
                            None => true,
                            Some((bi, ba)) => {
                                a > ba * (1.0 + 1e-9)
                                    || (a >= ba * (1.0 - 1e-9) && self.basis[i] < self.basis[bi])
                            }
                        };
                        if better {
                            best = Some((i, a));
                        }
                    }
                }
            }
            match best {
                None if phase_one => passed[col] = true,
                None => return Ok(Some(col)),
                Some((row, _)) => {
                    self.pivot(row, col);
                    passed.iter_mut().for_each(|p| *p = false);
                }
            }
        }
        Err(Error::solver(format!(
            "simplex exceeded {MAX_PIVOTS} pivots ({} rows, {} columns)",
            m, rhs
        )))
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpOutcome> {
        let rhs = self.rhs();
        if self.n_art > 0 {
            let mut cost = vec![0.0; rhs];
            for c in cost.iter_mut().skip(self.n_struct + self.n_slack) {
                *c = 1.0;
            }
            self.load_objective(&cost);
            self.iterate(true)?;
            let m = self.m();
            let infeas = -self.t[m][rhs];
            let scale = 1.0
                + lp.constraints
                    .iter()
                    .map(|c| c.rhs.abs())
                    .fold(0.0, f64::max);
            if infeas > 1e-9 * scale {
                return Ok(LpOutcome::Infeasible);
            }
            // drive zero-level artificials out of the basis
            let mut i = 0;
            while i < self.m() {
                if self.is_art(self.basis[i]) {
                    let col = (0..self.n_struct + self.n_slack)
                        .filter(|&j| self.t[i][j].abs() > PIVOT_TOL)
                        .max_by(|&a, &b| self.t[i][a].abs().total_cmp(&self.t[i][b].abs()));
                    match col {
                        Some(j) => self.pivot(i, j),
                        None => {
                            // redundant row
                            self.t.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![0.0; rhs];
        for (j, &(p, mi)) in self.var_cols.iter().enumerate() {
            cost[p] = lp.objective[j];
            if let Some(mi) = mi {
                cost[mi] = -lp.objective[j];
            }
        }
        self.load_objective(&cost);
        if let Some(col) = self.iterate(false)? {
            let mut dir = vec![0.0; rhs];
            dir[col] = 1.0;
            for (i, &b) in self.basis.iter().enumerate() {
                dir[b] = -self.t[i][col];
            }
            return Ok(LpOutcome::Unbounded {
                ray: self.to_original(&dir),
            });
        }
        let mut xs = vec![0.0; rhs];
        for (i, &b) in self.basis.iter().enumerate() {
            xs[b] = self.t[i][rhs];
        }
        let x = self.to_original(&xs);
        let objective = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
        Ok(LpOutcome::Optimal(LpSolution { x, objective }))
    }

    fn to_original(&self, cols: &[f64]) -> Vec<f64> {
        self.var_cols
            .iter()
            .map(|&(p, mi)| cols[p] - mi.map_or(0.0, |mi| cols[mi]))
            .collect()
    }
}
