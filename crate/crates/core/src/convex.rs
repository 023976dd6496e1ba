//! Open convex sets, their positive conic hulls `B = ∪_{α>0} αA`, and the
//! symmetrized body `D = (B - x) ∩ (x - B)`.
//!
//! Membership is strict and exact (`a·e < b`, `|e - c| < r`); tolerances only
//! appear in the verification routines that report margins.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Vector};
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// Default search cap along rays for conic-hull searches.
pub const DEFAULT_RAY_BOUND: f64 = 1e6;
const GOLDEN_ITERS: usize = 160;
const ORACLE_SCAN_POINTS: usize = 2000;
/// Chords of unbounded sets are clipped to this half-length when sampling.
const CHORD_CAP: f64 = 1e3;

/// The strict inequality `normal · e < offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub normal: Vector,
    pub offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if normal.norm() <= 0.0 {
            return Err(Error::input("half-space normal must be nonzero"));
        }
        if !offset.is_finite() {
            return Err(Error::input("half-space offset must be finite"));
        }
        Ok(HalfSpace { normal, offset })
    }
}

pub type MembershipFn = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;
pub type ViolationFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A convex set known only through a membership predicate.
///
/// The predicate must be pure and describe an open convex set; neither
/// property can be checked. `violation`, when present, must be a convex
/// function that is negative exactly on the set; it lets conic-hull searches
/// use golden-section instead of a grid scan.
#[derive(Clone)]
pub struct OracleSet {
    pub name: String,
    pub dim: usize,
    pub membership: MembershipFn,
    pub violation: Option<ViolationFn>,
    pub ray_bound: f64,
    pub witness: Option<Vector>,
    /// Scale used when sampling the set around the witness.
    pub sample_radius: f64,
}

impl fmt::Debug for OracleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleSet")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("ray_bound", &self.ray_bound)
            .field("witness", &self.witness)
            .field("has_violation", &self.violation.is_some())
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum ConvexSet {
    HPolyhedron { dim: usize, rows: Vec<HalfSpace> },
    OpenBall { center: Vector, radius: f64 },
    Oracle(OracleSet),
}

impl ConvexSet {
    pub fn hpolyhedron(dim: usize, rows: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        for (i, r) in rows.iter().enumerate() {
            r.normal.check_dim(dim, &format!("row {i}"))?;
            if r.normal.norm() <= 0.0 {
                return Err(Error::input(format!("row {i} has a zero normal")));
            }
        }
        Ok(ConvexSet::HPolyhedron { dim, rows })
    }

    /// Convenience: rows given as `(normal, offset)` pairs of raw slices.
    pub fn from_rows(dim: usize, rows: &[(&[f64], f64)]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|(a, b)| HalfSpace::new(Vector::new(a.to_vec())?, *b))
            .collect::<Result<Vec<_>>>()?;
        ConvexSet::hpolyhedron(dim, rows)
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::input("ball radius must be positive and finite"));
        }
        Ok(ConvexSet::OpenBall { center, radius })
    }

    pub fn oracle(set: OracleSet) -> Result<Self> {
        if set.dim == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        if !(set.ray_bound > 0.0 && set.ray_bound.is_finite()) {
            return Err(Error::input("oracle ray bound must be positive and finite"));
        }
        if let Some(w) = &set.witness {
            w.check_dim(set.dim, "witness")?;
            if !(set.membership)(w.as_slice()) {
                return Err(Error::input("oracle witness is not a member of the set"));
            }
        }
        Ok(ConvexSet::Oracle(set))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::HPolyhedron { dim, .. } => *dim,
            ConvexSet::OpenBall { center, .. } => center.dim(),
            ConvexSet::Oracle(o) => o.dim,
        }
    }

    pub fn ray_bound(&self) -> f64 {
        match self {
            ConvexSet::Oracle(o) => o.ray_bound,
            _ => DEFAULT_RAY_BOUND,
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(self, ConvexSet::HPolyhedron { .. })
    }

    pub fn contains(&self, e: &Vector) -> Result<bool> {
        e.check_dim(self.dim(), "point")?;
        Ok(self.contains_raw(e.as_slice()))
    }

    pub(crate) fn contains_raw(&self, e: &[f64]) -> bool {
        match self {
            ConvexSet::HPolyhedron { rows, .. } => {
                rows.iter().all(|r| dot(r.normal.as_slice(), e) < r.offset)
            }
            ConvexSet::OpenBall { center, radius } => {
                let d2: f64 = e
                    .iter()
                    .zip(center.as_slice())
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum();
                d2.sqrt() < *radius
            }
            ConvexSet::Oracle(o) => (o.membership)(e),
        }
    }

    /// Signed violation: negative exactly inside the set, convex in `e`.
    /// Polyhedra use the largest normalized row excess, balls the distance to
    /// the sphere. Oracles without a violation function return `±1`.
    pub fn violation(&self, e: &[f64]) -> f64 {
        match self {
            ConvexSet::HPolyhedron { rows, .. } => rows
                .iter()
                .map(|r| (dot(r.normal.as_slice(), e) - r.offset) / r.normal.norm())
                .fold(f64::NEG_INFINITY, f64::max),
            ConvexSet::OpenBall { center, radius } => {
                let d2: f64 = e
                    .iter()
                    .zip(center.as_slice())
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum();
                d2.sqrt() - radius
            }
            ConvexSet::Oracle(o) => match &o.violation {
                Some(v) => v(e),
                None => {
                    if (o.membership)(e) {
                        -1.0
                    } else {
                        1.0
                    }
                }
            },
        }
    }

    /// `e ∈ B = ∪_{α>0} αA`. Polyhedra use the exact interval reduction on
    /// `α`; balls and oracles search along the ray.
    pub fn conic_hull_contains(&self, e: &Vector) -> Result<bool> {
        e.check_dim(self.dim(), "point")?;
        Ok(match self {
            ConvexSet::HPolyhedron { rows, .. } => polyhedral_conic_interval(rows, e.as_slice()),
            _ => self.conic_hull_search(e.as_slice()),
        })
    }

    /// The generic ray search: is `s e ∈ A` for some `s ∈ (0, ray_bound]`?
    pub fn conic_hull_search(&self, e: &[f64]) -> bool {
        self.ray_search(e).1
    }

    /// Smallest violation found along the ray `{s e : 0 < s <= ray_bound}`;
    /// negative values certify membership in `B` with that much room.
    pub fn conic_hull_margin(&self, e: &[f64]) -> f64 {
        self.ray_search(e).0
    }

    fn ray_search(&self, e: &[f64]) -> (f64, bool) {
        let cap = self.ray_bound();
        let mut pt = vec![0.0; e.len()];
        let mut eval = |s: f64| -> (f64, bool) {
            for (p, c) in pt.iter_mut().zip(e) {
                *p = s * c;
            }
            (self.violation(&pt), self.contains_raw(&pt))
        };
        let informative = !matches!(self, ConvexSet::Oracle(o) if o.violation.is_none());
        if !informative {
            // geometric scan from cap * 1e-12 to cap
            let mut best = f64::INFINITY;
            for k in 0..=ORACLE_SCAN_POINTS {
                let s = cap * 10f64.powf(-12.0 * (1.0 - k as f64 / ORACLE_SCAN_POINTS as f64));
                let (v, inside) = eval(s);
                best = best.min(v);
                if inside {
                    return (best, true);
                }
            }
            return (best, false);
        }
        // golden-section on the convex map s -> violation(s e)
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (0.0, cap);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let (mut f1, in1) = eval(x1);
        let (mut f2, in2) = eval(x2);
        if in1 && x1 > 0.0 {
            return (f1, true);
        }
        if in2 {
            return (f2, true);
        }
        let mut best = f1.min(f2);
        for _ in 0..GOLDEN_ITERS {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                let (f, inside) = eval(x1);
                f1 = f;
                best = best.min(f);
                if inside && x1 > 0.0 {
                    return (best, true);
                }
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                let (f, inside) = eval(x2);
                f2 = f;
                best = best.min(f);
                if inside {
                    return (best, true);
                }
            }
            if b - a <= f64::EPSILON * b.max(1e-300) {
                break;
            }
        }
        (best, false)
    }

    /// The Chebyshev center for polyhedra, the center for balls, the witness
    /// for oracles.
    pub fn pick_interior_point(&self) -> Result<Vector> {
        match self {
            ConvexSet::OpenBall { center, .. } => Ok(center.clone()),
            ConvexSet::Oracle(o) => o.witness.clone().ok_or_else(|| {
                Error::input(format!("oracle set '{}' has no witness point", o.name))
            }),
            ConvexSet::HPolyhedron { dim, rows } => {
                let (center, _) = chebyshev_center(*dim, rows)?;
                Ok(center)
            }
        }
    }

    /// Interval `(lo, hi)` of `t` with `p + t d` inside the set, clipped to
    /// `±CHORD_CAP`. `p` must be inside.
    pub(crate) fn chord(&self, p: &[f64], d: &[f64]) -> (f64, f64) {
        let (mut lo, mut hi) = (-CHORD_CAP, CHORD_CAP);
        match self {
            ConvexSet::HPolyhedron { rows, .. } => {
                for r in rows {
                    let ad = dot(r.normal.as_slice(), d);
                    let slack = r.offset - dot(r.normal.as_slice(), p);
                    if ad > 0.0 {
                        hi = hi.min(slack / ad);
                    } else if ad < 0.0 {
                        lo = lo.max(slack / ad);
                    }
                }
            }
            ConvexSet::OpenBall { center, radius } => {
                let w: Vec<f64> = p
                    .iter()
                    .zip(center.as_slice())
                    .map(|(a, c)| a - c)
                    .collect();
                let dd = dot(d, d);
                let wd = dot(&w, d);
                let disc = (wd * wd - dd * (dot(&w, &w) - radius * radius)).max(0.0);
                let s = disc.sqrt();
                lo = lo.max((-wd - s) / dd);
                hi = hi.min((-wd + s) / dd);
            }
            ConvexSet::Oracle(o) => {
                let reach = o.sample_radius * 4.0;
                let inside = |t: f64| {
                    let q: Vec<f64> = p.iter().zip(d).map(|(a, b)| a + t * b).collect();
                    (o.membership)(&q)
                };
                let edge = |sign: f64| {
                    let dn = norm(d);
                    let (mut a, mut b) = (0.0, reach / dn);
                    if inside(sign * b) {
                        return sign * b;
                    }
                    for _ in 0..50 {
                        let m = 0.5 * (a + b);
                        if inside(sign * m) {
                            a = m;
                        } else {
                            b = m;
                        }
                    }
                    sign * a
                };
                lo = edge(-1.0);
                hi = edge(1.0);
            }
        }
        (lo, hi)
    }

    /// Hit-and-run samples of the set, started from `start` (must be inside).
    pub fn sample<R: Rng>(&self, start: &Vector, count: usize, rng: &mut R) -> Vec<Vector> {
        let n = self.dim();
        let mut p = start.as_slice().to_vec();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let mut d: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let dn = norm(&d);
            if dn == 0.0 {
                continue;
            }
            d.iter_mut().for_each(|c| *c /= dn);
            let (lo, hi) = self.chord(&p, &d);
            if !(hi > lo) {
                continue;
            }
            let t = lo + (hi - lo) * rng.random::<f64>();
            let q: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            if self.contains_raw(&q) {
                p = q;
                out.push(Vector::from_raw(p.clone()));
            }
        }
        out
    }
}

impl ConvexSet {
    /// `true` when the open set has no points. Only polyhedra can be empty
    /// here; balls and oracles are nonempty by construction.
    pub fn is_empty(&self) -> Result<bool> {
        match self {
            ConvexSet::HPolyhedron { dim, rows } => {
                let axes: Vec<Vector> = (0..*dim).map(|i| Vector::unit(*dim, i)).collect();
                Ok(strict_feasibility_margin(rows, &axes)? <= 1e-12)
            }
            _ => Ok(false),
        }
    }

    /// Decides `A ∩ S ≠ ∅`. Exact for polyhedra (LP) and balls (distance);
    /// oracles are probed at `samples` points of `S` of norm at most 10.
    pub fn meets_subspace(
        &self,
        s: &crate::linalg::Subspace,
        seed: u64,
        samples: usize,
    ) -> Result<bool> {
        if s.ambient_dim() != self.dim() {
            return Err(Error::input("subspace and set dimensions differ"));
        }
        match self {
            ConvexSet::HPolyhedron { rows, .. } => {
                Ok(strict_feasibility_margin(rows, s.basis())? > 1e-12)
            }
            ConvexSet::OpenBall { center, radius } => Ok(s.distance(center) < *radius),
            ConvexSet::Oracle(o) => {
                if (o.membership)(&vec![0.0; o.dim]) {
                    return Ok(true);
                }
                if s.dim() == 0 {
                    return Ok(false);
                }
                let k = s.dim();
                let hit = crate::par::map_reduce(
                    samples,
                    false,
                    |i| {
                        let mut rng = crate::par::trial_rng(seed, i as u64);
                        let c: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
                        let cn = norm(&c).max(f64::MIN_POSITIVE);
                        let r = 10.0 * rng.random::<f64>();
                        let c: Vec<f64> = c.iter().map(|x| x * r / cn).collect();
                        (o.membership)(s.combine(&c).as_slice())
                    },
                    |a, b| a || b,
                );
                Ok(hit)
            }
        }
    }
}

/// Largest `r <= 1` with `a_i·(Σ c_j s_j) + |a_i| r <= b_i` for some `c`; the
/// strict system restricted to `span(s)` is feasible iff this is positive.
fn strict_feasibility_margin(rows: &[HalfSpace], span: &[Vector]) -> Result<f64> {
    let k = span.len();
    let mut obj = vec![0.0; k + 1];
    obj[k] = -1.0;
    let mut lp = LinearProgram::minimize(obj);
    for j in 0..k {
        lp.set_free(j);
    }
    for r in rows {
        let mut c: Vec<f64> = span.iter().map(|s| r.normal.dot(s)).collect();
        c.push(r.normal.norm());
        lp.add(c, Relation::Le, r.offset);
    }
    let mut cap = vec![0.0; k + 1];
    cap[k] = 1.0;
    lp.add(cap, Relation::Le, 1.0);
    match lp.solve()? {
        LpOutcome::Optimal(s) => Ok(s.x[k]),
        LpOutcome::Infeasible => Ok(f64::NEG_INFINITY),
        LpOutcome::Unbounded { .. } => Err(Error::solver("feasibility LP unbounded")),
    }
}

/// Exact test of `∃α>0 : a_i·e < α b_i` for all rows.
fn polyhedral_conic_interval(rows: &[HalfSpace], e: &[f64]) -> bool {
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for r in rows {
        let ae = dot(r.normal.as_slice(), e);
        if r.offset > 0.0 {
            lower = lower.max(ae / r.offset);
        } else if r.offset < 0.0 {
            upper = upper.min(ae / r.offset);
        } else if ae >= 0.0 {
            return false;
        }
    }
    lower < upper
}

/// Fourier-Motzkin elimination of `α` from `a_i·e < α b_i, α > 0`: the open
/// cone `{e : c_k·e < 0}` equal to the conic hull of the polyhedron.
pub fn polyhedral_cone_rows(rows: &[HalfSpace]) -> Vec<Vector> {
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| r.offset <= 0.0) {
        out.push(r.normal.clone());
    }
    for pos in rows.iter().filter(|r| r.offset > 0.0) {
        for neg in rows.iter().filter(|r| r.offset < 0.0) {
            let c = pos
                .normal
                .scale(1.0 / pos.offset)
                .sub(&neg.normal.scale(1.0 / neg.offset));
            out.push(c);
        }
    }
    out
}

/// Chebyshev center and inradius. Ties among optimal centers are broken by
/// lexicographic minimization of the coordinates.
pub fn chebyshev_center(dim: usize, rows: &[HalfSpace]) -> Result<(Vector, f64)> {
    // variables: x_1..x_dim (free), r >= 0
    let build = |objective: Vec<f64>, r_floor: Option<f64>, fixed: &[(usize, f64)]| {
        let mut lp = LinearProgram::minimize(objective);
        for j in 0..dim {
            lp.set_free(j);
        }
        for row in rows {
            let mut c = row.normal.as_slice().to_vec();
            c.push(row.normal.norm());
            lp.add(c, Relation::Le, row.offset);
        }
        if let Some(rf) = r_floor {
            let mut c = vec![0.0; dim + 1];
            c[dim] = 1.0;
            lp.add(c, Relation::Ge, rf);
        }
        for &(j, v) in fixed {
            let mut c = vec![0.0; dim + 1];
            c[j] = 1.0;
            lp.add(c, Relation::Le, v);
        }
        lp
    };
    let mut obj = vec![0.0; dim + 1];
    obj[dim] = -1.0;
    let sol = match build(obj, None, &[]).solve()? {
        LpOutcome::Optimal(s) => s,
        LpOutcome::Infeasible => {
            return Err(Error::EmptySet("polyhedron rows are infeasible".into()))
        }
        LpOutcome::Unbounded { .. } => {
            return Err(Error::input(
                "polyhedron has unbounded inradius; supply an anchor point",
            ))
        }
    };
    let radius = sol.x[dim];
    if radius <= 1e-12 {
        return Err(Error::EmptySet("polyhedron has empty interior".into()));
    }
    let r_floor = radius - 1e-9 * radius.max(1.0);
    let mut point: Vec<f64> = sol.x[..dim].to_vec();
    let mut fixed: Vec<(usize, f64)> = Vec::new();
    for k in 0..dim {
        let mut obj = vec![0.0; dim + 1];
        obj[k] = 1.0;
        match build(obj, Some(r_floor), &fixed).solve()? {
            LpOutcome::Optimal(s) => {
                point = s.x[..dim].to_vec();
                fixed.push((k, s.x[k] + 1e-12 * s.x[k].abs().max(1.0)));
            }
            // optimal face unbounded in this coordinate; keep the last vertex
            _ => break,
        }
    }
    let rows_ok = rows
        .iter()
        .all(|r| dot(r.normal.as_slice(), &point) < r.offset);
    if !rows_ok {
        return Err(Error::solver("Chebyshev center is not strictly interior"));
    }
    Ok((Vector::from_raw(point), radius))
}

/// Representation of `B` used inside `D`.
#[derive(Debug, Clone)]
pub enum ConicHull {
    /// `{e : c_k·e < 0 for all k}` (the whole space when there are no rows)
    Polyhedral { dim: usize, rows: Vec<Vector> },
    /// Conic hull of a ball not containing the origin in its closure:
    /// `{e : c·e > cos_half_angle · |c| |e|}`
    Circular { axis: Vector, cos_half_angle: f64 },
    /// Falls back to searching along rays of the underlying set.
    Search(ConvexSet),
}

impl ConicHull {
    pub fn of(a: &ConvexSet) -> ConicHull {
        match a {
            ConvexSet::HPolyhedron { dim, rows } => ConicHull::Polyhedral {
                dim: *dim,
                rows: polyhedral_cone_rows(rows),
            },
            ConvexSet::OpenBall { center, radius } => {
                let d = center.norm();
                if d <= *radius {
                    // origin in the closure: B is an open half-space or everything
                    let rows = if d < *radius {
                        Vec::new()
                    } else {
                        vec![center.scale(-1.0)]
                    };
                    return ConicHull::Polyhedral {
                        dim: center.dim(),
                        rows,
                    };
                }
                let sin = radius / d;
                let cos = (1.0 - sin * sin).sqrt();
                if center.dim() == 2 {
                    let u = center.scale(1.0 / d);
                    let rot = |c: f64, s: f64| {
                        Vector::from_raw(vec![c * u[0] - s * u[1], s * u[0] + c * u[1]])
                    };
                    // outward normals of the two bounding rays at ±half-angle
                    let n1 = rot(-sin, cos);
                    let n2 = rot(-sin, -cos);
                    ConicHull::Polyhedral {
                        dim: 2,
                        rows: vec![n1, n2],
                    }
                } else {
                    ConicHull::Circular {
                        axis: center.clone(),
                        cos_half_angle: cos,
                    }
                }
            }
            ConvexSet::Oracle(_) => ConicHull::Search(a.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConicHull::Polyhedral { dim, .. } => *dim,
            ConicHull::Circular { axis, .. } => axis.dim(),
            ConicHull::Search(a) => a.dim(),
        }
    }

    pub fn contains_raw(&self, e: &[f64]) -> bool {
        match self {
            ConicHull::Polyhedral { rows, .. } => rows.iter().all(|c| dot(c.as_slice(), e) < 0.0),
            ConicHull::Circular {
                axis,
                cos_half_angle,
            } => dot(axis.as_slice(), e) > cos_half_angle * axis.norm() * norm(e),
            ConicHull::Search(a) => a.conic_hull_search(e),
        }
    }
}

/// `D = (B - anchor) ∩ (anchor - B)`.
#[derive(Debug, Clone)]
pub struct SymmetrizedBody {
    hull: ConicHull,
    anchor: Vector,
}

impl SymmetrizedBody {
    pub fn anchor(&self) -> &Vector {
        &self.anchor
    }

    pub fn hull(&self) -> &ConicHull {
        &self.hull
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }

    pub fn contains(&self, e: &Vector) -> Result<bool> {
        e.check_dim(self.dim(), "point")?;
        Ok(self.contains_raw(e.as_slice()))
    }

    pub fn contains_raw(&self, e: &[f64]) -> bool {
        let x = self.anchor.as_slice();
        let plus: Vec<f64> = x.iter().zip(e).map(|(a, b)| a + b).collect();
        if !self.hull.contains_raw(&plus) {
            return false;
        }
        let minus: Vec<f64> = x.iter().zip(e).map(|(a, b)| a - b).collect();
        self.hull.contains_raw(&minus)
    }

    /// For polyhedral `B`, the rows `(c_k / β_k)` with `β_k = -c_k·x` so that
    /// `D = {e : |r_k·e| < 1}`.
    pub fn polyhedral_rows(&self) -> Option<Vec<Vector>> {
        let ConicHull::Polyhedral { rows, .. } = &self.hull else {
            return None;
        };
        rows.iter()
            .map(|c| {
                let beta = -c.dot(&self.anchor);
                (beta > 0.0).then(|| c.scale(1.0 / beta))
            })
            .collect()
    }
}

/// Builds `D` for an anchor `x ∈ B`.
pub fn build_symmetrized_body(a: &ConvexSet, x: &Vector) -> Result<SymmetrizedBody> {
    x.check_dim(a.dim(), "anchor")?;
    if !a.conic_hull_contains(x)? {
        return Err(Error::input("anchor is not in the conic hull of A"));
    }
    Ok(SymmetrizedBody::with_hull(ConicHull::of(a), x.clone()))
}

impl SymmetrizedBody {
    pub(crate) fn with_hull(hull: ConicHull, anchor: Vector) -> SymmetrizedBody {
        SymmetrizedBody { hull, anchor }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn disk() -> ConvexSet {
        ConvexSet::ball(v(&[2.0, 0.0]), 2f64.sqrt()).unwrap()
    }

    fn half_space_x_pos() -> ConvexSet {
        ConvexSet::from_rows(3, &[(&[-1.0, 0.0, 0.0], 0.0)]).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(disk().contains(&v(&[2.0, 0.0])).unwrap());
        assert!(!disk().contains(&v(&[0.0, 0.0])).unwrap());
        assert!(half_space_x_pos().contains(&v(&[1.0, -3.0, 0.0])).unwrap());
        assert!(!half_space_x_pos().contains(&v(&[0.0, -3.0, 0.0])).unwrap());
        assert_eq!(disk().contains(&v(&[1.0])).unwrap_err().kind(), "input");
    }

    #[test]
    fn constructor_validation() {
        assert!(ConvexSet::ball(v(&[0.0]), 0.0).is_err());
        assert!(ConvexSet::from_rows(2, &[(&[0.0, 0.0], 1.0)]).is_err());
        assert!(ConvexSet::from_rows(2, &[(&[1.0], 1.0)]).is_err());
    }

    #[test]
    fn disk_conic_hull() {
        let a = disk();
        assert!(a.conic_hull_contains(&v(&[2.0, 1.0])).unwrap());
        assert!(!a.conic_hull_contains(&v(&[1.0, 2.0])).unwrap());
        assert!(!a.conic_hull_contains(&v(&[1.0, 1.0])).unwrap());
        assert!(!a.conic_hull_contains(&v(&[0.0, 0.0])).unwrap());
        assert!(!a.conic_hull_contains(&v(&[-1.0, 0.0])).unwrap());
    }

    #[test]
    fn half_space_is_its_own_hull() {
        let a = half_space_x_pos();
        assert!(a.conic_hull_contains(&v(&[5.0, 9.0, -3.0])).unwrap());
        assert!(!a.conic_hull_contains(&v(&[0.0, 9.0, -3.0])).unwrap());
        assert!(!a.conic_hull_contains(&Vector::zeros(3)).unwrap());
    }

    #[test]
    fn cone_rows_match_interval_reduction() {
        // triangle away from the origin plus a row with negative offset
        let a = ConvexSet::from_rows(
            2,
            &[
                (&[-1.0, 0.0], -1.0),
                (&[1.0, 0.0], 3.0),
                (&[0.0, 1.0], 1.0),
                (&[0.0, -1.0], 1.0),
            ],
        )
        .unwrap();
        let hull = ConicHull::of(&a);
        for &(x, y) in &[
            (2.0, 0.5),
            (2.0, 0.7),
            (1.0, 0.99),
            (1.0, 1.01),
            (-1.0, 0.0),
            (3.0, -2.9),
        ] {
            let e = v(&[x, y]);
            assert_eq!(
                hull.contains_raw(e.as_slice()),
                a.conic_hull_contains(&e).unwrap(),
                "at ({x},{y})"
            );
        }
    }

    #[test]
    fn disk_wedge_rows() {
        let ConicHull::Polyhedral { rows, .. } = ConicHull::of(&disk()) else {
            panic!("2-D disk should give a polyhedral wedge");
        };
        assert_eq!(rows.len(), 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(rows[0].max_abs_diff(&v(&[-h, h])) < 1e-15);
        assert!(rows[1].max_abs_diff(&v(&[-h, -h])) < 1e-15);
    }

    #[test]
    fn example_one_body() {
        let d = build_symmetrized_body(&disk(), &v(&[1.0, 0.0])).unwrap();
        assert!(d.contains(&v(&[0.5, 0.4])).unwrap());
        assert!(!d.contains(&v(&[0.5, 0.6])).unwrap());
        assert!(d.contains(&v(&[0.0, 0.0])).unwrap());
        assert!(!d.contains(&v(&[1.0, 0.0])).unwrap());
    }

    #[test]
    fn example_two_body() {
        let d = build_symmetrized_body(&half_space_x_pos(), &v(&[1.0, -3.0, 0.0])).unwrap();
        assert!(d.contains(&v(&[0.9, 100.0, -100.0])).unwrap());
        assert!(!d.contains(&v(&[1.0, 0.0, 0.0])).unwrap());
        assert!(d.contains(&Vector::zeros(3)).unwrap());
        let rows = d.polyhedral_rows().unwrap();
        assert_eq!(rows, vec![v(&[-1.0, 0.0, 0.0])]);
    }

    #[test]
    fn anchor_outside_hull_rejected() {
        let e = build_symmetrized_body(&disk(), &v(&[-1.0, 0.0])).unwrap_err();
        assert_eq!(e.kind(), "input");
    }

    #[test]
    fn interior_points() {
        assert_eq!(disk().pick_interior_point().unwrap(), v(&[2.0, 0.0]));
        let boxed = ConvexSet::from_rows(
            3,
            &[
                (&[-1.0, 0.0, 0.0], 0.0),
                (&[1.0, 0.0, 0.0], 10.0),
                (&[-1.0, 0.0, 0.0], 10.0),
                (&[0.0, 1.0, 0.0], 10.0),
                (&[0.0, -1.0, 0.0], 10.0),
                (&[0.0, 0.0, 1.0], 10.0),
                (&[0.0, 0.0, -1.0], 10.0),
            ],
        )
        .unwrap();
        let c = boxed.pick_interior_point().unwrap();
        assert!((c[0] - 5.0).abs() < 1e-7, "{c:?}");
        assert!(c[1].abs() <= 5.0 + 1e-7 && c[2].abs() <= 5.0 + 1e-7);
        assert!(boxed.contains(&c).unwrap());
        // deterministic lexicographic tie-break
        assert_eq!(c, boxed.pick_interior_point().unwrap());
    }

    #[test]
    fn empty_and_unbounded_polyhedra() {
        let empty = ConvexSet::from_rows(1, &[(&[1.0], 0.0), (&[-1.0], -1.0)]).unwrap();
        assert_eq!(empty.pick_interior_point().unwrap_err().kind(), "empty_set");
        let flat = ConvexSet::from_rows(1, &[(&[1.0], 0.0), (&[-1.0], 0.0)]).unwrap();
        assert_eq!(flat.pick_interior_point().unwrap_err().kind(), "empty_set");
        assert_eq!(
            half_space_x_pos().pick_interior_point().unwrap_err().kind(),
            "input"
        );
    }

    #[test]
    fn oracle_without_witness() {
        let o = ConvexSet::oracle(OracleSet {
            name: "disk".into(),
            dim: 2,
            membership: Arc::new(|e: &[f64]| (e[0] - 2.0).powi(2) + e[1] * e[1] < 2.0),
            violation: None,
            ray_bound: 1e6,
            witness: None,
            sample_radius: 1.0,
        })
        .unwrap();
        assert_eq!(o.pick_interior_point().unwrap_err().kind(), "input");
        // grid-scan conic hull still decides clear cases
        assert!(o.conic_hull_contains(&v(&[1.0, 0.2])).unwrap());
        assert!(!o.conic_hull_contains(&v(&[0.2, 1.0])).unwrap());
    }

    #[test]
    fn samples_stay_inside() {
        let mut rng = crate::par::trial_rng(1, 0);
        let a = disk();
        for p in a.sample(&v(&[2.0, 0.0]), 200, &mut rng) {
            assert!(a.contains(&p).unwrap());
        }
    }
}
