//! Minkowski functionals of absolutely convex open bodies.
//!
//! Polyhedral bodies `{a_i·e < b_i}` with every `b_i > 0` have the closed form
//! `max(0, max_i a_i·e / b_i)`. Everything else goes through bisection on the
//! body's membership along the ray through `e`.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::convex::{ConicHull, ConvexSet, OracleSet, SymmetrizedBody, DEFAULT_RAY_BOUND};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, Vector};
use crate::par;

/// Relative bracket width at which gauge bisection stops.
pub const TOL_GAUGE: f64 = 1e-10;
/// Rays still inside the body at this scale are treated as recession
/// directions (gauge zero).
pub const RECESSION_CAP: f64 = 1e12;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone)]
pub enum Seminorm {
    /// `max(0, max_i a_i·e / b_i)`, all `b_i > 0`.
    Polyhedral {
        dim: usize,
        rows: Vec<(Vector, f64)>,
    },
    /// Bisection over membership in a symmetrized body.
    Oracle {
        body: SymmetrizedBody,
        tol: f64,
        cap: f64,
    },
    /// `max_i |c_i·e|`
    Explicit { dim: usize, rows: Vec<Vector> },
}

impl Seminorm {
    pub fn polyhedral(dim: usize, rows: Vec<(Vector, f64)>) -> Result<Self> {
        for (i, (a, b)) in rows.iter().enumerate() {
            a.check_dim(dim, &format!("gauge row {i}"))?;
            if !(*b > 0.0) || !b.is_finite() {
                return Err(Error::input(format!(
                    "gauge row {i} has offset {b}; the origin must be interior"
                )));
            }
        }
        Ok(Seminorm::Polyhedral { dim, rows })
    }

    pub fn explicit(dim: usize, rows: Vec<Vector>) -> Result<Self> {
        for (i, c) in rows.iter().enumerate() {
            c.check_dim(dim, &format!("seminorm row {i}"))?;
        }
        Ok(Seminorm::Explicit { dim, rows })
    }

    pub fn oracle(body: SymmetrizedBody) -> Self {
        Seminorm::Oracle {
            body,
            tol: TOL_GAUGE,
            cap: RECESSION_CAP,
        }
    }

    /// The gauge of `D`: closed form when `B` is polyhedral, bisection otherwise.
    pub fn of_body(body: &SymmetrizedBody) -> Self {
        match body.polyhedral_rows() {
            Some(rows) => {
                let dim = body.dim();
                let rows = rows
                    .into_iter()
                    .flat_map(|r| [(r.clone(), 1.0), (r.scale(-1.0), 1.0)])
                    .collect();
                Seminorm::Polyhedral { dim, rows }
            }
            None => Seminorm::oracle(body.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Seminorm::Polyhedral { dim, .. } | Seminorm::Explicit { dim, .. } => *dim,
            Seminorm::Oracle { body, .. } => body.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Seminorm::Polyhedral { .. } => "polyhedral",
            Seminorm::Oracle { .. } => "oracle",
            Seminorm::Explicit { .. } => "explicit",
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, Seminorm::Oracle { .. })
    }

    /// Rows `(a_i, b_i)` of the closed unit ball `{a_i·e <= b_i}` when the
    /// gauge is polyhedral.
    pub fn lp_rows(&self) -> Option<Vec<(Vector, f64)>> {
        match self {
            Seminorm::Polyhedral { rows, .. } => Some(rows.clone()),
            Seminorm::Explicit { rows, .. } => Some(
                rows.iter()
                    .flat_map(|c| [(c.clone(), 1.0), (c.scale(-1.0), 1.0)])
                    .collect(),
            ),
            Seminorm::Oracle { .. } => None,
        }
    }

    pub fn gauge(&self, e: &Vector) -> Result<f64> {
        e.check_dim(self.dim(), "point")?;
        Ok(self.eval(e.as_slice()))
    }

    pub(crate) fn eval(&self, e: &[f64]) -> f64 {
        match self {
            Seminorm::Polyhedral { rows, .. } => rows
                .iter()
                .map(|(a, b)| dot(a.as_slice(), e) / b)
                .fold(0.0, f64::max),
            Seminorm::Explicit { rows, .. } => rows
                .iter()
                .map(|c| dot(c.as_slice(), e).abs())
                .fold(0.0, f64::max),
            Seminorm::Oracle { body, tol, cap } => match body.hull() {
                ConicHull::Circular {
                    axis,
                    cos_half_angle,
                } => circular_gauge(axis, *cos_half_angle, body.anchor(), e),
                _ => bisect_gauge(body, e, *tol, *cap),
            },
        }
    }

    /// Membership in the open unit ball, decided without evaluating the gauge.
    pub fn unit_ball_contains(&self, e: &[f64]) -> bool {
        match self {
            Seminorm::Polyhedral { rows, .. } => {
                rows.iter().all(|(a, b)| dot(a.as_slice(), e) < *b)
            }
            Seminorm::Explicit { rows, .. } => {
                rows.iter().all(|c| dot(c.as_slice(), e).abs() < 1.0)
            }
            Seminorm::Oracle { body, .. } => body.contains_raw(e),
        }
    }

    /// The open set `{e : p(center - e) < 1}` as a convex set.
    pub fn shifted_unit_ball(&self, center: &Vector) -> Result<ConvexSet> {
        center.check_dim(self.dim(), "center")?;
        let n = self.dim();
        if let Some(rows) = self.lp_rows() {
            let rows = rows
                .into_iter()
                .map(|(a, b)| crate::convex::HalfSpace {
                    offset: b - a.dot(center),
                    normal: a.scale(-1.0),
                })
                .filter(|r| r.normal.norm() > 0.0)
                .collect();
            return ConvexSet::hpolyhedron(n, rows);
        }
        let p = Arc::new(self.clone());
        let c = center.clone();
        let p2 = Arc::clone(&p);
        let c2 = c.clone();
        let shift = move |e: &[f64], c: &Vector| -> Vec<f64> {
            c.as_slice().iter().zip(e).map(|(a, b)| a - b).collect()
        };
        ConvexSet::oracle(OracleSet {
            name: "seminorm-ball".into(),
            dim: n,
            membership: Arc::new(move |e: &[f64]| p.eval(&shift(e, &c)) < 1.0),
            violation: Some(Arc::new(move |e: &[f64]| p2.eval(&shift(e, &c2)) - 1.0)),
            ray_bound: DEFAULT_RAY_BOUND,
            witness: Some(center.clone()),
            sample_radius: 1.0,
        })
    }
}

/// Closed form for a circular cone `B`: `D = (B - x) ∩ (x - B)`, so the gauge
/// is `max(1/s(e), 1/s(-e))` where `s(d)` is where the ray `x + s d` leaves
/// `B`, the first positive root of
/// `(a·(x + s d))^2 = cos^2 |x + s d|^2`.
fn circular_gauge(axis: &Vector, cos: f64, x: &Vector, e: &[f64]) -> f64 {
    let an = axis.norm();
    let a: Vec<f64> = axis.as_slice().iter().map(|c| c / an).collect();
    let x = x.as_slice();
    let k2 = cos * cos;
    let alpha = dot(&a, x);
    let c = alpha * alpha - k2 * dot(x, x);
    let exit = |sign: f64| -> f64 {
        let beta = sign * dot(&a, e);
        let qa = beta * beta - k2 * dot(e, e);
        let qb = 2.0 * sign * (alpha * dot(&a, e) - k2 * dot(x, e));
        let roots: [f64; 2] = if qa.abs() <= 1e-300 {
            [
                if qb < 0.0 { -c / qb } else { f64::INFINITY },
                f64::INFINITY,
            ]
        } else {
            let mut disc = qb * qb - 4.0 * qa * c;
            if disc < 0.0 {
                // a double root is a ray through the apex; rounding can push
                // it slightly negative
                if disc < -1e-10 * qb * qb {
                    return 0.0;
                }
                disc = 0.0;
            }
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            if q == 0.0 {
                return 0.0;
            }
            [q / qa, c / q]
        };
        let mut s = roots
            .into_iter()
            .filter(|r| *r > 0.0)
            .fold(f64::INFINITY, f64::min);
        // Newton on the unsquared boundary a·y - cos |y| = 0, which keeps full
        // precision near the apex where the squared form has a double root
        for _ in 0..4 {
            if !s.is_finite() {
                break;
            }
            let y: Vec<f64> = x.iter().zip(e).map(|(xi, ei)| xi + sign * s * ei).collect();
            let yn = norm(&y);
            if yn == 0.0 {
                break;
            }
            let phi = dot(&a, &y) - cos * yn;
            let dphi = sign * (dot(&a, e) - cos * dot(&y, e) / yn);
            if dphi == 0.0 {
                break;
            }
            let next = s - phi / dphi;
            if !(next > 0.0) || next == s {
                break;
            }
            s = next;
        }
        if s.is_finite() {
            1.0 / s
        } else {
            0.0
        }
    };
    if e.iter().all(|c| *c == 0.0) {
        return 0.0;
    }
    exit(1.0).max(exit(-1.0))
}

/// `1 / sup{s : s e ∈ D}` by geometric bracketing then bisection.
fn bisect_gauge(body: &SymmetrizedBody, e: &[f64], tol: f64, cap: f64) -> f64 {
    if e.iter().all(|c| *c == 0.0) {
        return 0.0;
    }
    let inside = |s: f64| {
        let p: Vec<f64> = e.iter().map(|c| s * c).collect();
        body.contains_raw(&p)
    };
    let (mut lo, mut hi);
    if inside(1.0) {
        lo = 1.0;
        loop {
            let next = lo * 2.0;
            if next > cap {
                return 0.0;
            }
            if !inside(next) {
                hi = next;
                break;
            }
            lo = next;
        }
    } else {
        hi = 1.0;
        loop {
            let next = hi * 0.5;
            if next < f64::MIN_POSITIVE {
                return f64::INFINITY;
            }
            if inside(next) {
                lo = next;
                break;
            }
            hi = next;
        }
    }
    for _ in 0..MAX_HALVINGS {
        if hi - lo <= tol * lo {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    2.0 / (lo + hi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub trials: usize,
    /// `max |p(t e) - |t| p(e)| / max(1, |t| p(e))`
    pub max_homogeneity_error: f64,
    /// `max (p(u + v) - p(u) - p(v))`, clipped below at 0
    pub max_subadditivity_violation: f64,
    /// trials where `p(e) < 1` agreed with unit-ball membership (points within
    /// `1e-7` of the unit sphere count as agreeing)
    pub unit_ball_agreement: usize,
}

/// Sampled check of absolute homogeneity, subadditivity, and the unit-ball
/// characterization, with points of norm up to 10.
pub fn check_seminorm_axioms(p: &Seminorm, seed: u64, trials: usize) -> Result<AxiomReport> {
    if trials == 0 {
        return Err(Error::input("trials must be at least 1"));
    }
    let n = p.dim();
    let per_trial = |i: usize| {
        let mut rng = par::trial_rng(seed, i as u64);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let gn = crate::linalg::norm(&g).max(f64::MIN_POSITIVE);
            let r = 10.0 * rng.random::<f64>();
            g.into_iter().map(|c| c * r / gn).collect()
        };
        let u = draw(&mut rng);
        let v = draw(&mut rng);
        let t: f64 = rng.random_range(-10.0..10.0);
        let pu = p.eval(&u);
        let tu: Vec<f64> = u.iter().map(|c| t * c).collect();
        let hom = (p.eval(&tu) - t.abs() * pu).abs() / (t.abs() * pu).max(1.0);
        let uv: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let sub = (p.eval(&uv) - pu - p.eval(&v)).max(0.0);
        // unit-ball probe: rescale u so its gauge lands near 1
        let probe: Vec<f64> = if pu > 0.0 {
            let s = rng.random_range(0.5..1.5) / pu;
            u.iter().map(|c| c * s).collect()
        } else {
            u.clone()
        };
        let pp = p.eval(&probe);
        let agree = (pp - 1.0).abs() <= 1e-7 || ((pp < 1.0) == p.unit_ball_contains(&probe));
        (hom, sub, usize::from(agree))
    };
    let (hom, sub, agree) = par::map_reduce(trials, (0.0, 0.0, 0usize), per_trial, |a, b| {
        (par::max_f64(a.0, b.0), par::max_f64(a.1, b.1), a.2 + b.2)
    });
    Ok(AxiomReport {
        trials,
        max_homogeneity_error: hom,
        max_subadditivity_violation: sub,
        unit_ball_agreement: agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::build_symmetrized_body;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn cross_polytope() -> Seminorm {
        Seminorm::polyhedral(
            2,
            vec![
                (v(&[1.0, 1.0]), 1.0),
                (v(&[1.0, -1.0]), 1.0),
                (v(&[-1.0, 1.0]), 1.0),
                (v(&[-1.0, -1.0]), 1.0),
            ],
        )
        .unwrap()
    }

    fn example_one_oracle() -> Seminorm {
        let a = ConvexSet::ball(v(&[2.0, 0.0]), 2f64.sqrt()).unwrap();
        Seminorm::oracle(build_symmetrized_body(&a, &v(&[1.0, 0.0])).unwrap())
    }

    #[test]
    fn closed_form_example_one() {
        let p = cross_polytope();
        assert_eq!(p.gauge(&v(&[3.0, -4.0])).unwrap(), 7.0);
        assert_eq!(p.gauge(&v(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(p.gauge(&v(&[1.0, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn circular_closed_form_matches_bisection() {
        let ball = ConvexSet::ball(v(&[1.0, 2.0, 2.5]), 1.2).unwrap();
        let x = v(&[1.1, 2.1, 2.0]);
        let body = build_symmetrized_body(&ball, &x).unwrap();
        assert!(matches!(body.hull(), ConicHull::Circular { .. }));
        let closed = Seminorm::oracle(body.clone());
        assert!((closed.gauge(&x).unwrap() - 1.0).abs() < 1e-12);
        for e in [
            v(&[1.0, 0.0, 0.0]),
            v(&[0.3, -2.0, 0.7]),
            v(&[-1.1, -2.1, -2.0]),
            v(&[0.0, 0.0, 5.0]),
            x.scale(3.7),
        ] {
            let want = bisect_gauge(&body, e.as_slice(), 1e-13, RECESSION_CAP);
            let got = closed.gauge(&e).unwrap();
            assert!(
                (got - want).abs() <= 1e-9 * want.max(1.0),
                "{e:?}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn bisection_example_one() {
        let p = example_one_oracle();
        assert!((p.gauge(&v(&[3.0, -4.0])).unwrap() - 7.0).abs() < 1e-8);
        assert_eq!(p.gauge(&v(&[0.0, 0.0])).unwrap(), 0.0);
        assert!((p.gauge(&v(&[1.0, 0.0])).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn derived_gauge_is_polyhedral_for_the_disk() {
        let a = ConvexSet::ball(v(&[2.0, 0.0]), 2f64.sqrt()).unwrap();
        let d = build_symmetrized_body(&a, &v(&[1.0, 0.0])).unwrap();
        let p = Seminorm::of_body(&d);
        assert!(matches!(p, Seminorm::Polyhedral { .. }));
        assert!((p.gauge(&v(&[3.0, -4.0])).unwrap() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn example_two_seminorm_is_not_a_norm() {
        let a = ConvexSet::from_rows(3, &[(&[-1.0, 0.0, 0.0], 0.0)]).unwrap();
        let d = build_symmetrized_body(&a, &v(&[1.0, -3.0, 0.0])).unwrap();
        let psi = Seminorm::of_body(&d);
        assert_eq!(psi.gauge(&v(&[0.0, 5.0, 7.0])).unwrap(), 0.0);
        assert_eq!(psi.gauge(&v(&[-2.5, 5.0, 7.0])).unwrap(), 2.5);
        // bisection reaches the recession cap and reports zero too
        let oracle = Seminorm::oracle(d);
        assert_eq!(oracle.gauge(&v(&[0.0, 5.0, 7.0])).unwrap(), 0.0);
        assert!((oracle.gauge(&v(&[-2.5, 5.0, 7.0])).unwrap() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn origin_must_be_interior() {
        let e = Seminorm::polyhedral(1, vec![(v(&[1.0]), 0.0)]).unwrap_err();
        assert_eq!(e.kind(), "input");
        let e = Seminorm::polyhedral(1, vec![(v(&[1.0]), -1.0)]).unwrap_err();
        assert_eq!(e.kind(), "input");
    }

    #[test]
    fn axioms_closed_form_exact() {
        let r = check_seminorm_axioms(&cross_polytope(), 11, 1000).unwrap();
        assert!(r.max_homogeneity_error < 1e-12, "{r:?}");
        assert!(r.max_subadditivity_violation < 1e-12, "{r:?}");
        assert_eq!(r.unit_ball_agreement, 1000);
    }

    #[test]
    fn axioms_bisection_within_tolerance() {
        let r = check_seminorm_axioms(&example_one_oracle(), 11, 300).unwrap();
        assert!(r.max_homogeneity_error < 1e-7, "{r:?}");
        assert!(r.max_subadditivity_violation < 1e-7, "{r:?}");
        assert_eq!(r.unit_ball_agreement, 300);
    }

    #[test]
    fn axioms_explicit_single_row() {
        let p = Seminorm::explicit(2, vec![v(&[1.0, 0.0])]).unwrap();
        let r = check_seminorm_axioms(&p, 3, 500).unwrap();
        assert!(r.max_homogeneity_error < 1e-15);
        assert_eq!(check_seminorm_axioms(&p, 3, 0).unwrap_err().kind(), "input");
    }

    #[test]
    fn axioms_report_is_seed_deterministic() {
        let p = cross_polytope();
        assert_eq!(
            check_seminorm_axioms(&p, 5, 200).unwrap(),
            check_seminorm_axioms(&p, 5, 200).unwrap()
        );
    }

    #[test]
    fn shifted_ball_of_polyhedral_gauge() {
        let psi = Seminorm::explicit(3, vec![v(&[1.0, 0.0, 0.0])]).unwrap();
        let a = psi.shifted_unit_ball(&v(&[1.0, -3.0, 0.0])).unwrap();
        assert!(a.contains(&v(&[1.9, 50.0, 0.0])).unwrap());
        assert!(!a.contains(&v(&[2.0, 0.0, 0.0])).unwrap());
        assert!(!a.contains(&v(&[0.0, 0.0, 0.0])).unwrap());
    }

    #[test]
    fn shifted_ball_of_oracle_gauge() {
        let p = example_one_oracle();
        let a = p.shifted_unit_ball(&v(&[1.0, 0.0])).unwrap();
        assert!(a.contains(&v(&[1.0, 0.0])).unwrap());
        assert!(a.contains(&v(&[0.2, 0.1])).unwrap());
        assert!(!a.contains(&v(&[0.0, 0.0])).unwrap());
    }
}
