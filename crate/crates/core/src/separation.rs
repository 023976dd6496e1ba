//! Separating an open convex set from a disjoint subspace with a hyperplane,
//! built from the extension machinery:
//!
//! 1. `B = ∪_{α>0} αA`, an anchor `x ∈ B`, and `D = (B - x) ∩ (x - B)`;
//! 2. `p` = gauge of `D`, `L = S ⊕ span{x}`, `f(z + t x) = t`;
//! 3. `g` = a dominated extension of `f` to `R^n`, and `H = Ker(g)`.
//!
//! Since `|g| <= p` and `g(x) = 1`, `H` contains `S` and misses `B ⊇ A`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::convex::{build_symmetrized_body, ConvexSet};
use crate::error::{Error, Result};
use crate::extension::{
    domination_check, ExtensionState, ExtensionStep, GammaRule, IntervalMethod,
};
use crate::gauge::Seminorm;
use crate::linalg::{
    decompose, kernel_hyperplane, norm, Hyperplane, PartialFunctional, Subspace, Vector,
};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::par;

/// `S ⊆ H` is accepted when `max |n·b|` over the `S` basis is below this.
pub const TOL_S_RESIDUAL: f64 = 1e-8;
/// Domination (`|g| <= p`) and clearance (`H ∩ A = ∅`) are both decided with
/// this slack.
pub const TOL_DOM: f64 = 1e-6;
/// Points of `H` count as members of `B` only with at least this much room.
const B_MARGIN: f64 = 1e-9;
/// Slack used when deciding either side of `|g| <= p ⟺ A ∩ Ker(g) = ∅`
/// from an exact quantity: a violation found by `domination_check` is a
/// witness, and ball or LP clearances are closed form. Sampled clearances
/// get `TOL_DOM`.
pub const TOL_EQUIVALENCE: f64 = 1e-9;

fn kernel_misses(clearance: f64, exact: bool) -> bool {
    clearance >= -if exact { TOL_EQUIVALENCE } else { TOL_DOM }
}

#[derive(Debug, Clone)]
pub struct SeparationOptions {
    /// Anchor `x ∈ B`; defaults to the set's interior point.
    pub anchor: Option<Vector>,
    pub gamma_rule: GammaRule,
    pub method: IntervalMethod,
    pub seed: u64,
    /// Points of `A` sampled for clearance when no exact route exists.
    pub clearance_samples: usize,
    /// Points of `H` tested against `B`.
    pub hull_samples: usize,
    /// Directions sampled by domination checks.
    pub domination_samples: usize,
}

impl Default for SeparationOptions {
    fn default() -> Self {
        SeparationOptions {
            anchor: None,
            gamma_rule: GammaRule::Upper,
            method: IntervalMethod::Auto,
            seed: 0,
            clearance_samples: 10_000,
            hull_samples: 1_000,
            domination_samples: 2_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCertificate {
    /// `max |n·b|` over the `S` basis.
    pub s_in_h_residual: f64,
    /// Signed distance-like margin between `H` and `A`: nonnegative when `A`
    /// lies on one side (its closure may touch `H`), negative when `H` cuts
    /// through. Infinite for empty `A`.
    pub a_clearance: f64,
    /// Whether `a_clearance` came from an exact computation (LP or ball
    /// distance) rather than sampling.
    pub clearance_exact: bool,
    /// `H ∩ A = ∅`: `a_clearance >= -TOL_DOM`.
    pub a_disjoint: bool,
    /// No sampled point of `H` was found in `B`.
    pub b_disjoint: bool,
    /// For pipeline results: both sides of `|g| <= p ⟺ A ∩ Ker(g) = ∅` agree.
    pub remark2_status: Option<bool>,
    pub valid: bool,
}

#[derive(Debug, Clone)]
pub struct SeparationResult {
    pub hyperplane: Hyperplane,
    /// Unnormalized functional with `g·x = 1` (equals the unit normal when `A`
    /// is empty).
    pub g: Vector,
    pub anchor: Option<Vector>,
    pub gauge: Option<Seminorm>,
    pub history: Vec<ExtensionStep>,
    pub certificate: SeparationCertificate,
}

/// The objects of the construction before any extension is chosen.
#[derive(Debug, Clone)]
pub struct PipelineInstance {
    pub set: ConvexSet,
    pub subspace: Subspace,
    pub anchor: Vector,
    pub seminorm: Seminorm,
    pub functional: PartialFunctional,
}

impl PipelineInstance {
    /// Builds `x`, `D`, `p`, and `f` for a nonempty `A` disjoint from `S`.
    pub fn new(set: &ConvexSet, s: &Subspace, anchor: Option<&Vector>) -> Result<Self> {
        if s.ambient_dim() != set.dim() {
            return Err(Error::input(format!(
                "subspace lives in R^{}, set in R^{}",
                s.ambient_dim(),
                set.dim()
            )));
        }
        let x = match anchor {
            Some(x) => x.clone(),
            None => set.pick_interior_point()?,
        };
        let body = build_symmetrized_body(set, &x)?;
        let seminorm = Seminorm::of_body(&body);
        let functional = PartialFunctional::from_anchor(s, &x)?;
        Ok(PipelineInstance {
            set: set.clone(),
            subspace: s.clone(),
            anchor: x,
            seminorm,
            functional,
        })
    }

    /// Runs the extension and assembles the result.
    pub fn separate(&self, opts: &SeparationOptions) -> Result<SeparationResult> {
        let state = ExtensionState::new(self.functional.clone(), self.seminorm.clone())?
            .with_method(opts.method)
            .extend_full(opts.gamma_rule)?;
        let g = state.coefficients();
        let hyperplane = kernel_hyperplane(&g)?;
        let mut certificate = verify_separation(&self.set, &self.subspace, &hyperplane, opts)?;
        let dominated = domination_check(&g, &self.seminorm, opts.seed, opts.domination_samples)?
            <= TOL_EQUIVALENCE;
        let misses = kernel_misses(certificate.a_clearance, certificate.clearance_exact);
        certificate.remark2_status = Some(dominated == misses);
        Ok(SeparationResult {
            hyperplane,
            g,
            anchor: Some(self.anchor.clone()),
            gauge: Some(self.seminorm.clone()),
            history: state.history().to_vec(),
            certificate,
        })
    }

    /// Both sides of the equivalence for a candidate extension `g` of `f`:
    /// `(|g| <= p, A ∩ Ker(g) = ∅)`.
    pub fn remark2_equivalence_check(
        &self,
        g: &Vector,
        opts: &SeparationOptions,
    ) -> Result<(bool, bool)> {
        g.check_dim(self.set.dim(), "candidate")?;
        let at_anchor = g.dot(&self.anchor);
        let on_s = self
            .subspace
            .basis()
            .iter()
            .map(|b| g.dot(b).abs())
            .fold(0.0, f64::max);
        if (at_anchor - 1.0).abs() > 1e-8 || on_s > 1e-8 {
            return Err(Error::input(format!(
                "candidate does not extend f: g(x) = {at_anchor}, max |g| on S = {on_s:.3e}"
            )));
        }
        let dominated = domination_check(g, &self.seminorm, opts.seed, opts.domination_samples)?
            <= TOL_EQUIVALENCE;
        let h = kernel_hyperplane(g)?;
        let (c, exact) = clearance(&self.set, h.normal(), opts)?;
        let disjoint = kernel_misses(c, exact);
        Ok((dominated, disjoint))
    }
}

/// The full construction. Empty `A` yields a hyperplane spanned by `S` and
/// the leading complement directions.
pub fn separate(
    set: &ConvexSet,
    s: &Subspace,
    opts: &SeparationOptions,
) -> Result<SeparationResult> {
    if s.ambient_dim() != set.dim() {
        return Err(Error::input("subspace and set dimensions differ"));
    }
    if set.is_empty()? {
        let comp = s.complement_basis();
        let Some(normal) = comp.last().cloned() else {
            return Err(Error::degenerate(
                "S is the whole space; no hyperplane contains it",
            ));
        };
        let hyperplane = kernel_hyperplane(&normal)?;
        let certificate = verify_separation(set, s, &hyperplane, opts)?;
        return Ok(SeparationResult {
            hyperplane,
            g: normal,
            anchor: None,
            gauge: None,
            history: Vec::new(),
            certificate,
        });
    }
    if set.meets_subspace(s, opts.seed, opts.hull_samples)? {
        return Err(Error::input("A meets S; no separating hyperplane exists"));
    }
    PipelineInstance::new(set, s, opts.anchor.as_ref())?.separate(opts)
}

/// Certificate for an arbitrary hyperplane `H` against `A` and `S`.
pub fn verify_separation(
    set: &ConvexSet,
    s: &Subspace,
    h: &Hyperplane,
    opts: &SeparationOptions,
) -> Result<SeparationCertificate> {
    if h.dim() != set.dim() || s.ambient_dim() != set.dim() {
        return Err(Error::input(
            "hyperplane, subspace, and set dimensions differ",
        ));
    }
    let n = h.normal();
    let s_in_h_residual = s.basis().iter().map(|b| n.dot(b).abs()).fold(0.0, f64::max);
    let (a_clearance, clearance_exact) = if set.is_empty()? {
        (f64::INFINITY, true)
    } else {
        clearance(set, n, opts)?
    };
    let a_disjoint = a_clearance >= -TOL_DOM;
    let b_disjoint = hull_avoids_hyperplane(set, h, opts);
    Ok(SeparationCertificate {
        s_in_h_residual,
        a_clearance,
        clearance_exact,
        a_disjoint,
        b_disjoint,
        remark2_status: None,
        valid: s_in_h_residual < TOL_S_RESIDUAL && a_disjoint,
    })
}

/// Signed clearance of `A` from `{n·e = 0}`, and whether it is exact.
fn clearance(set: &ConvexSet, n: &Vector, opts: &SeparationOptions) -> Result<(f64, bool)> {
    let signed = |lo: f64, hi: f64| {
        if lo >= 0.0 {
            lo
        } else if hi <= 0.0 {
            -hi
        } else {
            -(-lo).min(hi)
        }
    };
    match set {
        ConvexSet::OpenBall { center, radius } => {
            Ok((n.dot(center).abs() - radius * n.norm(), true))
        }
        ConvexSet::HPolyhedron { rows, .. } => {
            let extreme = |sign: f64| -> Result<f64> {
                let mut lp = LinearProgram::minimize(n.scale(sign).into_inner());
                lp.set_all_free();
                for r in rows {
                    lp.add(r.normal.as_slice().to_vec(), Relation::Le, r.offset);
                }
                Ok(match lp.solve()? {
                    LpOutcome::Optimal(sol) => sign * sol.objective,
                    LpOutcome::Unbounded { .. } => -sign * f64::INFINITY,
                    LpOutcome::Infeasible => sign * f64::INFINITY,
                })
            };
            let lo = extreme(1.0)?;
            let hi = extreme(-1.0)?;
            Ok((signed(lo, hi), true))
        }
        ConvexSet::Oracle(o) => {
            let Some(start) = o.witness.clone() else {
                return Err(Error::input(format!(
                    "oracle set '{}' needs a witness for sampled clearance",
                    o.name
                )));
            };
            let mut rng = par::trial_rng(opts.seed, u64::MAX);
            let pts = set.sample(&start, opts.clearance_samples.max(1), &mut rng);
            let (lo, hi) = pts
                .iter()
                .chain(std::iter::once(&start))
                .map(|p| n.dot(p))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            // strict inequality for sampled interior points
            let c = signed(lo, hi);
            let c = if c == 0.0 { -f64::MIN_POSITIVE } else { c };
            Ok((c, false))
        }
    }
}

/// Samples points of `H` with norm up to 10 and checks none lies in `B` with
/// room to spare.
fn hull_avoids_hyperplane(set: &ConvexSet, h: &Hyperplane, opts: &SeparationOptions) -> bool {
    let hs = h.subspace();
    let k = hs.dim();
    if k == 0 {
        return true;
    }
    par::map_reduce(
        opts.hull_samples,
        true,
        |i| {
            let mut rng = par::trial_rng(opts.seed ^ 0x5eed, i as u64);
            let c: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            let cn = norm(&c).max(f64::MIN_POSITIVE);
            let r = 10.0 * rng.random::<f64>();
            let c: Vec<f64> = c.iter().map(|x| x * r / cn).collect();
            let p = hs.combine(&c);
            set.conic_hull_margin(p.as_slice()) >= -B_MARGIN * (1.0 + p.norm())
        },
        |a, b| a && b,
    )
}

/// Which lines through the origin of `R^2` miss `A`, on a grid of `grid`
/// angles over `[0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleAngles {
    pub grid: usize,
    pub admissible: Vec<bool>,
}

impl AdmissibleAngles {
    pub fn step(&self) -> f64 {
        std::f64::consts::PI / self.grid as f64
    }

    pub fn angle(&self, k: usize) -> f64 {
        k as f64 * self.step()
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.grid)
            .filter(|&k| self.admissible[k])
            .map(|k| self.angle(k))
            .collect()
    }

    /// Is some admissible grid angle within `tol` of `theta` (mod π)?
    pub fn near(&self, theta: f64, tol: f64) -> bool {
        let pi = std::f64::consts::PI;
        self.angles().iter().any(|&a| {
            let d = (a - theta).rem_euclid(pi);
            d.min(pi - d) <= tol
        })
    }

    /// Smallest and largest admissible angle, if the admissible set does not
    /// wrap around `0`.
    pub fn range(&self) -> Option<(f64, f64)> {
        let a = self.angles();
        Some((*a.first()?, *a.last()?))
    }
}

/// Brute-force oracle: sweep `grid` line directions and test each line
/// against `A` (exact for balls and polyhedra, sampled along the line for
/// oracles).
pub fn brute_force_2d_normals(set: &ConvexSet, grid: usize) -> Result<AdmissibleAngles> {
    if set.dim() != 2 {
        return Err(Error::input("angle sweep needs a set in R^2"));
    }
    if grid == 0 {
        return Err(Error::input("grid must be positive"));
    }
    let admissible = par::map_collect(grid, |k| {
        let th = k as f64 * std::f64::consts::PI / grid as f64;
        let d = [th.cos(), th.sin()];
        !line_meets(set, &d)
    });
    Ok(AdmissibleAngles { grid, admissible })
}

fn line_meets(set: &ConvexSet, d: &[f64; 2]) -> bool {
    match set {
        ConvexSet::OpenBall { center, radius } => {
            let dist = (-d[1] * center[0] + d[0] * center[1]).abs();
            dist < *radius
        }
        ConvexSet::HPolyhedron { rows, .. } => {
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for r in rows {
                let ad = r.normal[0] * d[0] + r.normal[1] * d[1];
                if ad > 0.0 {
                    hi = hi.min(r.offset / ad);
                } else if ad < 0.0 {
                    lo = lo.max(r.offset / ad);
                } else if r.offset <= 0.0 {
                    return false;
                }
            }
            lo < hi
        }
        ConvexSet::Oracle(o) => {
            let reach = 4.0 * o.sample_radius + o.witness.as_ref().map_or(0.0, |w| w.norm());
            const STEPS: usize = 20_000;
            (0..=STEPS).any(|i| {
                let t = -reach + 2.0 * reach * i as f64 / STEPS as f64;
                (o.membership)(&[t * d[0], t * d[1]])
            })
        }
    }
}

/// Extends a dominated `f` by separating `A = {e : p(y - e) < 1}` from
/// `Ker(f)`, where `y` is the least-norm point with `f(y) = 1`, and reading
/// off `g(h + t y) = t` on `H ⊕ span{y}`.
pub fn extend_via_separation(
    f: &PartialFunctional,
    p: &Seminorm,
    opts: &SeparationOptions,
) -> Result<Vector> {
    let n = p.dim();
    if f.ambient_dim() != n {
        return Err(Error::input("functional and seminorm dimensions differ"));
    }
    // validates domination on the domain basis
    ExtensionState::new(f.clone(), p.clone())?;
    if f.is_zero() {
        return Ok(Vector::zeros(n));
    }
    let w = f.representer();
    let y = w.scale(1.0 / w.dot(&w));
    let set = p.shifted_unit_ball(&y)?;
    let kernel = f.domain().kernel_of(&w)?;
    let mut inner = opts.clone();
    inner.anchor = Some(y.clone());
    let result = separate(&set, &kernel, &inner)?;
    let h = result.hyperplane.subspace();
    let coords = (0..n)
        .map(|j| decompose(&Vector::unit(n, j), &h, &y).map(|d| d.t))
        .collect::<Result<Vec<f64>>>()?;
    let g = Vector::new(coords)?;
    let miss = f
        .domain()
        .basis()
        .iter()
        .zip(f.values())
        .map(|(b, v)| (g.dot(b) - v).abs())
        .fold(0.0, f64::max);
    if miss > 1e-8 {
        return Err(Error::solver(format!(
            "reconstructed g misses f by {miss:.3e}"
        )));
    }
    let viol = domination_check(&g, p, opts.seed, opts.domination_samples)?;
    if viol > TOL_DOM {
        return Err(Error::solver(format!(
            "reconstructed g violates domination by {viol:.3e}"
        )));
    }
    Ok(g)
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

    fn opts() -> SeparationOptions {
        SeparationOptions {
            clearance_samples: 500,
            hull_samples: 200,
            domination_samples: 200,
            ..Default::default()
        }
    }

    #[test]
    fn example_one_default_rule() {
        let r = separate(&disk(), &Subspace::zero(2), &opts()).unwrap();
        assert!(r.g.max_abs_diff(&v(&[0.5, 0.5])) < 1e-12, "{:?}", r.g);
        assert!(r.certificate.valid, "{:?}", r.certificate);
        assert!(r.certificate.b_disjoint);
        assert_eq!(r.certificate.remark2_status, Some(true));
    }

    #[test]
    fn example_two_unique() {
        let a = ConvexSet::from_rows(3, &[(&[-1.0, 0.0, 0.0], 0.0)]).unwrap();
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        let o = SeparationOptions {
            anchor: Some(v(&[1.0, -3.0, 0.0])),
            ..opts()
        };
        let r = separate(&a, &s, &o).unwrap();
        assert!(
            r.hyperplane.normal().max_abs_diff(&v(&[1.0, 0.0, 0.0])) < 1e-12,
            "{:?} {:?}",
            r.g,
            r.history
        );
        assert!(r.g.max_abs_diff(&v(&[1.0, 0.0, 0.0])) < 1e-12);
        assert_eq!(r.certificate.s_in_h_residual, 0.0);
        assert_eq!(r.certificate.a_clearance, 0.0);
        assert!(r.certificate.valid && r.certificate.clearance_exact);
    }

    #[test]
    fn empty_set_branch() {
        let a = ConvexSet::from_rows(2, &[(&[1.0, 0.0], 0.0), (&[-1.0, 0.0], -1.0)]).unwrap();
        let s = Subspace::span(2, &[v(&[1.0, 0.0])]).unwrap();
        let r = separate(&a, &s, &opts()).unwrap();
        assert_eq!(r.hyperplane.normal(), &v(&[0.0, 1.0]));
        assert!(r.certificate.valid);
        assert!(r.anchor.is_none());
    }

    #[test]
    fn overlap_rejected() {
        let s = Subspace::span(2, &[v(&[1.0, 0.0])]).unwrap();
        assert_eq!(separate(&disk(), &s, &opts()).unwrap_err().kind(), "input");
        let box_a = ConvexSet::from_rows(2, &[(&[1.0, 0.0], 1.0), (&[-1.0, 0.0], 1.0)]).unwrap();
        assert_eq!(
            separate(&box_a, &Subspace::zero(2), &opts())
                .unwrap_err()
                .kind(),
            "input"
        );
    }

    #[test]
    fn certificates_flag_bad_hyperplanes() {
        let h = kernel_hyperplane(&v(&[0.0, 1.0])).unwrap();
        let c = verify_separation(&disk(), &Subspace::zero(2), &h, &opts()).unwrap();
        assert!(!c.valid && c.a_clearance < 0.0 && !c.b_disjoint);
        // S ⊄ H
        let s = Subspace::span(2, &[v(&[0.0, 1.0])]).unwrap();
        let h = kernel_hyperplane(&v(&[1.0, 1e-3])).unwrap();
        let c = verify_separation(&disk(), &s, &h, &opts()).unwrap();
        assert!(c.s_in_h_residual > 1e-4 && !c.valid);
    }

    #[test]
    fn domination_equivalence_examples() {
        let inst =
            PipelineInstance::new(&disk(), &Subspace::zero(2), Some(&v(&[1.0, 0.0]))).unwrap();
        assert_eq!(
            inst.remark2_equivalence_check(&v(&[1.0, 0.5]), &opts())
                .unwrap(),
            (true, true)
        );
        assert_eq!(
            inst.remark2_equivalence_check(&v(&[1.0, 2.0]), &opts())
                .unwrap(),
            (false, false)
        );
        assert_eq!(
            inst.remark2_equivalence_check(&v(&[2.0, 0.0]), &opts())
                .unwrap_err()
                .kind(),
            "input"
        );
    }

    #[test]
    fn angle_sweep() {
        let angles = brute_force_2d_normals(&disk(), 1800).unwrap();
        let (lo, hi) = angles.range().unwrap();
        let step = angles.step();
        assert!((lo.to_degrees() - 45.0).abs() <= step.to_degrees() + 1e-9);
        assert!((hi.to_degrees() - 135.0).abs() <= step.to_degrees() + 1e-9);
        let upper = ConvexSet::from_rows(2, &[(&[0.0, -1.0], 0.0)]).unwrap();
        let only = brute_force_2d_normals(&upper, 360).unwrap();
        assert_eq!(only.angles(), vec![0.0]);
        assert!(
            brute_force_2d_normals(&ConvexSet::ball(v(&[1.0, 1.0, 1.0]), 0.5).unwrap(), 10)
                .is_err()
        );
    }

    #[test]
    fn round_trip_examples() {
        let l1 = Seminorm::explicit(2, vec![v(&[1.0, 1.0]), v(&[1.0, -1.0])]).unwrap();
        let f = PartialFunctional::from_generators(2, &[v(&[1.0, 0.0])], &[1.0]).unwrap();
        let g = extend_via_separation(&f, &l1, &opts()).unwrap();
        assert!(
            (g[0] - 1.0).abs() < 1e-8 && g[1].abs() <= 1.0 + 1e-8,
            "{g:?}"
        );

        let psi = Seminorm::explicit(3, vec![v(&[1.0, 0.0, 0.0])]).unwrap();
        let f = PartialFunctional::from_generators(
            3,
            &[v(&[0.0, 0.0, 1.0]), v(&[1.0, -3.0, 0.0])],
            &[0.0, 1.0],
        )
        .unwrap();
        let g = extend_via_separation(&f, &psi, &opts()).unwrap();
        assert!(g.max_abs_diff(&v(&[1.0, 0.0, 0.0])) < 1e-8, "{g:?}");

        let g = extend_via_separation(&PartialFunctional::zero(3), &psi, &opts()).unwrap();
        assert_eq!(g, Vector::zeros(3));
    }
}
