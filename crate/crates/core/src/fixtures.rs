//! Worked instances and the named oracle sets that problem files can refer to.

use std::sync::Arc;

use crate::convex::{ConvexSet, OracleSet, DEFAULT_RAY_BOUND};
use crate::error::{Error, Result};
use crate::linalg::{Subspace, Vector};

/// A separation instance with a fixed anchor.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub set: ConvexSet,
    pub subspace: Subspace,
    pub anchor: Vector,
}

fn v(c: &[f64]) -> Vector {
    Vector::from_raw(c.to_vec())
}

/// Open disk centered at `(2, 0)` with radius `√2`, `S = {0}`, anchor `(1, 0)`.
pub fn example1() -> Fixture {
    Fixture {
        name: "example1",
        set: ConvexSet::OpenBall {
            center: v(&[2.0, 0.0]),
            radius: 2f64.sqrt(),
        },
        subspace: Subspace::zero(2),
        anchor: v(&[1.0, 0.0]),
    }
}

/// Half-space `{x > 0}` in `R^3`, `S` the z-axis, anchor `(1, -3, 0)`.
pub fn example2() -> Fixture {
    Fixture {
        name: "example2",
        set: ConvexSet::HPolyhedron {
            dim: 3,
            rows: vec![crate::convex::HalfSpace {
                normal: v(&[-1.0, 0.0, 0.0]),
                offset: 0.0,
            }],
        },
        subspace: Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).expect("z-axis"),
        anchor: v(&[1.0, -3.0, 0.0]),
    }
}

/// The function-space example pushed through `f ↦ (f(0), f(1))`: the set
/// becomes `{(u, v) : v < 0}`, `S` collapses to `{0}`, and the anchor `h`
/// maps to `(-2, -1)`.
pub fn example3_quotient() -> Fixture {
    Fixture {
        name: "example3-quotient",
        set: ConvexSet::HPolyhedron {
            dim: 2,
            rows: vec![crate::convex::HalfSpace {
                normal: v(&[0.0, 1.0]),
                offset: 0.0,
            }],
        },
        subspace: Subspace::zero(2),
        anchor: v(&[-2.0, -1.0]),
    }
}

pub fn all() -> Vec<Fixture> {
    vec![example1(), example2(), example3_quotient()]
}

/// Parameters accepted by [`oracle_by_name`].
#[derive(Debug, Clone, Default)]
pub struct OracleParams {
    pub center: Option<Vector>,
    pub radius: Option<f64>,
    pub power: Option<f64>,
}

pub const ORACLE_NAMES: &[&str] = &["ball", "example1-disk", "lp-ball"];

/// Built-in oracle sets:
///
/// - `ball`: open Euclidean ball (`center`, `radius`);
/// - `example1-disk`: the disk of [`example1`] as an oracle;
/// - `lp-ball`: open `ℓ_power` ball (`center`, `radius`, `power >= 1`).
pub fn oracle_by_name(name: &str, params: &OracleParams) -> Result<ConvexSet> {
    match name {
        "ball" => {
            let (c, r) = center_radius(name, params)?;
            lp_ball(name, c, r, 2.0)
        }
        "example1-disk" => lp_ball(name, v(&[2.0, 0.0]), 2f64.sqrt(), 2.0),
        "lp-ball" => {
            let (c, r) = center_radius(name, params)?;
            let q = params
                .power
                .ok_or_else(|| Error::input("lp-ball needs 'power'"))?;
            if !(q >= 1.0 && q.is_finite()) {
                return Err(Error::input("lp-ball power must be finite and >= 1"));
            }
            lp_ball(name, c, r, q)
        }
        _ => Err(Error::input(format!(
            "unknown oracle '{name}'; known: {}",
            ORACLE_NAMES.join(", ")
        ))),
    }
}

fn center_radius(name: &str, params: &OracleParams) -> Result<(Vector, f64)> {
    let c = params
        .center
        .clone()
        .ok_or_else(|| Error::input(format!("{name} needs 'center'")))?;
    let r = params
        .radius
        .ok_or_else(|| Error::input(format!("{name} needs 'radius'")))?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::input(format!(
            "{name} radius must be positive and finite"
        )));
    }
    Ok((c, r))
}

fn lp_ball(name: &str, center: Vector, radius: f64, q: f64) -> Result<ConvexSet> {
    let c1 = center.clone();
    let c2 = center.clone();
    let dist = move |e: &[f64], c: &Vector| -> f64 {
        if q == 2.0 {
            e.iter()
                .zip(c.as_slice())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        } else {
            e.iter()
                .zip(c.as_slice())
                .map(|(a, b)| (a - b).abs().powf(q))
                .sum::<f64>()
                .powf(1.0 / q)
        }
    };
    ConvexSet::oracle(OracleSet {
        name: name.to_string(),
        dim: center.dim(),
        membership: Arc::new(move |e: &[f64]| dist(e, &c1) < radius),
        violation: Some(Arc::new(move |e: &[f64]| dist(e, &c2) - radius)),
        ray_bound: DEFAULT_RAY_BOUND,
        witness: Some(center),
        sample_radius: radius,
    })
}
