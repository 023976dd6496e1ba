//! Seeded random instances for property tests and benchmarks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::convex::{ConvexSet, HalfSpace};
use crate::gauge::Seminorm;
use crate::linalg::{PartialFunctional, Subspace, Vector};

pub fn gaussian<R: Rng>(n: usize, rng: &mut R) -> Vector {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(v) = Vector::new(v) {
            if v.norm() > 1e-6 {
                return v;
            }
        }
    }
}

pub fn unit<R: Rng>(n: usize, rng: &mut R) -> Vector {
    gaussian(n, rng).normalized().expect("nonzero")
}

/// Span of `k` Gaussian vectors (dimension `k` almost surely).
pub fn subspace<R: Rng>(n: usize, k: usize, rng: &mut R) -> Subspace {
    let vs: Vec<Vector> = (0..k).map(|_| gaussian(n, rng)).collect();
    Subspace::span(n, &vs).expect("dimensions agree")
}

/// A unit vector orthogonal to `s`, which must not be the whole space.
fn unit_outside<R: Rng>(s: &Subspace, rng: &mut R) -> Vector {
    loop {
        if let Some(u) = s.residual(&gaussian(s.ambient_dim(), rng)).normalized() {
            if u.norm() > 0.5 {
                return u;
            }
        }
    }
}

/// A bounded set (ball or polytope, equally likely) together with a random
/// subspace of dimension `< n` that it avoids by construction.
pub fn separation_instance<R: Rng>(n: usize, rng: &mut R) -> (ConvexSet, Subspace) {
    let k = rng.random_range(0..n);
    let s = subspace(n, k, rng);
    let u = unit_outside(&s, rng);
    let along = if k > 0 {
        s.project(&gaussian(n, rng))
            .scale(2.0 * rng.random::<f64>())
    } else {
        Vector::zeros(n)
    };
    if rng.random_bool(0.5) {
        let r = 0.3 + 1.2 * rng.random::<f64>();
        let d = r + 0.2 + 2.0 * rng.random::<f64>();
        let c = along.axpy(d, &u);
        (ConvexSet::ball(c, r).expect("valid ball"), s)
    } else {
        // box of half-width 1 around c, cut by a few extra rows through
        // neighborhoods of c; distance from S at least d - sqrt(n)
        let d = (n as f64).sqrt() + 0.5 + 2.0 * rng.random::<f64>();
        let c = along.axpy(d, &u);
        let mut rows = Vec::new();
        for i in 0..n {
            let e = Vector::unit(n, i);
            rows.push(HalfSpace::new(e.clone(), c[i] + 1.0).expect("unit row"));
            rows.push(HalfSpace::new(e.scale(-1.0), 1.0 - c[i]).expect("unit row"));
        }
        for _ in 0..rng.random_range(0..=4) {
            let a = unit(n, rng);
            let b = a.dot(&c) + 0.2 + 0.8 * rng.random::<f64>();
            rows.push(HalfSpace::new(a, b).expect("unit row"));
        }
        (ConvexSet::hpolyhedron(n, rows).expect("valid rows"), s)
    }
}

/// A random seminorm given by its dual rows `c_k`, so `p(e) = max_k |c_k·e|`,
/// as either an explicit or a polyhedral representation. Returns the rows
/// too.
pub fn seminorm<R: Rng>(n: usize, rng: &mut R) -> (Seminorm, Vec<Vector>) {
    let m = rng.random_range(1..=n + 2);
    let rows: Vec<Vector> = (0..m).map(|_| gaussian(n, rng)).collect();
    let p = if rng.random_bool(0.5) {
        Seminorm::explicit(n, rows.clone()).expect("valid rows")
    } else {
        let scaled = rows
            .iter()
            .flat_map(|c| {
                let b = 0.5 + rng.random::<f64>();
                [(c.scale(b), b), (c.scale(-b), b)]
            })
            .collect::<Vec<_>>();
        Seminorm::polyhedral(n, scaled).expect("positive offsets")
    };
    (p, rows)
}

/// A functional on a random proper subspace (dimension `1..n`), dominated by a
/// random seminorm because it is the restriction of a combination
/// `sum λ_k c_k` of the dual rows with `sum |λ_k| < 1`.
pub fn dominated_instance<R: Rng>(n: usize, rng: &mut R) -> (PartialFunctional, Seminorm) {
    assert!(n >= 2, "need room for a proper subspace");
    let (p, rows) = seminorm(n, rng);
    let weights: Vec<f64> = rows.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let total: f64 = weights.iter().map(|w| w.abs()).sum::<f64>().max(1e-12);
    let budget = 0.2 + 0.79 * rng.random::<f64>();
    let mut g = Vector::zeros(n);
    for (c, w) in rows.iter().zip(&weights) {
        g = g.axpy(w * budget / total, c);
    }
    let k = rng.random_range(1..n);
    let domain = subspace(n, k, rng);
    let values = domain.basis().iter().map(|b| g.dot(b)).collect();
    (
        PartialFunctional::new(domain, values).expect("consistent"),
        p,
    )
}
