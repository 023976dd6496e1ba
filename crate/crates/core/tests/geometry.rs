use hb_core::convex::{polyhedral_cone_rows, ConicHull};
use hb_core::instances;
use hb_core::par::trial_rng;
use hb_core::{build_symmetrized_body, decompose, ConvexSet, Seminorm, Subspace, Vector};
use proptest::prelude::*;
use rand::Rng;

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

fn disk() -> ConvexSet {
    ConvexSet::ball(v(&[2.0, 0.0]), 2f64.sqrt()).unwrap()
}

#[test]
fn decompose_recovers_coordinates() {
    for n in 2..=6 {
        let mut worst = 0.0f64;
        for i in 0..1000 {
            let mut rng = trial_rng(n as u64, i);
            let k = rng.random_range(0..n);
            let s = instances::subspace(n, k, &mut rng);
            let x = instances::gaussian(n, &mut rng);
            if s.distance(&x) < 1e-3 {
                continue;
            }
            let coords: Vec<f64> = (0..k).map(|_| rng.random_range(-5.0..5.0)).collect();
            let t = rng.random_range(-5.0..5.0);
            let y = s.combine(&coords).axpy(t, &x);
            let d = decompose(&y, &s, &x).unwrap();
            worst = worst.max((d.t - t).abs());
            for (a, b) in d.s_coords.iter().zip(&coords) {
                worst = worst.max((a - b).abs());
            }
        }
        assert!(worst < 1e-9, "n = {n}: {worst:e}");
    }
}

fn projector_gap(a: &Subspace, b: &Subspace) -> f64 {
    let (pa, pb) = (a.projector(), b.projector());
    pa.iter()
        .flatten()
        .zip(pb.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn complement_is_deterministic(seed in any::<u64>(), n in 2usize..7, k in 0usize..6) {
        let k = k.min(n);
        let s = instances::subspace(n, k, &mut trial_rng(seed, 0));
        let a = s.complement_basis();
        let b = s.complement_basis();
        prop_assert_eq!(a.len(), n - s.dim());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(x.as_slice().iter().zip(y.as_slice()).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }

    #[test]
    fn span_is_idempotent(seed in any::<u64>(), n in 2usize..7, k in 0usize..8) {
        let mut rng = trial_rng(seed, 1);
        let vs: Vec<Vector> = (0..k).map(|_| instances::gaussian(n, &mut rng)).collect();
        let s = Subspace::span(n, &vs).unwrap();
        let again = Subspace::span(n, s.basis()).unwrap();
        prop_assert_eq!(s.dim(), again.dim());
        prop_assert!(projector_gap(&s, &again) < 1e-10);
    }

    #[test]
    fn conic_hull_is_positively_homogeneous(x in -5.0f64..5.0, y in -5.0f64..5.0, alpha in 1e-3f64..10.0) {
        let a = disk();
        let e = v(&[x, y]);
        let ae = e.scale(alpha);
        // skip the boundary rays |y| = x where rounding decides
        prop_assume!((x.abs() - y.abs()).abs() > 1e-6);
        prop_assert_eq!(a.conic_hull_contains(&e).unwrap(), a.conic_hull_contains(&ae).unwrap());
    }
}

#[test]
fn conic_hull_avoids_subspace() {
    for i in 0..40 {
        let mut rng = trial_rng(3, i);
        let n = 2 + (i as usize % 3);
        let (a, s) = instances::separation_instance(n, &mut rng);
        if s.dim() == 0 {
            continue;
        }
        let hits = (0..1000)
            .filter(|_| {
                let c: Vec<f64> = (0..s.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let p = s.combine(&c);
                let p = p.scale(10.0 * rng.random::<f64>() / p.norm().max(1e-12));
                a.conic_hull_contains(&p).unwrap()
            })
            .count();
        assert_eq!(hits, 0, "instance {i}");
    }
}

#[test]
fn symmetrized_body_is_balanced_and_convex() {
    for i in 0..20 {
        let mut rng = trial_rng(4, i);
        let n = 2 + (i as usize % 3);
        let (a, _) = instances::separation_instance(n, &mut rng);
        let x = a.pick_interior_point().unwrap();
        let d = build_symmetrized_body(&a, &x).unwrap();
        let mut members = Vec::new();
        while members.len() < 50 {
            let e = instances::gaussian(n, &mut rng).scale(rng.random::<f64>());
            if d.contains(&e).unwrap() {
                members.push(e);
            }
        }
        for (j, e) in members.iter().enumerate() {
            assert!(d.contains(&e.scale(-1.0)).unwrap());
            let other = &members[(j * 7 + 3) % members.len()];
            assert!(d.contains(&e.add(other).scale(0.5)).unwrap());
        }
    }
}

#[test]
fn closed_form_and_search_hulls_agree() {
    for i in 0..20 {
        let mut rng = trial_rng(5, i);
        let n = 2 + (i as usize % 3);
        let (a, _) = instances::separation_instance(n, &mut rng);
        let ConvexSet::HPolyhedron { rows, .. } = &a else {
            continue;
        };
        let cone = ConicHull::Polyhedral {
            dim: n,
            rows: polyhedral_cone_rows(rows),
        };
        for _ in 0..1000 {
            let e = instances::gaussian(n, &mut rng).scale(5.0);
            let margin = a.conic_hull_margin(e.as_slice());
            if margin.abs() < 1e-9 {
                continue;
            }
            let exact = a.conic_hull_contains(&e).unwrap();
            assert_eq!(exact, cone.contains_raw(e.as_slice()));
            assert_eq!(exact, a.conic_hull_search(e.as_slice()), "{e:?}");
        }
    }
}

#[test]
fn oracle_gauge_matches_l1_on_example_disk() {
    let a = disk();
    let body = build_symmetrized_body(&a, &v(&[1.0, 0.0])).unwrap();
    let p = Seminorm::oracle(body);
    let mut rng = trial_rng(6, 0);
    for _ in 0..1000 {
        let e = instances::gaussian(2, &mut rng).scale(10.0 * rng.random::<f64>());
        let want = e[0].abs() + e[1].abs();
        assert!((p.gauge(&e).unwrap() - want).abs() < 1e-6);
    }
}

#[test]
fn gauge_characterizes_the_unit_ball() {
    for i in 0..20 {
        let mut rng = trial_rng(7, i);
        let n = 2 + (i as usize % 3);
        let (a, _) = instances::separation_instance(n, &mut rng);
        let x = a.pick_interior_point().unwrap();
        let body = build_symmetrized_body(&a, &x).unwrap();
        for p in [Seminorm::of_body(&body), Seminorm::oracle(body.clone())] {
            for _ in 0..100 {
                let e = instances::gaussian(n, &mut rng).scale(2.0 * rng.random::<f64>());
                let e2 = instances::gaussian(n, &mut rng);
                let pe = p.gauge(&e).unwrap();
                let inside = body.contains(&e).unwrap();
                if pe < 1.0 - 1e-7 {
                    assert!(inside);
                }
                if inside {
                    assert!(pe <= 1.0 + 1e-9);
                }
                let gap = (pe - p.gauge(&e2).unwrap()).abs();
                assert!(gap <= p.gauge(&e.sub(&e2)).unwrap() + 1e-7);
            }
        }
    }
}

#[test]
fn anchor_has_unit_gauge() {
    for i in 0..100 {
        let mut rng = trial_rng(8, i);
        let n = 2 + (i as usize % 3);
        let (a, _) = instances::separation_instance(n, &mut rng);
        let x = a.pick_interior_point().unwrap();
        let p = Seminorm::of_body(&build_symmetrized_body(&a, &x).unwrap());
        assert!((p.gauge(&x).unwrap() - 1.0).abs() < 1e-6, "instance {i}");
    }
}
