use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exec::Execution;
use crate::geometry::{
    generate_benchmark_mesh, BenchmarkDomain, CurvedMesh, MeshFamily, MeshSpec, Vec2,
};

fn mesh(domain: BenchmarkDomain, family: MeshFamily, n: usize) -> CurvedMesh {
    generate_benchmark_mesh(&MeshSpec {
        domain,
        family,
        elements: n,
        seed: 11,
    })
    .unwrap()
}

fn straight_meshes() -> Vec<CurvedMesh> {
    let rect = BenchmarkDomain::Rectangle {
        width: 1.5,
        height: 1.0,
    };
    vec![
        mesh(rect, MeshFamily::Quad, 6),
        mesh(rect, MeshFamily::Voro, 12),
    ]
}

/// Random vector polynomial of degree ≤ k and its engineering strain.
fn random_poly(
    k: usize,
    rng: &mut ChaCha8Rng,
) -> (impl Fn(Vec2) -> Vec2 + Sync, impl Fn(Vec2) -> [f64; 3]) {
    let exps = crate::poly::exponents(k);
    let cx: Vec<f64> = exps.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let cy: Vec<f64> = exps.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let e2 = exps.clone();
    let (cx2, cy2) = (cx.clone(), cy.clone());
    let u = move |p: Vec2| {
        let mut v = Vec2::zeros();
        for (i, &(a, b)) in exps.iter().enumerate() {
            let m = p.x.powi(a as i32) * p.y.powi(b as i32);
            v += Vec2::new(cx[i], cy[i]) * m;
        }
        v
    };
    let eps = move |p: Vec2| {
        let mut g = [[0.0; 2]; 2]; // g[i][j] = ∂u_i/∂x_j
        for (i, &(a, b)) in e2.iter().enumerate() {
            let dx = if a > 0 {
                a as f64 * p.x.powi(a as i32 - 1) * p.y.powi(b as i32)
            } else {
                0.0
            };
            let dy = if b > 0 {
                b as f64 * p.x.powi(a as i32) * p.y.powi(b as i32 - 1)
            } else {
                0.0
            };
            g[0][0] += cx2[i] * dx;
            g[0][1] += cx2[i] * dy;
            g[1][0] += cy2[i] * dx;
            g[1][1] += cy2[i] * dy;
        }
        [g[0][0], g[1][1], g[0][1] + g[1][0]]
    };
    (u, eps)
}

#[test]
fn polynomial_consistency_on_straight_meshes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in straight_meshes() {
        for k in 1..=3 {
            for variant in [Variant::Straight, Variant::Co, Variant::Cv] {
                let d = Discretization::new(
                    &m,
                    SpaceConfig::new(k, variant, QuadratureMode::Minimal),
                    Execution::Sequential,
                )
                .unwrap();
                let (u, eps) = random_poly(k, &mut rng);
                let dofs = d.interpolate(&u).unwrap();
                for (e, op) in d.operators.iter().enumerate() {
                    let loc = d.local(e, &dofs);
                    for &x in op.rule.points.iter().take(4) {
                        let got = op.strain_at(x, &loc);
                        let want = eps(x);
                        for c in 0..3 {
                            assert!(
                                (got[c] - want[c]).abs() < 1e-11,
                                "k={k} {variant}: {got:?} vs {want:?}"
                            );
                        }
                    }
                    let r = &op.stab_residual * &loc;
                    assert!(r.norm() < 1e-11 * loc.norm().max(1.0));
                }
            }
        }
    }
}

#[test]
fn linear_field_gives_constant_strain() {
    let m = &straight_meshes()[1];
    let d = Discretization::new(
        m,
        SpaceConfig::new(1, Variant::Cv, QuadratureMode::Minimal),
        Execution::Sequential,
    )
    .unwrap();
    let dofs = d.interpolate(|p| Vec2::new(p.x, 0.0)).unwrap();
    for (e, op) in d.operators.iter().enumerate() {
        let s = op.strain_at(op.rule.points[0], &d.local(e, &dofs));
        assert!((s[0] - 1.0).abs() < 1e-12 && s[1].abs() < 1e-12 && s[2].abs() < 1e-12);
    }
}

fn rigid_strain_norm(d: &Discretization, f: impl Fn(Vec2) -> Vec2 + Sync) -> (f64, f64) {
    let dofs = d.interpolate(&f).unwrap();
    let mut eps: f64 = 0.0;
    let mut stab: f64 = 0.0;
    for (e, op) in d.operators.iter().enumerate() {
        let loc = d.local(e, &dofs);
        eps = eps.max((&op.pi_eps * &loc).amax());
        stab = stab.max((&op.stab_residual * &loc).norm() / loc.norm().max(1e-300));
    }
    (eps, stab)
}

#[test]
fn rigid_kernel_cv_but_not_co() {
    let disk = mesh(BenchmarkDomain::Disk { radius: 1.0 }, MeshFamily::Quad, 27);
    let annulus = mesh(
        BenchmarkDomain::QuarterAnnulus {
            r_inner: 2.0,
            r_outer: 4.0,
        },
        MeshFamily::Voro,
        20,
    );
    let rigid: [fn(Vec2) -> Vec2; 3] = [
        |_| Vec2::new(1.0, 0.0),
        |_| Vec2::new(0.0, 1.0),
        |p| Vec2::new(-p.y, p.x),
    ];
    for m in [&disk, &annulus] {
        for k in 1..=3 {
            let cv = Discretization::new(
                m,
                SpaceConfig::new(k, Variant::Cv, QuadratureMode::Reference),
                Execution::Parallel,
            )
            .unwrap();
            for f in rigid {
                let (e, s) = rigid_strain_norm(&cv, f);
                assert!(e < 1e-11 && s < 1e-11, "cv k={k}: {e} {s}");
            }
            let co = Discretization::new(
                m,
                SpaceConfig::new(k, Variant::Co, QuadratureMode::Reference),
                Execution::Parallel,
            )
            .unwrap();
            let (e, _) = rigid_strain_norm(&co, rigid[2]);
            assert!(e > 1e-9, "co k={k}: {e}");
            // translations stay in the kernel for every variant
            let (e, _) = rigid_strain_norm(&co, rigid[0]);
            assert!(e < 1e-11);
        }
    }
}

#[test]
fn projector_is_idempotent() {
    let m = mesh(BenchmarkDomain::Disk { radius: 1.0 }, MeshFamily::Voro, 15);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in 1..=3 {
        let d = Discretization::new(
            &m,
            SpaceConfig::new(k, Variant::Cv, QuadratureMode::Minimal),
            Execution::Sequential,
        )
        .unwrap();
        for op in d.operators.iter().take(5) {
            for _ in 0..10 {
                let v = DVector::from_fn(op.ndof, |_, _| rng.gen_range(-1.0..1.0));
                let p = op.project(&v);
                let pp = op.project(&p);
                assert!((pp - &p).norm() < 1e-12 * v.norm());
            }
        }
        let dofs = d.interpolate(|_| Vec2::new(1.0, -2.0)).unwrap();
        for (e, op) in d.operators.iter().enumerate() {
            let loc = d.local(e, &dofs);
            assert!((op.project(&loc) - &loc).norm() < 1e-12);
        }
    }
}

#[test]
fn zero_field_interpolates_to_zero() {
    let m = &straight_meshes()[0];
    let d = Discretization::new(
        m,
        SpaceConfig::new(3, Variant::Co, QuadratureMode::Higher),
        Execution::Sequential,
    )
    .unwrap();
    assert!(d
        .interpolate(|_| Vec2::zeros())
        .unwrap()
        .iter()
        .all(|&v| v == 0.0));
}
