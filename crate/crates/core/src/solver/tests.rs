use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{
    generate_benchmark_mesh, BenchmarkDomain, CurvedMesh, MeshFamily, MeshSpec, Vec2,
};
use crate::materials::{Material, ViscoelasticParams};
use crate::spaces::{QuadratureMode, SpaceConfig, Variant};

fn mesh(domain: BenchmarkDomain, family: MeshFamily, n: usize) -> CurvedMesh {
    generate_benchmark_mesh(&MeshSpec {
        domain,
        family,
        elements: n,
        seed: 5,
    })
    .unwrap()
}

fn rect() -> BenchmarkDomain {
    BenchmarkDomain::Rectangle {
        width: 2.0,
        height: 1.0,
    }
}

fn elastic() -> Material {
    Material::LinearElastic { e: 1000.0, nu: 0.3 }
}

fn all_sides(f: impl Fn(Vec2) -> Vec2 + Send + Sync + Clone + 'static) -> Vec<DirichletBc> {
    ["bottom", "right", "top", "left"]
        .iter()
        .map(|g| DirichletBc::new(g, [true, true], f.clone()))
        .collect()
}

#[test]
fn linear_patch_test_is_exact_in_one_iteration() {
    let m = mesh(rect(), MeshFamily::Voro, 14);
    let field = |p: Vec2| Vec2::new(0.01 * p.x + 0.02 * p.y, -0.015 * p.x + 0.005 * p.y);
    for k in 1..=3 {
        let bcs = BoundaryConditions {
            dirichlet: all_sides(field),
            ..Default::default()
        };
        let cfg = AnalysisConfig::new(
            SpaceConfig::new(k, Variant::Cv, QuadratureMode::Minimal),
            elastic(),
            bcs,
        );
        let (a, r) = run_analysis(&m, cfg).unwrap();
        assert_eq!(r.steps[0].iterations, 1, "k={k}");
        let exact = a.disc.interpolate(field).unwrap();
        let err = r
            .displacement
            .iter()
            .zip(&exact)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "k={k} err={err}");
    }
}

#[test]
fn global_tangent_matches_finite_differences() {
    let m = mesh(BenchmarkDomain::Disk { radius: 1.0 }, MeshFamily::Voro, 6);
    let materials = [
        Material::Hencky,
        Material::J2(crate::materials::J2Params {
            e: 1000.0,
            nu: 0.3,
            sigma_y: 1.0,
        }),
        Material::Viscoelastic(ViscoelasticParams {
            e: 1000.0,
            nu: 0.3,
            mu0: 0.3,
            terms: vec![(0.7, 1.0)],
        }),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for mat in materials {
        let cfg = AnalysisConfig::new(
            SpaceConfig::new(2, Variant::Cv, QuadratureMode::Minimal),
            mat.clone(),
            BoundaryConditions::default(),
        );
        let a = Analysis::new(&m, cfg).unwrap();
        let n = a.num_dofs();
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e-3..1e-3)).collect();
        let st = a.internal(&u, 0.5).unwrap();
        let k = st.tangent.to_dense();
        let h = 1e-7;
        let mut err: f64 = 0.0;
        for j in (0..n).step_by(7) {
            let mut up = u.clone();
            let mut um = u.clone();
            up[j] += h;
            um[j] -= h;
            let fp = a.internal(&up, 0.5).unwrap().force;
            let fm = a.internal(&um, 0.5).unwrap().force;
            for i in 0..n {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                err = err.max((fd - k[(i, j)]).abs());
            }
        }
        let scale = k.amax();
        assert!(err < 1e-5 * scale, "{mat:?}: {err} vs {scale}");
    }
}

fn kernel_dimension(k: &DMatrix<f64>) -> usize {
    let eig = SymmetricEigen::new(k.clone());
    let max = eig.eigenvalues.amax();
    eig.eigenvalues
        .iter()
        .filter(|v| v.abs() < 1e-9 * max)
        .count()
}

#[test]
fn rigid_kernel_has_dimension_three_only_for_cv() {
    let m = mesh(BenchmarkDomain::Disk { radius: 1.0 }, MeshFamily::Quad, 12);
    let dim = |variant| {
        let space = SpaceConfig::new(2, variant, QuadratureMode::Reference);
        let a = Analysis::new(
            &m,
            AnalysisConfig::new(space, elastic(), BoundaryConditions::default()),
        )
        .unwrap();
        let n = a.num_dofs();
        kernel_dimension(&a.internal(&vec![0.0; n], 0.0).unwrap().tangent.to_dense())
    };
    assert_eq!(dim(Variant::Cv), 3);
    assert_eq!(dim(Variant::Straight), 3);
    assert_eq!(dim(Variant::Co), 2);
}

#[test]
fn pressure_resultant_on_inner_arc() {
    let m = mesh(
        BenchmarkDomain::QuarterAnnulus {
            r_inner: 2.0,
            r_outer: 4.0,
        },
        MeshFamily::Voro,
        20,
    );
    for k in 1..=3 {
        let bcs = BoundaryConditions {
            tractions: vec![TractionBc::pressure("inner", 10.0)],
            ..Default::default()
        };
        let cfg = AnalysisConfig::new(
            SpaceConfig::new(k, Variant::Cv, QuadratureMode::Minimal),
            elastic(),
            bcs.clone(),
        );
        let a = Analysis::new(&m, cfg).unwrap();
        let fx: f64 = a.external.iter().step_by(2).sum();
        let fy: f64 = a.external.iter().skip(1).step_by(2).sum();
        assert!(
            (fx - 20.0).abs() < 1e-10 && (fy - 20.0).abs() < 1e-10,
            "k={k}: {fx} {fy}"
        );
    }
}

#[test]
fn reactions_balance_applied_traction() {
    let m = mesh(rect(), MeshFamily::Quad, 8);
    let bcs = BoundaryConditions {
        dirichlet: vec![
            DirichletBc::fixed("left", [true, false]),
            DirichletBc::fixed("bottom", [false, true]),
        ],
        tractions: vec![TractionBc::new("right", |_, _| Vec2::new(3.0, 0.0))],
        body_force: None,
    };
    let cfg = AnalysisConfig::new(
        SpaceConfig::new(2, Variant::Cv, QuadratureMode::Minimal),
        elastic(),
        bcs,
    );
    let (a, r) = run_analysis(&m, cfg).unwrap();
    let left: f64 = a
        .constraints
        .values
        .keys()
        .filter(|d| *d % 2 == 0)
        .map(|d| r.reactions[*d])
        .sum();
    assert!((left + 3.0).abs() < 1e-9, "{left}");
    // uniaxial stress: σxx = 3 everywhere
    for s in r.stresses.iter().flatten() {
        assert!((s[0] - 3.0).abs() < 1e-8 && s[1].abs() < 1e-8 && s[2].abs() < 1e-8);
    }
}

#[test]
fn conflicting_dirichlet_values_are_rejected() {
    let m = mesh(rect(), MeshFamily::Quad, 4);
    let bcs = BoundaryConditions {
        dirichlet: vec![
            DirichletBc::new("left", [true, true], |_| Vec2::new(1.0, 0.0)),
            DirichletBc::fixed("bottom", [true, true]),
        ],
        ..Default::default()
    };
    let cfg = AnalysisConfig::new(
        SpaceConfig::new(1, Variant::Cv, QuadratureMode::Minimal),
        elastic(),
        bcs,
    );
    assert!(matches!(
        Analysis::new(&m, cfg),
        Err(crate::Error::BoundaryCondition(_))
    ));
}

#[test]
fn sequential_and_parallel_agree() {
    let m = mesh(BenchmarkDomain::Disk { radius: 1.0 }, MeshFamily::Voro, 10);
    let run = |exec| {
        let bcs = BoundaryConditions {
            dirichlet: vec![DirichletBc::new("outer", [true, true], |p| 0.01 * p)],
            ..Default::default()
        };
        let mut cfg = AnalysisConfig::new(
            SpaceConfig::new(2, Variant::Cv, QuadratureMode::Minimal),
            Material::Hencky,
            bcs,
        );
        cfg.execution = exec;
        run_analysis(&m, cfg).unwrap().1.displacement
    };
    let a = run(crate::Execution::Sequential);
    let b = run(crate::Execution::Parallel);
    let d = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(d < 1e-12);
}

#[test]
fn newton_converges_quadratically_on_hencky_problem() {
    use crate::analysis::Manufactured;
    let problem = Manufactured::Trigonometric;
    let m = mesh(problem.domain(), MeshFamily::Quad, 192);
    let space = SpaceConfig::new(2, Variant::Cv, QuadratureMode::Minimal);
    let config = AnalysisConfig::new(space, problem.material(), problem.boundary_conditions());
    let (_, result) = run_analysis(&m, config).unwrap();
    let r = &result.steps[0].residuals;
    assert!(result.steps[0].iterations <= 8, "{r:?}");
    // observed order log(r_{i+1}/r_i) / log(r_i/r_{i-1}) over the decaying tail
    let orders: Vec<f64> = r
        .windows(3)
        .filter(|w| w[2] > 1e-12 * r[0])
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .collect();
    assert!(orders.last().is_some_and(|&p| p >= 1.8), "{r:?} {orders:?}");
}
