//! Benchmark drivers: manufactured-solution convergence, rigid motion,
//! viscoelastic thick cylinder and perforated plastic plate.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use log::info;

use super::errors::{
    boundary_displacement, convergence_slope, error_displacement_skeleton, error_strain_l2,
    locate_element,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{
    generate_benchmark_mesh, BenchmarkDomain, CurvedMesh, MeshFamily, MeshSpec, Vec2,
};
use crate::materials::{
    hencky_von_mises, J2Params, Material, MaterialState, Strain, ViscoelasticParams,
};
use crate::solver::{
    run_analysis, AnalysisConfig, BoundaryConditions, DirichletBc, LoadStep, NewtonSettings,
    TractionBc,
};
use crate::spaces::{QuadratureMode, SpaceConfig, Variant};

/// Errors of one solve in a refinement family.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub mesh: String,
    pub elements: usize,
    pub h: f64,
    pub dofs: usize,
    pub e_u: f64,
    pub e_eps: f64,
    /// True when the errors are absolute (exact field vanishes).
    pub absolute: bool,
    pub newton_iterations: usize,
    pub runtime: f64,
}

/// Errors over a refinement family with least-squares slopes (last 3 points).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub reports: Vec<ErrorReport>,
    pub slope_u: f64,
    pub slope_eps: f64,
}

impl ConvergenceTable {
    pub fn new(mut reports: Vec<ErrorReport>) -> Self {
        reports.sort_by(|a, b| b.h.partial_cmp(&a.h).unwrap());
        let h: Vec<f64> = reports.iter().map(|r| r.h).collect();
        let eu: Vec<f64> = reports.iter().map(|r| r.e_u).collect();
        let ee: Vec<f64> = reports.iter().map(|r| r.e_eps).collect();
        ConvergenceTable {
            slope_u: convergence_slope(&h, &eu, 3),
            slope_eps: convergence_slope(&h, &ee, 3),
            reports,
        }
    }
}

/// Problems with a known exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Manufactured {
    /// `u = (sin πr², 2 cos πr²)` on the unit disk, Hencky–von Mises material.
    Trigonometric,
    /// Linear field on a rectangle, linear elastic material.
    LinearPatch,
    /// Rigid motion `(−y, x)` on the unit disk, linear elastic material.
    RigidRotation,
}

impl std::str::FromStr for Manufactured {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "trigonometric" => Ok(Manufactured::Trigonometric),
            "2" | "rigid" => Ok(Manufactured::RigidRotation),
            "patch" => Ok(Manufactured::LinearPatch),
            _ => Err(Error::Config(format!("unknown manufactured problem '{s}'"))),
        }
    }
}

const PATCH_FIELD: [f64; 4] = [0.01, 0.02, -0.015, 0.005];

impl Manufactured {
    pub fn domain(self) -> BenchmarkDomain {
        match self {
            Manufactured::LinearPatch => BenchmarkDomain::Rectangle {
                width: 2.0,
                height: 1.0,
            },
            _ => BenchmarkDomain::Disk { radius: 1.0 },
        }
    }

    pub fn material(self) -> Material {
        match self {
            Manufactured::Trigonometric => Material::Hencky,
            _ => Material::LinearElastic { e: 1000.0, nu: 0.3 },
        }
    }

    pub fn displacement(self, p: Vec2) -> Vec2 {
        match self {
            Manufactured::Trigonometric => {
                let a = PI * p.norm_squared();
                Vec2::new(a.sin(), 2.0 * a.cos())
            }
            Manufactured::LinearPatch => {
                let [a, b, c, d] = PATCH_FIELD;
                Vec2::new(a * p.x + b * p.y, c * p.x + d * p.y)
            }
            Manufactured::RigidRotation => Vec2::new(-p.y, p.x),
        }
    }

    /// Engineering-Voigt strain `(εxx, εyy, γxy)`.
    pub fn strain(self, p: Vec2) -> [f64; 3] {
        match self {
            Manufactured::Trigonometric => {
                let a = PI * p.norm_squared();
                let (s, c) = a.sin_cos();
                [
                    2.0 * PI * p.x * c,
                    -4.0 * PI * p.y * s,
                    2.0 * PI * p.y * c - 4.0 * PI * p.x * s,
                ]
            }
            Manufactured::LinearPatch => {
                let [a, b, c, d] = PATCH_FIELD;
                [a, d, b + c]
            }
            Manufactured::RigidRotation => [0.0; 3],
        }
    }

    /// Body force `−div σ(ε(u))`; the stress divergence uses fourth-order
    /// central differences with step `1e-4`.
    pub fn body_force(self, p: Vec2) -> Vec2 {
        if self != Manufactured::Trigonometric {
            return Vec2::zeros();
        }
        let stress = |q: Vec2| {
            let e = self.strain(q);
            hencky_von_mises(&Strain::new(e[0], e[1], e[2])).0
        };
        let h = 1e-4;
        let d = |dir: Vec2| {
            (stress(p - 2.0 * h * dir) - 8.0 * stress(p - h * dir) + 8.0 * stress(p + h * dir)
                - stress(p + 2.0 * h * dir))
                / (12.0 * h)
        };
        let dx = d(Vec2::new(1.0, 0.0));
        let dy = d(Vec2::new(0.0, 1.0));
        -Vec2::new(dx[0] + dy[2], dx[2] + dy[1])
    }

    fn boundary_groups(self) -> &'static [&'static str] {
        match self {
            Manufactured::LinearPatch => &["bottom", "right", "top", "left"],
            _ => &["outer"],
        }
    }

    pub fn boundary_conditions(self) -> BoundaryConditions {
        let dirichlet = self
            .boundary_groups()
            .iter()
            .map(|g| DirichletBc::new(g, [true, true], move |p| self.displacement(p)))
            .collect();
        let body_force = (self == Manufactured::Trigonometric).then(|| {
            std::sync::Arc::new(move |p| self.body_force(p)) as crate::solver::VectorField
        });
        BoundaryConditions {
            dirichlet,
            tractions: Vec::new(),
            body_force,
        }
    }
}

/// Options shared by the mesh-family drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOptions {
    pub variant: Variant,
    pub k: usize,
    pub quadrature: QuadratureMode,
    pub family: MeshFamily,
    /// Target element counts of the refinement family.
    pub sizes: Vec<usize>,
    pub seed: u64,
    /// Load increments for nonlinear problems.
    pub steps: usize,
    pub execution: Execution,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            variant: Variant::Cv,
            k: 2,
            quadrature: QuadratureMode::Minimal,
            family: MeshFamily::Quad,
            sizes: vec![192, 768, 1200, 1728],
            seed: 1,
            steps: 1,
            execution: Execution::default(),
        }
    }
}

/// Solves one manufactured problem on `mesh` and measures its errors.
pub fn solve_manufactured(
    problem: Manufactured,
    mesh: &CurvedMesh,
    name: &str,
    opts: &StudyOptions,
) -> Result<ErrorReport> {
    let start = Instant::now();
    let space = SpaceConfig::new(opts.k, opts.variant, opts.quadrature);
    let mut config = AnalysisConfig::new(space, problem.material(), problem.boundary_conditions());
    config.steps = crate::solver::proportional_steps(opts.steps.max(1));
    config.execution = opts.execution;
    let (analysis, result) = run_analysis(mesh, config)?;
    let disc = &analysis.disc;
    let eu = error_displacement_skeleton(disc, &result.displacement, |p| problem.displacement(p))?;
    let ee = error_strain_l2(
        disc,
        &result.displacement,
        |p| problem.strain(p),
        opts.execution,
    )?;
    let report = ErrorReport {
        mesh: name.to_string(),
        elements: mesh.num_elements(),
        h: mesh.mean_h(),
        dofs: disc.num_dofs(),
        e_u: eu.value,
        e_eps: ee.value,
        absolute: eu.absolute || ee.absolute,
        newton_iterations: result.steps.iter().map(|s| s.iterations).sum(),
        runtime: start.elapsed().as_secs_f64(),
    };
    info!(
        "{name} {} k={}: N={} h={:.4} e_u={:.3e} e_eps={:.3e}",
        opts.variant, opts.k, report.elements, report.h, report.e_u, report.e_eps
    );
    Ok(report)
}

/// Refinement study of a manufactured problem over the configured family.
pub fn run_convergence_study(
    problem: Manufactured,
    opts: &StudyOptions,
) -> Result<ConvergenceTable> {
    if opts.sizes.len() < 3 {
        return Err(Error::Config(
            "a convergence study needs at least 3 meshes".into(),
        ));
    }
    let reports = opts.execution.try_map(opts.sizes.len(), |i| {
        let spec = MeshSpec {
            domain: problem.domain(),
            family: opts.family,
            elements: opts.sizes[i],
            seed: opts.seed,
        };
        let mesh = generate_benchmark_mesh(&spec)?;
        solve_manufactured(
            problem,
            &mesh,
            &format!("{}{}", opts.family, mesh.num_elements()),
            opts,
        )
    })?;
    Ok(ConvergenceTable::new(reports))
}

/// Rigid-motion benchmark over every size of the family (no slopes).
pub fn run_rigid_benchmark(opts: &StudyOptions) -> Result<Vec<ErrorReport>> {
    let problem = Manufactured::RigidRotation;
    opts.execution.try_map(opts.sizes.len(), |i| {
        let spec = MeshSpec {
            domain: problem.domain(),
            family: opts.family,
            elements: opts.sizes[i],
            seed: opts.seed,
        };
        let mesh = generate_benchmark_mesh(&spec)?;
        solve_manufactured(
            problem,
            &mesh,
            &format!("{}{}", opts.family, mesh.num_elements()),
            opts,
        )
    })
}

/// Thick-walled viscoelastic cylinder under constant internal pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderOptions {
    pub variant: Variant,
    pub k: usize,
    pub quadrature: QuadratureMode,
    pub family: MeshFamily,
    pub elements: usize,
    pub seed: u64,
    pub r_inner: f64,
    pub r_outer: f64,
    pub pressure: f64,
    pub e: f64,
    pub nu: f64,
    /// `(μ₀, μ₁)` with relaxation time `relaxation_time`.
    pub weights: (f64, f64),
    pub relaxation_time: f64,
    /// Time increments after the instantaneous step at `t = 0`.
    pub steps: usize,
    pub dt: f64,
    /// Sample points along the bisector for the radial stress profile.
    pub profile_points: usize,
    pub execution: Execution,
}

impl Default for CylinderOptions {
    fn default() -> Self {
        CylinderOptions {
            variant: Variant::Cv,
            k: 2,
            quadrature: QuadratureMode::Minimal,
            family: MeshFamily::Quad,
            elements: 272,
            seed: 1,
            r_inner: 2.0,
            r_outer: 4.0,
            pressure: 10.0,
            e: 1000.0,
            nu: 0.3,
            weights: (0.01, 0.99),
            relaxation_time: 1.0,
            steps: 20,
            dt: 1.0,
            profile_points: 21,
            execution: Execution::default(),
        }
    }
}

impl CylinderOptions {
    pub fn material(&self) -> ViscoelasticParams {
        ViscoelasticParams {
            e: self.e,
            nu: self.nu,
            mu0: self.weights.0,
            terms: vec![(self.weights.1, self.relaxation_time)],
        }
    }

    /// Inner control point on the symmetry bisector.
    pub fn point_a(&self) -> Vec2 {
        Vec2::new(self.r_inner, self.r_inner) * FRAC_1_SQRT_2
    }

    /// Outer control point on the symmetry bisector.
    pub fn point_b(&self) -> Vec2 {
        Vec2::new(self.r_outer, self.r_outer) * FRAC_1_SQRT_2
    }

    /// Plane-strain elastic radial displacement for shear modulus `g`.
    pub fn lame_radial_displacement(&self, r: f64, g: f64) -> f64 {
        let (ri, ro) = (self.r_inner, self.r_outer);
        self.pressure * ri * ri / (2.0 * g * (ro * ro - ri * ri))
            * ((1.0 - 2.0 * self.nu) * r + ro * ro / r)
    }
}

/// Radial displacement at the control points for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderStep {
    pub step: usize,
    pub time: f64,
    pub ur_a: f64,
    pub ur_b: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CylinderResult {
    pub history: Vec<CylinderStep>,
    /// `(r, σ_rr)` along the bisector at the final time.
    pub sigma_rho: Vec<(f64, f64)>,
    /// `(r, σ_rr)` along the bisector at `t = 0`.
    pub sigma_rho_initial: Vec<(f64, f64)>,
    /// Closed-form instantaneous radial displacement at A and B.
    pub lame: (f64, f64),
    pub elements: usize,
}

pub fn run_cylinder(opts: &CylinderOptions) -> Result<CylinderResult> {
    let domain = BenchmarkDomain::QuarterAnnulus {
        r_inner: opts.r_inner,
        r_outer: opts.r_outer,
    };
    let mesh = generate_benchmark_mesh(&MeshSpec {
        domain,
        family: opts.family,
        elements: opts.elements,
        seed: opts.seed,
    })?;
    let params = opts.material();
    let material = Material::Viscoelastic(params.clone());
    let bcs = BoundaryConditions {
        dirichlet: vec![
            DirichletBc::fixed("bottom", [false, true]),
            DirichletBc::fixed("left", [true, false]),
        ],
        tractions: vec![TractionBc::pressure("inner", opts.pressure)],
        body_force: None,
    };
    let space = SpaceConfig::new(opts.k, opts.variant, opts.quadrature);
    let mut config = AnalysisConfig::new(space, material.clone(), bcs);
    config.steps = (0..=opts.steps)
        .map(|i| LoadStep {
            time: i as f64 * opts.dt,
            factor: 1.0,
        })
        .collect();
    config.execution = opts.execution;
    let (analysis, result) = run_analysis(&mesh, config)?;
    let disc = &analysis.disc;
    let (a, b) = (opts.point_a(), opts.point_b());
    let radial = |u: Vec2, p: Vec2| u.dot(&p) / p.norm();
    let mut history = Vec::with_capacity(result.history.len());
    for (i, (u, rec)) in result.history.iter().zip(&result.steps).enumerate() {
        history.push(CylinderStep {
            step: i,
            time: rec.time,
            ur_a: radial(boundary_displacement(disc, u, "inner", a)?, a),
            ur_b: radial(boundary_displacement(disc, u, "outer", b)?, b),
            iterations: rec.iterations,
        });
    }
    // radial stress replayed along the bisector through the displacement history
    let times: Vec<f64> = result.steps.iter().map(|s| s.time).collect();
    let n = opts.profile_points.max(2);
    let theta = PI / 4.0 + 1e-7;
    let dir = Vec2::new(theta.cos(), theta.sin());
    let mut sigma_rho = Vec::with_capacity(n);
    let mut sigma_rho_initial = Vec::with_capacity(n);
    for j in 0..n {
        let r = opts.r_inner + (opts.r_outer - opts.r_inner) * (j as f64 + 0.5) / n as f64;
        let x = r * dir;
        let e = locate_element(disc, x)
            .ok_or_else(|| Error::Analysis(format!("profile point {x:?} lies outside the mesh")))?;
        let b = disc.operators[e].b_at(x);
        let mut state: MaterialState = material.initial_state();
        let mut prev = 0.0;
        for (i, u) in result.history.iter().enumerate() {
            let eps = &b * disc.local(e, u);
            let resp = material.evaluate(
                &Strain::new(eps[0], eps[1], eps[2]),
                &state,
                times[i] - prev,
            )?;
            state = resp.state;
            prev = times[i];
            let s = resp.stress;
            let srr = s[0] * dir.x * dir.x + s[1] * dir.y * dir.y + 2.0 * s[2] * dir.x * dir.y;
            if i == 0 {
                sigma_rho_initial.push((r, srr));
            }
            if i + 1 == result.history.len() {
                sigma_rho.push((r, srr));
            }
        }
    }
    let g0 = params.shear();
    Ok(CylinderResult {
        history,
        sigma_rho,
        sigma_rho_initial,
        lame: (
            opts.lame_radial_displacement(opts.r_inner, g0),
            opts.lame_radial_displacement(opts.r_outer, g0),
        ),
        elements: mesh.num_elements(),
    })
}

/// Perforated plate under imposed top displacement (perfect plasticity).
#[derive(Debug, Clone, PartialEq)]
pub struct PlateOptions {
    pub variant: Variant,
    pub k: usize,
    pub quadrature: QuadratureMode,
    pub family: MeshFamily,
    pub elements: usize,
    pub seed: u64,
    pub length: f64,
    pub height: f64,
    pub radius: f64,
    pub material: J2Params,
    /// Final top displacement.
    pub displacement: f64,
    pub increments: usize,
    pub execution: Execution,
}

impl Default for PlateOptions {
    fn default() -> Self {
        PlateOptions {
            variant: Variant::Cv,
            k: 2,
            quadrature: QuadratureMode::Minimal,
            family: MeshFamily::Voro,
            elements: 60,
            seed: 1,
            length: 100.0,
            height: 180.0,
            radius: 50.0,
            material: J2Params {
                e: 7000.0,
                nu: 0.3,
                sigma_y: 24.3,
            },
            displacement: 2.0,
            increments: 100,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateStep {
    pub step: usize,
    pub displacement: f64,
    /// Sum of vertical reactions on the top edge.
    pub reaction: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateResult {
    pub history: Vec<PlateStep>,
    pub elements: usize,
}

/// Boundary conditions: symmetry on the left (`u_x = 0`) and bottom
/// (`u_y = 0`) edges, top edge moved rigidly upward (`u_x = 0`, `u_y = δ`),
/// right edge and hole traction free.
pub fn run_plate(opts: &PlateOptions) -> Result<PlateResult> {
    let domain = BenchmarkDomain::QuarterPlateWithHole {
        length: opts.length,
        height: opts.height,
        radius: opts.radius,
    };
    let mesh = generate_benchmark_mesh(&MeshSpec {
        domain,
        family: opts.family,
        elements: opts.elements,
        seed: opts.seed,
    })?;
    let delta = opts.displacement;
    let bcs = BoundaryConditions {
        dirichlet: vec![
            DirichletBc::fixed("left", [true, false]),
            DirichletBc::fixed("bottom", [false, true]),
            DirichletBc::new("top", [true, true], move |_| Vec2::new(0.0, delta)),
        ],
        tractions: Vec::new(),
        body_force: None,
    };
    let space = SpaceConfig::new(opts.k, opts.variant, opts.quadrature);
    let mut config = AnalysisConfig::new(space, Material::J2(opts.material), bcs);
    config.steps = crate::solver::proportional_steps(opts.increments.max(1));
    config.newton = NewtonSettings::default();
    config.execution = opts.execution;
    let mut analysis = crate::solver::Analysis::new(&mesh, config)?;
    let top_nodes = analysis
        .disc
        .layout
        .nodes_on_edges(&analysis.disc.mesh, analysis.disc.mesh.group("top")?);
    let result = analysis.run()?;
    let history = result
        .steps
        .iter()
        .zip(&result.reaction_history)
        .enumerate()
        .map(|(i, (rec, r))| PlateStep {
            step: i + 1,
            displacement: rec.factor * delta,
            reaction: top_nodes.iter().map(|n| r[2 * n + 1]).sum(),
            iterations: rec.iterations,
        })
        .collect();
    Ok(PlateResult {
        history,
        elements: mesh.num_elements(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::lame;
    use crate::solver::run_analysis;

    #[test]
    fn quadratic_solution_with_constant_body_force_is_exact_for_k2() {
        let (lam, mu) = lame(1000.0, 0.3).unwrap();
        let exact = |p: Vec2| Vec2::new(p.x * p.x, p.x * p.y);
        let mesh = generate_benchmark_mesh(&MeshSpec {
            domain: BenchmarkDomain::Rectangle {
                width: 2.0,
                height: 1.0,
            },
            family: MeshFamily::Voro,
            elements: 10,
            seed: 3,
        })
        .unwrap();
        let f = Vec2::new(-(3.0 * lam + 5.0 * mu), 0.0);
        for k in 2..=3 {
            let bcs = BoundaryConditions {
                dirichlet: ["bottom", "right", "top", "left"]
                    .iter()
                    .map(|g| DirichletBc::new(g, [true, true], exact))
                    .collect(),
                tractions: Vec::new(),
                body_force: Some(std::sync::Arc::new(move |_| f)),
            };
            let cfg = AnalysisConfig::new(
                SpaceConfig::new(k, Variant::Cv, QuadratureMode::Minimal),
                Material::LinearElastic { e: 1000.0, nu: 0.3 },
                bcs,
            );
            let (a, r) = run_analysis(&mesh, cfg).unwrap();
            let e = error_displacement_skeleton(&a.disc, &r.displacement, exact).unwrap();
            assert!(e.value < 1e-10, "k={k}: {}", e.value);
        }
    }
}
