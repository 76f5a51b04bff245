//! `curvem`: mesh generation, job-file solves and benchmark studies.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use curvem_core::analysis::{
    cylinder_history_csv, errors_csv, plate_history_csv, reports_csv, run_convergence_study,
    run_cylinder, run_plate, run_rigid_benchmark, sigma_rho_csv, CylinderOptions, Manufactured,
    PlateOptions, SolveJob, StudyOptions,
};
use curvem_core::geometry::{
    generate_benchmark_mesh, save_mesh, BenchmarkDomain, MeshFamily, MeshSpec,
};
use curvem_core::quadrature::element_rule;
use curvem_core::solver::Analysis;
use curvem_core::spaces::{QuadratureMode, Variant};

#[derive(Parser)]
#[command(
    name = "curvem",
    version,
    about = "Curvilinear virtual elements for 2D solids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark mesh (and optionally dump an element quadrature rule).
    Mesh(MeshArgs),
    /// Run an analysis described by a key-value job file.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run one of the four benchmark studies.
    Study(StudyArgs),
}

#[derive(Args)]
struct MeshArgs {
    /// disk | quarter_annulus | plate | rectangle
    #[arg(long, default_value = "disk")]
    domain: String,
    #[arg(long, default_value = "quad")]
    family: String,
    #[arg(long, default_value_t = 48)]
    elements: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Disk or hole radius.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    r_inner: f64,
    #[arg(long, default_value_t = 4.0)]
    r_outer: f64,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    #[arg(long, default_value = "mesh.txt")]
    out: PathBuf,
    /// Write the volume rule of this element as `x,y,w` CSV next to the mesh.
    #[arg(long)]
    rule_element: Option<usize>,
    /// Exactness degree of the dumped rule.
    #[arg(long, default_value_t = 4)]
    rule_degree: usize,
}

#[derive(Args)]
struct StudyArgs {
    /// 1 (convergence), 2 (rigid motion), 3 (viscoelastic cylinder), 4 (plastic plate)
    #[arg(long)]
    example: u8,
    #[arg(long, default_value = "cv")]
    variant: String,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// minimal | higher | reference (example 2 defaults to reference)
    #[arg(long)]
    quadrature: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated element counts for examples 1 and 2.
    #[arg(long)]
    sizes: Option<String>,
    /// Element count for examples 3 and 4.
    #[arg(long)]
    elements: Option<usize>,
    /// Load increments (example 4) or time steps (example 3).
    #[arg(long)]
    increments: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn domain(a: &MeshArgs) -> Result<BenchmarkDomain> {
    Ok(match a.domain.as_str() {
        "disk" => BenchmarkDomain::Disk {
            radius: a.radius.unwrap_or(1.0),
        },
        "quarter_annulus" => BenchmarkDomain::QuarterAnnulus {
            r_inner: a.r_inner,
            r_outer: a.r_outer,
        },
        "plate" => BenchmarkDomain::QuarterPlateWithHole {
            length: a.length.unwrap_or(100.0),
            height: a.height.unwrap_or(180.0),
            radius: a.radius.unwrap_or(50.0),
        },
        "rectangle" => BenchmarkDomain::Rectangle {
            width: a.width.unwrap_or(1.0),
            height: a.height.unwrap_or(1.0),
        },
        other => bail!("unknown domain '{other}'"),
    })
}

fn mesh(a: MeshArgs) -> Result<()> {
    let spec = MeshSpec {
        domain: domain(&a)?,
        family: a.family.parse()?,
        elements: a.elements,
        seed: a.seed,
    };
    let m = generate_benchmark_mesh(&spec)?;
    if let Some(dir) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(&a.out, save_mesh(&m)).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "{} elements, {} vertices, {} edges, mean h = {:.4}",
        m.num_elements(),
        m.vertices.len(),
        m.edges.len(),
        m.mean_h()
    );
    if let Some(e) = a.rule_element {
        if e >= m.num_elements() {
            bail!("element {e} out of range (mesh has {})", m.num_elements());
        }
        let rule = element_rule(
            &m.element_boundary(e),
            m.elements[e].centroid,
            a.rule_degree,
        )?;
        let path = a.out.with_extension(format!("rule{e}.csv"));
        fs::write(&path, rule.to_csv())?;
        println!(
            "rule with {} points written to {}",
            rule.len(),
            path.display()
        );
    }
    Ok(())
}

fn solve(config: &Path, out: &Path) -> Result<()> {
    let text =
        fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let job = SolveJob::parse(&text)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let m = job.mesh.load(base)?;
    let groups: Vec<String> = job
        .analysis
        .bcs
        .dirichlet
        .iter()
        .map(|b| b.group.clone())
        .collect();
    let mut analysis = Analysis::new(&m, job.analysis)?;
    let result = analysis.run()?;
    let disc = &analysis.disc;
    let points = disc.layout.skeleton_points(&disc.mesh)?;
    let mut s = String::from("node,x,y,ux,uy\n");
    for (n, p) in points.iter().enumerate() {
        s += &format!(
            "{n},{:.10e},{:.10e},{:.10e},{:.10e}\n",
            p.x,
            p.y,
            result.displacement[2 * n],
            result.displacement[2 * n + 1]
        );
    }
    write(out, "displacement.csv", &s)?;
    let mut h = String::from("step,time,factor,iterations,residual\n");
    for (i, r) in result.steps.iter().enumerate() {
        h += &format!(
            "{},{},{},{},{:.6e}\n",
            i + 1,
            r.time,
            r.factor,
            r.iterations,
            r.residuals.last().unwrap_or(&0.0)
        );
    }
    write(out, "history.csv", &h)?;
    let mut rc = String::from("step,group,rx,ry\n");
    let mut seen = std::collections::BTreeSet::new();
    for g in groups.iter().filter(|g| seen.insert(g.to_string())) {
        let nodes = disc.layout.nodes_on_edges(&disc.mesh, disc.mesh.group(g)?);
        for (i, r) in result.reaction_history.iter().enumerate() {
            let rx: f64 = nodes.iter().map(|n| r[2 * n]).sum();
            let ry: f64 = nodes.iter().map(|n| r[2 * n + 1]).sum();
            rc += &format!("{},{g},{rx:.10e},{ry:.10e}\n", i + 1);
        }
    }
    write(out, "reactions.csv", &rc)?;
    println!(
        "{} steps, {} dofs, total Newton iterations {}",
        result.steps.len(),
        disc.num_dofs(),
        result.steps.iter().map(|s| s.iterations).sum::<usize>()
    );
    Ok(())
}

fn study(a: StudyArgs) -> Result<()> {
    let variant: Variant = a.variant.parse()?;
    let quad = |default: QuadratureMode| -> Result<QuadratureMode> {
        Ok(a.quadrature
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or(default))
    };
    let family = |default: MeshFamily| -> Result<MeshFamily> {
        Ok(a.family
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or(default))
    };
    let sizes = |default: &[usize]| -> Result<Vec<usize>> {
        match &a.sizes {
            None => Ok(default.to_vec()),
            Some(s) => s
                .split(',')
                .map(|x| x.trim().parse().context("invalid --sizes"))
                .collect(),
        }
    };
    match a.example {
        1 | 2 => {
            let rigid = a.example == 2;
            let opts = StudyOptions {
                variant,
                k: a.k,
                quadrature: quad(if rigid {
                    QuadratureMode::Reference
                } else {
                    QuadratureMode::Minimal
                })?,
                family: family(MeshFamily::Quad)?,
                sizes: sizes(if rigid {
                    &[507, 1200, 1728]
                } else {
                    &[192, 768, 1200, 1728]
                })?,
                seed: a.seed,
                steps: a.increments.unwrap_or(1),
                ..StudyOptions::default()
            };
            if rigid {
                let reports = run_rigid_benchmark(&opts)?;
                for r in &reports {
                    println!("{} N={} e_u={:.4e}", r.mesh, r.elements, r.e_u);
                }
                write(&a.out, "errors.csv", &reports_csv(&reports))?;
            } else {
                let table = run_convergence_study(Manufactured::Trigonometric, &opts)?;
                for r in &table.reports {
                    println!(
                        "{} N={} h={:.4} e_u={:.4e} e_eps={:.4e}",
                        r.mesh, r.elements, r.h, r.e_u, r.e_eps
                    );
                }
                println!(
                    "slopes: e_u {:.3}, e_eps {:.3}",
                    table.slope_u, table.slope_eps
                );
                write(&a.out, "errors.csv", &errors_csv(&table))?;
            }
        }
        3 => {
            for (name, weights) in [("ve1", (0.01, 0.99)), ("ve2", (0.3, 0.7))] {
                let opts = CylinderOptions {
                    variant,
                    k: a.k,
                    quadrature: quad(QuadratureMode::Minimal)?,
                    family: family(MeshFamily::Quad)?,
                    elements: a.elements.unwrap_or(272),
                    seed: a.seed,
                    weights,
                    steps: a.increments.unwrap_or(20),
                    ..CylinderOptions::default()
                };
                let r = run_cylinder(&opts)?;
                let first = &r.history[0];
                println!(
                    "{name}: N={} u_r(A) t=0 {:.6e} (closed form {:.6e}), t={} {:.6e}",
                    r.elements,
                    first.ur_a,
                    r.lame.0,
                    r.history.last().unwrap().time,
                    r.history.last().unwrap().ur_a
                );
                let dir = a.out.join(name);
                write(&dir, "history.csv", &cylinder_history_csv(&r))?;
                write(&dir, "sigma_rho.csv", &sigma_rho_csv(&r.sigma_rho))?;
            }
        }
        4 => {
            let opts = PlateOptions {
                variant,
                k: a.k,
                quadrature: quad(QuadratureMode::Minimal)?,
                family: family(MeshFamily::Voro)?,
                elements: a.elements.unwrap_or(60),
                seed: a.seed,
                increments: a.increments.unwrap_or(100),
                ..PlateOptions::default()
            };
            let r = run_plate(&opts)?;
            let last = r.history.last().unwrap();
            println!(
                "N={} final reaction {:.6e} at displacement {}",
                r.elements, last.reaction, last.displacement
            );
            write(&a.out, "history.csv", &plate_history_csv(&r))?;
        }
        other => bail!("unknown example {other} (1-4)"),
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Mesh(a) => mesh(a),
        Command::Solve { config, out } => solve(&config, &out),
        Command::Study(a) => study(a),
    }
}
