//! Flat `key = value` job files for the `solve` command.
//!
//! ```text
//! # comments start with '#'
//! mesh.domain = quarter_annulus      # disk | quarter_annulus | plate | rectangle
//! mesh.r_inner = 2
//! mesh.r_outer = 4
//! mesh.family = quad                 # quad | rhex | voro
//! mesh.elements = 272
//! mesh.seed = 1
//! # mesh.file = mesh.txt             # alternative to a generated mesh
//! space.k = 2
//! space.variant = cv                 # s | co | cv
//! space.quadrature = minimal         # minimal | higher | reference
//! material.model = viscoelastic      # elastic | hencky | viscoelastic | j2
//! material.e = 1000
//! material.nu = 0.3
//! material.mu0 = 0.01
//! material.prony = 0.99:1.0          # weight:time pairs separated by ';'
//! steps.count = 20
//! steps.dt = 1                       # step times i·dt (default i/count)
//! steps.initial = true               # prepend an instantaneous step at t = 0
//! steps.ramp = false                 # scale loads by i/count (default true)
//! newton.tolerance = 1e-8
//! newton.max_iterations = 25
//! bc.fix.bottom = y                  # homogeneous: x | y | xy
//! bc.fix.left = x
//! bc.displacement.top = 0, 2         # prescribed values; '-' leaves a component free
//! bc.pressure.inner = 10
//! bc.traction.right = 1, 0
//! load.body = 0, -1
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{
    generate_benchmark_mesh, load_mesh, BenchmarkDomain, CurvedMesh, MeshSpec, Vec2,
};
use crate::materials::{J2Params, Material, ViscoelasticParams};
use crate::solver::{AnalysisConfig, BoundaryConditions, DirichletBc, LoadStep, TractionBc};
use crate::spaces::SpaceConfig;

/// Parsed `key = value` pairs with their line numbers.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            let key = k.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "empty key".into(),
                });
            }
            if entries
                .insert(key.clone(), (i + 1, v.trim().to_string()))
                .is_some()
            {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("duplicate key '{key}'"),
                });
            }
        }
        Ok(KeyValues { entries })
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse().map(Some).map_err(|e| Error::Parse {
                line: *line,
                message: format!("invalid value for '{key}': {e}"),
            }),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| Error::Config(format!("missing key '{key}'")))
    }

    fn or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn with_prefix<'a>(
        &'a self,
        prefix: &'a str,
    ) -> impl Iterator<Item = (&'a str, usize, &'a str)> + 'a {
        self.entries
            .iter()
            .filter_map(move |(k, (l, v))| k.strip_prefix(prefix).map(|g| (g, *l, v.as_str())))
    }
}

/// Where the mesh of a job comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    Generated(MeshSpec),
    File(String),
}

impl MeshSource {
    pub fn load(&self, base: &Path) -> Result<CurvedMesh> {
        match self {
            MeshSource::Generated(spec) => generate_benchmark_mesh(spec),
            MeshSource::File(f) => {
                let path = base.join(f);
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::Config(format!("cannot read mesh {}: {e}", path.display()))
                })?;
                load_mesh(&text)
            }
        }
    }
}

/// A fully specified analysis job.
#[derive(Debug, Clone)]
pub struct SolveJob {
    pub mesh: MeshSource,
    pub analysis: AnalysisConfig,
}

fn parse_pair(line: usize, v: &str) -> Result<[Option<f64>; 2]> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two comma-separated values, got '{v}'"),
        });
    }
    let mut out = [None; 2];
    for (o, p) in out.iter_mut().zip(parts) {
        if p != "-" {
            *o = Some(p.parse().map_err(|e| Error::Parse {
                line,
                message: format!("invalid number '{p}': {e}"),
            })?);
        }
    }
    Ok(out)
}

fn parse_vector(line: usize, v: &str) -> Result<Vec2> {
    match parse_pair(line, v)? {
        [Some(x), Some(y)] => Ok(Vec2::new(x, y)),
        _ => Err(Error::Parse {
            line,
            message: "both components are required".into(),
        }),
    }
}

impl SolveJob {
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        let known = [
            "mesh.",
            "space.",
            "material.",
            "steps.",
            "newton.",
            "bc.fix.",
            "bc.displacement.",
            "bc.pressure.",
            "bc.traction.",
            "load.body",
        ];
        for (k, (line, _)) in &kv.entries {
            if !known.iter().any(|p| k.starts_with(p)) {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("unknown key '{k}'"),
                });
            }
        }
        let mesh = Self::parse_mesh(&kv)?;
        let space = SpaceConfig::new(
            kv.or("space.k", 2)?,
            kv.or("space.variant", "cv".to_string())?.parse()?,
            kv.or("space.quadrature", "minimal".to_string())?.parse()?,
        );
        let material = Self::parse_material(&kv)?;
        let bcs = Self::parse_bcs(&kv)?;
        let mut analysis = AnalysisConfig::new(space, material, bcs);
        let count: usize = kv.or("steps.count", 1)?;
        if count == 0 {
            return Err(Error::Config("steps.count must be at least 1".into()));
        }
        let dt: Option<f64> = kv.get("steps.dt")?;
        let ramp: bool = kv.or("steps.ramp", true)?;
        let mut steps: Vec<LoadStep> = (1..=count)
            .map(|i| LoadStep {
                time: dt.map_or(i as f64 / count as f64, |d| i as f64 * d),
                factor: if ramp { i as f64 / count as f64 } else { 1.0 },
            })
            .collect();
        if kv.or("steps.initial", false)? {
            steps.insert(
                0,
                LoadStep {
                    time: 0.0,
                    factor: if ramp { 0.0 } else { 1.0 },
                },
            );
        }
        analysis.steps = steps;
        analysis.newton.tolerance = kv.or("newton.tolerance", analysis.newton.tolerance)?;
        analysis.newton.max_iterations =
            kv.or("newton.max_iterations", analysis.newton.max_iterations)?;
        analysis.validate()?;
        Ok(SolveJob { mesh, analysis })
    }

    fn parse_mesh(kv: &KeyValues) -> Result<MeshSource> {
        if let Some(f) = kv.get::<String>("mesh.file")? {
            return Ok(MeshSource::File(f));
        }
        let domain = match kv.require::<String>("mesh.domain")?.as_str() {
            "disk" => BenchmarkDomain::Disk {
                radius: kv.or("mesh.radius", 1.0)?,
            },
            "quarter_annulus" => BenchmarkDomain::QuarterAnnulus {
                r_inner: kv.or("mesh.r_inner", 2.0)?,
                r_outer: kv.or("mesh.r_outer", 4.0)?,
            },
            "plate" => BenchmarkDomain::QuarterPlateWithHole {
                length: kv.or("mesh.length", 100.0)?,
                height: kv.or("mesh.height", 180.0)?,
                radius: kv.or("mesh.radius", 50.0)?,
            },
            "rectangle" => BenchmarkDomain::Rectangle {
                width: kv.or("mesh.width", 1.0)?,
                height: kv.or("mesh.height", 1.0)?,
            },
            other => return Err(Error::Config(format!("unknown mesh.domain '{other}'"))),
        };
        Ok(MeshSource::Generated(MeshSpec {
            domain,
            family: kv.or("mesh.family", "quad".to_string())?.parse()?,
            elements: kv.require("mesh.elements")?,
            seed: kv.or("mesh.seed", 1)?,
        }))
    }

    fn parse_material(kv: &KeyValues) -> Result<Material> {
        let model: String = kv.require("material.model")?;
        let m = match model.as_str() {
            "elastic" => Material::LinearElastic {
                e: kv.require("material.e")?,
                nu: kv.require("material.nu")?,
            },
            "hencky" => Material::Hencky,
            "viscoelastic" => {
                let mut terms = Vec::new();
                if let Some((line, v)) = kv.raw("material.prony") {
                    for t in v.split(';').map(str::trim).filter(|t| !t.is_empty()) {
                        let (w, l) = t.split_once(':').ok_or_else(|| Error::Parse {
                            line: *line,
                            message: format!("expected weight:time, got '{t}'"),
                        })?;
                        let num = |s: &str| {
                            s.trim().parse::<f64>().map_err(|e| Error::Parse {
                                line: *line,
                                message: format!("'{s}': {e}"),
                            })
                        };
                        terms.push((num(w)?, num(l)?));
                    }
                }
                Material::Viscoelastic(ViscoelasticParams {
                    e: kv.require("material.e")?,
                    nu: kv.require("material.nu")?,
                    mu0: kv.require("material.mu0")?,
                    terms,
                })
            }
            "j2" => Material::J2(J2Params {
                e: kv.require("material.e")?,
                nu: kv.require("material.nu")?,
                sigma_y: kv.require("material.sigma_y")?,
            }),
            other => return Err(Error::Config(format!("unknown material.model '{other}'"))),
        };
        m.validate()?;
        Ok(m)
    }

    fn parse_bcs(kv: &KeyValues) -> Result<BoundaryConditions> {
        let mut bcs = BoundaryConditions::default();
        for (group, line, v) in kv.with_prefix("bc.fix.") {
            let comps = match v {
                "x" => [true, false],
                "y" => [false, true],
                "xy" | "yx" => [true, true],
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected x, y or xy, got '{v}'"),
                    })
                }
            };
            bcs.dirichlet.push(DirichletBc::fixed(group, comps));
        }
        for (group, line, v) in kv.with_prefix("bc.displacement.") {
            let [x, y] = parse_pair(line, v)?;
            let value = Vec2::new(x.unwrap_or(0.0), y.unwrap_or(0.0));
            bcs.dirichlet.push(DirichletBc::new(
                group,
                [x.is_some(), y.is_some()],
                move |_| value,
            ));
        }
        for (group, line, v) in kv.with_prefix("bc.pressure.") {
            let p: f64 = v.parse().map_err(|e| Error::Parse {
                line,
                message: format!("invalid pressure: {e}"),
            })?;
            bcs.tractions.push(TractionBc::pressure(group, p));
        }
        for (group, line, v) in kv.with_prefix("bc.traction.") {
            let t = parse_vector(line, v)?;
            bcs.tractions.push(TractionBc::new(group, move |_, _| t));
        }
        if let Some((line, v)) = kv.raw("load.body") {
            let f = parse_vector(*line, v)?;
            bcs.body_force = Some(std::sync::Arc::new(move |_| f));
        }
        Ok(bcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYLINDER: &str = "
        mesh.domain = quarter_annulus
        mesh.elements = 20
        mesh.family = voro
        space.k = 2
        material.model = viscoelastic
        material.E = 1000
        material.nu = 0.3
        material.mu0 = 0.3
        material.prony = 0.7:1.0
        steps.count = 3
        steps.dt = 1
        steps.initial = true
        steps.ramp = false
        bc.fix.bottom = y
        bc.fix.left = x   # symmetry
        bc.pressure.inner = 10
    ";

    #[test]
    fn parses_a_complete_job() {
        let job = SolveJob::parse(CYLINDER).unwrap();
        assert_eq!(job.analysis.steps.len(), 4);
        assert_eq!(
            job.analysis.steps[0],
            LoadStep {
                time: 0.0,
                factor: 1.0
            }
        );
        assert_eq!(
            job.analysis.steps[3],
            LoadStep {
                time: 3.0,
                factor: 1.0
            }
        );
        assert_eq!(job.analysis.bcs.dirichlet.len(), 2);
        assert_eq!(job.analysis.bcs.tractions.len(), 1);
        assert!(
            matches!(job.analysis.material, Material::Viscoelastic(ref p) if p.terms == vec![(0.7, 1.0)])
        );
    }

    #[test]
    fn reports_line_numbers() {
        let err =
            SolveJob::parse("mesh.domain = disk\nspace.k = two\nmesh.elements = 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = SolveJob::parse(
            "mesh.domain = disk\nmesh.elements = 5\nmaterial.model = hencky\nfoo = 1\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        assert!(matches!(
            KeyValues::parse("a = 1\na = 2"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
