use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Vec2;
use crate::materials::Material;
use crate::spaces::SpaceConfig;

/// Vector field of position, shared across threads.
pub type VectorField = Arc<dyn Fn(Vec2) -> Vec2 + Send + Sync>;
/// Traction as a function of position and outward unit normal.
pub type TractionField = Arc<dyn Fn(Vec2, Vec2) -> Vec2 + Send + Sync>;

/// Prescribed displacement on a boundary group (full-load values; scaled by
/// the step's load factor).
#[derive(Clone)]
pub struct DirichletBc {
    pub group: String,
    /// Which components are prescribed (`[x, y]`).
    pub components: [bool; 2],
    pub value: VectorField,
}

impl fmt::Debug for DirichletBc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletBc")
            .field("group", &self.group)
            .field("components", &self.components)
            .finish()
    }
}

impl DirichletBc {
    pub fn new(
        group: &str,
        components: [bool; 2],
        value: impl Fn(Vec2) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        DirichletBc {
            group: group.to_string(),
            components,
            value: Arc::new(value),
        }
    }

    /// Homogeneous constraint on the selected components.
    pub fn fixed(group: &str, components: [bool; 2]) -> Self {
        Self::new(group, components, |_| Vec2::zeros())
    }
}

#[derive(Clone)]
pub struct TractionBc {
    pub group: String,
    pub traction: TractionField,
}

impl fmt::Debug for TractionBc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TractionBc")
            .field("group", &self.group)
            .finish()
    }
}

impl TractionBc {
    pub fn new(group: &str, traction: impl Fn(Vec2, Vec2) -> Vec2 + Send + Sync + 'static) -> Self {
        TractionBc {
            group: group.to_string(),
            traction: Arc::new(traction),
        }
    }

    /// Uniform pressure `p` acting against the outward normal.
    pub fn pressure(group: &str, p: f64) -> Self {
        Self::new(group, move |_, n| -p * n)
    }
}

#[derive(Clone, Default)]
pub struct BoundaryConditions {
    pub dirichlet: Vec<DirichletBc>,
    pub tractions: Vec<TractionBc>,
    pub body_force: Option<VectorField>,
}

impl fmt::Debug for BoundaryConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryConditions")
            .field("dirichlet", &self.dirichlet)
            .field("tractions", &self.tractions)
            .field("body_force", &self.body_force.is_some())
            .finish()
    }
}

/// One increment: absolute time and load factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadStep {
    pub time: f64,
    pub factor: f64,
}

/// `M` equal increments of the load factor up to 1 over times `1/M, …, 1`.
pub fn proportional_steps(m: usize) -> Vec<LoadStep> {
    (1..=m)
        .map(|i| LoadStep {
            time: i as f64 / m as f64,
            factor: i as f64 / m as f64,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    /// Relative residual tolerance.
    pub tolerance: f64,
    /// Absolute floor relative to the internal force scale (round-off level).
    pub absolute_floor: f64,
    pub max_iterations: usize,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            tolerance: 1e-8,
            absolute_floor: 1e-14,
            max_iterations: 25,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub space: SpaceConfig,
    pub material: Material,
    pub bcs: BoundaryConditions,
    pub steps: Vec<LoadStep>,
    pub newton: NewtonSettings,
    pub execution: Execution,
}

impl AnalysisConfig {
    pub fn new(space: SpaceConfig, material: Material, bcs: BoundaryConditions) -> Self {
        AnalysisConfig {
            space,
            material,
            bcs,
            steps: proportional_steps(1),
            newton: NewtonSettings::default(),
            execution: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        self.material.validate()?;
        if self.steps.is_empty() {
            return Err(Error::Config("at least one load step is required".into()));
        }
        if !(self.newton.tolerance > 0.0)
            || !(self.newton.absolute_floor > 0.0)
            || self.newton.max_iterations == 0
        {
            return Err(Error::Config(
                "Newton tolerances and iteration cap must be positive".into(),
            ));
        }
        let mut t = 0.0;
        for s in &self.steps {
            if s.time < t {
                return Err(Error::Config(
                    "load step times must be nondecreasing from 0".into(),
                ));
            }
            t = s.time;
        }
        Ok(())
    }
}
