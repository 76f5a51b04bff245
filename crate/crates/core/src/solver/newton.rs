//! Incremental-iterative Newton driver.

use log::{debug, info, warn};
use nalgebra::DMatrix;

use super::config::{AnalysisConfig, LoadStep};
use super::element::{
    center_point, consistency, drecipe_weights, stabilization_matrix, ElementEval,
};
use super::linear::{solve, TripletMatrix};
use super::loads::{external_load, Constraints};
use crate::error::{Error, Result};
use crate::geometry::CurvedMesh;
use crate::materials::{MaterialState, Stress};
use crate::spaces::Discretization;

/// Convergence record of one load step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub time: f64,
    pub factor: f64,
    /// Number of linear solves performed.
    pub iterations: usize,
    /// Free-dof residual norm before each solve and at convergence.
    pub residuals: Vec<f64>,
}

/// Outcome of a full analysis.
#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub steps: Vec<StepRecord>,
    /// Converged displacement after the last step.
    pub displacement: Vec<f64>,
    /// Converged displacement after every step.
    pub history: Vec<Vec<f64>>,
    /// `F_int − F_ext` at the final state (nonzero only at constrained dofs).
    pub reactions: Vec<f64>,
    /// Reactions after every step.
    pub reaction_history: Vec<Vec<f64>>,
    /// Stress at every volume point of every element, final state.
    pub stresses: Vec<Vec<Stress>>,
}

/// Global internal force and tangent at one displacement.
#[derive(Debug, Clone)]
pub struct InternalState {
    pub force: Vec<f64>,
    /// Full-size tangent (all dofs).
    pub tangent: TripletMatrix,
    pub evals: Vec<ElementEval>,
    /// Sum of element force norms (round-off reference).
    pub scale: f64,
}

/// A prepared analysis: discretization, loads, constraints and evolving state.
#[derive(Debug)]
pub struct Analysis {
    pub disc: Discretization,
    pub config: AnalysisConfig,
    pub constraints: Constraints,
    /// Full-load external force.
    pub external: Vec<f64>,
    committed: Vec<Vec<MaterialState>>,
    stabilization: Vec<DMatrix<f64>>,
    centers: Vec<usize>,
}

impl Analysis {
    pub fn new(mesh: &CurvedMesh, config: AnalysisConfig) -> Result<Self> {
        config.validate()?;
        let disc = Discretization::new(mesh, config.space, config.execution)?;
        let constraints = Constraints::build(&disc, &config.bcs)?;
        let external = external_load(&disc, &config.bcs)?;
        let committed: Vec<Vec<MaterialState>> = disc
            .operators
            .iter()
            .map(|o| vec![config.material.initial_state(); o.rule.len()])
            .collect();
        let centers = disc.operators.iter().map(center_point).collect();
        let mut a = Analysis {
            disc,
            config,
            constraints,
            external,
            committed,
            stabilization: Vec::new(),
            centers,
        };
        let zero = vec![0.0; a.disc.num_dofs()];
        let evals = a.evaluate(&zero, 0.0)?;
        a.update_stabilization(&evals);
        Ok(a)
    }

    pub fn num_dofs(&self) -> usize {
        self.disc.num_dofs()
    }

    fn evaluate(&self, u: &[f64], dt: f64) -> Result<Vec<ElementEval>> {
        let material = &self.config.material;
        self.config
            .execution
            .try_map(self.disc.mesh.num_elements(), |e| {
                let ops = &self.disc.operators[e];
                let ue = self.disc.local(e, u);
                consistency(ops, &ue, material, &self.committed[e], dt, self.centers[e])
            })
    }

    fn update_stabilization(&mut self, evals: &[ElementEval]) {
        self.stabilization = self.config.execution.map(evals.len(), |e| {
            stabilization_matrix(&self.disc.operators[e], &drecipe_weights(&evals[e]))
        });
    }

    /// Internal force and tangent at `u` from the committed states, with the
    /// current stabilization weights.
    pub fn internal(&self, u: &[f64], dt: f64) -> Result<InternalState> {
        let mut evals = self.evaluate(u, dt)?;
        let n = self.num_dofs();
        let mut force = vec![0.0; n];
        let mut tangent = TripletMatrix::new(n);
        let mut scale = 0.0;
        for (e, ev) in evals.iter_mut().enumerate() {
            let s = &self.stabilization[e];
            let ue = self.disc.local(e, u);
            ev.force += s * &ue;
            ev.tangent += s;
            scale += ev.force.norm();
            let dofs = self.disc.layout.element_dofs(e);
            for (i, &gi) in dofs.iter().enumerate() {
                force[gi] += ev.force[i];
                for (j, &gj) in dofs.iter().enumerate() {
                    tangent.push(gi, gj, ev.tangent[(i, j)]);
                }
            }
        }
        Ok(InternalState {
            force,
            tangent,
            evals,
            scale,
        })
    }

    /// Runs every configured load step.
    pub fn run(&mut self) -> Result<AnalysisResult> {
        let n = self.num_dofs();
        let (free_map, nfree) = self.constraints.free_map(n);
        let steps = self.config.steps.clone();
        let settings = self.config.newton;
        let mut u = vec![0.0; n];
        let mut prev_time = 0.0;
        let mut records = Vec::with_capacity(steps.len());
        let mut history = Vec::with_capacity(steps.len());
        let mut reaction_history = Vec::with_capacity(steps.len());
        let mut last: Option<InternalState> = None;
        for (si, &LoadStep { time, factor }) in steps.iter().enumerate() {
            let dt = time - prev_time;
            for (&d, &v) in &self.constraints.values {
                u[d] = factor * v;
            }
            let fext: Vec<f64> = self.external.iter().map(|f| factor * f).collect();
            let ext_norm = free_norm(&fext, &free_map);
            let mut residuals = Vec::new();
            let mut reference = 0.0;
            let mut iterations = 0;
            let mut stagnated = false;
            let state = loop {
                let st = self.internal(&u, dt)?;
                let r: Vec<f64> = st.force.iter().zip(&fext).map(|(a, b)| a - b).collect();
                let rn = free_norm(&r, &free_map);
                if !rn.is_finite() {
                    return Err(divergence(si, iterations, rn, residuals));
                }
                residuals.push(rn);
                if iterations == 0 {
                    reference = ext_norm.max(rn);
                }
                debug!("step {si} iteration {iterations}: |R| = {rn:.3e}");
                if rn <= settings.tolerance * reference
                    || rn <= settings.absolute_floor * st.scale
                    || stagnated
                {
                    break st;
                }
                if iterations >= settings.max_iterations {
                    return Err(divergence(si, iterations, rn, residuals));
                }
                let mut kff = TripletMatrix::new(nfree);
                for &(i, j, v) in &st.tangent.entries {
                    if let (Some(a), Some(b)) = (free_map[i], free_map[j]) {
                        kff.push(a, b, v);
                    }
                }
                let mut rhs = vec![0.0; nfree];
                for (d, m) in free_map.iter().enumerate() {
                    if let Some(a) = m {
                        rhs[*a] = -r[d];
                    }
                }
                let du = solve(&kff, &rhs)?;
                let mut dn = 0.0;
                let mut un = 0.0;
                for (d, m) in free_map.iter().enumerate() {
                    if let Some(a) = m {
                        u[d] += du[*a];
                        dn += du[*a] * du[*a];
                    }
                    un += u[d] * u[d];
                }
                iterations += 1;
                stagnated = dn.sqrt() <= 1e-14 * un.sqrt();
                if stagnated {
                    warn!("step {si}: Newton stagnated at |R| = {rn:.3e}; accepting");
                }
            };
            info!(
                "step {si} (t = {time}, factor = {factor}): {iterations} iterations, |R| = {:.3e}",
                residuals.last().unwrap()
            );
            for (c, ev) in self.committed.iter_mut().zip(&state.evals) {
                c.clone_from(&ev.trial_states);
            }
            self.update_stabilization(&state.evals);
            records.push(StepRecord {
                time,
                factor,
                iterations,
                residuals,
            });
            history.push(u.clone());
            reaction_history.push(
                state
                    .force
                    .iter()
                    .zip(&fext)
                    .enumerate()
                    .map(|(d, (fi, fe))| if free_map[d].is_none() { fi - fe } else { 0.0 })
                    .collect(),
            );
            prev_time = time;
            last = Some(state);
        }
        let state = last.expect("at least one step");
        let reactions = reaction_history.last().cloned().unwrap_or_default();
        let stresses = state.evals.into_iter().map(|e| e.stresses).collect();
        Ok(AnalysisResult {
            steps: records,
            displacement: u,
            history,
            reactions,
            reaction_history,
            stresses,
        })
    }
}

fn free_norm(v: &[f64], free: &[Option<usize>]) -> f64 {
    v.iter()
        .zip(free)
        .filter(|(_, m)| m.is_some())
        .map(|(x, _)| x * x)
        .sum::<f64>()
        .sqrt()
}

fn divergence(step: usize, iterations: usize, last: f64, history: Vec<f64>) -> Error {
    Error::NewtonDivergence {
        step,
        iterations,
        last_residual: last,
        history,
    }
}

/// Builds and runs an analysis in one call.
pub fn run_analysis(
    mesh: &CurvedMesh,
    config: AnalysisConfig,
) -> Result<(Analysis, AnalysisResult)> {
    let mut a = Analysis::new(mesh, config)?;
    let r = a.run()?;
    Ok((a, r))
}
