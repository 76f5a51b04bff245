//! Nonlinear quasi-static solver: loads, constraints, assembly and Newton.

mod config;
mod element;
mod linear;
mod loads;
mod newton;

#[cfg(test)]
mod tests;

pub use config::{
    proportional_steps, AnalysisConfig, BoundaryConditions, DirichletBc, LoadStep, NewtonSettings,
    TractionBc, TractionField, VectorField,
};
pub use element::{center_point, consistency, drecipe_weights, stabilization_matrix, ElementEval};
pub use linear::{solve, TripletMatrix};
pub use loads::{external_load, Constraints};
pub use newton::{run_analysis, Analysis, AnalysisResult, InternalState, StepRecord};
