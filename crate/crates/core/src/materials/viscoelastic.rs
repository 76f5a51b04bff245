//! Generalized Maxwell (Prony series) viscoelasticity: elastic volumetric
//! response, relaxing deviatoric response.

use super::elastic::{bulk, lame};
use super::voigt::{
    deviator, isotropic, one, strain_to_mandel, stress_from_mandel, tangent_from_mandel, trace,
    Mandel,
};
use super::voigt::{Strain, Stress, Tangent};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ViscoelasticParams {
    pub e: f64,
    pub nu: f64,
    /// Long-term weight `μ₀`.
    pub mu0: f64,
    /// Prony terms `(μ_m, λ_m)` (weight, relaxation time).
    pub terms: Vec<(f64, f64)>,
}

impl ViscoelasticParams {
    pub fn validate(&self) -> Result<()> {
        lame(self.e, self.nu)?;
        let sum = self.mu0 + self.terms.iter().map(|t| t.0).sum::<f64>();
        if (sum - 1.0).abs() > 1e-12
            || self.mu0 < 0.0
            || self.terms.iter().any(|&(m, l)| m < 0.0 || !(l > 0.0))
        {
            return Err(Error::Material(format!(
                "invalid Prony weights: mu0 + sum(mu_m) = {sum} (must be 1), weights >= 0, times > 0"
            )));
        }
        Ok(())
    }

    pub fn shear(&self) -> f64 {
        self.e / (2.0 * (1.0 + self.nu))
    }

    pub fn bulk(&self) -> f64 {
        bulk(self.e, self.nu)
    }

    /// Relaxation modulus `G(t) = G (μ₀ + Σ μ_m e^{−t/λ_m})`.
    pub fn relaxation_shear(&self, t: f64) -> f64 {
        self.shear()
            * (self.mu0
                + self
                    .terms
                    .iter()
                    .map(|&(m, l)| m * (-t / l).exp())
                    .sum::<f64>())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViscoelasticState {
    /// Internal deviatoric stress per Prony term (Mandel).
    pub q: Vec<Mandel>,
    /// Deviatoric strain at the last committed step (Mandel).
    pub e_prev: Mandel,
}

impl ViscoelasticState {
    pub fn new(params: &ViscoelasticParams) -> Self {
        ViscoelasticState {
            q: vec![Mandel::zeros(); params.terms.len()],
            e_prev: Mandel::zeros(),
        }
    }
}

/// Midpoint exponential update over a step of length `dt`.
pub fn maxwell_viscoelastic_update(
    eps: &Strain,
    state: &ViscoelasticState,
    dt: f64,
    p: &ViscoelasticParams,
) -> Result<(Stress, Tangent, ViscoelasticState)> {
    if dt < 0.0 {
        return Err(Error::Material(format!("negative time step {dt}")));
    }
    let g = p.shear();
    let k = p.bulk();
    let em = strain_to_mandel(eps);
    let e = deviator(&em);
    let de = e - state.e_prev;
    let mut q = Vec::with_capacity(p.terms.len());
    let mut s = 2.0 * g * p.mu0 * e;
    let mut g_eff = p.mu0;
    for (qm, &(mu, lam)) in state.q.iter().zip(&p.terms) {
        let half = (-0.5 * dt / lam).exp();
        let qn = half * half * qm + mu * half * 2.0 * g * de;
        s += qn;
        q.push(qn);
        g_eff += mu * half;
    }
    let sigma = s + k * trace(&em) * one();
    let c = isotropic(k, g * g_eff);
    Ok((
        stress_from_mandel(&sigma),
        tangent_from_mandel(&c),
        ViscoelasticState { q, e_prev: e },
    ))
}
