//! Plane-strain J2 perfect plasticity with radial return.

use super::elastic::{bulk, lame};
use super::voigt::{
    deviator, i_dev, one, strain_to_mandel, stress_from_mandel, tangent_from_mandel, trace, Mandel,
};
use super::voigt::{Strain, Stress, Tangent};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct J2Params {
    pub e: f64,
    pub nu: f64,
    pub sigma_y: f64,
}

impl J2Params {
    pub fn validate(&self) -> Result<()> {
        lame(self.e, self.nu)?;
        if !(self.sigma_y > 0.0) {
            return Err(Error::Material(format!(
                "yield stress must be positive, got {}",
                self.sigma_y
            )));
        }
        Ok(())
    }

    /// Radius of the yield surface in deviatoric stress space, `√(2/3) σ_y`.
    pub fn radius(&self) -> f64 {
        (2.0f64 / 3.0).sqrt() * self.sigma_y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlasticState {
    /// Plastic strain (deviatoric, Mandel, including zz).
    pub eps_p: Mandel,
    /// Equivalent plastic strain.
    pub alpha: f64,
}

/// Backward-Euler return map; returns stress, consistent tangent and the
/// updated state.
pub fn j2_return_map(
    eps: &Strain,
    state: &PlasticState,
    p: &J2Params,
) -> (Stress, Tangent, PlasticState) {
    let g = p.e / (2.0 * (1.0 + p.nu));
    let k = bulk(p.e, p.nu);
    let em = strain_to_mandel(eps);
    let vol = k * trace(&em) * one();
    let s_trial = 2.0 * g * (deviator(&em) - state.eps_p);
    let norm = s_trial.norm();
    let f = norm - p.radius();
    if f <= 0.0 {
        let c = k * one() * one().transpose() + 2.0 * g * i_dev();
        return (
            stress_from_mandel(&(s_trial + vol)),
            tangent_from_mandel(&c),
            *state,
        );
    }
    let n = s_trial / norm;
    let dgamma = f / (2.0 * g);
    let s = s_trial - 2.0 * g * dgamma * n;
    let theta = 1.0 - 2.0 * g * dgamma / norm;
    let c = k * one() * one().transpose() + 2.0 * g * theta * (i_dev() - n * n.transpose());
    let new_state = PlasticState {
        eps_p: state.eps_p + dgamma * n,
        alpha: state.alpha + (2.0f64 / 3.0).sqrt() * dgamma,
    };
    (
        stress_from_mandel(&(s + vol)),
        tangent_from_mandel(&c),
        new_state,
    )
}

/// Norm of the 3D stress deviator, including the out-of-plane component.
pub fn deviatoric_norm(eps: &Strain, state: &PlasticState, p: &J2Params) -> f64 {
    let g = p.e / (2.0 * (1.0 + p.nu));
    let em = strain_to_mandel(eps);
    let s_trial = 2.0 * g * (deviator(&em) - state.eps_p);
    s_trial.norm().min(p.radius())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: J2Params = J2Params {
        e: 7000.0,
        nu: 0.3,
        sigma_y: 24.3,
    };

    #[test]
    fn pure_shear_hand_example() {
        let (s, _, st) = j2_return_map(&Strain::new(0.0, 0.0, 0.02), &PlasticState::default(), &P);
        assert!((s[2] - 14.03).abs() < 0.005, "{}", s[2]);
        assert!((s[2] - P.radius() / 2f64.sqrt()).abs() < 1e-10);
        assert!(st.alpha > 0.0);
    }

    #[test]
    fn elastic_below_yield() {
        let st = PlasticState::default();
        let (_, _, new) = j2_return_map(&Strain::new(1e-4, 0.0, 0.0), &st, &P);
        assert_eq!(new, st);
    }

    #[test]
    fn proportional_substeps_agree() {
        let target = Strain::new(0.004, -0.001, 0.006);
        let (s1, _, _) = j2_return_map(&target, &PlasticState::default(), &P);
        let mut st = PlasticState::default();
        let mut s = Stress::zeros();
        for i in 1..=100 {
            let (si, _, ns) = j2_return_map(&(target * (i as f64 / 100.0)), &st, &P);
            st = ns;
            s = si;
        }
        assert!((s - s1).norm() < 1e-10 * s1.norm(), "{s} vs {s1}");
    }
}
