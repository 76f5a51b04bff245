//! Constitutive models under plane strain: `σ(ε; history)` with consistent
//! tangents.

mod elastic;
mod hencky;
mod plasticity;
mod viscoelastic;
mod voigt;

pub use elastic::{bulk, elastic_tangent, lame, linear_elastic};
pub use hencky::{hencky_shear, hencky_von_mises, HENCKY_BULK};
pub use plasticity::{deviatoric_norm, j2_return_map, J2Params, PlasticState};
pub use viscoelastic::{maxwell_viscoelastic_update, ViscoelasticParams, ViscoelasticState};
pub use voigt::{strain_to_mandel, tangent_norm, Mandel, Strain, Stress, Tangent};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Material {
    LinearElastic { e: f64, nu: f64 },
    Hencky,
    Viscoelastic(ViscoelasticParams),
    J2(J2Params),
}

/// History at one quadrature point.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialState {
    Stateless,
    Viscoelastic(ViscoelasticState),
    Plastic(PlasticState),
}

/// Result of one constitutive evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialResponse {
    pub stress: Stress,
    pub tangent: Tangent,
    pub state: MaterialState,
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        match self {
            Material::LinearElastic { e, nu } => lame(*e, *nu).map(|_| ()),
            Material::Hencky => Ok(()),
            Material::Viscoelastic(p) => p.validate(),
            Material::J2(p) => p.validate(),
        }
    }

    pub fn initial_state(&self) -> MaterialState {
        match self {
            Material::Viscoelastic(p) => MaterialState::Viscoelastic(ViscoelasticState::new(p)),
            Material::J2(_) => MaterialState::Plastic(PlasticState::default()),
            _ => MaterialState::Stateless,
        }
    }

    pub fn has_history(&self) -> bool {
        matches!(self, Material::Viscoelastic(_) | Material::J2(_))
    }

    /// Stress, tangent and trial state at strain `eps`, starting from the
    /// committed `state`, over a time step `dt`.
    pub fn evaluate(
        &self,
        eps: &Strain,
        state: &MaterialState,
        dt: f64,
    ) -> Result<MaterialResponse> {
        match (self, state) {
            (Material::LinearElastic { e, nu }, _) => {
                let (stress, tangent) = linear_elastic(eps, *e, *nu)?;
                Ok(MaterialResponse {
                    stress,
                    tangent,
                    state: MaterialState::Stateless,
                })
            }
            (Material::Hencky, _) => {
                let (stress, tangent) = hencky_von_mises(eps);
                Ok(MaterialResponse {
                    stress,
                    tangent,
                    state: MaterialState::Stateless,
                })
            }
            (Material::Viscoelastic(p), MaterialState::Viscoelastic(s)) => {
                let (stress, tangent, ns) = maxwell_viscoelastic_update(eps, s, dt, p)?;
                Ok(MaterialResponse {
                    stress,
                    tangent,
                    state: MaterialState::Viscoelastic(ns),
                })
            }
            (Material::J2(p), MaterialState::Plastic(s)) => {
                let (stress, tangent, ns) = j2_return_map(eps, s, p);
                Ok(MaterialResponse {
                    stress,
                    tangent,
                    state: MaterialState::Plastic(ns),
                })
            }
            _ => Err(crate::Error::Material(
                "material state does not match the material model".into(),
            )),
        }
    }
}

/// Committed and trial history for every quadrature point of a body.
#[derive(Debug, Clone, PartialEq)]
pub struct PointStates {
    pub committed: Vec<MaterialState>,
    pub trial: Vec<MaterialState>,
}

impl PointStates {
    pub fn new(material: &Material, n: usize) -> Self {
        let s = material.initial_state();
        PointStates {
            committed: vec![s.clone(); n],
            trial: vec![s; n],
        }
    }

    pub fn commit(&mut self) {
        self.committed.clone_from(&self.trial);
    }

    pub fn rollback(&mut self) {
        self.trial.clone_from(&self.committed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn models() -> Vec<Material> {
        vec![
            Material::LinearElastic { e: 1000.0, nu: 0.3 },
            Material::Hencky,
            Material::Viscoelastic(ViscoelasticParams {
                e: 1000.0,
                nu: 0.3,
                mu0: 0.3,
                terms: vec![(0.7, 1.0)],
            }),
            Material::J2(J2Params {
                e: 7000.0,
                nu: 0.3,
                sigma_y: 24.3,
            }),
        ]
    }

    /// Central-difference check of the tangent with history frozen.
    fn fd_error(m: &Material, eps: &Strain, state: &MaterialState, dt: f64) -> f64 {
        let c = m.evaluate(eps, state, dt).unwrap().tangent;
        let h = 1e-7 * eps.norm().max(1e-6);
        let mut fd = Tangent::zeros();
        for j in 0..3 {
            let mut ep = *eps;
            let mut em = *eps;
            ep[j] += h;
            em[j] -= h;
            let d = (m.evaluate(&ep, state, dt).unwrap().stress
                - m.evaluate(&em, state, dt).unwrap().stress)
                / (2.0 * h);
            fd.set_column(j, &d);
        }
        (fd - c).norm() / c.norm()
    }

    #[test]
    fn tangents_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for m in models() {
            for _ in 0..20 {
                let scale = if matches!(m, Material::Hencky) {
                    1.0
                } else {
                    0.01
                };
                let eps = Strain::from_fn(|_, _| rng.gen_range(-1.0..1.0) * scale);
                // build some history first
                let mut state = m.initial_state();
                let pre = Strain::from_fn(|_, _| rng.gen_range(-1.0..1.0) * scale);
                state = m.evaluate(&pre, &state, 0.3).unwrap().state;
                let err = fd_error(&m, &eps, &state, 0.7);
                assert!(err < 1e-6, "{m:?}: {err}");
            }
        }
    }

    #[test]
    fn j2_stays_on_or_inside_yield_surface() {
        let p = J2Params {
            e: 7000.0,
            nu: 0.3,
            sigma_y: 24.3,
        };
        let m = Material::J2(p);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut state = m.initial_state();
        for _ in 0..200 {
            let eps = Strain::from_fn(|_, _| rng.gen_range(-0.02..0.02));
            let r = m.evaluate(&eps, &state, 1.0).unwrap();
            let MaterialState::Plastic(ps) = &r.state else {
                panic!()
            };
            // recompute the 3D deviator of the returned stress
            let g = p.e / (2.0 * (1.0 + p.nu));
            let em = strain_to_mandel(&eps);
            let tr = em[0] + em[1] + em[2];
            let dev = Mandel::new(em[0] - tr / 3.0, em[1] - tr / 3.0, em[2] - tr / 3.0, em[3]);
            let s = 2.0 * g * (dev - ps.eps_p);
            assert!(s.norm() <= p.radius() + 1e-10);
            state = r.state;
        }
    }

    #[test]
    fn commit_and_rollback_round_trip() {
        let m = models()[3].clone();
        let mut states = PointStates::new(&m, 3);
        let before = states.committed.clone();
        for i in 0..3 {
            states.trial[i] = m
                .evaluate(&Strain::new(0.01, 0.0, 0.03), &states.committed[i], 1.0)
                .unwrap()
                .state;
        }
        assert_eq!(states.committed, before);
        assert_ne!(states.trial, before);
        states.rollback();
        assert_eq!(states.trial, before);
        states.trial[1] = m
            .evaluate(&Strain::new(0.01, 0.0, 0.03), &states.committed[1], 1.0)
            .unwrap()
            .state;
        states.commit();
        assert_eq!(states.committed, states.trial);
    }

    #[test]
    fn tangent_norm_properties() {
        assert_eq!(tangent_norm(&Tangent::zeros()), 0.0);
        let (_, c) = linear_elastic(&Strain::zeros(), 1000.0, 0.3).unwrap();
        let (_, c2) = linear_elastic(&Strain::zeros(), 3000.0, 0.3).unwrap();
        assert!((tangent_norm(&c2) - 3.0 * tangent_norm(&c)).abs() < 1e-9);
        // regression constant for E=1000, nu=0.3
        assert!((tangent_norm(&c) - 2_106.625_221_173_715_5).abs() < 1e-9);
        for m in models() {
            let r = m
                .evaluate(&Strain::new(1e-3, 0.0, 0.0), &m.initial_state(), 1.0)
                .unwrap();
            assert!(tangent_norm(&r.tangent) > 0.0);
        }
    }
}
