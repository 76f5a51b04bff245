use nalgebra::DVector;

use super::layout::DofLayout;
use super::monomials::ScaledMonomialBasis;
use super::operators::VemElementOperators;
use super::{SpaceConfig, Variant};
use crate::error::Result;
use crate::exec::Execution;
use crate::geometry::{CurvedMesh, Vec2};
use crate::quadrature::RuleCache;

/// A mesh together with its dof layout and element operators.
///
/// For the straight variant the mesh is rectified first (curved edges
/// replaced by chords), so every downstream computation sees the polygonal
/// geometry.
#[derive(Debug)]
pub struct Discretization {
    pub mesh: CurvedMesh,
    /// Curved mesh the straight variant was rectified from.
    pub curved: Option<CurvedMesh>,
    pub config: SpaceConfig,
    pub layout: DofLayout,
    pub operators: Vec<VemElementOperators>,
    pub rules: RuleCache,
}

impl Discretization {
    pub fn new(mesh: &CurvedMesh, config: SpaceConfig, exec: Execution) -> Result<Self> {
        config.validate()?;
        let (mesh, curved) = if config.variant == Variant::Straight && mesh.has_curved_edges() {
            (mesh.rectified()?, Some(mesh.clone()))
        } else {
            (mesh.clone(), None)
        };
        let rules = RuleCache::new();
        let layout = DofLayout::new(&mesh, config.k);
        let operators = exec.try_map(mesh.num_elements(), |e| {
            VemElementOperators::build(&mesh, e, &config, &rules)
        })?;
        Ok(Discretization {
            mesh,
            curved,
            config,
            layout,
            operators,
            rules,
        })
    }

    /// Points where boundary data are sampled: skeleton nodes mapped back to
    /// the curved geometry (same edge parameter) for a rectified mesh.
    pub fn data_points(&self) -> Result<Vec<Vec2>> {
        self.layout
            .skeleton_points(self.curved.as_ref().unwrap_or(&self.mesh))
    }

    pub fn num_dofs(&self) -> usize {
        self.layout.num_dofs()
    }

    /// Local dof vector of element `e` gathered from a global vector.
    pub fn local(&self, e: usize, global: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.operators[e].ndof,
            self.layout.element_dofs(e).into_iter().map(|g| global[g]),
        )
    }

    /// Volume rule of exactness at least `2k` (used for moments of analytic fields and errors).
    pub fn accurate_rule(
        &self,
        e: usize,
    ) -> Result<std::sync::Arc<crate::quadrature::QuadratureRule>> {
        let n = self.config.n_vol().max(2 * self.config.k);
        self.rules.element(&self.mesh, e, n)
    }

    /// Dof interpolant of an analytic field: point values at skeleton nodes,
    /// moments `(1/|E|) ∫_E u m_α` for the interior slots.
    pub fn interpolate(&self, f: impl Fn(Vec2) -> Vec2 + Sync) -> Result<Vec<f64>> {
        let mut u = vec![0.0; self.num_dofs()];
        for (node, p) in self
            .layout
            .skeleton_points(&self.mesh)?
            .into_iter()
            .enumerate()
        {
            let v = f(p);
            u[2 * node] = v.x;
            u[2 * node + 1] = v.y;
        }
        let nm = self.layout.moments_per_element();
        if nm > 0 {
            let k = self.config.k;
            let moments = Execution::default().try_map(
                self.mesh.num_elements(),
                |e| -> Result<Vec<Vec2>> {
                    let el = &self.mesh.elements[e];
                    let basis = ScaledMonomialBasis::new(el.centroid, el.diameter, k - 2);
                    let rule = self.accurate_rule(e)?;
                    let mut acc = vec![Vec2::zeros(); nm];
                    let mut mv = Vec::new();
                    for (p, w) in rule.points.iter().zip(&rule.weights) {
                        basis.eval_into(*p, &mut mv);
                        let v = f(*p) * (*w / el.area);
                        for (a, m) in acc.iter_mut().zip(&mv) {
                            *a += v * *m;
                        }
                    }
                    Ok(acc)
                },
            )?;
            let base = self.layout.num_skeleton_nodes();
            for (e, acc) in moments.into_iter().enumerate() {
                for (a, v) in acc.into_iter().enumerate() {
                    let node = base + e * nm + a;
                    u[2 * node] = v.x;
                    u[2 * node + 1] = v.y;
                }
            }
        }
        Ok(u)
    }
}
