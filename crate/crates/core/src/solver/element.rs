//! Element internal force and tangent: consistency part through the strain
//! projector plus dof-wise stabilization of `(I − Π) u`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::materials::{tangent_norm, Material, MaterialState, Strain, Stress};
use crate::spaces::VemElementOperators;

/// Consistency contribution of one element.
#[derive(Debug, Clone)]
pub struct ElementEval {
    pub force: DVector<f64>,
    pub tangent: DMatrix<f64>,
    pub trial_states: Vec<MaterialState>,
    pub stresses: Vec<Stress>,
    /// Tangent norm at the volume point nearest the centroid.
    pub center_tangent_norm: f64,
}

/// Index of the volume point closest to the element centroid.
pub fn center_point(ops: &VemElementOperators) -> usize {
    let c = ops.strain_basis.center;
    (0..ops.rule.len())
        .min_by(|&a, &b| {
            (ops.rule.points[a] - c)
                .norm()
                .partial_cmp(&(ops.rule.points[b] - c).norm())
                .unwrap()
        })
        .unwrap_or(0)
}

pub fn consistency(
    ops: &VemElementOperators,
    u: &DVector<f64>,
    material: &Material,
    committed: &[MaterialState],
    dt: f64,
    center: usize,
) -> Result<ElementEval> {
    let n = ops.ndof;
    let mut force = DVector::zeros(n);
    let mut tangent = DMatrix::zeros(n, n);
    let mut trial_states = Vec::with_capacity(committed.len());
    let mut stresses = Vec::with_capacity(committed.len());
    let mut center_tangent_norm = 0.0;
    for (q, (b, w)) in ops.b_at_points.iter().zip(&ops.rule.weights).enumerate() {
        let e = b * u;
        let eps = Strain::new(e[0], e[1], e[2]);
        let r = material
            .evaluate(&eps, &committed[q], dt)
            .map_err(|err| Error::MaterialPoint {
                element: ops.element,
                point: q,
                reason: err.to_string(),
            })?;
        if !r.stress.iter().all(|v| v.is_finite()) {
            return Err(Error::MaterialPoint {
                element: ops.element,
                point: q,
                reason: "non-finite stress".into(),
            });
        }
        force.gemv_tr(*w, b, &DVector::from_column_slice(r.stress.as_slice()), 1.0);
        let cb = DMatrix::from_column_slice(3, 3, r.tangent.as_slice()) * b;
        tangent.gemm_tr(*w, b, &cb, 1.0);
        if q == center {
            center_tangent_norm = tangent_norm(&r.tangent);
        }
        stresses.push(r.stress);
        trial_states.push(r.state);
    }
    Ok(ElementEval {
        force,
        tangent,
        trial_states,
        stresses,
        center_tangent_norm,
    })
}

/// D-recipe weights `α_i = max(α, K_ii)` from a converged consistency tangent.
pub fn drecipe_weights(eval: &ElementEval) -> Vec<f64> {
    let alpha = eval.center_tangent_norm;
    (0..eval.tangent.nrows())
        .map(|i| alpha.max(eval.tangent[(i, i)]))
        .collect()
}

/// `(I − Π)ᵀ diag(α) (I − Π)`.
pub fn stabilization_matrix(ops: &VemElementOperators, weights: &[f64]) -> DMatrix<f64> {
    let r = &ops.stab_residual;
    let mut wr = r.clone();
    for (i, w) in weights.iter().enumerate() {
        wr.row_mut(i).scale_mut(*w);
    }
    r.transpose() * wr
}
