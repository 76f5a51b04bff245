//! External loads and prescribed displacements.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::config::BoundaryConditions;
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::quadrature::{edge_rule, GaussKind};
use crate::spaces::{Discretization, ScaledMonomialBasis};

/// Full-load external force vector (body force and tractions).
pub fn external_load(disc: &Discretization, bcs: &BoundaryConditions) -> Result<Vec<f64>> {
    let mut f = vec![0.0; disc.num_dofs()];
    let k = disc.config.k;
    if let Some(body) = &bcs.body_force {
        for (e, el) in disc.mesh.elements.iter().enumerate() {
            let rule = disc.accurate_rule(e)?;
            let dofs = disc.layout.element_dofs(e);
            if k == 1 {
                // P0 projection, distributed by the vertex rule
                let mean = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(p, w)| body(*p) * *w)
                    .sum::<Vec2>()
                    / el.area;
                let share = el.area / el.vertices.len() as f64;
                for i in 0..el.vertices.len() {
                    f[dofs[2 * i]] += mean.x * share;
                    f[dofs[2 * i + 1]] += mean.y * share;
                }
            } else {
                // f_h = Π_q f with q = max(k−2, 1): the P_{k−2} part acts through
                // the moment dofs, the remainder (⟂ P_{k−2}, only for k = 2) is
                // tested against the dof projection Π v
                let ops = &disc.operators[e];
                let basis = ScaledMonomialBasis::new(el.centroid, el.diameter, (k - 2).max(1));
                let n1 = basis.len();
                let n2 = ScaledMonomialBasis::new(el.centroid, el.diameter, k - 2).len();
                let mut gram = DMatrix::<f64>::zeros(n1, n1);
                let mut rhs = DMatrix::<f64>::zeros(n1, 2);
                let mut mv = Vec::new();
                for (p, w) in rule.points.iter().zip(&rule.weights) {
                    basis.eval_into(*p, &mut mv);
                    let fv = body(*p);
                    for a in 0..n1 {
                        rhs[(a, 0)] += w * fv.x * mv[a];
                        rhs[(a, 1)] += w * fv.y * mv[a];
                        for b in 0..n1 {
                            gram[(a, b)] += w * mv[a] * mv[b];
                        }
                    }
                }
                let singular = || Error::Operator {
                    element: e,
                    reason: "singular load projection".into(),
                };
                let c_hi = gram.clone().lu().solve(&rhs).ok_or_else(singular)?;
                let g_lo = gram.view((0, 0), (n2, n2)).into_owned();
                let c_lo = g_lo
                    .lu()
                    .solve(&rhs.rows(0, n2).into_owned())
                    .ok_or_else(singular)?;
                let first = dofs.len() - 2 * n2;
                for a in 0..n2 {
                    f[dofs[first + 2 * a]] += el.area * c_lo[(a, 0)];
                    f[dofs[first + 2 * a + 1]] += el.area * c_lo[(a, 1)];
                }
                if n1 == n2 {
                    continue;
                }
                let mut diff = c_hi;
                for a in 0..n2 {
                    diff[(a, 0)] -= c_lo[(a, 0)];
                    diff[(a, 1)] -= c_lo[(a, 1)];
                }
                let nk = ops.poly_basis.len();
                let mut pk = Vec::new();
                let mut g = nalgebra::DVector::<f64>::zeros(2 * nk);
                for (p, w) in rule.points.iter().zip(&rule.weights) {
                    basis.eval_into(*p, &mut mv);
                    ops.poly_basis.eval_into(*p, &mut pk);
                    let rx: f64 = (0..n1).map(|a| diff[(a, 0)] * mv[a]).sum();
                    let ry: f64 = (0..n1).map(|a| diff[(a, 1)] * mv[a]).sum();
                    for a in 0..nk {
                        g[a] += w * rx * pk[a];
                        g[nk + a] += w * ry * pk[a];
                    }
                }
                let fl = ops.poly_of_dofs.transpose() * g;
                for (i, d) in dofs.iter().enumerate() {
                    f[*d] += fl[i];
                }
            }
        }
    }
    for t in &bcs.tractions {
        let edges = disc.mesh.group(&t.group)?;
        let npts = disc.config.n_edge().max(k + 5);
        for &edge in edges {
            let owners = disc.mesh.edge_elements(edge);
            if owners.len() != 1 {
                return Err(Error::BoundaryCondition(format!(
                    "traction group '{}' contains interior edge {edge}",
                    t.group
                )));
            }
            let e = owners[0];
            let el = &disc.mesh.elements[e];
            let local = el.edges.iter().position(|o| o.edge == edge).unwrap();
            let table = &disc.operators[e].edges[local];
            let rule = edge_rule(&table.trace.param, npts, GaussKind::Legendre)?;
            let dofs = disc.layout.element_dofs(e);
            for (q, &s) in rule.params.iter().enumerate() {
                let tr = (t.traction)(rule.rule.points[q], rule.normals[q]);
                let w = rule.rule.weights[q];
                for (j, n) in table.trace.basis(s).iter().enumerate() {
                    let v = n.transpose() * tr * w;
                    let ln = table.local_nodes[j];
                    f[dofs[2 * ln]] += v.x;
                    f[dofs[2 * ln + 1]] += v.y;
                }
            }
        }
    }
    Ok(f)
}

/// Constrained dofs with their full-load prescribed values.
#[derive(Debug, Clone, Default)]
pub struct Constraints {
    pub values: BTreeMap<usize, f64>,
}

impl Constraints {
    pub fn build(disc: &Discretization, bcs: &BoundaryConditions) -> Result<Self> {
        let points = disc.data_points()?;
        let mut values = BTreeMap::new();
        for bc in &bcs.dirichlet {
            let edges = disc.mesh.group(&bc.group)?;
            for node in disc.layout.nodes_on_edges(&disc.mesh, edges) {
                let v = (bc.value)(points[node]);
                for c in 0..2 {
                    if !bc.components[c] {
                        continue;
                    }
                    let dof = 2 * node + c;
                    if let Some(old) = values.insert(dof, v[c]) {
                        let tol = 1e-12 * old.abs().max(v[c].abs()).max(1e-300);
                        if (old - v[c]).abs() > tol && (old - v[c]).abs() > 1e-14 {
                            return Err(Error::BoundaryCondition(format!(
                                "conflicting prescriptions at node {node} component {c}: {old} vs {} (group '{}')",
                                v[c], bc.group
                            )));
                        }
                    }
                }
            }
        }
        Ok(Constraints { values })
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Free-dof numbering (`None` for constrained dofs) and the free count.
    pub fn free_map(&self, ndof: usize) -> (Vec<Option<usize>>, usize) {
        let mut map = vec![None; ndof];
        let mut n = 0;
        for (d, m) in map.iter_mut().enumerate() {
            if !self.values.contains_key(&d) {
                *m = Some(n);
                n += 1;
            }
        }
        (map, n)
    }
}
