//! Per-element projectors: the strain projector onto symmetric tensor
//! polynomials of degree k−1 and the least-squares dof projector onto vector
//! polynomials of degree k.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use log::warn;
use nalgebra::{DMatrix, DVector, Matrix2};

use super::monomials::ScaledMonomialBasis;
use super::trace::EdgeTrace;
use super::SpaceConfig;
use crate::error::{Error, Result};
use crate::geometry::{CurvedMesh, Vec2};
use crate::poly;
use crate::quadrature::{edge_rule, EdgeRule, GaussKind, QuadratureRule, RuleCache};

/// Orthonormal basis of symmetric 2×2 tensors: `e1⊗e1`, `e2⊗e2`,
/// `(e1⊗e2 + e2⊗e1)/√2`.
pub fn sym_basis(c: usize) -> Matrix2<f64> {
    match c {
        0 => Matrix2::new(1.0, 0.0, 0.0, 0.0),
        1 => Matrix2::new(0.0, 0.0, 0.0, 1.0),
        _ => Matrix2::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0),
    }
}

/// Boundary evaluation data of one element edge.
#[derive(Debug, Clone)]
pub struct EdgeTable {
    pub trace: EdgeTrace,
    pub rule: EdgeRule,
    /// `values[point][j]`: trace shape matrix of trace node `j` at each rule point.
    pub values: Vec<Vec<Matrix2<f64>>>,
    /// Local node index of every trace node.
    pub local_nodes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct VemElementOperators {
    pub element: usize,
    pub k: usize,
    pub ndof: usize,
    pub area: f64,
    /// Physical positions of the local skeleton nodes (vertices, then edge interiors).
    pub node_points: Vec<Vec2>,
    /// Scaled monomials of degree k−1 carrying the strain projection.
    pub strain_basis: ScaledMonomialBasis,
    /// Scaled monomials of degree k for the dof projector.
    pub poly_basis: ScaledMonomialBasis,
    /// Dofs → strain coefficients, rows `c·nb + β` for tensor `c` and monomial `β`.
    pub pi_eps: DMatrix<f64>,
    /// Dof vectors of the vector monomials (columns `d·n_k + α`).
    pub poly_dofs: DMatrix<f64>,
    /// Dofs → coefficients of the nearest vector polynomial.
    pub poly_of_dofs: DMatrix<f64>,
    /// `I − Π` acting on dof vectors.
    pub stab_residual: DMatrix<f64>,
    pub rule: Arc<QuadratureRule>,
    /// Strain–displacement matrices (engineering Voigt, 3 × ndof) at each volume point.
    pub b_at_points: Vec<DMatrix<f64>>,
    pub edges: Vec<EdgeTable>,
    pub gram_condition: f64,
}

impl VemElementOperators {
    pub fn build(
        mesh: &CurvedMesh,
        id: usize,
        config: &SpaceConfig,
        cache: &RuleCache,
    ) -> Result<Self> {
        let k = config.k;
        let el = &mesh.elements[id];
        let boundary = mesh.element_boundary(id);
        let nv = el.vertices.len();
        let per_edge = k - 1;
        let nm = poly::count_signed(k as isize - 2);
        let nnodes = nv + nv * per_edge + nm;
        let ndof = 2 * nnodes;
        let moment_node = |a: usize| nv + nv * per_edge + a;
        let op_err = |reason: String| Error::Operator {
            element: id,
            reason,
        };

        let rule = cache.element(mesh, id, config.n_vol())?;
        let strain_basis = ScaledMonomialBasis::new(el.centroid, el.diameter, k - 1);
        let poly_basis = ScaledMonomialBasis::new(el.centroid, el.diameter, k);
        let nb = strain_basis.len();

        let mut node_points = Vec::with_capacity(nv * (1 + per_edge));
        node_points.extend(el.vertices.iter().map(|&v| mesh.vertices[v]));
        let mut edges = Vec::with_capacity(nv);
        for (i, param) in boundary.iter().enumerate() {
            let trace = EdgeTrace::new(*param, config.variant, k)
                .map_err(|e| op_err(format!("edge {}: {e}", el.edges[i].edge)))?;
            for q in 1..k {
                node_points.push(trace.node_point(q));
            }
            let rule = edge_rule(param, config.n_edge(), GaussKind::Lobatto)?;
            let values = rule.params.iter().map(|&s| trace.basis(s)).collect();
            let mut local_nodes = vec![i];
            local_nodes.extend((0..per_edge).map(|q| nv + i * per_edge + q));
            local_nodes.push((i + 1) % nv);
            edges.push(EdgeTable {
                trace,
                rule,
                values,
                local_nodes,
            });
        }

        // Gram matrix of the strain basis
        let mut gram = DMatrix::zeros(nb, nb);
        let mut mv = Vec::new();
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            strain_basis.eval_into(*p, &mut mv);
            for a in 0..nb {
                for b in 0..nb {
                    gram[(a, b)] += w * mv[a] * mv[b];
                }
            }
        }
        let sv = gram.clone().svd(false, false).singular_values;
        let (smax, smin): (f64, f64) = (sv.max(), sv.min());
        if !(smin > 0.0) || !smin.is_finite() {
            return Err(op_err("singular strain Gram matrix".into()));
        }
        let gram_condition = smax / smin;
        if gram_condition > 1e12 {
            warn!("element {id}: strain Gram condition number {gram_condition:.3e}");
        }

        // right-hand sides: ∮ φ·(P n) − ∫ φ·div P
        let mut rhs = DMatrix::zeros(3 * nb, ndof);
        let tensors: Vec<Matrix2<f64>> = (0..3).map(sym_basis).collect();
        for t in &edges {
            let r = &t.rule;
            for (qp, (&x, &w)) in r.rule.points.iter().zip(&r.rule.weights).enumerate() {
                strain_basis.eval_into(x, &mut mv);
                let n = r.normals[qp];
                for (c, tc) in tensors.iter().enumerate() {
                    let tn = tc * n;
                    for (j, nmat) in t.values[qp].iter().enumerate() {
                        let ln = t.local_nodes[j];
                        // (N e_d)·(T n) = (Nᵀ T n)_d
                        let v = nmat.transpose() * tn;
                        for d in 0..2 {
                            let f = w * v[d];
                            if f != 0.0 {
                                for b in 0..nb {
                                    rhs[(c * nb + b, 2 * ln + d)] += f * mv[b];
                                }
                            }
                        }
                    }
                }
            }
        }
        if k >= 2 {
            for (b, (ea, eb)) in poly::exponents(k - 1).into_iter().enumerate() {
                // ∂x m_(a,b) = (a/h) m_(a−1,b), ∂y m_(a,b) = (b/h) m_(a,b−1)
                let mut grads: Vec<(usize, usize, f64)> = Vec::new(); // (direction, alpha, coefficient)
                if ea > 0 {
                    grads.push((0, poly::index(ea - 1, eb), ea as f64 / el.diameter));
                }
                if eb > 0 {
                    grads.push((1, poly::index(ea, eb - 1), eb as f64 / el.diameter));
                }
                for (c, tc) in tensors.iter().enumerate() {
                    for &(l, alpha, coef) in &grads {
                        for d in 0..2 {
                            rhs[(c * nb + b, 2 * moment_node(alpha) + d)] -=
                                el.area * tc[(d, l)] * coef;
                        }
                    }
                }
            }
        }
        let qr = gram.clone().col_piv_qr();
        let mut pi_eps = DMatrix::zeros(3 * nb, ndof);
        for c in 0..3 {
            let block = rhs.rows(c * nb, nb).into_owned();
            let sol = qr
                .solve(&block)
                .ok_or_else(|| op_err("strain Gram solve failed".into()))?;
            pi_eps.rows_mut(c * nb, nb).copy_from(&sol);
        }

        // dof projector
        let nk = poly_basis.len();
        let mut poly_dofs = DMatrix::zeros(ndof, 2 * nk);
        for (ln, &x) in node_points.iter().enumerate() {
            poly_basis.eval_into(x, &mut mv);
            for a in 0..nk {
                for d in 0..2 {
                    poly_dofs[(2 * ln + d, d * nk + a)] = mv[a];
                }
            }
        }
        if nm > 0 {
            let low = ScaledMonomialBasis::new(el.centroid, el.diameter, k - 2);
            let mut lv = Vec::new();
            let mut mom = DMatrix::zeros(nm, nk);
            for (p, w) in rule.points.iter().zip(&rule.weights) {
                poly_basis.eval_into(*p, &mut mv);
                low.eval_into(*p, &mut lv);
                for g in 0..nm {
                    for a in 0..nk {
                        mom[(g, a)] += w * lv[g] * mv[a] / el.area;
                    }
                }
            }
            for g in 0..nm {
                for a in 0..nk {
                    for d in 0..2 {
                        poly_dofs[(2 * moment_node(g) + d, d * nk + a)] = mom[(g, a)];
                    }
                }
            }
        }
        let qr = poly_dofs.clone().qr();
        let (q, r) = (qr.q(), qr.r());
        let rd = r.diagonal().map(f64::abs);
        if rd.min() <= 1e-12 * rd.max() {
            return Err(op_err("rank-deficient polynomial dof matrix".into()));
        }
        let rinv = r
            .try_inverse()
            .ok_or_else(|| op_err("rank-deficient polynomial dof matrix".into()))?;
        let poly_of_dofs = rinv * q.transpose();
        let projector = &q * q.transpose();
        let stab_residual = DMatrix::identity(ndof, ndof) - projector;

        let b_at_points = rule
            .points
            .iter()
            .map(|&x| strain_matrix(&strain_basis, &pi_eps, x))
            .collect();

        Ok(VemElementOperators {
            element: id,
            k,
            ndof,
            area: el.area,
            node_points,
            strain_basis,
            poly_basis,
            pi_eps,
            poly_dofs,
            poly_of_dofs,
            stab_residual,
            rule,
            b_at_points,
            edges,
            gram_condition,
        })
    }

    /// Strain–displacement matrix at an arbitrary point.
    pub fn b_at(&self, x: Vec2) -> DMatrix<f64> {
        strain_matrix(&self.strain_basis, &self.pi_eps, x)
    }

    /// Projected strain `(εxx, εyy, γxy)` at `x` from local dofs.
    pub fn strain_at(&self, x: Vec2, local: &DVector<f64>) -> [f64; 3] {
        let e = self.b_at(x) * local;
        [e[0], e[1], e[2]]
    }

    /// Dof projection `Π u` of a local dof vector.
    pub fn project(&self, local: &DVector<f64>) -> DVector<f64> {
        local - &self.stab_residual * local
    }
}

/// `B(x) = S(x) Π^ε` where `S` maps strain coefficients to engineering Voigt.
fn strain_matrix(basis: &ScaledMonomialBasis, pi_eps: &DMatrix<f64>, x: Vec2) -> DMatrix<f64> {
    let nb = basis.len();
    let m = basis.eval(x);
    let ndof = pi_eps.ncols();
    let mut b = DMatrix::zeros(3, ndof);
    for (c, scale) in [(0usize, 1.0), (1, 1.0), (2, std::f64::consts::SQRT_2)] {
        for (beta, mb) in m.iter().enumerate().take(nb) {
            let f = scale * mb;
            if f != 0.0 {
                let row = pi_eps.row(c * nb + beta);
                for j in 0..ndof {
                    b[(c, j)] += f * row[j];
                }
            }
        }
    }
    b
}
