//! Edge traces of the virtual space: the shape functions restricted to one
//! edge, for each edge-space variant.

use nalgebra::Matrix2;

use super::rigid::complex_matrix;
use super::Variant;
use crate::error::{Error, Result};
use crate::geometry::{EdgeParam, Vec2};
use crate::quadrature::{gauss_rule_1d, GaussKind};

/// Trace nodes in the normalized parameter: `0`, the `k−1` interior
/// Gauss–Lobatto nodes, `1`.
pub fn trace_nodes(k: usize) -> Result<Vec<f64>> {
    let r = gauss_rule_1d(k + 1, GaussKind::Lobatto)?;
    Ok(r.points.iter().map(|x| 0.5 * (x + 1.0)).collect())
}

/// Lagrange basis on `nodes` evaluated at `s`.
pub fn lagrange(nodes: &[f64], s: f64) -> Vec<f64> {
    (0..nodes.len())
        .map(|j| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &xi)| (s - xi) / (nodes[j] - xi))
                .product()
        })
        .collect()
}

/// Shape functions of one oriented edge. Node `0` is the start vertex,
/// `1..k` the interior nodes in traversal order, `k` the end vertex. Each
/// node carries a 2×2 matrix-valued function so that the trace reads
/// `u(s) = Σ_j N_j(s) u_j`.
#[derive(Debug, Clone)]
pub struct EdgeTrace {
    pub param: EdgeParam,
    pub variant: Variant,
    pub nodes: Vec<f64>,
    /// `G(x(s_q))` at interior nodes (rigid-enriched variant only).
    g_nodes: Vec<Matrix2<f64>>,
}

impl EdgeTrace {
    pub fn new(param: EdgeParam, variant: Variant, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("polynomial order must be at least 1".into()));
        }
        let nodes = trace_nodes(k)?;
        let mut t = EdgeTrace {
            param,
            variant,
            nodes,
            g_nodes: Vec::new(),
        };
        if variant == Variant::Cv {
            if param.chord() <= 1e-14 * param.length() {
                return Err(Error::InvalidEdge {
                    edge: usize::MAX,
                    reason: "closed edge in rigid-enriched trace".into(),
                });
            }
            t.g_nodes = t.nodes.iter().map(|&s| t.g(s)).collect();
        }
        Ok(t)
    }

    pub fn k(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `G(x) = A(x) B⁻¹`: the rigid interpolant is `(I − G) u_start + G u_end`.
    fn g(&self, s: f64) -> Matrix2<f64> {
        let z0 = self.param.start();
        let d = self.param.end() - z0;
        let zi = self.param.point(s) - z0;
        // complex division zi / d
        let q = Vec2::new(zi.x * d.x + zi.y * d.y, zi.y * d.x - zi.x * d.y) / d.norm_squared();
        complex_matrix(q)
    }

    pub fn basis(&self, s: f64) -> Vec<Matrix2<f64>> {
        let l = lagrange(&self.nodes, s);
        match self.variant {
            Variant::Straight | Variant::Co => {
                l.into_iter().map(|v| Matrix2::identity() * v).collect()
            }
            Variant::Cv => {
                let k = self.k();
                let g = self.g(s);
                let id = Matrix2::identity();
                let mut start = id - g;
                let mut end = g;
                for (gq, &lq) in self.g_nodes[1..k].iter().zip(&l[1..k]) {
                    start -= (id - gq) * lq;
                    end -= gq * lq;
                }
                let mut out = Vec::with_capacity(k + 1);
                out.push(start);
                for &lq in &l[1..k] {
                    out.push(id * lq);
                }
                out.push(end);
                out
            }
        }
    }

    /// Trace value at `s` from the `k+1` nodal values.
    pub fn eval(&self, values: &[Vec2], s: f64) -> Vec2 {
        self.basis(s).iter().zip(values).map(|(n, u)| n * u).sum()
    }

    /// Physical position of trace node `j`.
    pub fn node_point(&self, j: usize) -> Vec2 {
        self.param.point(self.nodes[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn arc() -> EdgeParam {
        EdgeParam::Arc {
            center: Vec2::new(0.2, -0.1),
            radius: 1.3,
            ta: 0.3,
            tb: 1.4,
        }
    }

    fn sample(t: &EdgeTrace, f: impl Fn(Vec2) -> Vec2) -> Vec<Vec2> {
        (0..=t.k()).map(|j| f(t.node_point(j))).collect()
    }

    #[test]
    fn cv_equals_straight_on_affine_edge() {
        let line = EdgeParam::Line {
            p0: Vec2::new(0.1, 0.2),
            p1: Vec2::new(1.7, -0.4),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..=4 {
            let cv = EdgeTrace::new(line, Variant::Cv, k).unwrap();
            let st = EdgeTrace::new(line, Variant::Straight, k).unwrap();
            let vals: Vec<Vec2> = (0..=k)
                .map(|_| Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            for _ in 0..20 {
                let s = rng.gen::<f64>();
                assert!((cv.eval(&vals, s) - st.eval(&vals, s)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cv_reproduces_rigid_motions_on_arcs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rigid = |p: Vec2| Vec2::new(0.3 - p.y, -1.1 + p.x);
        for k in 1..=4 {
            let t = EdgeTrace::new(arc(), Variant::Cv, k).unwrap();
            let vals = sample(&t, rigid);
            for _ in 0..20 {
                let s = rng.gen::<f64>();
                assert!((t.eval(&vals, s) - rigid(t.param.point(s))).norm() < 1e-13);
            }
            // mapped polynomials are not rigid on arcs
            let co = EdgeTrace::new(arc(), Variant::Co, k).unwrap();
            let s = 0.37;
            assert!((co.eval(&vals, s) - rigid(co.param.point(s))).norm() > 1e-10);
        }
    }

    #[test]
    fn co_reproduces_mapped_polynomials() {
        let e = EdgeParam::Arc {
            center: Vec2::zeros(),
            radius: 1.0,
            ta: 0.0,
            tb: PI / 3.0,
        };
        for k in 1..=4 {
            let t = EdgeTrace::new(e, Variant::Co, k).unwrap();
            let f = |s: f64| {
                Vec2::new(
                    s.powi(k as i32) - 0.5 * s,
                    1.0 + s * s.min(1.0) * if k >= 2 { 1.0 } else { 0.0 },
                )
            };
            let vals: Vec<Vec2> = t.nodes.iter().map(|&s| f(s)).collect();
            for s in [0.1, 0.45, 0.9] {
                assert!((t.eval(&vals, s) - f(s)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn nodes_are_partition_of_unity() {
        for variant in [Variant::Co, Variant::Cv] {
            let t = EdgeTrace::new(arc(), variant, 3).unwrap();
            let sum: Matrix2<f64> = t.basis(0.42).iter().sum();
            assert!((sum - Matrix2::identity()).norm() < 1e-13);
        }
    }
}
