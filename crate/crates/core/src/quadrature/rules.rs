//! Edge and element quadrature rules.

use std::f64::consts::PI;

use super::gauss::{gauss_rule_1d, GaussKind};
use crate::error::{Error, Result};
use crate::geometry::{point_in_region, EdgeParam, Vec2};

/// Where a rule lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleDomain {
    Reference,
    Edge(usize),
    Element(usize),
    Unspecified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<Vec2>,
    pub weights: Vec<f64>,
    /// Polynomial degree the rule is built to integrate exactly.
    pub exactness: usize,
    pub domain: RuleDomain,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(Vec2) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(*p))
            .sum()
    }

    /// `x,y,w` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,w\n");
        for (p, w) in self.points.iter().zip(&self.weights) {
            s.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", p.x, p.y, w));
        }
        s
    }
}

/// Rule on one (oriented) edge: physical points with arclength weights, plus
/// the normalized parameters and the unit normal (outward for a
/// counterclockwise element loop) at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRule {
    pub params: Vec<f64>,
    pub rule: QuadratureRule,
    pub normals: Vec<Vec2>,
}

/// Gauss rule with `npts` nodes in the edge parameter.
pub fn edge_rule(edge: &EdgeParam, npts: usize, kind: GaussKind) -> Result<EdgeRule> {
    let r = gauss_rule_1d(npts, kind)?;
    let mut params = Vec::with_capacity(npts);
    let mut points = Vec::with_capacity(npts);
    let mut weights = Vec::with_capacity(npts);
    let mut normals = Vec::with_capacity(npts);
    for (s, w) in r.mapped(0.0, 1.0) {
        let d = edge.derivative(s);
        let speed = d.norm();
        params.push(s);
        points.push(edge.point(s));
        weights.push(w * speed);
        normals.push(Vec2::new(d.y, -d.x) / speed);
    }
    let exactness = r.exactness();
    Ok(EdgeRule {
        params,
        rule: QuadratureRule {
            points,
            weights,
            exactness,
            domain: RuleDomain::Reference,
        },
        normals,
    })
}

/// Safety increment on the 1D point count along arcs, which are not
/// polynomial in the parameter.
pub const ARC_DEGREE_INCREMENT: usize = 8;
/// Arcs are split into pieces no wider than this before the fan rule is applied.
pub const MAX_ARC_PIECE: f64 = PI / 24.0;

fn sub_edge(e: &EdgeParam, s0: f64, s1: f64) -> EdgeParam {
    match *e {
        EdgeParam::Line { .. } => EdgeParam::Line {
            p0: e.point(s0),
            p1: e.point(s1),
        },
        EdgeParam::Arc {
            center,
            radius,
            ta,
            tb,
        } => EdgeParam::Arc {
            center,
            radius,
            ta: ta + s0 * (tb - ta),
            tb: ta + s1 * (tb - ta),
        },
    }
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Checks that every boundary point is seen from `c` with positive
/// orientation (star-shapedness sampled densely along each edge).
fn star_shaped_from(boundary: &[EdgeParam], c: Vec2) -> bool {
    boundary.iter().all(|e| {
        let ns = if e.is_curved() { 32 } else { 2 };
        (0..=ns).all(|j| {
            let s = j as f64 / ns as f64;
            let jac = cross(e.point(s) - c, e.derivative(s));
            // vertices on the supporting line of a straight edge are degenerate
            jac > 1e-12 * e.derivative(s).norm_squared()
        })
    })
}

/// Fan rule: each edge is joined to a star point `c` and integrated over the
/// collapsed map `x(u, v) = c + v (γ(u) − c)`. Exact to degree `n` on
/// straight sides; arcs use [`ARC_DEGREE_INCREMENT`] extra points and
/// subdivision.
pub fn element_rule(boundary: &[EdgeParam], centroid: Vec2, n: usize) -> Result<QuadratureRule> {
    // centroid first, then points towards each vertex and each edge midpoint
    let mut candidates = vec![centroid];
    for t in [0.5, 0.25, 0.75] {
        for e in boundary {
            candidates.push(centroid + t * (e.start() - centroid));
            candidates.push(centroid + t * (e.point(0.5) - centroid));
        }
    }
    let star = candidates
        .into_iter()
        .find(|&c| star_shaped_from(boundary, c))
        .ok_or_else(|| {
            Error::Quadrature("element is not star-shaped with respect to any trial point".into())
        })?;
    let rv = gauss_rule_1d((n + 2).div_ceil(2), GaussKind::Legendre)?; // carries the extra factor v
    let ru_straight = gauss_rule_1d((n + 1).div_ceil(2), GaussKind::Legendre)?;
    let ru_arc = gauss_rule_1d(
        (n + 1 + ARC_DEGREE_INCREMENT).div_ceil(2),
        GaussKind::Legendre,
    )?;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for e in boundary {
        let (pieces, ru) = if e.is_curved() {
            (
                (e.turning() / MAX_ARC_PIECE).ceil().max(1.0) as usize,
                &ru_arc,
            )
        } else {
            (1, &ru_straight)
        };
        for piece in 0..pieces {
            let g = sub_edge(
                e,
                piece as f64 / pieces as f64,
                (piece + 1) as f64 / pieces as f64,
            );
            for (u, wu) in ru.mapped(0.0, 1.0) {
                let gu = g.point(u);
                let jac = cross(gu - star, g.derivative(u));
                if jac <= 0.0 {
                    return Err(Error::Quadrature("negative fan Jacobian".into()));
                }
                for (v, wv) in rv.mapped(0.0, 1.0) {
                    points.push(star + v * (gu - star));
                    weights.push(wu * wv * v * jac);
                }
            }
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        exactness: n,
        domain: RuleDomain::Unspecified,
    })
}

/// True when every point of `rule` is strictly inside the region.
pub fn points_inside(rule: &QuadratureRule, boundary: &[EdgeParam]) -> bool {
    rule.points.iter().all(|&p| point_in_region(boundary, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;
    use crate::quadrature::boundary_moments_scaled;

    fn square() -> Vec<EdgeParam> {
        let v = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        (0..4)
            .map(|i| EdgeParam::Line {
                p0: v[i],
                p1: v[(i + 1) % 4],
            })
            .collect()
    }

    fn annulus_cell() -> Vec<EdgeParam> {
        let o = Vec2::zeros();
        vec![
            EdgeParam::Line {
                p0: Vec2::new(2.0, 0.0),
                p1: Vec2::new(4.0, 0.0),
            },
            EdgeParam::Arc {
                center: o,
                radius: 4.0,
                ta: 0.0,
                tb: PI / 2.0,
            },
            EdgeParam::Line {
                p0: Vec2::new(0.0, 4.0),
                p1: Vec2::new(0.0, 2.0),
            },
            EdgeParam::Arc {
                center: o,
                radius: 2.0,
                ta: PI / 2.0,
                tb: 0.0,
            },
        ]
    }

    #[test]
    fn edge_rule_measures() {
        let e = EdgeParam::Line {
            p0: Vec2::zeros(),
            p1: Vec2::new(3.0, 4.0),
        };
        for n in 2..6 {
            assert!(
                (edge_rule(&e, n, GaussKind::Lobatto).unwrap().rule.measure() - 5.0).abs() < 1e-13
            );
        }
        let arc = EdgeParam::Arc {
            center: Vec2::zeros(),
            radius: 1.0,
            ta: 0.0,
            tb: PI / 2.0,
        };
        let r = edge_rule(&arc, 8, GaussKind::Legendre).unwrap();
        assert!((r.rule.measure() - PI / 2.0).abs() < 1e-12);
        assert!((r.rule.integrate(|p| p.x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_second_moment() {
        let r = element_rule(&square(), Vec2::new(0.5, 0.5), 2).unwrap();
        assert!((r.integrate(|p| p.x * p.x) - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn curved_cell_matches_moment_oracle() {
        let b = annulus_cell();
        let c = crate::geometry::element_measures(&b).unwrap();
        for n in 0..=6 {
            let r = element_rule(&b, c.centroid, n).unwrap();
            assert!(points_inside(&r, &b));
            let m = boundary_moments_scaled(&b, c.centroid, c.diameter, n).unwrap();
            let mut vals = Vec::new();
            let mut got = vec![0.0; poly::count(n)];
            for (p, w) in r.points.iter().zip(&r.weights) {
                poly::eval_all(
                    n,
                    (p.x - c.centroid.x) / c.diameter,
                    (p.y - c.centroid.y) / c.diameter,
                    &mut vals,
                );
                for (g, v) in got.iter_mut().zip(&vals) {
                    *g += w * v;
                }
            }
            let d2 = c.diameter * c.diameter;
            for (g, e) in got.iter().zip(&m.values) {
                assert!(
                    (g - e * d2).abs() <= 1e-11 * c.area,
                    "n={n}: {g} vs {}",
                    e * d2
                );
            }
        }
    }
}
