use super::{EdgeParam, Vec2};
use crate::error::{Error, Result};
use crate::quadrature::{boundary_moments_scaled, integrate_adaptive};

/// Centroid, diameter and area of a (possibly curved) element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMeasures {
    pub centroid: Vec2,
    pub diameter: f64,
    pub area: f64,
}

/// Samples taken strictly inside each curved edge when estimating diameters.
const DIAMETER_SAMPLES: usize = 8;

/// Curvilinear length `∫‖γ'‖`; exact chord for straight edges.
pub fn arc_length(edge: &EdgeParam) -> Result<f64> {
    match edge {
        EdgeParam::Line { p0, p1 } => Ok((p1 - p0).norm()),
        EdgeParam::Arc { .. } => integrate_adaptive(|s| edge.derivative(s).norm(), 0.0, 1.0, 1e-13),
    }
}

/// Measures of the region bounded by the counterclockwise loop `boundary`.
///
/// Area and centroid come from boundary moments; the diameter is the largest
/// pairwise distance among vertices and interior samples of curved edges.
pub fn element_measures(boundary: &[EdgeParam]) -> Result<ElementMeasures> {
    let origin = boundary
        .first()
        .ok_or_else(|| Error::InvalidMesh("empty element boundary".into()))?
        .start();
    let mut samples = Vec::new();
    for e in boundary {
        samples.push(e.start());
        if e.is_curved() {
            for j in 1..=DIAMETER_SAMPLES {
                samples.push(e.point(j as f64 / (DIAMETER_SAMPLES + 1) as f64));
            }
        }
    }
    let mut diameter: f64 = 0.0;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            diameter = diameter.max((samples[i] - samples[j]).norm());
        }
    }
    if diameter <= 0.0 {
        return Err(Error::InvalidMesh("element with zero diameter".into()));
    }
    let m = boundary_moments_scaled(boundary, origin, diameter, 1)?;
    let area = m.get(0, 0) * diameter * diameter;
    if !(area > 0.0) {
        return Err(Error::InvalidMesh(format!(
            "non-positive element area {area:e}"
        )));
    }
    let centroid = origin + diameter * Vec2::new(m.get(1, 0), m.get(0, 1)) / m.get(0, 0);
    Ok(ElementMeasures {
        centroid,
        diameter,
        area,
    })
}

/// Winding-number point-in-region test for a curved loop; arcs are
/// approximated by fine polylines (accurate far from the boundary only).
pub fn point_in_region(boundary: &[EdgeParam], p: Vec2) -> bool {
    let mut poly = Vec::new();
    for e in boundary {
        let nseg = if e.is_curved() { 64 } else { 1 };
        for j in 0..nseg {
            poly.push(e.point(j as f64 / nseg as f64));
        }
    }
    let mut winding = 0i32;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && cross > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && cross < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn square() -> Vec<EdgeParam> {
        let p = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        (0..4)
            .map(|i| EdgeParam::Line {
                p0: p[i],
                p1: p[(i + 1) % 4],
            })
            .collect()
    }

    #[test]
    fn unit_square() {
        let m = element_measures(&square()).unwrap();
        assert_abs_diff_eq!(m.area, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m.centroid, Vec2::new(0.5, 0.5), epsilon = 1e-14);
        assert_abs_diff_eq!(m.diameter, 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn disk_as_four_arcs() {
        let b: Vec<_> = (0..4)
            .map(|i| EdgeParam::Arc {
                center: Vec2::zeros(),
                radius: 1.0,
                ta: i as f64 * PI / 2.0,
                tb: (i + 1) as f64 * PI / 2.0,
            })
            .collect();
        let m = element_measures(&b).unwrap();
        assert_abs_diff_eq!(m.area, PI, epsilon = 1e-12);
        assert_abs_diff_eq!(m.centroid, Vec2::zeros(), epsilon = 1e-12);
        assert!((m.diameter - 2.0).abs() < 0.02);
    }

    #[test]
    fn quarter_annulus_area() {
        let c = Vec2::zeros();
        let b = vec![
            EdgeParam::Line {
                p0: Vec2::new(2.0, 0.0),
                p1: Vec2::new(4.0, 0.0),
            },
            EdgeParam::Arc {
                center: c,
                radius: 4.0,
                ta: 0.0,
                tb: PI / 2.0,
            },
            EdgeParam::Line {
                p0: Vec2::new(0.0, 4.0),
                p1: Vec2::new(0.0, 2.0),
            },
            EdgeParam::Arc {
                center: c,
                radius: 2.0,
                ta: PI / 2.0,
                tb: 0.0,
            },
        ];
        let m = element_measures(&b).unwrap();
        assert_abs_diff_eq!(m.area, 3.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn clockwise_rejected() {
        let b: Vec<_> = square().iter().rev().map(|e| e.reversed()).collect();
        assert!(element_measures(&b).is_err());
    }

    #[test]
    fn arc_length_quadrature() {
        let q = EdgeParam::Arc {
            center: Vec2::zeros(),
            radius: 1.0,
            ta: 0.0,
            tb: PI / 2.0,
        };
        assert_abs_diff_eq!(arc_length(&q).unwrap(), PI / 2.0, epsilon = 1e-14);
        let l = EdgeParam::Line {
            p0: Vec2::zeros(),
            p1: Vec2::new(3.0, 4.0),
        };
        assert_eq!(arc_length(&l).unwrap(), 5.0);
    }

    #[test]
    fn inside_test() {
        assert!(point_in_region(&square(), Vec2::new(0.5, 0.5)));
        assert!(!point_in_region(&square(), Vec2::new(1.5, 0.5)));
    }
}
