use std::f64::consts::PI;

use super::Vec2;
use crate::error::{Error, Result};

/// Analytic boundary curve. Orientation follows increasing parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// `γ(t) = c + r (cos t, sin t)`, `t` in radians.
    Circle { center: Vec2, radius: f64 },
    /// `γ(t) = p0 + t (p1 − p0)`, `t ∈ [0, 1]`.
    Segment { p0: Vec2, p1: Vec2 },
}

/// A curve together with the parameter interval it is defined on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametrizedCurve {
    pub kind: CurveKind,
    pub t0: f64,
    pub t1: f64,
}

impl ParametrizedCurve {
    /// Arc of a circle between angles `t0` and `t1` (`|t1 − t0| < 2π`).
    pub fn arc(center: Vec2, radius: f64, t0: f64, t1: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "radius {radius} must be positive"
            )));
        }
        if (t1 - t0).abs() >= 2.0 * PI {
            return Err(Error::InvalidCurve("arc spans a full turn or more".into()));
        }
        Ok(Self {
            kind: CurveKind::Circle { center, radius },
            t0,
            t1,
        })
    }

    /// Whole circle as stored in mesh files. Edges restrict it to sub-arcs;
    /// the parameter window is wide enough to accept any unwrapped angle.
    pub fn circle(center: Vec2, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "radius {radius} must be positive"
            )));
        }
        Ok(Self {
            kind: CurveKind::Circle { center, radius },
            t0: -4.0 * PI,
            t1: 4.0 * PI,
        })
    }

    pub fn segment(p0: Vec2, p1: Vec2) -> Result<Self> {
        if (p1 - p0).norm() == 0.0 {
            return Err(Error::InvalidCurve("segment endpoints coincide".into()));
        }
        Ok(Self {
            kind: CurveKind::Segment { p0, p1 },
            t0: 0.0,
            t1: 1.0,
        })
    }

    pub fn is_circle(&self) -> bool {
        matches!(self.kind, CurveKind::Circle { .. })
    }

    fn in_range(&self, t: f64) -> bool {
        let (lo, hi) = (self.t0.min(self.t1), self.t0.max(self.t1));
        let tol = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        t >= lo - tol && t <= hi + tol
    }

    /// Returns `(γ(t), γ'(t))`.
    pub fn eval(&self, t: f64) -> Result<(Vec2, Vec2)> {
        if !self.in_range(t) {
            return Err(Error::ParameterOutOfRange {
                t,
                lo: self.t0.min(self.t1),
                hi: self.t0.max(self.t1),
            });
        }
        Ok((self.point(t), self.tangent(t)))
    }

    #[inline]
    pub fn point(&self, t: f64) -> Vec2 {
        match self.kind {
            CurveKind::Circle { center, radius } => center + radius * Vec2::new(t.cos(), t.sin()),
            CurveKind::Segment { p0, p1 } => p0 + t * (p1 - p0),
        }
    }

    #[inline]
    pub fn tangent(&self, t: f64) -> Vec2 {
        match self.kind {
            CurveKind::Circle { radius, .. } => radius * Vec2::new(-t.sin(), t.cos()),
            CurveKind::Segment { p0, p1 } => p1 - p0,
        }
    }

    /// Edge parametrization for the restriction to `[ta, tb]`.
    pub fn restrict(&self, ta: f64, tb: f64) -> EdgeParam {
        match self.kind {
            CurveKind::Circle { center, radius } => EdgeParam::Arc {
                center,
                radius,
                ta,
                tb,
            },
            CurveKind::Segment { .. } => EdgeParam::Line {
                p0: self.point(ta),
                p1: self.point(tb),
            },
        }
    }
}

/// Parametrization of a single edge over the normalized interval `s ∈ [0, 1]`.
///
/// The normalization is an affine change of the curve parameter, so
/// polynomials in `s` are exactly the mapped polynomials of the edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeParam {
    Line {
        p0: Vec2,
        p1: Vec2,
    },
    Arc {
        center: Vec2,
        radius: f64,
        ta: f64,
        tb: f64,
    },
}

impl EdgeParam {
    #[inline]
    pub fn point(&self, s: f64) -> Vec2 {
        match *self {
            EdgeParam::Line { p0, p1 } => p0 + s * (p1 - p0),
            EdgeParam::Arc {
                center,
                radius,
                ta,
                tb,
            } => {
                let t = ta + s * (tb - ta);
                center + radius * Vec2::new(t.cos(), t.sin())
            }
        }
    }

    /// `dx/ds`.
    #[inline]
    pub fn derivative(&self, s: f64) -> Vec2 {
        match *self {
            EdgeParam::Line { p0, p1 } => p1 - p0,
            EdgeParam::Arc { radius, ta, tb, .. } => {
                let t = ta + s * (tb - ta);
                (tb - ta) * radius * Vec2::new(-t.sin(), t.cos())
            }
        }
    }

    pub fn start(&self) -> Vec2 {
        self.point(0.0)
    }

    pub fn end(&self) -> Vec2 {
        self.point(1.0)
    }

    /// Same edge traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        match *self {
            EdgeParam::Line { p0, p1 } => EdgeParam::Line { p0: p1, p1: p0 },
            EdgeParam::Arc {
                center,
                radius,
                ta,
                tb,
            } => EdgeParam::Arc {
                center,
                radius,
                ta: tb,
                tb: ta,
            },
        }
    }

    pub fn is_curved(&self) -> bool {
        matches!(self, EdgeParam::Arc { .. })
    }

    /// Curvilinear length (closed form for both kinds).
    pub fn length(&self) -> f64 {
        match *self {
            EdgeParam::Line { p0, p1 } => (p1 - p0).norm(),
            EdgeParam::Arc { radius, ta, tb, .. } => radius * (tb - ta).abs(),
        }
    }

    pub fn chord(&self) -> f64 {
        (self.end() - self.start()).norm()
    }

    /// Angular span for arcs, zero for lines.
    pub fn turning(&self) -> f64 {
        match *self {
            EdgeParam::Line { .. } => 0.0,
            EdgeParam::Arc { ta, tb, .. } => (tb - ta).abs(),
        }
    }

    /// Outward normal times `ds/dt` for a boundary traversed counterclockwise:
    /// `(y', −x')`.
    #[inline]
    pub fn scaled_normal(&self, s: f64) -> Vec2 {
        let d = self.derivative(s);
        Vec2::new(d.y, -d.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_circle_points() {
        let c = ParametrizedCurve::arc(Vec2::zeros(), 1.0, 0.0, PI).unwrap();
        let (p, d) = c.eval(0.0).unwrap();
        assert_abs_diff_eq!(p, Vec2::new(1.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(d, Vec2::new(0.0, 1.0), epsilon = 1e-15);
        let (p, d) = c.eval(PI / 2.0).unwrap();
        assert_abs_diff_eq!(p, Vec2::new(0.0, 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(d, Vec2::new(-1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn segment_midpoint() {
        let c = ParametrizedCurve::segment(Vec2::zeros(), Vec2::new(2.0, 0.0)).unwrap();
        let (p, _) = c.eval(0.5).unwrap();
        assert_abs_diff_eq!(p, Vec2::new(1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn out_of_range() {
        let c = ParametrizedCurve::segment(Vec2::zeros(), Vec2::new(2.0, 0.0)).unwrap();
        assert!(matches!(
            c.eval(1.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(c.eval(1.0 + 1e-14).is_ok());
    }

    #[test]
    fn invalid_curves() {
        assert!(ParametrizedCurve::arc(Vec2::zeros(), 0.0, 0.0, 1.0).is_err());
        assert!(ParametrizedCurve::arc(Vec2::zeros(), 1.0, 0.0, 7.0).is_err());
        assert!(ParametrizedCurve::segment(Vec2::zeros(), Vec2::zeros()).is_err());
    }

    #[test]
    fn lengths() {
        let q = EdgeParam::Arc {
            center: Vec2::zeros(),
            radius: 1.0,
            ta: 0.0,
            tb: PI / 2.0,
        };
        assert_abs_diff_eq!(q.length(), PI / 2.0, epsilon = 1e-15);
        let h = EdgeParam::Arc {
            center: Vec2::zeros(),
            radius: 1.0,
            ta: 0.0,
            tb: PI,
        };
        assert_abs_diff_eq!(h.length(), PI, epsilon = 1e-15);
        let l = EdgeParam::Line {
            p0: Vec2::zeros(),
            p1: Vec2::new(3.0, 4.0),
        };
        assert_eq!(l.length(), 5.0);
    }
}
