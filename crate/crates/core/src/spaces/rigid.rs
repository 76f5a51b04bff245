use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Translation + homothety + rotation: `F(x) = a + A(x) b` with
/// `A(x) = [[x1−ν1, −(x2−ν2)], [x2−ν2, x1−ν1]]` about the base point `ν`.
///
/// Viewed in complex arithmetic, `F(z) = a + (z − ν) b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMap {
    pub base: Vec2,
    pub a: Vec2,
    pub b: Vec2,
}

/// The 2×2 real matrix of multiplication by the complex number `z`.
#[inline]
pub(crate) fn complex_matrix(z: Vec2) -> Matrix2<f64> {
    Matrix2::new(z.x, -z.y, z.y, z.x)
}

impl RigidMap {
    pub fn eval(&self, x: Vec2) -> Vec2 {
        self.a + complex_matrix(x - self.base) * self.b
    }

    /// Symmetric gradient: `b1 · I` (the rotation part `b2` is skew).
    pub fn strain(&self) -> Matrix2<f64> {
        Matrix2::identity() * self.b.x
    }

    pub fn gradient(&self) -> Matrix2<f64> {
        complex_matrix(self.b)
    }
}

/// The unique rigid map with `F(ν̄) = ū` and `F(ν′) = u′`.
pub fn rigid_map_from_endpoints(nu0: Vec2, nu1: Vec2, u0: Vec2, u1: Vec2) -> Result<RigidMap> {
    let d = nu1 - nu0;
    let l2 = d.norm_squared();
    if l2 <= f64::MIN_POSITIVE || l2 <= 1e-28 * nu0.norm_squared().max(nu1.norm_squared()) {
        return Err(Error::InvalidEdge {
            edge: usize::MAX,
            reason: "coincident endpoints for rigid map".into(),
        });
    }
    let binv = Matrix2::new(d.x, d.y, -d.y, d.x) / l2;
    Ok(RigidMap {
        base: nu0,
        a: u0,
        b: binv * (u1 - u0),
    })
}
