//! Strain/stress representations.
//!
//! Public API: engineering Voigt `(εxx, εyy, γxy)` with `γ = 2εxy`, stresses
//! `(σxx, σyy, σxy)`, so `σ·ε` is the work density. History models work
//! internally with plane-strain Mandel 4-vectors `(xx, yy, zz, √2·xy)`.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use std::f64::consts::SQRT_2;

pub type Strain = Vector3<f64>;
pub type Stress = Vector3<f64>;
pub type Tangent = Matrix3<f64>;
pub type Mandel = Vector4<f64>;

/// Plane-strain Mandel vector of an engineering Voigt strain (`εzz = 0`).
pub fn strain_to_mandel(e: &Strain) -> Mandel {
    Mandel::new(e[0], e[1], 0.0, e[2] / SQRT_2)
}

pub fn stress_from_mandel(s: &Mandel) -> Stress {
    Stress::new(s[0], s[1], s[3] / SQRT_2)
}

/// `C_v = S C_m T` for `σ_v = S σ_m`, `ε_m = T ε_v`.
pub fn tangent_from_mandel(c: &Matrix4<f64>) -> Tangent {
    let idx = [0usize, 1, 3];
    let f = [1.0, 1.0, 1.0 / SQRT_2];
    Matrix3::from_fn(|i, j| c[(idx[i], idx[j])] * f[i] * f[j])
}

pub fn trace(m: &Mandel) -> f64 {
    m[0] + m[1] + m[2]
}

pub fn deviator(m: &Mandel) -> Mandel {
    let p = trace(m) / 3.0;
    Mandel::new(m[0] - p, m[1] - p, m[2] - p, m[3])
}

pub fn one() -> Mandel {
    Mandel::new(1.0, 1.0, 1.0, 0.0)
}

/// Deviatoric projector in Mandel form.
pub fn i_dev() -> Matrix4<f64> {
    Matrix4::identity() - one() * one().transpose() / 3.0
}

/// Isotropic 3D stiffness `K 1⊗1 + 2G I_dev` in Mandel form.
pub fn isotropic(k: f64, g: f64) -> Matrix4<f64> {
    k * one() * one().transpose() + 2.0 * g * i_dev()
}

/// Frobenius norm of the Voigt tangent.
pub fn tangent_norm(c: &Tangent) -> f64 {
    c.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn work_conjugacy() {
        // σ_v · ε_v equals the Mandel inner product
        let e = Strain::new(0.1, -0.2, 0.3);
        let s = Mandel::new(1.0, 2.0, 3.0, 4.0);
        let sv = stress_from_mandel(&s);
        let em = strain_to_mandel(&e);
        assert!((sv.dot(&e) - s.dot(&em)).abs() < 1e-15);
    }
}
