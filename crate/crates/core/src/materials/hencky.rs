//! Nonlinear Hencky–von Mises law with a strain-dependent shear modulus.

use super::voigt::{Strain, Stress, Tangent};

/// Bulk coefficient of the constant volumetric part.
pub const HENCKY_BULK: f64 = 1.5e4;
const SCALE: f64 = 1.0e4;

/// `μ̃(ρ) = ¾ (1 + (1+ρ²)^{−1/2}) · 10⁴`.
pub fn hencky_shear(rho: f64) -> f64 {
    0.75 * (1.0 + 1.0 / (1.0 + rho * rho).sqrt()) * SCALE
}

/// `μ̃′(ρ)/ρ`, finite at `ρ = 0`.
fn hencky_shear_slope_over_rho(rho: f64) -> f64 {
    -0.75 * SCALE * (1.0 + rho * rho).powf(-1.5)
}

/// `σ = λ̃ tr(ε) I + μ̃ ε` with `λ̃ = K − μ̃/2`, i.e. `σ = K tr(ε) I + μ̃(ρ) dev ε`,
/// `ρ = ‖dev ε‖` (2D deviator, Frobenius norm).
pub fn hencky_von_mises(eps: &Strain) -> (Stress, Tangent) {
    let tr = eps[0] + eps[1];
    // deviator components (xx, yy, xy) — tensor shear, not engineering
    let dxx = 0.5 * (eps[0] - eps[1]);
    let d = Strain::new(dxx, -dxx, 0.5 * eps[2]);
    let rho = (2.0 * dxx * dxx + 2.0 * d[2] * d[2]).sqrt();
    let mu = hencky_shear(rho);
    let stress = Stress::new(
        HENCKY_BULK * tr + mu * d[0],
        HENCKY_BULK * tr + mu * d[1],
        mu * d[2],
    );
    let vol = Tangent::new(1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0);
    let ddev = Tangent::new(0.5, -0.5, 0.0, -0.5, 0.5, 0.0, 0.0, 0.0, 0.5);
    // ∂ρ/∂ε_v = d/ρ, hence μ̃′ d ⊗ d / ρ
    let tangent =
        HENCKY_BULK * vol + mu * ddev + hencky_shear_slope_over_rho(rho) * d * d.transpose();
    (stress, tangent)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shear_limits() {
        assert!((hencky_shear(0.0) - 1.5e4).abs() < 1e-9);
        assert!((hencky_shear(1e9) - 0.75e4).abs() < 1e-3);
    }

    #[test]
    fn symmetric_tangent() {
        let (_, c) = hencky_von_mises(&Strain::new(0.3, -0.1, 0.7));
        assert!((c - c.transpose()).norm() < 1e-9);
    }
}
