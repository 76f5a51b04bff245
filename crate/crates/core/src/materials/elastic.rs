use super::voigt::{Strain, Stress, Tangent};
use crate::error::{Error, Result};

/// Lamé parameters `(λ, μ)` from Young's modulus and Poisson's ratio.
pub fn lame(e: f64, nu: f64) -> Result<(f64, f64)> {
    if !(nu > -1.0 && nu < 0.5) || !(e > 0.0) {
        return Err(Error::Material(format!(
            "invalid elastic constants E={e}, nu={nu} (need E>0, -1<nu<0.5)"
        )));
    }
    Ok((
        e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)),
        e / (2.0 * (1.0 + nu)),
    ))
}

/// 3D bulk modulus.
pub fn bulk(e: f64, nu: f64) -> f64 {
    e / (3.0 * (1.0 - 2.0 * nu))
}

pub fn elastic_tangent(lambda: f64, mu: f64) -> Tangent {
    Tangent::new(
        lambda + 2.0 * mu,
        lambda,
        0.0,
        lambda,
        lambda + 2.0 * mu,
        0.0,
        0.0,
        0.0,
        mu,
    )
}

/// Plane-strain Hooke law `σ = λ tr(ε) I + 2μ ε`.
pub fn linear_elastic(eps: &Strain, e: f64, nu: f64) -> Result<(Stress, Tangent)> {
    let (l, m) = lame(e, nu)?;
    let c = elastic_tangent(l, m);
    Ok((c * eps, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let (l, m) = lame(1000.0, 0.3).unwrap();
        assert!((m - 384.615_384_6).abs() < 1e-6);
        assert!((l - 576.923_076_9).abs() < 1e-6);
        let (s, _) = linear_elastic(&Strain::new(0.001, 0.0, 0.0), 1000.0, 0.3).unwrap();
        assert!((s[0] - 1.346_153_8).abs() < 1e-6);
        assert!((s[1] - 0.576_923_1).abs() < 1e-6);
        let (s, _) = linear_elastic(&Strain::new(0.0, 0.0, 0.02), 1000.0, 0.3).unwrap();
        assert!((s[2] - 2.0 * m * 0.01).abs() < 1e-12 && s[0] == 0.0 && s[1] == 0.0);
        let (s, _) = linear_elastic(&Strain::zeros(), 1000.0, 0.3).unwrap();
        assert_eq!(s, Stress::zeros());
    }

    #[test]
    fn rejects_incompressible() {
        assert!(linear_elastic(&Strain::zeros(), 1000.0, 0.5).is_err());
    }
}
