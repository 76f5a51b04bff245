//! Gauss–Legendre and Gauss–Lobatto rules on `[-1, 1]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaussKind {
    Legendre,
    Lobatto,
}

/// One-dimensional rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1d {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: GaussKind,
}

impl Rule1d {
    /// Polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        let n = self.points.len();
        match self.kind {
            GaussKind::Legendre => 2 * n - 1,
            GaussKind::Lobatto => 2 * n - 3,
        }
    }

    /// Points and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.points
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n − P_{n−1}) / (x² − 1), valid away from ±1
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn legendre(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return 1.0;
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Gauss rule with `npts` points of the requested kind.
pub fn gauss_rule_1d(npts: usize, kind: GaussKind) -> Result<Rule1d> {
    match kind {
        GaussKind::Legendre => gauss_legendre(npts),
        GaussKind::Lobatto => gauss_lobatto(npts),
    }
}

fn gauss_legendre(n: usize) -> Result<Rule1d> {
    if n == 0 {
        return Err(Error::Quadrature(
            "Gauss-Legendre needs at least 1 point".into(),
        ));
    }
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    Ok(Rule1d {
        points,
        weights,
        kind: GaussKind::Legendre,
    })
}

fn gauss_lobatto(n: usize) -> Result<Rule1d> {
    if n < 2 {
        return Err(Error::Quadrature(
            "Gauss-Lobatto needs at least 2 points".into(),
        ));
    }
    let m = n - 1;
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    points[0] = -1.0;
    points[m] = 1.0;
    let wend = 2.0 / (n as f64 * m as f64);
    weights[0] = wend;
    weights[m] = wend;
    // interior nodes: roots of P'_m, found by Newton on
    // q(x) = (1 − x²) P'_m(x), q'(x) = −m(m+1) P_m(x)
    for i in 1..n.div_ceil(2) {
        let mut x = -(PI * i as f64 / m as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let q = (1.0 - x * x) * dp;
            let dq = -(m as f64) * (m as f64 + 1.0) * p;
            let dx = q / dq;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let pm = legendre(m, x);
        let w = wend / (pm * pm);
        points[i] = x;
        points[m - i] = -x;
        weights[i] = w;
        weights[m - i] = w;
    }
    if n % 2 == 1 {
        points[m / 2] = 0.0;
        let pm = legendre(m, 0.0);
        weights[m / 2] = wend / (pm * pm);
    }
    Ok(Rule1d {
        points,
        weights,
        kind: GaussKind::Lobatto,
    })
}

/// Adaptive integration of a smooth function on `[a, b]`: Gauss–Legendre with
/// doubling point counts until successive estimates agree to `rel_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let mut npts = 8;
    let mut prev = f64::NAN;
    for _ in 0..8 {
        let rule = gauss_legendre(npts)?;
        let val: f64 = rule.mapped(a, b).map(|(x, w)| w * f(x)).sum();
        if (val - prev).abs() <= rel_tol * val.abs().max(f64::MIN_POSITIVE) {
            return Ok(val);
        }
        prev = val;
        npts *= 2;
    }
    Err(Error::Quadrature(format!(
        "adaptive integration on [{a}, {b}] did not converge"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_forms() {
        let r = gauss_rule_1d(1, GaussKind::Legendre).unwrap();
        assert_eq!(r.points, vec![0.0]);
        assert_abs_diff_eq!(r.weights[0], 2.0, epsilon = 1e-15);

        let r = gauss_rule_1d(2, GaussKind::Legendre).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(r.points[0], -s, epsilon = 1e-15);
        assert_abs_diff_eq!(r.points[1], s, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 1.0, epsilon = 1e-15);

        let r = gauss_rule_1d(3, GaussKind::Lobatto).unwrap();
        assert_abs_diff_eq!(r.points[0], -1.0);
        assert_abs_diff_eq!(r.points[1], 0.0);
        assert_abs_diff_eq!(r.points[2], 1.0);
        assert_abs_diff_eq!(r.weights[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[1], 4.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn exactness_degrees() {
        for kind in [GaussKind::Legendre, GaussKind::Lobatto] {
            for n in 2..=20 {
                let r = gauss_rule_1d(n, kind).unwrap();
                for d in 0..=r.exactness() {
                    let exact = if d % 2 == 1 {
                        0.0
                    } else {
                        2.0 / (d as f64 + 1.0)
                    };
                    let q: f64 = r
                        .points
                        .iter()
                        .zip(&r.weights)
                        .map(|(x, w)| w * x.powi(d as i32))
                        .sum();
                    assert_abs_diff_eq!(q, exact, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn lobatto_nodes_sorted_with_endpoints() {
        let r = gauss_rule_1d(7, GaussKind::Lobatto).unwrap();
        assert_eq!(r.points[0], -1.0);
        assert_eq!(r.points[6], 1.0);
        assert!(r.points.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_counts() {
        assert!(gauss_rule_1d(0, GaussKind::Legendre).is_err());
        assert!(gauss_rule_1d(1, GaussKind::Lobatto).is_err());
    }

    #[test]
    fn adaptive_cos() {
        let v = integrate_adaptive(|t| t.cos(), 0.0, std::f64::consts::FRAC_PI_2, 1e-13).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
    }
}
