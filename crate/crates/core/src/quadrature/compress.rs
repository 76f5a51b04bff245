//! Positive-weight rule compression (Tchakaloff-type) via non-negative least
//! squares on an orthonormalized monomial basis.

use nalgebra::{DMatrix, DVector};

use super::rules::QuadratureRule;
use crate::geometry::Vec2;
use crate::poly;

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedRule {
    pub rule: QuadratureRule,
    /// Set when the result has more than `(n+1)(n+2)/2` points or misses the
    /// moments by more than 1e-10 relative. Symmetric cells can legitimately
    /// compress to fewer points.
    pub flagged: bool,
}

/// Lawson–Hanson active-set NNLS: `min ‖A x − b‖` subject to `x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> DVector<f64> {
    let p = a.ncols();
    let mut x = DVector::zeros(p);
    let mut passive = vec![false; p];
    let tol = 1e-13 * a.norm() * b.norm().max(1.0);
    let solve_passive = |passive: &[bool]| -> DVector<f64> {
        let idx: Vec<usize> = (0..p).filter(|&j| passive[j]).collect();
        let sub = a.select_columns(idx.iter());
        let sol = sub
            .svd(true, true)
            .solve(b, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(idx.len()));
        let mut z = DVector::zeros(p);
        for (k, &j) in idx.iter().enumerate() {
            z[j] = sol[k];
        }
        z
    };
    for _ in 0..max_iter {
        let w = a.transpose() * (b - a * &x);
        let cand = (0..p)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].partial_cmp(&w[j]).unwrap());
        match cand {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => break,
        }
        loop {
            let z = solve_passive(&passive);
            if (0..p).filter(|&j| passive[j]).all(|j| z[j] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for j in (0..p).filter(|&j| passive[j] && z[j] <= 0.0) {
                alpha = alpha.min(x[j] / (x[j] - z[j]));
            }
            x += alpha * (z - &x);
            for j in 0..p {
                if passive[j] && x[j] <= 1e-300 {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    x
}

/// Removes support points along null directions of the active columns until
/// at most `m` remain, keeping `A x` fixed and `x ≥ 0`.
fn caratheodory_prune(a: &DMatrix<f64>, x: &mut DVector<f64>, m: usize) {
    loop {
        let idx: Vec<usize> = (0..x.len()).filter(|&j| x[j] > 0.0).collect();
        if idx.len() <= m {
            return;
        }
        let sub = a.select_columns(idx.iter());
        // more columns than rows: the lowest eigenvector of AᵀA is a null direction
        let full = sub.transpose() * &sub;
        let eig = full.symmetric_eigen();
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|p, q| p.1.partial_cmp(q.1).unwrap())
            .unwrap();
        let mut z = eig.eigenvectors.column(imin).into_owned();
        if !z.iter().any(|&v| v > 0.0) {
            z = -z;
        }
        let (mut step, mut hit) = (f64::INFINITY, idx[0]);
        for (k, &j) in idx.iter().enumerate() {
            if z[k] > 0.0 && x[j] / z[k] < step {
                step = x[j] / z[k];
                hit = j;
            }
        }
        for (k, &j) in idx.iter().enumerate() {
            x[j] = (x[j] - step * z[k]).max(0.0);
        }
        x[hit] = 0.0;
    }
}

/// Compresses a positive rule exact to degree `n` down to `(n+1)(n+2)/2`
/// points with positive weights and the same moments up to degree `n`.
pub fn compress_rule(rule: &QuadratureRule, n: usize) -> CompressedRule {
    let m = poly::count(n);
    if rule.len() <= m {
        return CompressedRule {
            rule: rule.clone(),
            flagged: false,
        };
    }
    // scaled monomials about the rule's barycentre
    let area: f64 = rule.measure();
    let c: Vec2 = rule
        .points
        .iter()
        .zip(&rule.weights)
        .map(|(p, w)| p * *w)
        .sum::<Vec2>()
        / area;
    let h = rule
        .points
        .iter()
        .map(|p| (p - c).norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let np = rule.len();
    let mut v = DMatrix::zeros(np, m);
    let mut vals = Vec::new();
    for (i, p) in rule.points.iter().enumerate() {
        poly::eval_all(n, (p.x - c.x) / h, (p.y - c.y) / h, &mut vals);
        for (j, val) in vals.iter().enumerate() {
            v[(i, j)] = *val;
        }
    }
    // orthonormalize with respect to the input rule
    let mut sv = v.clone();
    for i in 0..np {
        let s = rule.weights[i].sqrt();
        sv.row_mut(i).scale_mut(s);
    }
    let r = sv.qr().r();
    let q = match r.clone().try_inverse() {
        Some(rinv) => &v * rinv,
        None => v.clone(),
    };
    let a = q.transpose();
    let w = DVector::from_column_slice(&rule.weights);
    let b = &a * &w;
    let mut x = nnls(&a, &b, 10 * m + 50);
    caratheodory_prune(&a, &mut x, m);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for i in 0..np {
        if x[i] > 0.0 {
            points.push(rule.points[i]);
            weights.push(x[i]);
        }
    }
    let resid = (&a * &x - &b).norm() / b.norm().max(f64::MIN_POSITIVE);
    let flagged = points.len() > m || resid > 1e-10;
    CompressedRule {
        rule: QuadratureRule {
            points,
            weights,
            exactness: n,
            domain: rule.domain,
        },
        flagged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::EdgeParam;
    use crate::quadrature::element_rule;
    use std::f64::consts::PI;

    fn cell() -> Vec<EdgeParam> {
        let o = Vec2::zeros();
        vec![
            EdgeParam::Line {
                p0: Vec2::new(0.5, 0.0),
                p1: Vec2::new(1.0, 0.0),
            },
            EdgeParam::Arc {
                center: o,
                radius: 1.0,
                ta: 0.0,
                tb: PI / 6.0,
            },
            EdgeParam::Line {
                p0: Vec2::new((PI / 6.0).cos(), 0.5),
                p1: Vec2::new(0.5, 0.5),
            },
            EdgeParam::Line {
                p0: Vec2::new(0.5, 0.5),
                p1: Vec2::new(0.5, 0.0),
            },
        ]
    }

    #[test]
    fn compresses_to_tchakaloff_count() {
        let b = cell();
        let c = crate::geometry::element_measures(&b).unwrap();
        for n in 0..=4 {
            let r = element_rule(&b, c.centroid, n).unwrap();
            let cr = compress_rule(&r, n);
            assert!(!cr.flagged, "n={n}");
            assert_eq!(cr.rule.len(), (n + 1) * (n + 2) / 2);
            assert!(cr.rule.weights.iter().all(|&w| w > 0.0));
            for (a, bb) in [(0, 0), (n, 0), (0, n)] {
                let f = |p: Vec2| p.x.powi(a as i32) * p.y.powi(bb as i32);
                assert!((cr.rule.integrate(f) - r.integrate(f)).abs() < 1e-10 * c.area);
            }
            let again = compress_rule(&cr.rule, n);
            assert_eq!(again.rule, cr.rule);
        }
    }
}
