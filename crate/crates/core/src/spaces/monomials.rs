use crate::geometry::Vec2;
use crate::poly;

/// Scaled monomials `m_α(x) = ((x − x_b)/h)^α` up to a fixed degree, in the
/// graded order of [`crate::poly`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMonomialBasis {
    pub center: Vec2,
    pub h: f64,
    pub degree: usize,
}

impl ScaledMonomialBasis {
    pub fn new(center: Vec2, h: f64, degree: usize) -> Self {
        ScaledMonomialBasis { center, h, degree }
    }

    pub fn len(&self) -> usize {
        poly::count(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn eval_into(&self, x: Vec2, out: &mut Vec<f64>) {
        let d = (x - self.center) / self.h;
        poly::eval_all(self.degree, d.x, d.y, out);
    }

    pub fn eval(&self, x: Vec2) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.len());
        self.eval_into(x, &mut v);
        v
    }

    /// Gradient of each monomial, `∇m_(a,b) = (a m_(a−1,b), b m_(a,b−1)) / h`.
    pub fn gradients(&self, x: Vec2) -> Vec<Vec2> {
        let vals = self.eval(x);
        poly::exponents(self.degree)
            .into_iter()
            .map(|(a, b)| {
                let gx = if a > 0 {
                    a as f64 * vals[poly::index(a - 1, b)]
                } else {
                    0.0
                };
                let gy = if b > 0 {
                    b as f64 * vals[poly::index(a, b - 1)]
                } else {
                    0.0
                };
                Vec2::new(gx, gy) / self.h
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_constant_and_bound() {
        let b = ScaledMonomialBasis::new(Vec2::new(1.0, 2.0), 0.5, 4);
        let x = Vec2::new(1.2, 1.9);
        let r = (x - b.center).norm() / b.h;
        for (v, (a, bb)) in b.eval(x).iter().zip(poly::exponents(4)) {
            assert!(v.abs() <= r.powi((a + bb) as i32) + 1e-15);
        }
        assert_eq!(b.eval(x)[0], 1.0);
    }

    #[test]
    fn gradient_matches_fd() {
        let b = ScaledMonomialBasis::new(Vec2::new(0.3, -0.1), 0.7, 3);
        let x = Vec2::new(0.5, 0.2);
        let g = b.gradients(x);
        let e = 1e-6;
        let px = b.eval(x + Vec2::new(e, 0.0));
        let mx = b.eval(x - Vec2::new(e, 0.0));
        let py = b.eval(x + Vec2::new(0.0, e));
        let my = b.eval(x - Vec2::new(0.0, e));
        for i in 0..b.len() {
            assert!((g[i].x - (px[i] - mx[i]) / (2.0 * e)).abs() < 1e-8);
            assert!((g[i].y - (py[i] - my[i]) / (2.0 * e)).abs() < 1e-8);
        }
    }
}
