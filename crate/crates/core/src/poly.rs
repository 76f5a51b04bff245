//! Graded ordering of 2D monomials `x^a y^b`, `a + b ≤ n`.
//!
//! Index of `(a, b)` with `d = a + b` is `d(d+1)/2 + b`.

/// Number of monomials of total degree at most `n`.
#[inline]
pub fn count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Number of monomials of total degree at most `n`, or 0 for negative degree.
#[inline]
pub fn count_signed(n: isize) -> usize {
    if n < 0 {
        0
    } else {
        count(n as usize)
    }
}

#[inline]
pub fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Exponent pairs in graded order.
pub fn exponents(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(count(n));
    for d in 0..=n {
        for b in 0..=d {
            out.push((d - b, b));
        }
    }
    out
}

/// Values of all monomials up to degree `n` at `(x, y)`, in graded order.
pub fn eval_all(n: usize, x: f64, y: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    for d in 1..=n {
        let start = out.len() - d; // first monomial of degree d−1
                                   // x · (all of degree d−1), then y · (last of degree d−1)
        for j in 0..d {
            let v = out[start + j] * x;
            out.push(v);
        }
        let v = out[start + d - 1] * y;
        out.push(v);
    }
}
