//! Sparse direct solves on the free-dof block (faer: Cholesky, LU fallback).

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu, SymbolicLlt, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};
use faer::{Col, Side};
use log::debug;

use crate::error::{Error, Result};

/// Assembled sparse matrix in triplet form (duplicates are summed).
#[derive(Debug, Clone, Default)]
pub struct TripletMatrix {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl TripletMatrix {
    pub fn new(n: usize) -> Self {
        TripletMatrix {
            n,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        self.entries.push((i, j, v));
    }

    fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let t: Vec<Triplet<usize, usize, f64>> = self
            .entries
            .iter()
            .map(|&(i, j, v)| Triplet::new(i, j, v))
            .collect();
        SparseColMat::try_new_from_triplets(self.n, self.n, &t)
            .map_err(|e| Error::LinearSolve(format!("matrix assembly: {e:?}")))
    }

    /// Dense copy (tests and small diagnostics).
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }
}

/// Solves `A x = b` for symmetric `A`, trying Cholesky then LU.
pub fn solve(a: &TripletMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = a.to_faer()?;
    let rhs = Col::<f64>::from_fn(n, |i| b[i]);
    let chol = SymbolicLlt::try_new(m.symbolic(), Side::Lower)
        .ok()
        .and_then(|s| Llt::try_new_with_symbolic(s, m.as_ref(), Side::Lower).ok());
    let x = match chol {
        Some(llt) => llt.solve(&rhs),
        None => {
            debug!("Cholesky failed, falling back to LU");
            let sym = SymbolicLu::try_new(m.symbolic())
                .map_err(|e| Error::LinearSolve(format!("{e:?}")))?;
            let lu = Lu::try_new_with_symbolic(sym, m.as_ref())
                .map_err(|e| Error::LinearSolve(format!("{e:?}")))?;
            lu.solve(&rhs)
        }
    };
    let out: Vec<f64> = (0..n).map(|i| x[i]).collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve(
            "singular system (non-finite solution)".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_and_indefinite() {
        let mut a = TripletMatrix::new(3);
        for (i, j, v) in [
            (0, 0, 4.0),
            (1, 1, 3.0),
            (2, 2, 2.0),
            (0, 1, 1.0),
            (1, 0, 1.0),
            (0, 0, 1.0),
        ] {
            a.push(i, j, v);
        }
        let x = solve(&a, &[6.0, 4.0, 2.0]).unwrap();
        let d = a.to_dense();
        let r =
            &d * nalgebra::DVector::from_vec(x) - nalgebra::DVector::from_vec(vec![6.0, 4.0, 2.0]);
        assert!(r.norm() < 1e-12);
        let mut b = TripletMatrix::new(2);
        for (i, j, v) in [(0, 1, 1.0), (1, 0, 1.0)] {
            b.push(i, j, v);
        }
        assert_eq!(solve(&b, &[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
    }
}
