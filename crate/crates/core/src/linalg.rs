//! Dense linear-algebra helpers on top of `faer`.
//!
//! faer is built without its rayon backend, so every kernel here runs
//! sequentially and is bitwise reproducible; parallelism lives one level up
//! (replicates), see [`crate::par`].

use faer::{Mat, MatRef, Side};

use crate::error::{Error, Result};

/// Symmetric eigen decomposition with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Columns are unit eigenvectors; the entry of largest magnitude in each
    /// column is positive.
    pub vectors: Mat<f64>,
}

pub fn max_abs(m: MatRef<'_, f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            best = best.max(m[(i, j)].abs());
        }
    }
    best
}

/// Largest entry of `|A - A^T|`.
pub fn asymmetry(m: MatRef<'_, f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in (j + 1)..m.nrows() {
            best = best.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    best
}

/// Replaces `A` with `(A + A^T) / 2`.
pub fn symmetrize(m: &mut Mat<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn check_symmetric(m: MatRef<'_, f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::LayoutMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let asym = asymmetry(m);
    if asym > 1e-10 * max_abs(m).max(f64::MIN_POSITIVE) && asym > 0.0 {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Full decomposition. Ties keep the solver's (ascending) original order.
pub fn symmetric_eigen(m: MatRef<'_, f64>) -> Result<SymmetricEigen> {
    check_symmetric(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(SymmetricEigen { values: vec![], vectors: Mat::zeros(0, 0) });
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| s[i]).collect();
    let mut vectors = Mat::<f64>::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        let mut best = -1.0;
        for i in 0..n {
            let a = u[(i, src)].abs();
            if a > best {
                best = a;
                pivot = i;
            }
        }
        let sign = if u[(pivot, src)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            vectors[(i, col)] = sign * u[(i, src)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Eigenvalues only, descending.
pub fn symmetric_eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(vec![]);
    }
    let mut v = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    v.reverse();
    Ok(v)
}

/// Orthonormal basis of the column space of `gen`, or `None` when the
/// columns already span (numerically) all of `R^rows`.
///
/// Singular directions below `rel_tol * sigma_max` are dropped.
pub fn span_basis(gen: MatRef<'_, f64>, rel_tol: f64) -> Result<Option<Mat<f64>>> {
    let rows = gen.nrows();
    if gen.ncols() == 0 || rows == 0 {
        return Ok(Some(Mat::zeros(rows, 0)));
    }
    let svd = gen.thin_svd().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = svd.S().column_vector();
    let top = if s.nrows() > 0 { s[0] } else { 0.0 };
    if top <= 0.0 {
        return Ok(Some(Mat::zeros(rows, 0)));
    }
    let rank = (0..s.nrows()).take_while(|&i| s[i] > rel_tol * top).count();
    if rank >= rows {
        return Ok(None);
    }
    Ok(Some(svd.U().subcols(0, rank).to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_sorted_descending() {
        let mut d = Mat::<f64>::zeros(3, 3);
        d[(0, 0)] = 3.0;
        d[(1, 1)] = 1.0;
        d[(2, 2)] = 2.0;
        let e = symmetric_eigen(d.as_ref()).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(e.vectors[(0, 0)], 1.0);
        assert_eq!(e.vectors[(2, 1)], 1.0);
        assert_eq!(e.vectors[(1, 2)], 1.0);
    }

    #[test]
    fn rejects_asymmetric() {
        let mut d = Mat::<f64>::identity(2, 2);
        d[(0, 1)] = 0.5;
        assert!(matches!(symmetric_eigen(d.as_ref()), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn span_basis_detects_rank() {
        let g = Mat::<f64>::from_fn(5, 7, |i, j| if i < 2 { (i + j) as f64 } else { 0.0 });
        let q = span_basis(g.as_ref(), 1e-12).unwrap().unwrap();
        assert_eq!(q.ncols(), 2);
        let full = Mat::<f64>::identity(4, 4);
        assert!(span_basis(full.as_ref(), 1e-12).unwrap().is_none());
    }
}
