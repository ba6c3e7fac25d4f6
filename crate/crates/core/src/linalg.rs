//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

/// Block-diagonal matrix with the given square blocks.
pub fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Orthonormal eigenvectors of a symmetric positive semi-definite matrix
/// whose eigenvalues exceed `tol`, as columns.
pub fn orthonormal_column_basis(sym: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = sym.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(sym.clone());
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > tol).collect();
    DMatrix::from_fn(n, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])])
}

/// Orthonormal basis (columns) of the column space of `a`, keeping singular
/// values above `rel_tol · σ_max`.
pub fn column_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.unwrap();
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > rel_tol * smax).collect();
    DMatrix::from_fn(a.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Orthonormal basis (columns) of the null space of `a`; singular values at
/// or below `rel_tol · σ_max` count as zero.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // Pad to at least n rows so the SVD yields a full right basis.
    let padded = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| smax == 0.0 || svd.singular_values[i] <= rel_tol * smax)
        .collect();
    DMatrix::from_fn(n, keep.len(), |i, j| v_t[(keep[j], i)])
}

pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    column_space(a, rel_tol).ncols()
}

/// Largest principal angle (radians) between two subspaces given by
/// orthonormal column bases, or `None` when the dimensions differ.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<f64> {
    if a.ncols() != b.ncols() || a.nrows() != b.nrows() {
        return None;
    }
    if a.ncols() == 0 {
        return Some(0.0);
    }
    // sin θ_max = ‖(I − AAᵀ)B‖₂, accurate for small angles
    let resid = b - a * (a.transpose() * b);
    let sin = resid.singular_values().max();
    Some(sin.min(1.0).asin())
}
