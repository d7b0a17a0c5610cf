//! Small dense linear algebra helpers shared by the solver modules.
//!
//! Everything here is a thin wrapper over nalgebra's SVD with the crate's
//! relative rank threshold.

use nalgebra::{DMatrix, DVector};

/// Rank of `a` with singular values below `rel_tol * sigma_max` treated as zero.
pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svd = a.clone().svd(false, false);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Orthonormal basis of the right nullspace of `a`.
///
/// Returns the rows of V^T whose singular values fall below the relative
/// threshold (for a wide-or-square SVD this spans the kernel exactly).
pub fn nullspace(a: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let ncols = a.ncols();
    if ncols == 0 {
        return Vec::new();
    }
    if a.nrows() == 0 {
        return (0..ncols)
            .map(|i| DVector::from_fn(ncols, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
    }
    // pad with zero rows so the SVD produces a full V^T
    let m = a.nrows().max(ncols);
    let mut padded = DMatrix::zeros(m, ncols);
    padded.view_mut((0, 0), (a.nrows(), ncols)).copy_from(a);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("svd requested v_t");
    let smax = svd.singular_values.max();
    let mut out = Vec::new();
    for i in 0..ncols {
        let s = if i < svd.singular_values.len() {
            svd.singular_values[i]
        } else {
            0.0
        };
        if smax == 0.0 || s <= rel_tol * smax {
            out.push(vt.row(i).transpose());
        }
    }
    out
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = a.clone().svd(true, true);
    let eps = svd.singular_values.max() * rel_tol;
    svd.solve(b, eps).unwrap_or_else(|_| DVector::zeros(a.ncols()))
}

/// Exact-ish solve of a square system; `None` when `a` is rank deficient.
pub fn solve_square(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> Option<DVector<f64>> {
    let n = a.nrows();
    if rank(a, rel_tol) < n {
        return None;
    }
    a.clone().lu().solve(b)
}

/// Frobenius inner product tr(A B^T).
pub fn frob_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Flatten a matrix column-major into a vector.
pub fn vec_of(a: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(a.as_slice())
}
