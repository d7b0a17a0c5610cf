//! Lie brackets as sparse antisymmetric structure constants.
//!
//! A bracket on R^n is the data mu(e_i, e_j) = sum_k C_ij^k e_k for i < j,
//! extended bilinearly and antisymmetrically. Only the i < j half is stored;
//! indices are 0-based throughout the library (the file format is 1-based).

use crate::error::Error;
use crate::linalg::nullspace;
use nalgebra::{DMatrix, DVector};

/// One structure constant C_ij^k, with i < j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

/// Sparse antisymmetric structure constants of a bilinear bracket on R^dim.
///
/// Construction validates shape only (index ranges, i < j, no duplicate
/// (i,j,k) keys, finite nonzero coefficients). Whether the bracket satisfies
/// the Jacobi identity is a separate question answered by [`LieBracket::jacobi_defect`];
/// the moment map and norms are defined for arbitrary antisymmetric tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct LieBracket {
    dim: usize,
    entries: Vec<BracketEntry>,
}

impl LieBracket {
    /// Build from (i, j, k, c) tuples with 0-based indices and i < j.
    ///
    /// Duplicate (i,j,k) keys are rejected rather than summed so that input
    /// typos surface immediately. Entries are stored sorted by (i, j, k).
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self, Error> {
        let mut list = Vec::with_capacity(entries.len());
        for &(i, j, k, c) in entries {
            if i >= j {
                return Err(Error::BadEntryOrder { i, j });
            }
            if j >= dim || k >= dim {
                return Err(Error::IndexOutOfRange { i, j, k, dim });
            }
            if !c.is_finite() || c == 0.0 {
                return Err(Error::BadCoefficient { i, j });
            }
            list.push(BracketEntry { i, j, k, c });
        }
        list.sort_by_key(|e| (e.i, e.j, e.k));
        for w in list.windows(2) {
            if (w[0].i, w[0].j, w[0].k) == (w[1].i, w[1].j, w[1].k) {
                return Err(Error::DuplicateEntry {
                    i: w[0].i,
                    j: w[0].j,
                    k: w[0].k,
                });
            }
        }
        Ok(LieBracket { dim, entries: list })
    }

    /// The zero (abelian) bracket.
    pub fn abelian(dim: usize) -> Self {
        LieBracket { dim, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[BracketEntry] {
        &self.entries
    }

    /// mu(x, y) by bilinear extension.
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>, Error> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        let mut out = DVector::zeros(self.dim);
        for e in &self.entries {
            out[e.k] += e.c * (x[e.i] * y[e.j] - x[e.j] * y[e.i]);
        }
        Ok(out)
    }

    /// mu(e_i, e_j) for basis indices, any order.
    pub fn eval_basis(&self, i: usize, j: usize) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        let (a, b, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
        for e in &self.entries {
            if e.i == a && e.j == b {
                out[e.k] += sign * e.c;
            }
        }
        out
    }

    /// Matrix of ad_x = mu(x, .) in the standard basis (column j is mu(x, e_j)).
    pub fn ad(&self, x: &DVector<f64>) -> Result<DMatrix<f64>, Error> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            // mu(x, e_j) picks up c * x_i from (i,j,k) and -c * x_j from the flip
            m[(e.k, e.j)] += e.c * x[e.i];
            m[(e.k, e.i)] -= e.c * x[e.j];
        }
        Ok(m)
    }

    /// ad matrix of the a-th basis vector.
    pub fn ad_basis(&self, a: usize) -> DMatrix<f64> {
        let mut x = DVector::zeros(self.dim);
        x[a] = 1.0;
        self.ad(&x).expect("basis vector has the right length")
    }

    /// Worst cyclic-sum norm over all basis triples i < j < k.
    ///
    /// Zero (up to roundoff) exactly when the Jacobi identity holds.
    pub fn jacobi_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        let basis: Vec<DVector<f64>> =
            (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = self.eval_basis(i, j);
                for k in (j + 1)..n {
                    let bjk = self.eval_basis(j, k);
                    let bki = self.eval_basis(k, i);
                    let v = self.eval(&bij, &basis[k]).unwrap()
                        + self.eval(&bjk, &basis[i]).unwrap()
                        + self.eval(&bki, &basis[j]).unwrap();
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }

    /// Nilpotency step: the smallest k with the (k+1)-th lower central series
    /// term zero, or `None` when the series stabilizes at a nonzero subspace.
    ///
    /// Spans are computed on the norm-one rescaling of the bracket so the
    /// singular-value cutoff has an absolute scale to cut against.
    pub fn nilpotency_step(&self, rank_rel: f64) -> Option<usize> {
        let n = self.dim;
        let scale = self.norm();
        if scale == 0.0 {
            return Some(1);
        }
        let mu = self.scale(1.0 / scale);
        // span of the current term as columns of a matrix; start with g itself
        let mut span = DMatrix::<f64>::identity(n, n);
        let mut step = 0usize;
        loop {
            step += 1;
            // next term: span of mu(e_a, v) for v in current span
            let mut cols: Vec<DVector<f64>> = Vec::new();
            for a in 0..n {
                let ada = mu.ad_basis(a);
                for c in 0..span.ncols() {
                    let v = &ada * span.column(c).clone_owned();
                    if v.norm() > rank_rel {
                        cols.push(v);
                    }
                }
            }
            if cols.is_empty() {
                return Some(step);
            }
            let m = DMatrix::from_columns(&cols);
            let svd = m.clone().svd(true, false);
            let smax = svd.singular_values.max();
            // cutoff against an O(1) scale, not the (possibly all-noise) smax
            let cutoff = rank_rel * smax.max(1.0);
            let keep: Vec<DVector<f64>> = (0..svd.singular_values.len())
                .filter(|&i| svd.singular_values[i] > cutoff)
                .map(|i| svd.u.as_ref().expect("svd requested u").column(i).clone_owned())
                .collect();
            if keep.is_empty() {
                return Some(step);
            }
            if keep.len() >= span.ncols() {
                // series stopped shrinking at a nonzero subspace
                return None;
            }
            span = DMatrix::from_columns(&keep);
            if step > n + 1 {
                return None;
            }
        }
    }

    /// Unimodularity: all ad operators traceless. Returns the verdict and the
    /// worst |tr ad_{e_i}|.
    pub fn is_unimodular(&self, tol: f64) -> (bool, f64) {
        let defect = (0..self.dim)
            .map(|a| self.ad_basis(a).trace().abs())
            .fold(0.0, f64::max);
        (defect <= tol, defect)
    }

    /// Norm from the tensor inner product over all ordered index pairs:
    /// |mu|^2 = 2 sum_{i<j,k} (C_ij^k)^2.
    pub fn norm(&self) -> f64 {
        (2.0 * self.entries.iter().map(|e| e.c * e.c).sum::<f64>()).sqrt()
    }

    /// Rescale all structure constants.
    pub fn scale(&self, c: f64) -> LieBracket {
        let entries = self
            .entries
            .iter()
            .filter(|e| c * e.c != 0.0)
            .map(|e| BracketEntry { c: c * e.c, ..*e })
            .collect();
        LieBracket { dim: self.dim, entries }
    }

    /// Dense structure tensor T[i][j][k] = <mu(e_i,e_j), e_k>, both orders.
    pub fn tensor(&self) -> Vec<f64> {
        let n = self.dim;
        let mut t = vec![0.0; n * n * n];
        for e in &self.entries {
            t[(e.i * n + e.j) * n + e.k] = e.c;
            t[(e.j * n + e.i) * n + e.k] = -e.c;
        }
        t
    }

    /// Build a bracket from a dense tensor, dropping entries below `drop_tol`.
    pub fn from_tensor(dim: usize, t: &[f64], drop_tol: f64) -> LieBracket {
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in 0..dim {
                    let c = t[(i * dim + j) * dim + k];
                    if c.abs() > drop_tol {
                        entries.push(BracketEntry { i, j, k, c });
                    }
                }
            }
        }
        LieBracket { dim, entries }
    }
}

/// Basis change g . mu, defined by (g . mu)(x, y) = g mu(g^-1 x, g^-1 y).
///
/// Entries below `drop_tol` are dropped from the result.
pub fn act_basis_change(g: &DMatrix<f64>, mu: &LieBracket, drop_tol: f64) -> Result<LieBracket, Error> {
    let n = mu.dim();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g.nrows() });
    }
    let det = g.determinant();
    if !det.is_finite() || det.abs() < 1e-300 {
        return Err(Error::Singular { det });
    }
    let gi = g.clone().try_inverse().ok_or(Error::Singular { det })?;
    let mut t = vec![0.0; n * n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = g * mu.eval(&gi.column(i).clone_owned(), &gi.column(j).clone_owned())?;
            for k in 0..n {
                t[(i * n + j) * n + k] = v[k];
                t[(j * n + i) * n + k] = -v[k];
            }
        }
    }
    Ok(LieBracket::from_tensor(n, &t, drop_tol))
}

/// Defect of the Leibniz identity for a candidate derivation:
/// max over basis pairs of |D mu(e_i,e_j) - mu(D e_i, e_j) - mu(e_i, D e_j)|.
pub fn leibniz_defect(d: &DMatrix<f64>, mu: &LieBracket) -> f64 {
    let n = mu.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = d * mu.eval_basis(i, j);
            let rhs = mu
                .eval(&d.column(i).clone_owned(), &DVector::from_fn(n, |r, _| if r == j { 1.0 } else { 0.0 }))
                .unwrap()
                + mu
                    .eval(&DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }), &d.column(j).clone_owned())
                    .unwrap();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Rows of the Leibniz linear system for one basis pair, as a block acting on
/// vec(D) in column-major order.
fn leibniz_block(mu: &LieBracket, i: usize, j: usize) -> DMatrix<f64> {
    let n = mu.dim();
    let mut blk = DMatrix::zeros(n, n * n);
    let v = mu.eval_basis(i, j);
    // D v term
    for b in 0..n {
        if v[b] != 0.0 {
            for a in 0..n {
                blk[(a, b * n + a)] += v[b];
            }
        }
    }
    // -mu(D e_i, e_j) and -mu(e_i, D e_j)
    for a in 0..n {
        let w1 = mu.eval_basis(a, j);
        let w2 = mu.eval_basis(i, a);
        for r in 0..n {
            blk[(r, i * n + a)] -= w1[r];
            blk[(r, j * n + a)] -= w2[r];
        }
    }
    blk
}

/// Full Leibniz system matrix, (n * n(n-1)/2) x n^2.
pub fn leibniz_system(mu: &LieBracket) -> DMatrix<f64> {
    let n = mu.dim();
    let pairs = n * (n - 1) / 2;
    let mut a = DMatrix::zeros(n * pairs, n * n);
    let mut row = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            a.view_mut((row, 0), (n, n * n)).copy_from(&leibniz_block(mu, i, j));
            row += n;
        }
    }
    a
}

/// Orthonormal basis of the derivation algebra Der(mu), via the SVD nullspace
/// of the Leibniz system.
pub fn derivation_basis(mu: &LieBracket, rank_rel: f64) -> Vec<DMatrix<f64>> {
    let n = mu.dim();
    nullspace(&leibniz_system(mu), rank_rel)
        .into_iter()
        .map(|v| DMatrix::from_column_slice(n, n, v.as_slice()))
        .collect()
}
