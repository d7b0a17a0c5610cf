//! Symplectic forms, compatible almost complex structures, projections onto
//! the symplectic Lie algebra, Darboux normalization and the Nijenhuis tensor.

use crate::bracket::LieBracket;
use crate::error::Error;
use nalgebra::{DMatrix, DVector};

/// A skew bilinear form stored as upper-triangular coefficients:
/// omega = sum c * e_i^* wedge e_j^* with i < j.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    dim: usize,
    entries: Vec<FormEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormEntry {
    pub i: usize,
    pub j: usize,
    pub c: f64,
}

impl TwoForm {
    pub fn from_entries(dim: usize, entries: &[(usize, usize, f64)]) -> Result<Self, Error> {
        let mut list = Vec::with_capacity(entries.len());
        for &(i, j, c) in entries {
            if i >= j {
                return Err(Error::BadEntryOrder { i, j });
            }
            if j >= dim {
                return Err(Error::IndexOutOfRange { i, j, k: 0, dim });
            }
            if !c.is_finite() || c == 0.0 {
                return Err(Error::BadCoefficient { i, j });
            }
            list.push(FormEntry { i, j, c });
        }
        list.sort_by_key(|e| (e.i, e.j));
        for w in list.windows(2) {
            if (w[0].i, w[0].j) == (w[1].i, w[1].j) {
                return Err(Error::DuplicateEntry { i: w[0].i, j: w[0].j, k: 0 });
            }
        }
        Ok(TwoForm { dim, entries: list })
    }

    /// The canonical symplectic form on R^{2n}:
    /// omega_cn = e_1^* ^ e_2n^* + e_2^* ^ e_{2n-1}^* + ... (pairs (i, 2n+1-i)).
    pub fn canonical(half_dim: usize) -> Self {
        let dim = 2 * half_dim;
        let entries = (0..half_dim).map(|i| FormEntry { i, j: dim - 1 - i, c: 1.0 }).collect();
        TwoForm { dim, entries }
    }

    /// Canonical form for a full (even) dimension.
    pub fn canonical_for_dim(dim: usize) -> Result<Self, Error> {
        if dim % 2 != 0 {
            return Err(Error::OddDimension { dim });
        }
        Ok(Self::canonical(dim / 2))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[FormEntry] {
        &self.entries
    }

    /// Dense skew matrix with (i, j) entry omega(e_i, e_j).
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for e in &self.entries {
            m[(e.i, e.j)] = e.c;
            m[(e.j, e.i)] = -e.c;
        }
        m
    }

    /// Build from a dense skew matrix, dropping entries below `drop_tol`.
    pub fn from_matrix(m: &DMatrix<f64>, drop_tol: f64) -> TwoForm {
        let dim = m.nrows();
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                if m[(i, j)].abs() > drop_tol {
                    entries.push(FormEntry { i, j, c: m[(i, j)] });
                }
            }
        }
        TwoForm { dim, entries }
    }

    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.entries
            .iter()
            .map(|e| e.c * (x[e.i] * y[e.j] - x[e.j] * y[e.i]))
            .sum()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix().determinant()
    }

    pub fn is_nondegenerate(&self, tol: f64) -> bool {
        self.determinant().abs() > tol
    }

    /// Worst cyclic sum |omega([x,y],z) + omega([y,z],x) + omega([z,x],y)|
    /// over basis triples; zero exactly when omega is closed on mu.
    pub fn closedness_defect(&self, mu: &LieBracket) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        let basis: Vec<DVector<f64>> =
            (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = mu.eval_basis(i, j);
                for k in (j + 1)..n {
                    let s = self.apply(&bij, &basis[k])
                        + self.apply(&mu.eval_basis(j, k), &basis[i])
                        + self.apply(&mu.eval_basis(k, i), &basis[j]);
                    worst = worst.max(s.abs());
                }
            }
        }
        worst
    }
}

/// Inner product choice for compatibility computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    /// The canonical inner product of R^n.
    Canonical,
    /// A diagonal inner product <x, y> = sum m_i x_i y_i, all m_i > 0.
    Diagonal(DVector<f64>),
}

impl Metric {
    pub fn matrix(&self, dim: usize) -> Result<DMatrix<f64>, Error> {
        match self {
            Metric::Canonical => Ok(DMatrix::identity(dim, dim)),
            Metric::Diagonal(d) => {
                if d.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: d.len() });
                }
                for (i, &v) in d.iter().enumerate() {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::BadMetric { index: i, value: v });
                    }
                }
                Ok(DMatrix::from_diagonal(d))
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, Metric::Canonical)
    }

    /// Diagonal square root G^{1/2}.
    pub fn sqrt_matrix(&self, dim: usize) -> Result<DMatrix<f64>, Error> {
        let g = self.matrix(dim)?;
        Ok(DMatrix::from_diagonal(&g.diagonal().map(f64::sqrt)))
    }
}

/// The operator J with omega(X, Y) = <J X, Y>, together with its
/// compatibility defect |J^2 + Id| (Frobenius).
#[derive(Debug, Clone)]
pub struct AlmostComplexStructure {
    pub j: DMatrix<f64>,
    pub compat_defect: f64,
}

/// J from a form and a metric: J = -G^{-1} Omega.
///
/// The triple (metric, J, omega) is almost Kähler only when the reported
/// defect vanishes; callers requiring a compatible triple must check it.
pub fn j_operator(omega: &TwoForm, metric: &Metric) -> Result<AlmostComplexStructure, Error> {
    let n = omega.dim();
    let om = omega.matrix();
    let det = om.determinant();
    if det.abs() < 1e-300 {
        return Err(Error::Degenerate { det });
    }
    let g = metric.matrix(n)?;
    let ginv = DMatrix::from_diagonal(&g.diagonal().map(|v| 1.0 / v));
    let j = -(&ginv * om);
    let defect = (&j * &j + DMatrix::identity(n, n)).norm();
    Ok(AlmostComplexStructure { j, compat_defect: defect })
}

/// The complexified part T^c = (T - J T J) / 2.
pub fn complexified_part(t: &DMatrix<f64>, acs: &AlmostComplexStructure) -> DMatrix<f64> {
    let j = &acs.j;
    (t - j * t * j) * 0.5
}

/// The anti-complexified part T^ac = (T + J T J) / 2.
pub fn anti_complexified_part(t: &DMatrix<f64>, acs: &AlmostComplexStructure) -> DMatrix<f64> {
    let j = &acs.j;
    (t + j * t * j) * 0.5
}

/// Orthogonal projection of a symmetric operator onto sp cap sym,
/// s |-> (s + J s J)/2. Asymmetric input is an error.
pub fn proj_sp(s: &DMatrix<f64>, acs: &AlmostComplexStructure) -> Result<DMatrix<f64>, Error> {
    let defect = (s - s.transpose()).norm();
    if defect > 1e-10 * (1.0 + s.norm()) {
        return Err(Error::NotSymmetric { defect });
    }
    Ok(anti_complexified_part(s, acs))
}

/// Orthonormal (trace inner product) basis of the diagonal subalgebra of sp
/// adapted to the canonical pairing (i, 2n+1-i):
/// a_omega = { diag(-x_1, ..., -x_n, x_n, ..., x_1) }.
pub fn a_omega_basis(dim: usize) -> Result<Vec<DMatrix<f64>>, Error> {
    if dim % 2 != 0 {
        return Err(Error::OddDimension { dim });
    }
    let half = dim / 2;
    let s = 1.0 / 2.0f64.sqrt();
    Ok((0..half)
        .map(|i| {
            let mut m = DMatrix::zeros(dim, dim);
            m[(i, i)] = -s;
            m[(dim - 1 - i, dim - 1 - i)] = s;
            m
        })
        .collect())
}

/// Component of a symmetric matrix orthogonal to a_omega after projecting to sp.
pub fn off_diagonal_subalgebra_norm(s: &DMatrix<f64>, acs: &AlmostComplexStructure) -> Result<f64, Error> {
    let p = proj_sp(s, acs)?;
    let mut off = p.clone();
    for i in 0..p.nrows() {
        off[(i, i)] = 0.0;
    }
    Ok(off.norm())
}

/// Darboux normalization by symplectic Gram-Schmidt with greedy pivoting.
///
/// Returns an invertible g with (g . omega)(x, y) := omega(g^-1 x, g^-1 y)
/// equal to the canonical form. The pivot picks the largest remaining
/// |omega(u_a, u_b)|, ties broken lexicographically, so the output is
/// deterministic even though g itself is not unique.
pub fn darboux_normalize(omega: &TwoForm) -> Result<DMatrix<f64>, Error> {
    let n = omega.dim();
    if n % 2 != 0 {
        return Err(Error::OddDimension { dim: n });
    }
    let om = omega.matrix();
    let det = om.determinant();
    if det.abs() < 1e-12 {
        return Err(Error::Degenerate { det });
    }
    let mut cur: Vec<DVector<f64>> =
        (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> = Vec::new();
    while !cur.is_empty() {
        let mut best = (0.0f64, 0usize, 0usize);
        for a in 0..cur.len() {
            for b in 0..cur.len() {
                let v = (cur[a].transpose() * &om * &cur[b])[(0, 0)];
                if v.abs() > best.0 + 1e-15 {
                    best = (v.abs(), a, b);
                }
            }
        }
        let (val, a, b) = best;
        if val < 1e-12 {
            return Err(Error::Degenerate { det });
        }
        let u = cur[a].clone();
        let pivot = (u.transpose() * &om * &cur[b])[(0, 0)];
        let v = &cur[b] / pivot;
        let mut next = Vec::new();
        for (idx, w) in cur.iter().enumerate() {
            if idx == a || idx == b {
                continue;
            }
            let wu = (w.transpose() * &om * &v)[(0, 0)];
            let wv = (w.transpose() * &om * &u)[(0, 0)];
            // remove the (u, v) symplectic component
            next.push(w - u.clone() * wu + v.clone() * wv);
        }
        pairs.push((u, v));
        cur = next;
    }
    // new basis: u_1, ..., u_m in the first slots, partners in mirrored slots
    let mut g_inv = DMatrix::zeros(n, n);
    for (i, (u, v)) in pairs.iter().enumerate() {
        g_inv.set_column(i, u);
        g_inv.set_column(n - 1 - i, v);
    }
    g_inv.try_inverse().ok_or(Error::Degenerate { det })
}

/// Pull a form back through g: (g . omega)(x, y) = omega(g^-1 x, g^-1 y).
pub fn act_on_form(g: &DMatrix<f64>, omega: &TwoForm, drop_tol: f64) -> Result<TwoForm, Error> {
    let det = g.determinant();
    let gi = g.clone().try_inverse().ok_or(Error::Singular { det })?;
    let m = gi.transpose() * omega.matrix() * &gi;
    Ok(TwoForm::from_matrix(&m, drop_tol))
}

/// Nijenhuis tensor of J on the bracket:
/// N_J(X, Y) = [X, Y] + J[JX, Y] + J[X, JY] - [JX, JY].
///
/// Nonvanishing of N_J is what makes a compatible triple strictly almost
/// Kähler rather than Kähler.
pub fn nijenhuis(
    mu: &LieBracket,
    acs: &AlmostComplexStructure,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<DVector<f64>, Error> {
    let j = &acs.j;
    let jx = j * x;
    let jy = j * y;
    Ok(mu.eval(x, y)? + j * mu.eval(&jx, y)? + j * mu.eval(x, &jy)? - mu.eval(&jx, &jy)?)
}
