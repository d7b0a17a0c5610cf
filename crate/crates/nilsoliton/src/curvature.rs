//! Moment map, Ricci operator, anti-complexified Ricci, Chern-Ricci form and
//! operator, and the nilpotency test on the Chern-Ricci operator.
//!
//! Conventions. The moment map mm_gl is defined against the tensor inner
//! product summed over all ordered index pairs,
//! <<mm(mu), A>> = <A . mu, mu> with (A . mu)(x,y) = A mu(x,y) - mu(Ax,y) - mu(x,Ay),
//! so tr mm(mu) = -|mu|^2. The Ricci operator of the canonical metric is
//! `Ric = mm/4 - Kill/2 - S(ad_H)`,
//! with Kill the Killing form operator, H the mean curvature vector and
//! S the symmetrization; on nilpotent brackets Kill and H vanish and
//! Ric = mm/4.

use crate::bracket::LieBracket;
use crate::error::Error;
use crate::symplectic::{
    anti_complexified_part, j_operator, AlmostComplexStructure, Metric, TwoForm,
};
use nalgebra::{DMatrix, DVector};

/// Moment map value mm_gl(mu), a symmetric n x n matrix.
pub fn moment_map_gl(mu: &LieBracket) -> DMatrix<f64> {
    let n = mu.dim();
    let t = mu.tensor();
    let at = |i: usize, j: usize, k: usize| t[(i * n + j) * n + k];
    let mut m = DMatrix::zeros(n, n);
    for p in 0..n {
        for q in p..n {
            // sum_{ij} T_ijp T_ijq - 2 sum_{jk} T_pjk T_qjk
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s1 += at(a, b, p) * at(a, b, q);
                    s2 += at(p, a, b) * at(q, a, b);
                }
            }
            let v = s1 - 2.0 * s2;
            m[(p, q)] = v;
            m[(q, p)] = v;
        }
    }
    m
}

/// Killing form as an operator: <Kill x, y> = tr(ad_x ad_y).
pub fn killing_operator(mu: &LieBracket) -> DMatrix<f64> {
    let n = mu.dim();
    let ads: Vec<DMatrix<f64>> = (0..n).map(|a| mu.ad_basis(a)).collect();
    DMatrix::from_fn(n, n, |a, b| (&ads[a] * &ads[b]).trace())
}

/// Mean curvature vector H with <H, x> = tr ad_x.
pub fn mean_curvature(mu: &LieBracket) -> DVector<f64> {
    let n = mu.dim();
    DVector::from_fn(n, |a, _| mu.ad_basis(a).trace())
}

/// Ricci operator of (R^n, mu, canonical metric).
///
/// Coincides with mm_gl/4 whenever the bracket is nilpotent (the Killing and
/// mean-curvature terms vanish there).
pub fn ricci(mu: &LieBracket) -> DMatrix<f64> {
    let mm = moment_map_gl(mu);
    let kill = killing_operator(mu);
    let h = mean_curvature(mu);
    let ad_h = mu.ad(&h).expect("mean curvature has the right length");
    let sym = (&ad_h + ad_h.transpose()) * 0.5;
    mm * 0.25 - kill * 0.5 - sym
}

/// Scalar curvature tr Ric; equals -|mu|^2/4 on nilpotent brackets.
pub fn scalar_curvature(mu: &LieBracket) -> f64 {
    ricci(mu).trace()
}

/// Orthonormalizing frame for a diagonal metric: computations run on the
/// pulled-back pair (T^-1 . mu, omega(T., T.)) with T = G^{-1/2} and are
/// conjugated back. The canonical metric is the identity frame.
struct Frame {
    t: DMatrix<f64>,     // G^{-1/2}
    t_inv: DMatrix<f64>, // G^{1/2}
    mu: LieBracket,
    omega: TwoForm,
    acs: AlmostComplexStructure,
}

impl Frame {
    fn new(mu: &LieBracket, omega: &TwoForm, metric: &Metric) -> Result<Frame, Error> {
        let n = mu.dim();
        if omega.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: omega.dim() });
        }
        let (mu_f, omega_f, t, t_inv) = if metric.is_canonical() {
            (mu.clone(), omega.clone(), DMatrix::identity(n, n), DMatrix::identity(n, n))
        } else {
            let t_inv = metric.sqrt_matrix(n)?; // G^{1/2}
            let t = DMatrix::from_diagonal(&t_inv.diagonal().map(|v| 1.0 / v));
            let mu_f = crate::bracket::act_basis_change(&t_inv, mu, 0.0)?;
            let omega_f = crate::symplectic::act_on_form(&t, omega, 0.0)?;
            (mu_f, omega_f, t, t_inv)
        };
        let acs = j_operator(&omega_f, &Metric::Canonical)?;
        Ok(Frame { t, t_inv, mu: mu_f, omega: omega_f, acs })
    }

    fn push_operator(&self, op: DMatrix<f64>) -> DMatrix<f64> {
        &self.t * op * &self.t_inv
    }

    fn push_vector(&self, v: DVector<f64>) -> DVector<f64> {
        &self.t * v
    }
}

/// Anti-complexified Ricci operator for the triple (mu, omega, metric).
pub fn ric_ac(mu: &LieBracket, omega: &TwoForm, metric: &Metric) -> Result<DMatrix<f64>, Error> {
    let f = Frame::new(mu, omega, metric)?;
    let r = ricci(&f.mu);
    Ok(f.push_operator(anti_complexified_part(&r, &f.acs)))
}

fn h_hat_in_frame(f: &Frame) -> DVector<f64> {
    let n = f.mu.dim();
    let j = &f.acs.j;
    let mut h = DVector::zeros(n);
    for a in 0..n {
        let ad_t = f.mu.ad_basis(a).transpose();
        let ea = DVector::from_fn(n, |r, _| if r == a { 1.0 } else { 0.0 });
        h += &ad_t * &ea * 0.5;
        h += j * (&ad_t * (j * &ea)) * 0.5;
    }
    h
}

/// The vector H^ with chern_ricci_form(X, Y) = omega(H^, [X, Y]).
pub fn h_hat(mu: &LieBracket, omega: &TwoForm, metric: &Metric) -> Result<DVector<f64>, Error> {
    let f = Frame::new(mu, omega, metric)?;
    Ok(f.push_vector(h_hat_in_frame(&f)))
}

/// Chern-Ricci form evaluated on all basis pairs:
/// chi(X, Y) = (tr ad_{J[X,Y]} - tr(J ad_{[X,Y]})) / 2.
pub fn chern_ricci_form(mu: &LieBracket, omega: &TwoForm, metric: &Metric) -> Result<TwoForm, Error> {
    let f = Frame::new(mu, omega, metric)?;
    let n = f.mu.dim();
    let j = &f.acs.j;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for jdx in (i + 1)..n {
            let br = f.mu.eval_basis(i, jdx);
            let t1 = f.mu.ad(&(j * &br)).unwrap().trace();
            let t2 = (j * f.mu.ad(&br).unwrap()).trace();
            let chi = 0.5 * (t1 - t2);
            m[(i, jdx)] = chi;
            m[(jdx, i)] = -chi;
        }
    }
    // the form lives on the original basis: chi_orig(x, y) = chi_frame(T^-1 x, T^-1 y)
    let back = f.t_inv.transpose() * m * &f.t_inv;
    Ok(TwoForm::from_matrix(&back, 1e-14))
}

/// P_H with omega(H, [X, Y]) = omega(P_H X, Y); P_H = ad_H + ad_H^{t_omega}
/// where the omega-transpose is Omega^-1 A^T Omega.
pub fn p_operator(mu: &LieBracket, omega: &TwoForm, h: &DVector<f64>) -> Result<DMatrix<f64>, Error> {
    let om = omega.matrix();
    let det = om.determinant();
    let om_inv = om.clone().try_inverse().ok_or(Error::Degenerate { det })?;
    let ad_h = mu.ad(h)?;
    Ok(&ad_h + om_inv * ad_h.transpose() * om)
}

/// Chern-Ricci operator chi_P = P_{H^}: omega(chi_P X, Y) = chi(X, Y).
pub fn chern_ricci_operator(mu: &LieBracket, omega: &TwoForm, metric: &Metric) -> Result<DMatrix<f64>, Error> {
    let f = Frame::new(mu, omega, metric)?;
    let h = h_hat_in_frame(&f);
    let p = p_operator(&f.mu, &f.omega, &h)?;
    Ok(f.push_operator(p))
}

/// Nilpotency defect max_{k=1..dim} |tr P^k|; zero certifies a nilpotent
/// operator through the Newton identities (real spectrum collapses to zero).
pub fn nilpotency_defect(p: &DMatrix<f64>) -> f64 {
    let n = p.nrows();
    let mut power = p.clone();
    let mut worst: f64 = power.trace().abs();
    for _ in 1..n {
        power = &power * p;
        worst = worst.max(power.trace().abs());
    }
    worst
}

/// Everything curvature-related for one triple, computed once.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub mm_gl: DMatrix<f64>,
    pub ric: DMatrix<f64>,
    pub scal: f64,
    pub ric_ac: DMatrix<f64>,
    pub chern_op: DMatrix<f64>,
    pub chern_form: TwoForm,
    pub h_hat: DVector<f64>,
    pub h_mean: DVector<f64>,
    /// |J^2 + Id| of the triple's almost complex structure.
    pub compat_defect: f64,
    /// max_k |tr(chi_P^k)|.
    pub chern_nilpotency_defect: f64,
    /// worst |chi(e_i, e_j) - omega(H^, [e_i, e_j])| over basis pairs.
    pub chern_consistency_defect: f64,
}

impl CurvatureReport {
    pub fn compute(mu: &LieBracket, omega: &TwoForm, metric: &Metric) -> Result<Self, Error> {
        let acs = j_operator(omega, metric)?;
        let mm_gl = moment_map_gl(mu);
        let ric = ricci(mu);
        let scal = ric.trace();
        let ric_ac = ric_ac(mu, omega, metric)?;
        let chern_op = chern_ricci_operator(mu, omega, metric)?;
        let chern_form = chern_ricci_form(mu, omega, metric)?;
        let h_hat = h_hat(mu, omega, metric)?;
        let h_mean = mean_curvature(mu);
        let n = mu.dim();
        let mut consistency: f64 = 0.0;
        let fm = chern_form.matrix();
        for i in 0..n {
            for j in (i + 1)..n {
                let br = mu.eval_basis(i, j);
                let rhs = omega.apply(&h_hat, &br);
                consistency = consistency.max((fm[(i, j)] - rhs).abs());
            }
        }
        Ok(CurvatureReport {
            chern_nilpotency_defect: nilpotency_defect(&chern_op),
            chern_consistency_defect: consistency,
            mm_gl,
            ric,
            scal,
            ric_ac,
            chern_op,
            chern_form,
            h_hat,
            h_mean,
            compat_defect: acs.compat_defect,
        })
    }
}
