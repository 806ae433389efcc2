use nalgebra::DMatrix;

use crate::numerics::{eig_general, SmallMatrix};
use crate::{Error, Result};

/// Accepted Riccati residual, relative to `max(1, |P|_max)`.
pub const LQR_RESIDUAL_TOL: f64 = 1e-8;

const MAX_ORDER: usize = 4;
const SIGN_MAX_ITERATIONS: usize = 100;
const SIGN_TOL: f64 = 1e-13;

/// Numerical rank of the controllability matrix `[B, AB, ..., A^(n-1) B]`.
pub fn controllability_rank(a: &SmallMatrix, b: &SmallMatrix) -> Result<usize> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::Dimension("A must be n x n and B n x m".into()));
    }
    let a = a.to_dmatrix();
    let b = b.to_dmatrix();
    let m = b.ncols();
    let mut ctrb = DMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        ctrb.view_mut((0, k * m), (n, m)).copy_from(&block);
        block = &a * block;
    }
    let sv = ctrb.singular_values();
    let max = sv.max();
    let cutoff = max * 1e-10 * (n * m) as f64;
    Ok(sv.iter().filter(|s| **s > cutoff && max > 0.0).count())
}

/// `A'P + PA - P B R^-1 B' P + Q`.
pub fn care_residual(
    a: &SmallMatrix,
    b: &SmallMatrix,
    q: &SmallMatrix,
    r: &SmallMatrix,
    p: &SmallMatrix,
) -> Result<SmallMatrix> {
    let (a, b, q, r, p) = (
        a.to_dmatrix(),
        b.to_dmatrix(),
        q.to_dmatrix(),
        r.to_dmatrix(),
        p.to_dmatrix(),
    );
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| Error::Analysis("R is singular".into()))?;
    let res = a.transpose() * &p + &p * &a - &p * &b * r_inv * b.transpose() * &p + q;
    Ok(SmallMatrix::from_dmatrix(&res))
}

/// Matrix sign function by scaled Newton iteration.
fn matrix_sign(h: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = h.nrows() as f64;
    let mut z = h.clone();
    for _ in 0..SIGN_MAX_ITERATIONS {
        let inv = z.clone().try_inverse().ok_or_else(|| {
            Error::Analysis("Hamiltonian has eigenvalues on the imaginary axis".into())
        })?;
        let det = z.determinant().abs();
        let c = if det > 0.0 && det.is_finite() {
            det.powf(1.0 / n)
        } else {
            1.0
        };
        let next = (&z / c + inv * c) * 0.5;
        let delta = (&next - &z).abs().row_sum().max();
        let scale = z.abs().row_sum().max();
        z = next;
        if delta <= SIGN_TOL * scale {
            return Ok(z);
        }
    }
    Err(Error::Analysis(format!(
        "sign iteration did not converge in {SIGN_MAX_ITERATIONS} steps"
    )))
}

/// Continuous-time LQR gain `K = R^-1 B' P` for `s' = A s + B a`, cost
/// `int s'Qs + a'Ra`.
///
/// `P` spans the stable invariant subspace of the Hamiltonian
/// `[[A, -B R^-1 B'], [-Q, -A']]`, extracted with the matrix sign function.
pub fn lqr_gain(
    a: &SmallMatrix,
    b: &SmallMatrix,
    q: &SmallMatrix,
    r: &SmallMatrix,
) -> Result<SmallMatrix> {
    let n = a.rows();
    if !a.is_square() || n > MAX_ORDER {
        return Err(Error::Dimension(format!(
            "A must be square with n <= {MAX_ORDER}"
        )));
    }
    let m = b.cols();
    if b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != m || r.cols() != m {
        return Err(Error::Dimension("inconsistent A, B, Q, R shapes".into()));
    }
    let qd = q.to_dmatrix();
    let rd = r.to_dmatrix();
    if (&qd - qd.transpose()).abs().max() > 1e-12 || (&rd - rd.transpose()).abs().max() > 1e-12 {
        return Err(Error::Argument("Q and R must be symmetric".into()));
    }
    if qd.clone().symmetric_eigenvalues().min() < -1e-12 {
        return Err(Error::Argument("Q must be positive semidefinite".into()));
    }
    if rd.clone().cholesky().is_none() {
        return Err(Error::Argument("R must be positive definite".into()));
    }
    if controllability_rank(a, b)? < n {
        return Err(Error::Analysis("(A, B) is not controllable".into()));
    }

    let ad = a.to_dmatrix();
    let bd = b.to_dmatrix();
    let r_inv = rd.try_inverse().expect("checked positive definite");
    let g = &bd * &r_inv * bd.transpose();
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&ad);
    h.view_mut((0, n), (n, n)).copy_from(&(-&g));
    h.view_mut((n, 0), (n, n)).copy_from(&(-&qd));
    h.view_mut((n, n), (n, n)).copy_from(&(-ad.transpose()));

    let z = matrix_sign(&h)?;
    let id = DMatrix::<f64>::identity(n, n);
    let z11 = z.view((0, 0), (n, n));
    let z12 = z.view((0, n), (n, n));
    let z21 = z.view((n, 0), (n, n));
    let z22 = z.view((n, n), (n, n));
    // Columns of (I - Z) span [I; P]: solve P [I - Z11, -Z12] = [-Z21, I - Z22].
    let mut lhs = DMatrix::zeros(2 * n, n);
    lhs.view_mut((0, 0), (n, n))
        .copy_from(&(&id - z11).transpose());
    lhs.view_mut((n, 0), (n, n)).copy_from(&(-z12).transpose());
    let mut rhs = DMatrix::zeros(2 * n, n);
    rhs.view_mut((0, 0), (n, n)).copy_from(&(-z21).transpose());
    rhs.view_mut((n, 0), (n, n))
        .copy_from(&(&id - z22).transpose());
    let p_t = lhs
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Analysis(format!("subspace solve failed: {e}")))?;
    let p = (&p_t + p_t.transpose()) * 0.5;

    let p_small = SmallMatrix::from_dmatrix(&p);
    let residual = care_residual(a, b, q, r, &p_small)?.max_abs();
    let scale = p_small.max_abs().max(1.0);
    if !(residual <= LQR_RESIDUAL_TOL * scale) {
        return Err(Error::Analysis(format!(
            "Riccati residual {residual:e} too large"
        )));
    }
    let k = SmallMatrix::from_dmatrix(&(r_inv * bd.transpose() * p));
    let closed = a.try_sub(&b.matmul(&k)?)?;
    let worst = eig_general(&closed, 1e-13)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if worst >= 0.0 {
        return Err(Error::Analysis(format!(
            "closed loop not stable (max real part {worst})"
        )));
    }
    Ok(k)
}
