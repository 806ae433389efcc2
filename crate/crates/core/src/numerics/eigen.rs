use nalgebra::linalg::Schur;

use super::{Complex64, SmallMatrix};
use crate::{Error, Result};

/// Largest matrix accepted by [`eig_general`].
pub const EIG_MAX_DIM: usize = 8;

/// Iteration cap handed to the Schur (shifted QR) sweep in [`eig_general`].
pub const EIG_MAX_ITERATIONS: usize = 10_000;

/// Both eigenvalues of a real 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPair(pub Complex64, pub Complex64);

impl ComplexPair {
    pub fn to_vec(self) -> Vec<Complex64> {
        vec![self.0, self.1]
    }

    pub fn max_real(self) -> f64 {
        self.0.re.max(self.1.re)
    }
}

/// Roots of `l^2 - tr(m) l + det(m)` in closed form.
///
/// Real roots are computed with the cancellation-free pairing
/// `r1 = t/2 + sign(t) sqrt(disc)`, `r2 = det / r1`.
pub fn eig2x2(m: &SmallMatrix) -> Result<ComplexPair> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::Dimension(format!(
            "eig2x2 needs a 2x2 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::Argument("non-finite matrix entry".into()));
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_tr = 0.5 * (a + d);
    // (a - d)^2 / 4 + bc avoids forming tr^2/4 - det directly.
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let r1 = if half_tr >= 0.0 {
            half_tr + s
        } else {
            half_tr - s
        };
        let det = a * d - b * c;
        let r2 = if r1 != 0.0 {
            det / r1
        } else {
            half_tr - s.copysign(half_tr)
        };
        let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
        Ok(ComplexPair(
            Complex64::new(hi, 0.0),
            Complex64::new(lo, 0.0),
        ))
    } else {
        let s = (-disc).sqrt();
        Ok(ComplexPair(
            Complex64::new(half_tr, s),
            Complex64::new(half_tr, -s),
        ))
    }
}

/// Eigenvalues of a real n x n matrix (n <= [`EIG_MAX_DIM`]).
///
/// Hessenberg reduction followed by shifted QR sweeps (nalgebra's real
/// Schur form), stopping when subdiagonal entries fall below `tol` or after
/// [`EIG_MAX_ITERATIONS`]. Output is sorted by real part, then imaginary part.
pub fn eig_general(m: &SmallMatrix, tol: f64) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() > EIG_MAX_DIM {
        return Err(Error::Dimension(format!(
            "matrix of order {} exceeds the supported {EIG_MAX_DIM}",
            m.rows()
        )));
    }
    if !m.is_finite() {
        return Err(Error::Argument("non-finite matrix entry".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let schur = Schur::try_new(m.to_dmatrix(), tol, EIG_MAX_ITERATIONS).ok_or_else(|| {
        Error::Numeric(format!(
            "QR iteration did not converge within {EIG_MAX_ITERATIONS} sweeps"
        ))
    })?;
    let mut values: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(values)
}
