//! Dense complex matrix helpers shared by every analysis stage.
//!
//! Matrices are vectorized row-major, so `vec(A X B) = (A \otimes B^T) vec(X)`
//! and a channel's matrix representation is `sum_i E_i \otimes conj(E_i)`.

use nalgebra::{DMatrix, DVector};

use crate::error::QmcError;
use crate::tolerance::ToleranceConfig;

pub type C64 = num_complex::Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major vectorization: `vec(X)[i*cols + j] = X[(i, j)]`.
pub fn vec_row_major(m: &CMatrix) -> CVector {
    let cols = m.ncols();
    CVector::from_fn(m.nrows() * cols, |k, _| m[(k / cols, k % cols)])
}

/// Inverse of [`vec_row_major`].
pub fn unvec_row_major(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    assert_eq!(v.len(), rows * cols, "vector length must equal rows * cols");
    CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

/// Largest entry magnitude; zero for empty matrices.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |A - A'|`, the distance from being Hermitian.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `(A + A') / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Returns the eigenvalues and the matrix whose columns are the matching
/// orthonormal eigenvectors. Fails if the input deviates from Hermitian by
/// more than `tau_herm` relative to its largest entry.
pub fn hermitian_eig(m: &CMatrix, tol: &ToleranceConfig) -> Result<(Vec<f64>, CMatrix), QmcError> {
    let scale = max_abs(m).max(1.0);
    let deviation = hermitian_deviation(m);
    if deviation > tol.tau_herm * scale {
        return Err(QmcError::NotHermitian { deviation });
    }
    let eig = hermitize(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

fn rank_from_r_diag(r: &CMatrix, rel_cutoff: f64) -> usize {
    let k = r.nrows().min(r.ncols());
    let mags: Vec<f64> = (0..k).map(|i| r[(i, i)].norm()).collect();
    let largest = mags.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    mags.iter().filter(|&&m| m > rel_cutoff * largest).count()
}

/// Orthonormal basis for the column span of `m` via rank-revealing QR.
pub fn column_span_basis(m: &CMatrix, rel_cutoff: f64) -> CMatrix {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 || max_abs(m) == 0.0 {
        return CMatrix::zeros(rows, 0);
    }
    let qr = m.clone().col_piv_qr();
    let rank = rank_from_r_diag(&qr.r(), rel_cutoff);
    qr.q().columns(0, rank).into_owned()
}

/// Column span with pivot significance measured against a fixed external
/// scale instead of the largest pivot of `m` itself. The right tool for
/// projector differences: genuine directions there have magnitude near one,
/// so a residual of pure rounding noise must come out empty, not full rank.
pub fn column_span_basis_anchored(m: &CMatrix, abs_cutoff: f64) -> CMatrix {
    let rows = m.nrows();
    if rows == 0 || m.ncols() == 0 || max_abs(m) <= abs_cutoff {
        return CMatrix::zeros(rows, 0);
    }
    let qr = m.clone().col_piv_qr();
    let r = qr.r();
    let k = r.nrows().min(r.ncols());
    let rank = (0..k)
        .take_while(|&i| r[(i, i)].norm() > abs_cutoff)
        .count();
    qr.q().columns(0, rank).into_owned()
}

/// Orthonormal basis of the null space of a square matrix.
///
/// Uses the rank-revealing QR of `a'`: the trailing columns of its full Q
/// factor span the orthogonal complement of `range(a')`, which is `null(a)`.
/// The cutoff is absolute, like [`column_span_basis_anchored`]: callers know
/// the natural scale of their residuals, and an input of pure rounding noise
/// must count as entirely null rather than full rank.
pub fn null_space(a: &CMatrix, abs_cutoff: f64) -> CMatrix {
    assert!(a.is_square(), "null_space expects a square matrix");
    let n = a.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if max_abs(a) <= abs_cutoff {
        return CMatrix::identity(n, n);
    }
    let qr = a.adjoint().col_piv_qr();
    let r = qr.r();
    let k = r.nrows().min(r.ncols());
    let rank = (0..k)
        .take_while(|&i| r[(i, i)].norm() > abs_cutoff)
        .count();
    qr.q().columns(rank, n - rank).into_owned()
}

/// Trace norm `sum |lambda_i|` of a Hermitian matrix.
pub fn hermitian_trace_norm(m: &CMatrix) -> f64 {
    hermitize(m).symmetric_eigenvalues().iter().map(|l| l.abs()).sum()
}

/// Trace distance `||a - b||_tr / 2` between Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * hermitian_trace_norm(&(a - b))
}
