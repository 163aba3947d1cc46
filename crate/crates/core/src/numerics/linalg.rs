//! Thin dense linear-algebra layer over `faer`.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = Mat<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn evd_failure(e: impl std::fmt::Debug) -> Error {
    Error::NumericalFailure {
        message: format!("eigensolver did not converge: {e:?}"),
        last_iterate: None,
    }
}

/// Eigenvalues and right eigenvectors (columns) of a general complex matrix.
pub fn eigen(a: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let evd = a.eigen().map_err(evd_failure)?;
    let values = evd.S().column_vector().iter().copied().collect();
    Ok((values, evd.U().to_owned()))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let evd = a.self_adjoint_eigen(Side::Lower).map_err(evd_failure)?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn solve(a: &CMat, b: &[Complex64]) -> CMat {
    let rhs = Mat::from_fn(b.len(), 1, |i, _| b[i]);
    a.partial_piv_lu().solve(&rhs)
}

/// 2-norm condition number `σ_max / σ_min`.
pub fn condition_number(a: &CMat) -> Result<f64> {
    let s = a.singular_values().map_err(evd_failure)?;
    let max = s.first().copied().unwrap_or(0.0);
    let min = s.last().copied().unwrap_or(0.0);
    Ok(if min == 0.0 { f64::INFINITY } else { max / min })
}

pub fn identity(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
}

pub fn from_rows(rows: &[&[Complex64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Mat::from_fn(n, m, |i, j| rows[i][j])
}

/// Largest entry modulus.
pub fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}

/// `max |a_ij − b_ij|`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn conj(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].conj())
}

pub fn transpose(a: &CMat) -> CMat {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)])
}

pub fn adjoint(a: &CMat) -> CMat {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn mat_vec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)] * v[j]).sum())
        .collect()
}

pub fn column(a: &CMat, j: usize) -> Vec<Complex64> {
    (0..a.nrows()).map(|i| a[(i, j)]).collect()
}

pub fn trace(a: &CMat) -> Complex64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}
