use num_complex::Complex64;

use super::general::{MatrixHamiltonian, MAX_CONDITION};
use crate::error::{invalid, Error, Result};
use crate::numerics::linalg::{self, column};

/// `ψ(t) = e^{−iht} ψ₀` through the eigendecomposition `h = V diag(ε) V⁻¹`.
///
/// Works in every phase, including broken ones where norms grow. A
/// numerically defective `h` (eigenvector condition number above `1e12`)
/// gives [`Error::Degenerate`] at the closest eigenvalue pair.
pub fn time_evolve(h: &MatrixHamiltonian, psi0: &[Complex64], times: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    let n = h.dim();
    if psi0.len() != n {
        return Err(invalid(format!(
            "initial state has {} components, h is {n}x{n}",
            psi0.len()
        )));
    }
    let (values, vecs) = linalg::eigen(h.h())?;
    if linalg::condition_number(&vecs)? > MAX_CONDITION {
        let mut closest = (f64::INFINITY, values[0]);
        for a in 0..n {
            for b in a + 1..n {
                let d = (values[a] - values[b]).norm();
                if d < closest.0 {
                    closest = (d, (values[a] + values[b]) / 2.0);
                }
            }
        }
        return Err(Error::Degenerate { eigenvalue: closest.1 });
    }
    let coeffs = column(&linalg::solve(&vecs, psi0), 0);
    Ok(times
        .iter()
        .map(|&t| {
            let phases: Vec<Complex64> = values
                .iter()
                .zip(&coeffs)
                .map(|(e, c)| c * (-Complex64::i() * e * t).exp())
                .collect();
            linalg::mat_vec(&vecs, &phases)
        })
        .collect())
}
