//! Orthonormal Hermite functions and the Gauss–Hermite rule built on them.

use faer::{Mat, Side};

use crate::error::{Error, Result};

/// π^{-1/4}
const PI_QUARTER_INV: f64 = 0.751_125_544_464_942_5;

/// Fills `out[k]` with the orthonormal Hermite function χ_k(x),
/// χ_k(x) = (2^k k! √π)^{-1/2} H_k(x) e^{-x²/2}, for `k < out.len()`.
///
/// The three-term recurrence is run on the normalized functions, which is
/// stable for the orders and positions used here (no factorials appear).
pub fn hermite_functions(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = PI_QUARTER_INV * (-0.5 * x * x).exp();
    if n == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * x * out[0];
    for k in 1..n - 1 {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

/// Row-major table `t[i * n + k] = χ_k(xs[i])`.
pub fn hermite_table(xs: &[f64], n: usize) -> Vec<f64> {
    let mut table = vec![0.0; xs.len() * n];
    for (row, &x) in table.chunks_mut(n.max(1)).zip(xs) {
        hermite_functions(x, &mut row[..n]);
    }
    table
}

/// Gauss–Hermite nodes together with weights that already carry the
/// `e^{x²}` factor, so `Σ wᵢ f(xᵢ) ≈ ∫ f(x) dx` for `f = poly · e^{-x²}`.
///
/// Nodes come from the Golub–Welsch Jacobi matrix, are polished by Newton
/// steps on χ_n and then symmetrized; weights use the Christoffel form
/// `1 / Σ_{k<n} χ_k(xᵢ)²`, which avoids the underflowing `e^{-x²}`.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("gauss_hermite needs n >= 1".into()));
    }
    let jacobi = Mat::<f64>::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes = jacobi
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalFailure {
            message: format!("Golub-Welsch eigensolve failed: {e:?}"),
            last_iterate: None,
        })?;
    nodes.sort_by(|a, b| a.total_cmp(b));

    let mut buf = vec![0.0; n + 1];
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            hermite_functions(*x, &mut buf);
            let f = buf[n];
            let df = (2.0 * n as f64).sqrt() * buf[n - 1] - *x * f;
            if df == 0.0 {
                break;
            }
            *x -= f / df;
        }
    }
    for i in 0..n / 2 {
        let a = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -a;
        nodes[n - 1 - i] = a;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let weights = nodes
        .iter()
        .map(|&x| {
            hermite_functions(x, &mut buf[..n]);
            1.0 / buf[..n].iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    Ok((nodes, weights))
}
