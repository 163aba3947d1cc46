use num_complex::Complex64;

use super::phase::{pt_phase_fix, PtPhase};
use super::{assemble_hamiltonian_matrix, classify_pt_phase, potential, SturmLiouvilleProblem};
use crate::algebra::pt_inner_product;
use crate::error::{invalid, Error, Result};
use crate::numerics::hermite::hermite_table;
use crate::numerics::linalg::eigen;
use crate::numerics::{Grid, Tolerances};

/// Which solver produced an [`EigenSolution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Spectral { basis_size: usize },
    Shooting,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Spectral { .. } => "spectral",
            Backend::Shooting => "shooting",
        }
    }
}

/// Ordered eigenpairs with PT-normalized eigenfunction samples.
///
/// For an unbroken level `n`, `eigenfunctions[n]` satisfies
/// `φₙ*(−x) = φₙ(x)` on `grid` and is scaled so its PT norm is
/// `pt_norm_signs[n] = ±1`. Broken levels carry sign `0`, no phase, and an
/// L²-normalized eigenfunction.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub nu: f64,
    pub backend: Backend,
    pub grid: Grid,
    /// Ascending real part, ties by ascending imaginary part.
    pub energies: Vec<Complex64>,
    pub eigenfunctions: Vec<Vec<Complex64>>,
    /// Hermite-basis coefficients matching `eigenfunctions` (spectral backend).
    pub coefficients: Option<Vec<Vec<Complex64>>>,
    pub pt_norm_signs: Vec<i8>,
    /// Phase `ω` removed by PT normalization, per level.
    pub phase_report: Vec<Option<f64>>,
    /// Per-level stability flag (basis-size check or shooting convergence).
    pub converged: Vec<bool>,
    pub tolerances: Tolerances,
}

impl EigenSolution {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Number of leading levels flagged as converged.
    pub fn converged_levels(&self) -> usize {
        self.converged.iter().take_while(|&&c| c).count()
    }

    pub fn is_unbroken(&self) -> bool {
        matches!(classify_pt_phase(self), Ok(c) if c.phase == PtPhase::Unbroken)
    }

    /// True when every PT sign follows `(−1)ⁿ`.
    pub fn signs_alternate(&self) -> bool {
        self.pt_norm_signs
            .iter()
            .enumerate()
            .all(|(n, &s)| s == if n % 2 == 0 { 1 } else { -1 })
    }

    /// The first `levels` eigenpairs.
    pub fn truncated(&self, levels: usize) -> Result<EigenSolution> {
        if levels == 0 || levels > self.len() {
            return Err(invalid(format!("cannot truncate {} levels to {levels}", self.len())));
        }
        Ok(EigenSolution {
            nu: self.nu,
            backend: self.backend,
            grid: self.grid.clone(),
            energies: self.energies[..levels].to_vec(),
            eigenfunctions: self.eigenfunctions[..levels].to_vec(),
            coefficients: self.coefficients.as_ref().map(|c| c[..levels].to_vec()),
            pt_norm_signs: self.pt_norm_signs[..levels].to_vec(),
            phase_report: self.phase_report[..levels].to_vec(),
            converged: self.converged[..levels].to_vec(),
            tolerances: self.tolerances,
        })
    }
}

pub(crate) fn energy_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn raw_spectrum(problem: &SturmLiouvilleProblem) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let h = assemble_hamiltonian_matrix(problem)?;
    let (values, vectors) = eigen(&h)?;
    let n = h.nrows();
    let coeffs = (0..values.len())
        .map(|k| (0..n).map(|i| vectors[(i, k)]).collect())
        .collect();
    Ok((values, coeffs))
}

/// Indices of `values` that reappear in `reference` within the relative
/// distance `MATCH`, ordered by [`energy_order`], each paired with the
/// distance to its partner.
///
/// Truncating a non-Hermitian operator produces spurious eigenvalues that
/// wander when the basis grows; the physical ones stay put.
fn stable_levels(values: &[Complex64], reference: &[Complex64]) -> Vec<(usize, f64)> {
    const MATCH: f64 = 1e-4;
    let mut kept: Vec<(usize, f64)> = values
        .iter()
        .enumerate()
        .filter_map(|(k, e)| {
            let d = reference.iter().map(|r| (r - e).norm()).fold(f64::INFINITY, f64::min);
            (d < MATCH * (1.0 + e.norm())).then_some((k, d))
        })
        .collect();
    kept.sort_by(|a, b| energy_order(&values[a.0], &values[b.0]));
    kept
}

/// Lowest `n_levels` eigenpairs by the Hermite spectral method.
///
/// Eigenfunctions are synthesized on `problem.grid` (which must be real and
/// symmetric), PT-normalized, and scaled to unit PT norm with the sign
/// recorded. Each level is flagged converged when repeating the
/// diagonalization with a basis half again as large moves it by less than
/// `eig_abs`. A spectrum containing complex-conjugate pairs is returned
/// as-is rather than rejected; see [`super::classify_pt_phase`].
pub fn solve_spectrum(problem: &SturmLiouvilleProblem, n_levels: usize) -> Result<EigenSolution> {
    let n = problem.basis_size;
    if n_levels == 0 || n_levels > n / 2 {
        return Err(invalid(format!(
            "n_levels must be in 1..={} for basis_size {n}, got {n_levels}",
            n / 2
        )));
    }
    let grid = &problem.grid;
    if !grid.is_real() || !grid.is_pt_symmetric() {
        return Err(invalid("the spectral backend needs a symmetric real grid"));
    }
    let tol = problem.tolerances;

    let (values, coeffs) = raw_spectrum(problem)?;
    let reference = SturmLiouvilleProblem {
        basis_size: n + n / 2,
        ..problem.clone()
    };
    let (reference_values, _) = raw_spectrum(&reference)?;
    let stable = stable_levels(&values, &reference_values);
    if stable.len() < n_levels {
        return Err(Error::NumericalFailure {
            message: format!(
                "only {} levels are stable at basis size {n}; {n_levels} requested",
                stable.len()
            ),
            last_iterate: stable.last().map(|&(k, _)| values[k]),
        });
    }

    let xs = grid.real_points();
    let table = hermite_table(&xs, n);

    let mut out_energies = Vec::with_capacity(n_levels);
    let mut functions = Vec::with_capacity(n_levels);
    let mut coefficients = Vec::with_capacity(n_levels);
    let mut signs = Vec::with_capacity(n_levels);
    let mut phases = Vec::with_capacity(n_levels);
    let mut converged = Vec::with_capacity(n_levels);

    for &(k, shift) in &stable[..n_levels] {
        let e = values[k];
        let mut c: Vec<Complex64> = coeffs[k].clone();
        let synthesize = |c: &[Complex64]| -> Vec<Complex64> {
            (0..xs.len())
                .map(|i| (0..n).map(|k| c[k] * table[i * n + k]).sum())
                .collect()
        };
        let mut phi = synthesize(&c);

        let (sign, omega) = if e.im.abs() < tol.imag_reality {
            let fix = pt_phase_fix(&phi, grid, tol.residual)?;
            // PT maps Σ cₖχₖ to Σ (−1)ᵏ cₖ* χₖ; keep the PT-even part, which
            // only drops numerical noise.
            for (k, z) in c.iter_mut().enumerate() {
                let v = *z * fix.factor;
                let reflected = if k % 2 == 0 { v.conj() } else { -v.conj() };
                *z = 0.5 * (v + reflected);
            }
            phi = synthesize(&c);
            let norm = pt_inner_product(&phi, &phi, grid)?.re;
            let scale = 1.0 / norm.abs().sqrt();
            phi.iter_mut().for_each(|z| *z *= scale);
            c.iter_mut().for_each(|z| *z *= scale);
            (if norm > 0.0 { 1 } else { -1 }, Some(fix.omega))
        } else {
            let scale = 1.0 / grid.l2_norm(&phi);
            phi.iter_mut().for_each(|z| *z *= scale);
            c.iter_mut().for_each(|z| *z *= scale);
            (0, None)
        };

        out_energies.push(e);
        functions.push(phi);
        coefficients.push(c);
        signs.push(sign);
        phases.push(omega);
        converged.push(shift < tol.eig_abs);
    }

    Ok(EigenSolution {
        nu: problem.nu,
        backend: Backend::Spectral { basis_size: n },
        grid: grid.clone(),
        energies: out_energies,
        eigenfunctions: functions,
        coefficients: Some(coefficients),
        pt_norm_signs: signs,
        phase_report: phases,
        converged,
        tolerances: tol,
    })
}

/// Relative residual `‖−φ'' + x²(ix)^ν φ − Eφ‖ / ‖φ‖` of one spectral level,
/// evaluated pointwise on the inner 3/4 of the grid using `χ_k'' = (x² − 2k − 1)χ_k`.
pub fn eigen_residual(solution: &EigenSolution, level: usize) -> Result<f64> {
    let coeffs = solution
        .coefficients
        .as_ref()
        .ok_or_else(|| invalid("eigen_residual needs basis coefficients (spectral backend)"))?;
    let c = coeffs
        .get(level)
        .ok_or_else(|| invalid(format!("level {level} out of range")))?;
    let e = solution.energies[level];
    let grid = &solution.grid;
    let xs = grid.real_points();
    let limit = 0.75 * xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let n = c.len();
    let mut buf = vec![0.0; n];
    let (mut num, mut den) = (0.0, 0.0);
    for (x, w) in xs.iter().zip(grid.weights()) {
        if x.abs() > limit {
            continue;
        }
        crate::numerics::hermite::hermite_functions(*x, &mut buf);
        let v = potential(solution.nu, Complex64::new(*x, 0.0));
        let mut r = Complex64::new(0.0, 0.0);
        let mut phi = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let kinetic = 2.0 * k as f64 + 1.0 - x * x;
            r += c[k] * buf[k] * (kinetic + v - e);
            phi += c[k] * buf[k];
        }
        num += w.re * r.norm_sqr();
        den += w.re * phi.norm_sqr();
    }
    Ok((num / den).sqrt())
}
