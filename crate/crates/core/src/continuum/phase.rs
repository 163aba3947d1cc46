use num_complex::Complex64;
use serde::Serialize;

use super::EigenSolution;
use crate::error::{invalid, Error, Result};
use crate::numerics::Grid;

/// Phase found by [`pt_phase_normalize`] together with the multiplier that
/// was applied to the samples.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PhaseFix {
    pub factor: Complex64,
    pub omega: f64,
}

/// Works out the constant `c` such that `c·φ` satisfies `φ*(−x) = φ(x)`.
///
/// The PT eigenvalue `λ` (with `PTφ = λφ`) is the `|φ|²`-weighted average of
/// `φ*(−x)/φ(x)`. The reported phase is `ω = −arg λ`, i.e. `φ ∝ e^{iω/2}·PTφ`,
/// and the rescaling is by `e^{−iω/2}`. The leftover sign is fixed by
/// `Re φ(x₀) > 0` at the largest sample on the `x ≥ 0` half of the grid,
/// falling back to `Im φ(x₀) > 0` when `φ(x₀)` is purely imaginary.
pub(crate) fn pt_phase_fix(phi: &[Complex64], grid: &Grid, tol: f64) -> Result<PhaseFix> {
    let n = phi.len();
    if n != grid.len() {
        return Err(invalid(format!("{n} samples on a grid of {} points", grid.len())));
    }
    if !grid.is_pt_symmetric() {
        return Err(invalid("PT phase normalization needs a grid closed under x -> -x*"));
    }
    let norm2: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 || !norm2.is_finite() {
        return Err(invalid("cannot normalize a zero or non-finite function"));
    }
    let overlap: Complex64 = (0..n).map(|i| phi[i] * phi[n - 1 - i]).sum();
    let lambda = overlap.conj() / norm2;
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() > tol {
        return Err(Error::NotPtEigenfunction { modulus });
    }
    let omega = -lambda.arg();
    let rotate = Complex64::from_polar(1.0, -omega / 2.0);

    let mut best = n / 2;
    for i in n / 2..n {
        if phi[i].norm() > phi[best].norm() {
            best = i;
        }
    }
    let at_peak = rotate * phi[best];
    let sign = if at_peak.re.abs() > 1e-8 * at_peak.norm() {
        at_peak.re.signum()
    } else {
        at_peak.im.signum()
    };
    Ok(PhaseFix {
        factor: rotate * sign,
        omega,
    })
}

/// Rescales an eigenfunction so that `φ*(−x) = φ(x)` and returns it with the
/// extracted phase `ω`. Fails with [`Error::NotPtEigenfunction`] when
/// `φ*(−x)/φ(x)` is not a unit-modulus constant to within `tol`, which is
/// what happens for eigenfunctions of a broken-PT spectrum.
pub fn pt_phase_normalize(phi: &[Complex64], grid: &Grid, tol: f64) -> Result<(Vec<Complex64>, f64)> {
    let fix = pt_phase_fix(phi, grid, tol)?;
    Ok((phi.iter().map(|z| z * fix.factor).collect(), fix.omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PtPhase {
    Unbroken,
    Broken,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseClassification {
    pub phase: PtPhase,
    /// Index pairs `(i, j)` with `Im E_i > 0` and `E_j ≈ E_i*`.
    pub conjugate_pairs: Vec<(usize, usize)>,
}

/// Unbroken iff every `|Im E| < imag_tol`; otherwise pairs each complex
/// eigenvalue with its closest conjugate partner (greedy). A complex
/// eigenvalue without a partner within `pair_tol·(1 + |E|)` contradicts the
/// reality of the secular equation and is reported as an inconsistency.
pub fn classify_energies(energies: &[Complex64], imag_tol: f64, pair_tol: f64) -> Result<PhaseClassification> {
    if energies.is_empty() {
        return Err(invalid("cannot classify an empty spectrum"));
    }
    let upper: Vec<usize> = (0..energies.len()).filter(|&i| energies[i].im >= imag_tol).collect();
    let mut lower: Vec<usize> = (0..energies.len()).filter(|&i| energies[i].im <= -imag_tol).collect();
    if upper.is_empty() && lower.is_empty() {
        return Ok(PhaseClassification {
            phase: PtPhase::Unbroken,
            conjugate_pairs: Vec::new(),
        });
    }
    let mut pairs = Vec::with_capacity(upper.len());
    for i in upper {
        let target = energies[i].conj();
        let best = lower.iter().enumerate().min_by(|a, b| {
            (energies[*a.1] - target)
                .norm()
                .total_cmp(&(energies[*b.1] - target).norm())
        });
        match best {
            Some((slot, &j)) if (energies[j] - target).norm() < pair_tol * (1.0 + target.norm()) => {
                pairs.push((i, j));
                lower.swap_remove(slot);
            }
            _ => {
                return Err(Error::Inconsistency(format!(
                    "eigenvalue {} has no complex-conjugate partner",
                    energies[i]
                )))
            }
        }
    }
    if let Some(&j) = lower.first() {
        return Err(Error::Inconsistency(format!(
            "eigenvalue {} has no complex-conjugate partner",
            energies[j]
        )));
    }
    Ok(PhaseClassification {
        phase: PtPhase::Broken,
        conjugate_pairs: pairs,
    })
}

/// Classifies the spectrum held by `solution` using its own tolerances.
pub fn classify_pt_phase(solution: &EigenSolution) -> Result<PhaseClassification> {
    let tol = solution.tolerances;
    classify_energies(&solution.energies, tol.imag_reality, tol.eig_abs.max(tol.imag_reality))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::numerics::{build_real_grid, RealScheme};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt_residual(phi: &[Complex64]) -> f64 {
        let n = phi.len();
        (0..n)
            .map(|i| (phi[n - 1 - i].conj() - phi[i]).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn rotated_gaussian() {
        let g = build_real_grid(201, 8.0, RealScheme::Uniform).unwrap();
        let phase = Complex64::from_polar(1.0, PI / 3.0);
        let phi = g.sample(|x| phase * (-x * x / 2.0).exp());
        let (out, omega) = pt_phase_normalize(&phi, &g, 1e-10).unwrap();
        assert!((omega - 2.0 * PI / 3.0).abs() < 1e-13);
        for (x, v) in g.points().iter().zip(&out) {
            assert!((v - (-x * x / 2.0).exp()).norm() < 1e-13);
        }
        assert!(out[100].re > 0.0);
    }

    #[test]
    fn real_odd_function_picks_up_a_factor_of_i() {
        // x e^{-x²/2} has φ*(−x) = −φ(x): λ = −1, so ω = −π and the
        // normalized function is i·x e^{-x²/2}.
        let g = build_real_grid(200, 8.0, RealScheme::Uniform).unwrap();
        let phi = g.sample(|x| x * (-x * x / 2.0).exp());
        let (out, omega) = pt_phase_normalize(&phi, &g, 1e-10).unwrap();
        assert!((omega.abs() - PI).abs() < 1e-13);
        assert!(pt_residual(&out) < 1e-14);
        for (x, v) in g.points().iter().zip(&out) {
            assert!((v - c(0.0, 1.0) * x * (-x * x / 2.0).exp()).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_pt_eigenfunction() {
        // e^{-(x-1)²} is not mapped to a multiple of itself by PT.
        let g = build_real_grid(200, 8.0, RealScheme::Uniform).unwrap();
        let phi = g.sample(|x| (-(x - 1.0) * (x - 1.0)).exp());
        assert!(matches!(
            pt_phase_normalize(&phi, &g, 1e-6),
            Err(Error::NotPtEigenfunction { .. })
        ));
    }

    #[test]
    fn conjugate_pair_detection() {
        let cls = classify_energies(&[c(1.0, 0.5), c(1.0, -0.5)], 1e-8, 1e-8).unwrap();
        assert_eq!(cls.phase, PtPhase::Broken);
        assert_eq!(cls.conjugate_pairs, vec![(0, 1)]);

        let cls = classify_energies(&[c(1.0, 0.0), c(3.0, 1e-12)], 1e-8, 1e-8).unwrap();
        assert_eq!(cls.phase, PtPhase::Unbroken);

        let cls = classify_energies(
            &[c(2.0, -1.0), c(0.5, 0.0), c(2.0, 1.0), c(5.0, 3.0), c(5.0, -3.0)],
            1e-8,
            1e-8,
        )
        .unwrap();
        assert_eq!(cls.conjugate_pairs, vec![(2, 0), (3, 4)]);
    }

    #[test]
    fn unmatched_complex_eigenvalue_is_inconsistent() {
        assert!(matches!(
            classify_energies(&[c(1.0, 0.5), c(1.0, -0.4)], 1e-8, 1e-8),
            Err(Error::Inconsistency(_))
        ));
        assert!(matches!(
            classify_energies(&[c(1.0, -0.5)], 1e-8, 1e-8),
            Err(Error::Inconsistency(_))
        ));
        assert!(classify_energies(&[], 1e-8, 1e-8).is_err());
    }
}
