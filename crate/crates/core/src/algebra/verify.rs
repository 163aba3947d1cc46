use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::inner::{pt_conjugate, pt_inner_product};
use super::kernel::{build_c_kernel, build_parity_kernel, compose_kernels, KernelOnGrid};
use crate::continuum::EigenSolution;
use crate::error::{invalid, Result};
use crate::numerics::Grid;

pub const ORTHONORMALITY: &str = "orthonormality";
pub const COMPLETENESS: &str = "completeness";
pub const C_SQUARED: &str = "c_squared";
pub const CP_PC_CONJUGATE: &str = "cp_pc_conjugate";
pub const CPT_COMPLETENESS: &str = "cpt_completeness";
pub const CPT_POSITIVITY: &str = "cpt_positivity";

/// Default tolerance for identities limited by the number of levels kept.
pub const TRUNCATION_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(residual: f64, tolerance: f64) -> Self {
        Self {
            residual,
            tolerance,
            pass: residual < tolerance,
        }
    }
}

/// Pass thresholds for the suite. Identities that hold level by level
/// (orthonormality, `CP = (PC)*`, CPT positivity) use `algebraic`; the
/// delta-function identities, which only converge as levels are added,
/// use `truncation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteTolerances {
    pub algebraic: f64,
    pub truncation: f64,
}

impl SuiteTolerances {
    pub fn for_solution(solution: &EigenSolution) -> Self {
        Self {
            algebraic: solution.tolerances.residual,
            truncation: TRUNCATION_TOL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    /// Levels entering every sum (the converged run of the solution).
    pub levels: usize,
    pub checks: BTreeMap<&'static str, Check>,
    /// Smallest `Re ⟨φₙ|φₙ⟩` over the levels.
    pub min_cpt_norm: f64,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.checks.get(name).map(|c| c.residual)
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.checks.get(name).map(|c| c.pass)
    }
}

/// `e^{−x²}`, `x e^{−x²}` and `cos(x) e^{−x²/2}` sampled on `grid`.
pub fn default_test_functions(grid: &Grid) -> Vec<Vec<Complex64>> {
    vec![
        grid.sample(|x| (-x * x).exp()),
        grid.sample(|x| x * (-x * x).exp()),
        grid.sample(|x| x.cos() * (-x * x / 2.0).exp()),
    ]
}

fn relative_error(grid: &Grid, approx: &[Complex64], exact: &[Complex64]) -> f64 {
    let diff: Vec<Complex64> = approx.iter().zip(exact).map(|(a, b)| a - b).collect();
    grid.l2_norm(&diff) / grid.l2_norm(exact)
}

fn bilinear(grid: &Grid, f: &[Complex64], g: &[Complex64]) -> Complex64 {
    grid.weights()
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| w * a * b)
        .sum()
}

/// Max entrywise `|CP − (PC)*|`. On a real grid the parity kernel is built
/// and composed; on a complex contour `−x` is not a node, so the equivalent
/// form `C(x, y) = C(−x*, −y*)*` (C commutes with PT) is checked instead.
pub fn cp_pc_residual(c: &KernelOnGrid) -> Result<f64> {
    let grid = c.grid();
    let n = grid.len();
    let mut worst: f64 = 0.0;
    if grid.is_real() {
        let p = build_parity_kernel(grid)?;
        let cp = compose_kernels(c, &p)?;
        let pc = compose_kernels(&p, c)?;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((cp.get(i, j) - pc.get(i, j).conj()).norm());
            }
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((c.get(i, j) - c.get(n - 1 - i, n - 1 - j).conj()).norm());
            }
        }
    }
    Ok(worst)
}

/// Runs the kernel identities on `solution` with the default thresholds.
pub fn run_verification_suite(
    solution: &EigenSolution,
    test_functions: &[Vec<Complex64>],
) -> Result<VerificationReport> {
    run_verification_suite_with(solution, test_functions, SuiteTolerances::for_solution(solution))
}

/// Runs the kernel identities over the converged levels of `solution`.
///
/// Smeared residuals are relative L² errors on the grid, maximized over the
/// test functions. Errors only on bad input (fewer than two test functions,
/// wrong sample lengths) or when `C` cannot be built; failed identities are
/// reported, not raised.
pub fn run_verification_suite_with(
    solution: &EigenSolution,
    test_functions: &[Vec<Complex64>],
    tol: SuiteTolerances,
) -> Result<VerificationReport> {
    let grid = &solution.grid;
    if test_functions.len() < 2 {
        return Err(invalid("need at least two test functions (one even, one odd)"));
    }
    if test_functions.iter().any(|g| g.len() != grid.len()) {
        return Err(invalid("test functions must be sampled on the solution grid"));
    }
    let c = build_c_kernel(solution)?;
    let levels = solution.converged_levels();
    let phi = &solution.eigenfunctions[..levels];
    let sign = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 };

    let mut ortho: f64 = 0.0;
    for (m, fm) in phi.iter().enumerate() {
        for (n, fn_) in phi.iter().enumerate() {
            let want = if m == n { sign(n) } else { 0.0 };
            ortho = ortho.max((pt_inner_product(fm, fn_, grid)? - want).norm());
        }
    }

    let cpt_phi: Vec<Vec<Complex64>> = phi
        .iter()
        .map(|f| c.apply(&pt_conjugate(f, grid)?))
        .collect::<Result<_>>()?;

    let mut completeness: f64 = 0.0;
    let mut c_squared: f64 = 0.0;
    let mut cpt_completeness: f64 = 0.0;
    for g in test_functions {
        let mut sum = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut cpt_sum = sum.clone();
        for (n, f) in phi.iter().enumerate() {
            let a = sign(n) * bilinear(grid, f, g);
            let b = bilinear(grid, &cpt_phi[n], g);
            for i in 0..grid.len() {
                sum[i] += a * f[i];
                cpt_sum[i] += b * f[i];
            }
        }
        completeness = completeness.max(relative_error(grid, &sum, g));
        cpt_completeness = cpt_completeness.max(relative_error(grid, &cpt_sum, g));
        let cc = c.apply(&c.apply(g)?)?;
        c_squared = c_squared.max(relative_error(grid, &cc, g));
    }

    let mut positivity: f64 = 0.0;
    let mut min_norm = f64::INFINITY;
    for (f, cf) in phi.iter().zip(&cpt_phi) {
        let v = bilinear(grid, cf, f);
        positivity = positivity.max((v - 1.0).norm());
        min_norm = min_norm.min(v.re);
    }

    let mut checks = BTreeMap::new();
    checks.insert(ORTHONORMALITY, Check::new(ortho, tol.algebraic));
    checks.insert(COMPLETENESS, Check::new(completeness, tol.truncation));
    checks.insert(C_SQUARED, Check::new(c_squared, tol.truncation));
    checks.insert(CP_PC_CONJUGATE, Check::new(cp_pc_residual(&c)?, tol.algebraic));
    checks.insert(CPT_COMPLETENESS, Check::new(cpt_completeness, tol.truncation));
    checks.insert(CPT_POSITIVITY, Check::new(positivity, tol.algebraic));
    Ok(VerificationReport {
        levels,
        checks,
        min_cpt_norm: min_norm,
    })
}
