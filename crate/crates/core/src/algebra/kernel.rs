use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::continuum::EigenSolution;
use crate::error::{invalid, Error, Result};
use crate::numerics::linalg::CMat;
use crate::numerics::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelLabel {
    Parity,
    COperator,
    Cp,
    Pc,
    Custom,
}

/// Integral kernel `K(xᵢ, yⱼ)` on the nodes of a grid.
///
/// Kernels act on samples with the quadrature weights,
/// `(Kg)(xᵢ) = Σⱼ wⱼ K(xᵢ, yⱼ) g(yⱼ)`, so composition is associative and
/// the identity kernel is `δᵢⱼ / wⱼ`.
///
/// Kernels summed from eigenfunctions also keep the factors `K = L Rᵀ` and
/// apply as `L (Rᵀ W g)`: the dense product would lose `ε·|φ|⁴` to
/// cancellation where the eigenfunctions are large, the factored one `ε·|φ|²`.
/// The exact parity kernel applies as an index reversal.
#[derive(Debug, Clone)]
pub struct KernelOnGrid {
    grid: Grid,
    values: CMat,
    label: KernelLabel,
    action: Action,
}

#[derive(Debug, Clone)]
enum Action {
    Dense,
    Factored(CMat, CMat),
    Reversal,
}

impl KernelOnGrid {
    pub fn new(grid: Grid, values: CMat, label: KernelLabel) -> Result<Self> {
        let n = grid.len();
        if values.nrows() != n || values.ncols() != n {
            return Err(invalid(format!(
                "kernel is {}x{} but the grid has {n} points",
                values.nrows(),
                values.ncols()
            )));
        }
        Ok(Self {
            grid,
            values,
            label,
            action: Action::Dense,
        })
    }

    fn factored(grid: Grid, left: CMat, right: CMat, label: KernelLabel) -> Result<Self> {
        let values = &left * right.transpose();
        let mut kernel = Self::new(grid, values, label)?;
        kernel.action = Action::Factored(left, right);
        Ok(kernel)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &CMat {
        &self.values
    }

    pub fn label(&self) -> KernelLabel {
        self.label
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[(i, j)]
    }

    /// Smeared action on samples `g`.
    pub fn apply(&self, g: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.grid.len();
        if g.len() != n {
            return Err(invalid(format!("{} samples on a grid of {n} points", g.len())));
        }
        let w = self.grid.weights();
        let weighted = Mat::from_fn(n, 1, |j, _| w[j] * g[j]);
        let out = match &self.action {
            Action::Factored(left, right) => left * (right.transpose() * &weighted),
            Action::Dense => &self.values * &weighted,
            Action::Reversal => return Ok(g.iter().rev().copied().collect()),
        };
        Ok((0..n).map(|i| out[(i, 0)]).collect())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> KernelOnGrid {
        let values = Mat::from_fn(self.values.nrows(), self.values.ncols(), |i, j| {
            self.values[(i, j)].conj()
        });
        Self {
            grid: self.grid.clone(),
            values,
            label: KernelLabel::Custom,
            action: Action::Dense,
        }
    }
}

/// `δᵢⱼ / wⱼ`: acts as the identity on samples.
pub fn identity_kernel(grid: &Grid) -> Result<KernelOnGrid> {
    let w = grid.weights();
    if w.iter().any(|w| w.norm() == 0.0) {
        return Err(invalid("identity kernel needs nonzero quadrature weights"));
    }
    let n = grid.len();
    let values = Mat::from_fn(n, n, |i, j| if i == j { w[j].inv() } else { Complex64::new(0.0, 0.0) });
    KernelOnGrid::new(grid.clone(), values, KernelLabel::Custom)
}

fn require_reflection_grid(grid: &Grid) -> Result<()> {
    if !grid.is_real() || !grid.is_pt_symmetric() {
        return Err(invalid("parity kernels need a real grid symmetric under x -> -x"));
    }
    Ok(())
}

/// Exact parity `δ(x + y)` as the index-reversal permutation,
/// `P(xᵢ, yⱼ) = δ_{j, n−1−i} / wⱼ`.
pub fn build_parity_kernel(grid: &Grid) -> Result<KernelOnGrid> {
    require_reflection_grid(grid)?;
    let w = grid.weights();
    let n = grid.len();
    let values = Mat::from_fn(n, n, |i, j| {
        if j == n - 1 - i {
            w[j].inv()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut kernel = KernelOnGrid::new(grid.clone(), values, KernelLabel::Parity)?;
    kernel.action = Action::Reversal;
    Ok(kernel)
}

/// Levels used for kernels: the leading converged run of an unbroken
/// solution whose PT norms alternate.
fn kernel_levels(solution: &EigenSolution) -> Result<usize> {
    if !solution.is_unbroken() {
        return Err(Error::CUndefined("PT symmetry is broken for this solution".into()));
    }
    let levels = solution.converged_levels();
    if levels == 0 {
        return Err(Error::CUndefined("no converged levels to build kernels from".into()));
    }
    if let Some(n) = (0..levels).find(|&n| solution.pt_norm_signs[n] != if n % 2 == 0 { 1 } else { -1 }) {
        return Err(Error::CUndefined(format!(
            "PT norm of level {n} does not follow (-1)^n"
        )));
    }
    Ok(levels)
}

fn level_matrix(solution: &EigenSolution, levels: usize, reflect: bool) -> CMat {
    let n = solution.grid.len();
    Mat::from_fn(n, levels, |i, k| {
        let sign = if reflect && k % 2 == 1 { -1.0 } else { 1.0 };
        let idx = if reflect { n - 1 - i } else { i };
        sign * solution.eigenfunctions[k][idx]
    })
}

/// Spectral parity kernel `Σₙ (−1)ⁿ φₙ(x) φₙ(−y)` over the converged levels.
pub fn spectral_parity_kernel(solution: &EigenSolution) -> Result<KernelOnGrid> {
    require_reflection_grid(&solution.grid)?;
    let levels = kernel_levels(solution)?;
    let phi = level_matrix(solution, levels, false);
    let reflected = level_matrix(solution, levels, true);
    KernelOnGrid::factored(solution.grid.clone(), phi, reflected, KernelLabel::Parity)
}

/// `C(x, y) = Σₙ φₙ(x) φₙ(y)` over the converged levels (no conjugation).
///
/// Refused with [`Error::CUndefined`] for broken solutions or when the PT
/// norms of the levels used do not alternate.
pub fn build_c_kernel(solution: &EigenSolution) -> Result<KernelOnGrid> {
    let levels = kernel_levels(solution)?;
    let phi = level_matrix(solution, levels, false);
    KernelOnGrid::factored(solution.grid.clone(), phi.clone(), phi, KernelLabel::COperator)
}

/// `(A∘B)(x, z) = Σⱼ wⱼ A(x, yⱼ) B(yⱼ, z)`.
pub fn compose_kernels(a: &KernelOnGrid, b: &KernelOnGrid) -> Result<KernelOnGrid> {
    if !a.grid.same_nodes(&b.grid) {
        return Err(invalid("kernels live on different grids"));
    }
    let w = a.grid.weights();
    let n = a.grid.len();
    let scaled = Mat::from_fn(n, n, |i, j| w[i] * b.values[(i, j)]);
    let label = match (a.label, b.label) {
        (KernelLabel::COperator, KernelLabel::Parity) => KernelLabel::Cp,
        (KernelLabel::Parity, KernelLabel::COperator) => KernelLabel::Pc,
        _ => KernelLabel::Custom,
    };
    KernelOnGrid::new(a.grid.clone(), &a.values * &scaled, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{build_real_grid, RealScheme};

    fn grid() -> Grid {
        build_real_grid(201, 10.0, RealScheme::Uniform).unwrap()
    }

    #[test]
    fn parity_reflects_samples() {
        let g = grid();
        let p = build_parity_kernel(&g).unwrap();
        let x = g.sample(|x| x);
        let px = p.apply(&x).unwrap();
        for (a, b) in x.iter().zip(&px) {
            assert!((a + b).norm() < 1e-12);
        }
        let gauss = g.sample(|x| (-x * x).exp());
        let pg = p.apply(&gauss).unwrap();
        for (a, b) in gauss.iter().zip(&pg) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn parity_squared_and_identity() {
        let g = grid();
        let p = build_parity_kernel(&g).unwrap();
        let id = identity_kernel(&g).unwrap();
        let f = g.sample(|x| (x - 0.3) * (-x * x / 2.0).exp());
        let pp = compose_kernels(&p, &p).unwrap();
        for (a, b) in pp.apply(&f).unwrap().iter().zip(&f) {
            assert!((a - b).norm() < 1e-12);
        }
        let ip = compose_kernels(&id, &p).unwrap();
        for i in 0..g.len() {
            for j in 0..g.len() {
                assert!((ip.get(i, j) - p.get(i, j)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_mismatched_grids() {
        let a = identity_kernel(&grid()).unwrap();
        let b = identity_kernel(&build_real_grid(11, 10.0, RealScheme::Uniform).unwrap()).unwrap();
        assert!(compose_kernels(&a, &b).is_err());
        assert!(a.apply(&[Complex64::new(1.0, 0.0)]).is_err());
    }
}
