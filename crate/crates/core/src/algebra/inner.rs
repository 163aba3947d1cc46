use num_complex::Complex64;

use super::KernelOnGrid;
use crate::error::{invalid, Result};
use crate::numerics::Grid;

fn check_pt_grid(f: &[Complex64], g: &[Complex64], grid: &Grid) -> Result<()> {
    if f.len() != grid.len() || g.len() != grid.len() {
        return Err(invalid(format!(
            "sample lengths {} and {} do not match grid of {}",
            f.len(),
            g.len(),
            grid.len()
        )));
    }
    if !grid.is_pt_symmetric() {
        return Err(invalid("PT inner product needs a grid closed under x -> -x*"));
    }
    Ok(())
}

/// `(f, g) = ∫_C [f(−x)]* g(x) dx`, the reflected sample taken by index
/// reversal on the symmetric grid.
pub fn pt_inner_product(f: &[Complex64], g: &[Complex64], grid: &Grid) -> Result<Complex64> {
    check_pt_grid(f, g, grid)?;
    let n = grid.len();
    Ok(grid
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| w * f[n - 1 - i].conj() * g[i])
        .sum())
}

/// `(PT f)(x) = [f(−x*)]*` on a PT-symmetric grid.
pub fn pt_conjugate(f: &[Complex64], grid: &Grid) -> Result<Vec<Complex64>> {
    check_pt_grid(f, f, grid)?;
    Ok(f.iter().rev().map(|z| z.conj()).collect())
}

/// `⟨f|g⟩ = ∫ [CPT f](x) g(x) dx`, with `C` applied as a kernel to the PT
/// conjugate of `f`.
pub fn cpt_inner_product(f: &[Complex64], g: &[Complex64], c_kernel: &KernelOnGrid) -> Result<Complex64> {
    let grid = c_kernel.grid();
    check_pt_grid(f, g, grid)?;
    let cpt_f = c_kernel.apply(&pt_conjugate(f, grid)?)?;
    Ok(grid
        .weights()
        .iter()
        .zip(cpt_f.iter().zip(g))
        .map(|(w, (a, b))| w * a * b)
        .sum())
}
