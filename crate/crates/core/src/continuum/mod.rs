//! Eigenproblem `−φ'' + x²(ix)^ν φ = E φ` with decaying boundary conditions.
//!
//! Two independent routes are provided:
//!
//! * a spectral method in the orthonormal Hermite-function basis, valid on
//!   the real axis for `0 ≤ ν < 2` ([`assemble_hamiltonian_matrix`],
//!   [`solve_spectrum`]);
//! * complex shooting from both ends of a Stokes-wedge contour with secant
//!   iteration on the matching Wronskian, valid for every `ν ≥ 0`
//!   ([`refine_eigenvalue_shooting`], [`solve_spectrum_shooting`]).
//!
//! Eigenfunctions are PT-normalized (`φ*(−x) = φ(x)`) and carry the sign of
//! their PT norm.

mod hamiltonian;
mod phase;
mod shooting;
mod spectrum;

pub use hamiltonian::{assemble_hamiltonian_matrix, potential};
pub use phase::{classify_energies, classify_pt_phase, pt_phase_normalize, PhaseClassification, PtPhase};
pub use shooting::{
    build_turning_point_contour, refine_eigenvalue_shooting, resample_on_grid, shooting_eigenfunction,
    solve_spectrum_shooting, wkb_energy_estimate,
};
pub use spectrum::{eigen_residual, solve_spectrum, Backend, EigenSolution};

use crate::error::{invalid, Result};
use crate::numerics::{build_real_grid, Grid, RealScheme, Tolerances, DEFAULT_GRID_EXTENT, DEFAULT_GRID_POINTS};

/// Default Hermite basis truncation.
pub const DEFAULT_BASIS_SIZE: usize = 200;
/// Default number of requested levels.
pub const DEFAULT_LEVELS: usize = 10;

/// One instance of the eigenproblem: deformation `ν`, the grid on which
/// eigenfunctions are sampled, and the spectral truncation order.
#[derive(Debug, Clone)]
pub struct SturmLiouvilleProblem {
    pub nu: f64,
    pub grid: Grid,
    pub basis_size: usize,
    pub tolerances: Tolerances,
}

impl SturmLiouvilleProblem {
    pub fn new(nu: f64, grid: Grid, basis_size: usize, tolerances: Tolerances) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(invalid(format!("nu must be finite and >= 0, got {nu}")));
        }
        if basis_size < 2 {
            return Err(invalid(format!("basis_size must be >= 2, got {basis_size}")));
        }
        Ok(Self {
            nu,
            grid,
            basis_size,
            tolerances,
        })
    }

    /// Default uniform grid (400 points on `[-12, 12]`) and tolerances.
    pub fn with_defaults(nu: f64, basis_size: usize) -> Result<Self> {
        let grid = build_real_grid(DEFAULT_GRID_POINTS, DEFAULT_GRID_EXTENT, RealScheme::Uniform)?;
        Self::new(nu, grid, basis_size, Tolerances::default())
    }
}
