//! Grids, contours, quadrature and scalar root finding.

mod grid;
pub mod hermite;
pub mod linalg;
mod quadrature;
mod roots;

pub use grid::{build_real_grid, build_wedge_contour, contour_integrate, Grid, GridKind, RealScheme, WedgeSpec};
pub use quadrature::gauss_legendre;
pub use roots::find_root_1d;

use crate::error::{invalid, Result};

/// Default extent of real grids used for kernel work.
pub const DEFAULT_GRID_EXTENT: f64 = 12.0;
/// Default number of points of real grids used for kernel work.
pub const DEFAULT_GRID_POINTS: usize = 400;

/// Tolerances shared by the solvers and the verification suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute eigenvalue tolerance (basis-size stability, shooting).
    pub eig_abs: f64,
    /// Tolerance for algebraic identity checks.
    pub residual: f64,
    /// Largest |Im E| still treated as real.
    pub imag_reality: f64,
}

impl Tolerances {
    pub fn new(eig_abs: f64, residual: f64, imag_reality: f64) -> Result<Self> {
        for (name, v) in [
            ("eig_abs", eig_abs),
            ("residual", residual),
            ("imag_reality", imag_reality),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            eig_abs,
            residual,
            imag_reality,
        })
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig_abs: 1e-8,
            residual: 1e-6,
            imag_reality: 1e-8,
        }
    }
}
