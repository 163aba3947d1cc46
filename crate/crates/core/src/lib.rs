//! Numerical toolkit for PT-symmetric quantum mechanics.
//!
//! The crate covers two settings that share one algebra:
//!
//! * the continuum family `H = p² + x²(ix)^ν`, solved by a Hermite-function
//!   spectral method on the real axis (`0 ≤ ν < 2`) and by complex shooting
//!   along Stokes-wedge contours (any `ν ≥ 0`);
//! * finite matrix Hamiltonians satisfying `P H† P = H`, including the
//!   closed-form 2×2 family `[[r e^{iθ}, s], [t, r e^{-iθ}]]`.
//!
//! For both, the hidden symmetry `C` is assembled from PT-normalized
//! eigenstates and the identities it must satisfy (`C² = 1`, `[C, H] = 0`,
//! `CP = (PC)*`, completeness, positivity of the CPT inner product,
//! conservation of CPT norms under time evolution) are checked numerically.
//!
//! Module map:
//!
//! | module       | contents                                                  |
//! |--------------|-----------------------------------------------------------|
//! | [`numerics`] | grids, wedge contours, quadrature, root finding, eigen    |
//! | [`continuum`]| Hamiltonian assembly, spectra, shooting, PT normalization |
//! | [`algebra`]  | kernels on grids, PT/CPT inner products, verification     |
//! | [`matrix`]   | two-level and general matrix models, evolution, scans     |
//! | [`cli`]      | the `ptqm` command-line front end and output formats      |

pub mod algebra;
pub mod cli;
pub mod continuum;
pub mod error;
pub mod matrix;
pub mod numerics;

pub use error::{Error, Result};
pub use num_complex::Complex64;
