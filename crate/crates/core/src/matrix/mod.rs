//! Finite PT-symmetric matrix models.
//!
//! The 2×2 family `h = [[r e^{iθ}, s], [t, r e^{−iθ}]]` has closed forms for
//! its eigensystem and `C`; general even-dimensional Hamiltonians with a
//! validated parity matrix get `C` from their PT-normalized eigenvectors.
//! Time evolution and a phase-boundary scan complete the module.

mod evolution;
mod general;
mod scan;
mod two_level;

pub use evolution::time_evolve;
pub use general::{
    c_parity_commutation, characteristic_polynomial, cpt_completeness, matrix_cpt_inner_product,
    matrix_pt_inner_product, pt_eigensystem, spectral_c_operator, CSplit, CompletenessReport, MatrixHamiltonian,
    ParityRelations, PtEigensystem, MAX_CONDITION,
};
pub use scan::{exceptional_point_scan, PhaseScan};
pub use two_level::{
    build_c_two_level, build_two_level, reality_condition, two_level_eigensystem, RealityPhase, TwoLevelEigensystem,
    TwoLevelParams,
};
