//! Operator kernels on grids, PT and CPT inner products, and the
//! verification suite for the kernel identities.
//!
//! Kernels are dense matrices over the grid nodes and act with the
//! quadrature weights. Parity needs a real grid closed under `x → −x`; the
//! C kernel, the inner products and the suite also work on the complex
//! contours produced by the shooting solver.

mod inner;
mod kernel;
mod verify;

pub use inner::{cpt_inner_product, pt_conjugate, pt_inner_product};
pub use kernel::{
    build_c_kernel, build_parity_kernel, compose_kernels, identity_kernel, spectral_parity_kernel, KernelLabel,
    KernelOnGrid,
};
pub use verify::{
    cp_pc_residual, default_test_functions, run_verification_suite, run_verification_suite_with, Check,
    SuiteTolerances, VerificationReport, COMPLETENESS, CPT_COMPLETENESS, CPT_POSITIVITY, CP_PC_CONJUGATE, C_SQUARED,
    ORTHONORMALITY, TRUNCATION_TOL,
};
