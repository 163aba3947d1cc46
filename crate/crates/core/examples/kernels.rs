//! C kernels and the identity suite on truncated eigenbases.

use ptqm::algebra::{build_c_kernel, cpt_inner_product, default_test_functions, run_verification_suite};
use ptqm::continuum::{solve_spectrum, solve_spectrum_shooting, EigenSolution, SturmLiouvilleProblem};

fn show(label: &str, sol: &EigenSolution) -> ptqm::Result<()> {
    let report = run_verification_suite(sol, &default_test_functions(&sol.grid))?;
    println!(
        "{label}: {} levels, all passed = {}",
        report.levels,
        report.all_passed()
    );
    for (name, check) in &report.checks {
        println!(
            "  {name:<18} {:.3e} (tolerance {:.0e})",
            check.residual, check.tolerance
        );
    }
    let c = build_c_kernel(sol)?;
    let norms: Vec<String> = sol.eigenfunctions[..4]
        .iter()
        .map(|f| cpt_inner_product(f, f, &c).map(|v| format!("{:.8}", v.re)))
        .collect::<ptqm::Result<_>>()?;
    println!("  CPT norms of the first levels: {}", norms.join(", "));
    Ok(())
}

fn main() -> ptqm::Result<()> {
    let oscillator = solve_spectrum(&SturmLiouvilleProblem::with_defaults(0.0, 200)?, 40)?;
    show("nu = 0, real axis", &oscillator)?;
    let cubic = solve_spectrum_shooting(&SturmLiouvilleProblem::with_defaults(1.0, 40)?, 20)?;
    show("nu = 1, contour", &cubic)
}
