//! Spectral (Hermite-basis) energies for a few exponents.

use ptqm::continuum::{classify_pt_phase, solve_spectrum, SturmLiouvilleProblem};

fn main() -> ptqm::Result<()> {
    for nu in [0.0, 0.5, 1.0] {
        let problem = SturmLiouvilleProblem::with_defaults(nu, 200)?;
        let sol = solve_spectrum(&problem, 6)?;
        let phase = classify_pt_phase(&sol)?.phase;
        println!("nu = {nu} ({phase:?}, {} converged levels)", sol.converged_levels());
        for (n, (e, s)) in sol.energies.iter().zip(&sol.pt_norm_signs).enumerate() {
            println!("  E{n} = {:.10}  PT norm {s:+}", e.re);
        }
    }
    Ok(())
}
