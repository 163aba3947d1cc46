//! Complex shooting on the turning-point contour, compared with the
//! spectral method where both apply and used alone beyond it.

use ptqm::continuum::{refine_eigenvalue_shooting, solve_spectrum, solve_spectrum_shooting, SturmLiouvilleProblem};
use ptqm::Complex64;

fn main() -> ptqm::Result<()> {
    let cubic = SturmLiouvilleProblem::with_defaults(1.0, 200)?;
    let spectral = solve_spectrum(&cubic, 4)?;
    let shot = solve_spectrum_shooting(&cubic, 4)?;
    for n in 0..4 {
        println!(
            "nu = 1, E{n}: spectral {:.12}  shooting {:.12}",
            spectral.energies[n].re, shot.energies[n].re
        );
    }

    let e0 = refine_eigenvalue_shooting(&cubic, Complex64::new(1.1, 0.0))?;
    println!("refined from the guess 1.1: {:.12}", e0.re);

    let quartic = SturmLiouvilleProblem::with_defaults(2.0, 40)?;
    for (n, e) in solve_spectrum_shooting(&quartic, 5)?.energies.iter().enumerate() {
        println!("nu = 2, E{n} = {:.10}", e.re);
    }
    Ok(())
}
