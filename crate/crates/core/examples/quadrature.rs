//! Grids, wedge contours and root finding.

use ptqm::numerics::{build_real_grid, build_wedge_contour, contour_integrate, find_root_1d, RealScheme, WedgeSpec};

fn main() -> ptqm::Result<()> {
    let gh = build_real_grid(64, 10.0, RealScheme::GaussHermite)?;
    let gauss = gh.integrate(&gh.sample(|x| (-x * x).exp()))?;
    println!("int exp(-x^2) on 64 Gauss-Hermite nodes: {:.15}", gauss.re);

    for nu in [0.0, 1.0, 2.0, 4.0] {
        let spec = WedgeSpec::for_nu(nu)?;
        println!(
            "nu = {nu}: wedge centers {:+.6} / {:+.6}, half opening {:.6}",
            spec.center_left, spec.center_right, spec.half_opening
        );
    }

    let real_line = build_wedge_contour(&WedgeSpec::for_nu(0.0)?, 10.0, 2001)?;
    let along = contour_integrate(&real_line.sample(|x| (-x * x).exp()), &real_line)?;
    println!("same integral along the nu = 0 contour: {:.15}", along.re);

    let root = find_root_1d(|x| x * x - 2.0, (1.0, 2.0), 1e-14)?;
    println!("root of x^2 - 2 on [1, 2]: {root:.15}");
    Ok(())
}
