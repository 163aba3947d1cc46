//! Reality phases over an (s, t) lattice and the exceptional curve st = r^2 sin^2(theta).

use std::f64::consts::FRAC_PI_6;

use ptqm::matrix::{exceptional_point_scan, RealityPhase};

fn main() -> ptqm::Result<()> {
    let scan = exceptional_point_scan(1.0, FRAC_PI_6, (0.0, 1.0), (0.0, 1.0), 11)?;
    for (i, row) in scan.phases.iter().enumerate().rev() {
        let line: String = row
            .iter()
            .map(|p| match p {
                RealityPhase::Unbroken => '+',
                RealityPhase::Exceptional => '*',
                RealityPhase::Broken => '.',
            })
            .collect();
        println!("s = {:.1}  {line}", scan.s[i]);
    }
    println!("{} boundary points, e.g.", scan.boundary.len());
    for (s, t) in scan.boundary.iter().take(5) {
        println!("  s = {s:.4}, t = {t:.4}, st = {:.12}", s * t);
    }
    Ok(())
}
