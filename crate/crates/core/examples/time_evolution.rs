//! CPT norm conservation in the unbroken phase and norm growth in the broken one.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use ptqm::matrix::{build_c_two_level, build_two_level, matrix_cpt_inner_product, time_evolve, TwoLevelParams};
use ptqm::Complex64;

fn main() -> ptqm::Result<()> {
    let times: Vec<f64> = (0..=5).map(|k| 2.0 * k as f64).collect();
    let psi0 = [Complex64::new(0.8, 0.1), Complex64::new(-0.2, 0.5)];

    let unbroken = TwoLevelParams::new(1.0, 1.0, 1.0, FRAC_PI_6);
    let h = build_two_level(&unbroken);
    let c = build_c_two_level(&unbroken)?;
    for (t, psi) in times.iter().zip(time_evolve(&h, &psi0, &times)?) {
        let cpt = matrix_cpt_inner_product(&psi, &psi, &c, h.p())?.re;
        let l2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        println!("unbroken t = {t:4.1}: CPT norm {cpt:.15}, |psi|^2 {l2:.6}");
    }

    let broken = build_two_level(&TwoLevelParams::new(1.0, 0.5, 0.5, FRAC_PI_2));
    for (t, psi) in times.iter().zip(time_evolve(&broken, &psi0, &times)?) {
        let l2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        println!("broken   t = {t:4.1}: |psi|^2 {l2:.6e}");
    }
    Ok(())
}
