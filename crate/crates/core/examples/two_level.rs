//! Closed forms for the 2x2 family and their spectral cross-check.

use std::f64::consts::FRAC_PI_6;

use ptqm::matrix::{
    build_c_two_level, build_two_level, c_parity_commutation, cpt_completeness, reality_condition, spectral_c_operator,
    two_level_eigensystem, TwoLevelParams,
};
use ptqm::numerics::linalg;

fn main() -> ptqm::Result<()> {
    for params in [
        TwoLevelParams::new(1.0, 1.0, 1.0, FRAC_PI_6),
        TwoLevelParams::new(1.0, 0.5, 2.0, 0.4),
        TwoLevelParams::new(1.0, 0.5, 0.5, std::f64::consts::FRAC_PI_2),
    ] {
        let phase = reality_condition(&params);
        let sys = two_level_eigensystem(&params)?;
        println!(
            "(r, s, t, theta) = ({}, {}, {}, {:.4}): {} eps+ = {:.10}, eps- = {:.10}",
            params.r,
            params.s,
            params.t,
            params.theta,
            phase.name(),
            sys.eps_plus,
            sys.eps_minus
        );
        let Ok(c) = build_c_two_level(&params) else {
            println!("  no C outside the unbroken regime");
            continue;
        };
        let h = build_two_level(&params);
        let relations = c_parity_commutation(&c, h.p())?;
        println!("  C = {:?}", c);
        println!(
            "  |C^2 - I| {:.1e}, |C - spectral C| {:.1e}, completeness {:.1e}, [C_R, P] {:.1e}, {{C_I, P}} {:.1e}",
            linalg::max_abs_diff(&(&c * &c), &linalg::identity(2)),
            linalg::max_abs_diff(&c, &spectral_c_operator(&h)?),
            cpt_completeness(&sys.vectors(), &c, h.p())?.residual,
            relations.real_commutator,
            relations.imag_anticommutator,
        );
    }
    Ok(())
}
