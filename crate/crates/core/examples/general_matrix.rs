//! A 4x4 pseudo-Hermitian matrix with block parity: PT-normalized
//! eigenvectors, the spectral C and the CPT inner product.

use ptqm::matrix::{build_two_level, matrix_cpt_inner_product, pt_eigensystem, spectral_c_operator, TwoLevelParams};

fn main() -> ptqm::Result<()> {
    let a = build_two_level(&TwoLevelParams::new(1.0, 1.0, 1.0, 0.5));
    let b = build_two_level(&TwoLevelParams::new(0.3, 2.0, 0.5, 1.2));
    let h = a.direct_sum(&b)?;
    println!("PH^dagP = H residual: {:.1e}", h.pt_symmetry_residual());

    let sys = pt_eigensystem(&h)?;
    let c = spectral_c_operator(&h)?;
    println!("eigenvector condition number: {:.3}", sys.condition);
    for (e, (v, s)) in sys.energies.iter().zip(sys.vectors.iter().zip(&sys.pt_norms)) {
        let norm = matrix_cpt_inner_product(v, v, &c, h.p())?;
        println!("E = {e:+.10}  PT norm {s:+}  CPT norm {:.12}", norm.re);
    }
    Ok(())
}
