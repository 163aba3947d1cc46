use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numerics::linalg::{self, CMat};

const STRUCTURE_TOL: f64 = 1e-12;
const REAL_SPECTRUM_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-9;
const NULL_NORM_TOL: f64 = 1e-10;
const COALESCED_TOL: f64 = 1e-6;
/// Eigenvector matrices worse conditioned than this are treated as defective.
pub const MAX_CONDITION: f64 = 1e12;

/// Finite Hamiltonian `h` together with its parity matrix `p`.
///
/// `p` is validated on construction (`p² = 1`, `tr p = 0`, `p = p†`, even
/// dimension). The PT-symmetry predicate `p h† p = h` is reported by
/// [`MatrixHamiltonian::pt_symmetry_residual`] and enforced only by the
/// operations that need it.
#[derive(Debug, Clone)]
pub struct MatrixHamiltonian {
    h: CMat,
    p: CMat,
}

impl MatrixHamiltonian {
    pub fn new(h: CMat, p: CMat) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n || p.nrows() != n || p.ncols() != n {
            return Err(invalid("h and p must be square matrices of the same size"));
        }
        if n == 0 || !n.is_multiple_of(2) {
            return Err(invalid(format!("dimension must be even and positive, got {n}")));
        }
        let id = linalg::identity(n);
        if linalg::max_abs_diff(&(&p * &p), &id) > STRUCTURE_TOL {
            return Err(invalid("parity matrix must square to the identity"));
        }
        if linalg::trace(&p).norm() > STRUCTURE_TOL {
            return Err(invalid("parity matrix must be traceless"));
        }
        if linalg::max_abs_diff(&p, &linalg::adjoint(&p)) > STRUCTURE_TOL {
            return Err(invalid("parity matrix must be Hermitian"));
        }
        Ok(Self { h, p })
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    pub fn p(&self) -> &CMat {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    /// `max |p h† p − h|`.
    pub fn pt_symmetry_residual(&self) -> f64 {
        let php = &self.p * linalg::adjoint(&self.h) * &self.p;
        linalg::max_abs_diff(&php, &self.h)
    }

    pub fn is_pt_symmetric(&self) -> bool {
        self.pt_symmetry_residual() <= STRUCTURE_TOL * linalg::max_abs(&self.h).max(1.0)
    }

    /// Whether `h` also commutes with `PT` acting as `v → p v*`.
    fn commutes_with_pt(&self) -> bool {
        let phs = &self.p * linalg::conj(&self.h) * &self.p;
        linalg::max_abs_diff(&phs, &self.h) <= STRUCTURE_TOL * linalg::max_abs(&self.h).max(1.0)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &MatrixHamiltonian) -> Result<MatrixHamiltonian> {
        let (a, b) = (self.dim(), other.dim());
        let block = |x: &CMat, y: &CMat| {
            Mat::from_fn(a + b, a + b, |i, j| match (i < a, j < a) {
                (true, true) => x[(i, j)],
                (false, false) => y[(i - a, j - a)],
                _ => Complex64::new(0.0, 0.0),
            })
        };
        MatrixHamiltonian::new(block(&self.h, &other.h), block(&self.p, &other.p))
    }
}

/// Eigenpairs of an unbroken PT-symmetric matrix, scaled so that
/// `(vₙ, vₙ) = vₙ† p vₙ = σₙ = ±1`.
///
/// Ordered with the `+1` block first, then by ascending energy.
#[derive(Debug, Clone, Serialize)]
pub struct PtEigensystem {
    pub energies: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<Complex64>>,
    pub pt_norms: Vec<i8>,
    /// 2-norm condition number of the eigenvector matrix.
    pub condition: f64,
}

fn normalize_sign(v: &mut [Complex64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12 * scale) {
        let arg = first.arg();
        if arg <= -std::f64::consts::FRAC_PI_2 || arg > std::f64::consts::FRAC_PI_2 {
            v.iter_mut().for_each(|z| *z = -*z);
        }
    }
}

/// Rotates `v` so that `p v* = v`; only meaningful when `h` commutes with PT.
fn fix_pt_phase(v: &mut [Complex64], p: &CMat) {
    let pv = linalg::mat_vec(p, &v.iter().map(|z| z.conj()).collect::<Vec<_>>());
    let (i, _) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty vector");
    // p v* = λ v with |λ| = 1; multiplying v by λ^{1/2} makes λ = 1.
    let lambda = pv[i] / v[i];
    let rot = Complex64::from_polar(1.0, lambda.arg() / 2.0);
    v.iter_mut().for_each(|z| *z *= rot);
}

/// PT-normalized eigensystem of `hamiltonian`.
///
/// Degenerate eigenvalues are handled by diagonalizing the `p`-Gram matrix
/// of each cluster. Errors: [`Error::CUndefined`] if the predicate fails or
/// the spectrum is not real, [`Error::Degenerate`] if an eigenvector has a
/// null PT norm or the eigenbasis is numerically defective.
pub fn pt_eigensystem(hamiltonian: &MatrixHamiltonian) -> Result<PtEigensystem> {
    if !hamiltonian.is_pt_symmetric() {
        return Err(Error::CUndefined(format!(
            "p h† p differs from h by {:.3e}",
            hamiltonian.pt_symmetry_residual()
        )));
    }
    let (h, p) = (&hamiltonian.h, &hamiltonian.p);
    let n = hamiltonian.dim();
    let (values, vecs) = linalg::eigen(h)?;
    let scale = linalg::max_abs(h).max(1.0);
    if let Some(z) = values.iter().find(|z| z.im.abs() > REAL_SPECTRUM_TOL * scale) {
        // A defective eigenvalue splits into a pair of width ~√ε under roundoff.
        if z.im.abs() < COALESCED_TOL * scale {
            return Err(Error::Degenerate {
                eigenvalue: Complex64::new(z.re, 0.0),
            });
        }
        return Err(Error::CUndefined(format!("PT symmetry is broken: eigenvalue {z}")));
    }
    let condition = linalg::condition_number(&vecs)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
    let mut energies = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]].re - values[order[end - 1]].re <= CLUSTER_TOL * scale {
            end += 1;
        }
        let cluster: Vec<Vec<Complex64>> = order[start..end].iter().map(|&k| linalg::column(&vecs, k)).collect();
        let energy = order[start..end].iter().map(|&k| values[k].re).sum::<f64>() / (end - start) as f64;
        let m = cluster.len();
        let gram = Mat::from_fn(m, m, |a, b| {
            let pb = linalg::mat_vec(p, &cluster[b]);
            cluster[a].iter().zip(&pb).map(|(x, y)| x.conj() * y).sum::<Complex64>()
        });
        let gram = Mat::from_fn(m, m, |a, b| (gram[(a, b)] + gram[(b, a)].conj()) / 2.0);
        let (d, u) = linalg::hermitian_eigen(&gram)?;
        for (k, &dk) in d.iter().enumerate() {
            if dk.abs() < NULL_NORM_TOL {
                return Err(Error::Degenerate {
                    eigenvalue: Complex64::new(energy, 0.0),
                });
            }
            let s = dk.abs().sqrt();
            let mut v: Vec<Complex64> = (0..n)
                .map(|i| (0..m).map(|a| cluster[a][i] * u[(a, k)]).sum::<Complex64>() / s)
                .collect();
            if m == 1 && hamiltonian.commutes_with_pt() {
                fix_pt_phase(&mut v, p);
            }
            normalize_sign(&mut v);
            energies.push(energy);
            vectors.push(v);
            norms.push(if dk > 0.0 { 1 } else { -1 });
        }
        start = end;
    }
    if condition > MAX_CONDITION {
        return Err(Error::Degenerate {
            eigenvalue: Complex64::new(energies[0], 0.0),
        });
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| norms[b].cmp(&norms[a]).then(energies[a].total_cmp(&energies[b])));
    Ok(PtEigensystem {
        energies: idx.iter().map(|&k| energies[k]).collect(),
        vectors: idx.iter().map(|&k| vectors[k].clone()).collect(),
        pt_norms: idx.iter().map(|&k| norms[k]).collect(),
        condition,
    })
}

/// `C = Σₙ vₙ (PT vₙ)ᵀ = Σₙ vₙ vₙ† p` over PT-normalized eigenvectors.
///
/// `C` squares to one, commutes with `h`, and has eigenvalue `σₙ` on `vₙ`.
pub fn spectral_c_operator(hamiltonian: &MatrixHamiltonian) -> Result<CMat> {
    let system = pt_eigensystem(hamiltonian)?;
    Ok(c_from_vectors(&system.vectors, hamiltonian.p()))
}

pub(crate) fn c_from_vectors(vectors: &[Vec<Complex64>], p: &CMat) -> CMat {
    let n = p.nrows();
    let mut c = Mat::<Complex64>::zeros(n, n);
    for v in vectors {
        let vp = linalg::mat_vec(&linalg::transpose(p), &v.iter().map(|z| z.conj()).collect::<Vec<_>>());
        for i in 0..n {
            for j in 0..n {
                c[(i, j)] += v[i] * vp[j];
            }
        }
    }
    c
}

fn check_dims(u: &[Complex64], v: &[Complex64], m: &CMat) -> Result<()> {
    if u.len() != m.nrows() || v.len() != m.nrows() {
        return Err(invalid(format!(
            "vectors of length {} and {} against a {}x{} matrix",
            u.len(),
            v.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn sesquilinear(u: &[Complex64], m: &CMat, v: &[Complex64]) -> Complex64 {
    let mv = linalg::mat_vec(m, v);
    u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}

/// `(u, v) = (PT u)·v = u† p v`.
pub fn matrix_pt_inner_product(u: &[Complex64], v: &[Complex64], p: &CMat) -> Result<Complex64> {
    check_dims(u, v, p)?;
    Ok(sesquilinear(u, p, v))
}

/// `⟨u|v⟩ = u† p C v`.
///
/// Equal to `(CPT u)·v = (C p u*)ᵀ v` whenever `C` is symmetric, which is
/// the case when `h` also commutes with PT. The form `u† p C v` stays
/// positive definite for every `p`-pseudo-Hermitian `h`.
pub fn matrix_cpt_inner_product(u: &[Complex64], v: &[Complex64], c: &CMat, p: &CMat) -> Result<Complex64> {
    check_dims(u, v, p)?;
    check_dims(u, v, c)?;
    Ok(sesquilinear(u, &(p * c), v))
}

/// `max |Σₙ |vₙ⟩⟨vₙ| − 1|` with `⟨vₙ| = vₙ† p C`, together with the condition
/// number of the eigenvector matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub residual: f64,
    pub condition: f64,
}

pub fn cpt_completeness(vectors: &[Vec<Complex64>], c: &CMat, p: &CMat) -> Result<CompletenessReport> {
    let n = p.nrows();
    if vectors.len() != n || vectors.iter().any(|v| v.len() != n) || c.nrows() != n || c.ncols() != n {
        return Err(invalid("need a full set of eigenvectors matching c and p"));
    }
    let bra = p * c;
    let mut sum = Mat::<Complex64>::zeros(n, n);
    for v in vectors {
        let row: Vec<Complex64> = (0..n)
            .map(|j| (0..n).map(|i| v[i].conj() * bra[(i, j)]).sum())
            .collect();
        for i in 0..n {
            for j in 0..n {
                sum[(i, j)] += v[i] * row[j];
            }
        }
    }
    let vmat = Mat::from_fn(n, n, |i, k| vectors[k][i]);
    Ok(CompletenessReport {
        residual: linalg::max_abs_diff(&sum, &linalg::identity(n)),
        condition: linalg::condition_number(&vmat)?,
    })
}

/// `C = C_R + i C_I` with `C_R`, `C_I` real.
#[derive(Debug, Clone)]
pub struct CSplit {
    pub c: CMat,
    pub c_real: Mat<f64>,
    pub c_imag: Mat<f64>,
}

impl CSplit {
    pub fn new(c: &CMat) -> Self {
        Self {
            c: c.clone(),
            c_real: Mat::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)].re),
            c_imag: Mat::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)].im),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParityRelations {
    pub split: CSplit,
    /// `max |C_R P − P C_R|`.
    pub real_commutator: f64,
    /// `max |C_I P + P C_I|`.
    pub imag_anticommutator: f64,
}

pub fn c_parity_commutation(c: &CMat, p: &CMat) -> Result<ParityRelations> {
    if c.shape() != p.shape() || c.nrows() != c.ncols() {
        return Err(invalid("c and p must be square matrices of the same size"));
    }
    let split = CSplit::new(c);
    let lift = |m: &Mat<f64>| Mat::from_fn(m.nrows(), m.ncols(), |i, j| Complex64::new(m[(i, j)], 0.0));
    let (cr, ci) = (lift(&split.c_real), lift(&split.c_imag));
    let real_commutator = linalg::max_abs_diff(&(&cr * p), &(p * &cr));
    let imag_anticommutator = linalg::max_abs(&(&ci * p + p * &ci));
    Ok(ParityRelations {
        split,
        real_commutator,
        imag_anticommutator,
    })
}

/// Coefficients of `det(z − h)`, constant term first.
pub fn characteristic_polynomial(h: &CMat) -> Result<Vec<Complex64>> {
    let (values, _) = linalg::eigen(h)?;
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for lambda in values {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &a) in coeffs.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= lambda * a;
        }
        coeffs = next;
    }
    Ok(coeffs)
}
