use num_complex::Complex64;
use serde::Serialize;

use super::general::MatrixHamiltonian;
use crate::error::{Error, Result};
use crate::numerics::linalg::{from_rows, CMat};

const EXCEPTIONAL_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelParams {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    /// Radians.
    pub theta: f64,
}

impl TwoLevelParams {
    pub fn new(r: f64, s: f64, t: f64, theta: f64) -> Self {
        Self { r, s, t, theta }
    }

    /// `st − r² sin²θ`; positive exactly in the unbroken regime.
    pub fn discriminant(&self) -> f64 {
        self.s * self.t - (self.r * self.theta.sin()).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RealityPhase {
    Unbroken,
    Exceptional,
    Broken,
}

impl RealityPhase {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Unbroken => "unbroken",
            Self::Exceptional => "exceptional",
            Self::Broken => "broken",
        }
    }
}

/// `h = [[r e^{iθ}, s], [t, r e^{−iθ}]]` with `p = [[0, 1], [1, 0]]`.
pub fn build_two_level(params: &TwoLevelParams) -> MatrixHamiltonian {
    let TwoLevelParams { r, s, t, theta } = *params;
    let c = |re: f64| Complex64::new(re, 0.0);
    let h = from_rows(&[
        &[Complex64::from_polar(r, theta), c(s)],
        &[c(t), Complex64::from_polar(r, -theta)],
    ]);
    let p = from_rows(&[&[c(0.0), c(1.0)], &[c(1.0), c(0.0)]]);
    MatrixHamiltonian::new(h, p).expect("two-level parity is valid")
}

/// Tri-state reading of `st > r² sin²θ`. Equality is decided relative to
/// `max(|st|, r² sin²θ)` at `1e-12`.
pub fn reality_condition(params: &TwoLevelParams) -> RealityPhase {
    let st = params.s * params.t;
    let rs = (params.r * params.theta.sin()).powi(2);
    let d = st - rs;
    if d.abs() <= EXCEPTIONAL_REL * st.abs().max(rs) {
        RealityPhase::Exceptional
    } else if d > 0.0 {
        RealityPhase::Unbroken
    } else {
        RealityPhase::Broken
    }
}

#[derive(Debug, Clone)]
pub struct TwoLevelEigensystem {
    pub phase: RealityPhase,
    pub eps_plus: Complex64,
    pub eps_minus: Complex64,
    /// Real when unbroken; complex otherwise.
    pub alpha: Complex64,
    pub v_plus: [Complex64; 2],
    pub v_minus: [Complex64; 2],
    /// PT norms of `(v_plus, v_minus)`; `None` when broken.
    pub pt_norms: Option<(i8, i8)>,
}

impl TwoLevelEigensystem {
    pub fn vectors(&self) -> Vec<Vec<Complex64>> {
        vec![self.v_plus.to_vec(), self.v_minus.to_vec()]
    }
}

/// Mixing angle with `sin α = r sinθ / κ`, `κ = sign(s) √(st)`.
///
/// For `s, t > 0` this is `sin α = (r/√(st)) sin θ`. Allowing `κ < 0` keeps
/// the closed forms valid when `s` and `t` are both negative.
fn kappa(params: &TwoLevelParams) -> Complex64 {
    let st = Complex64::new(params.s * params.t, 0.0).sqrt();
    if params.s < 0.0 {
        -st
    } else {
        st
    }
}

/// Closed-form eigensystem.
///
/// Unbroken: `u = (a e^{iα/2}, b e^{−iα/2}) / √(2 cos α)` has PT norm `+1`
/// and energy `r cosθ + κ cos α`; `w = i (a e^{−iα/2}, −b e^{iα/2}) / √(2 cos α)`
/// has PT norm `−1` and energy `r cosθ − κ cos α`, with `a = (s/t)^{1/4}`,
/// `b = 1/a`. For `s = t > 0` these are the textbook states and `u = v₊`.
///
/// Broken: complex-conjugate energies, complex `α`, unit-norm eigenvectors.
/// Exceptional: [`Error::Degenerate`] carrying `r cos θ`.
pub fn two_level_eigensystem(params: &TwoLevelParams) -> Result<TwoLevelEigensystem> {
    let TwoLevelParams { r, s, t, theta } = *params;
    let phase = reality_condition(params);
    let center = r * theta.cos();
    let i = Complex64::i();
    match phase {
        RealityPhase::Exceptional => Err(Error::Degenerate {
            eigenvalue: Complex64::new(center, 0.0),
        }),
        RealityPhase::Unbroken => {
            let root = params.discriminant().sqrt();
            let k = kappa(params).re;
            let sin_a = r * theta.sin() / k;
            let alpha = sin_a.asin();
            let norm = 1.0 / (2.0 * alpha.cos()).sqrt();
            let a = (s / t).powf(0.25);
            let b = 1.0 / a;
            let half = Complex64::from_polar(1.0, alpha / 2.0);
            let u = [norm * a * half, norm * b * half.conj()];
            let w = [i * norm * a * half.conj(), -i * norm * b * half];
            let (v_plus, v_minus, pt_norms) = if k > 0.0 { (u, w, (1, -1)) } else { (w, u, (-1, 1)) };
            Ok(TwoLevelEigensystem {
                phase,
                eps_plus: Complex64::new(center + root, 0.0),
                eps_minus: Complex64::new(center - root, 0.0),
                alpha: Complex64::new(alpha, 0.0),
                v_plus,
                v_minus,
                pt_norms: Some(pt_norms),
            })
        }
        RealityPhase::Broken => {
            let root = Complex64::new(params.discriminant(), 0.0).sqrt();
            let eps_plus = center + root;
            let eps_minus = center - root;
            let alpha = (r * theta.sin() / kappa(params)).asin();
            let h11 = Complex64::from_polar(r, theta);
            let h22 = h11.conj();
            let vector = |e: Complex64| {
                let v = if s.abs() >= t.abs() {
                    [Complex64::new(s, 0.0), e - h11]
                } else {
                    [e - h22, Complex64::new(t, 0.0)]
                };
                let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                [v[0] / n, v[1] / n]
            };
            Ok(TwoLevelEigensystem {
                phase,
                eps_plus,
                eps_minus,
                alpha,
                v_plus: vector(eps_plus),
                v_minus: vector(eps_minus),
                pt_norms: None,
            })
        }
    }
}

/// `C = (1/cos α) [[i sin α, a²], [b², −i sin α]]`, `a² = √(s/t)`, `b² = 1/a²`.
///
/// For `s = t` the off-diagonal entries are `1`. Refused with
/// [`Error::CUndefined`] outside the unbroken regime.
pub fn build_c_two_level(params: &TwoLevelParams) -> Result<CMat> {
    match reality_condition(params) {
        RealityPhase::Unbroken => {}
        phase => {
            return Err(Error::CUndefined(format!(
                "two-level system is {} (st - r^2 sin^2 theta = {:.3e})",
                phase.name(),
                params.discriminant()
            )))
        }
    }
    let sin_a = params.r * params.theta.sin() / kappa(params).re;
    let cos_a = (1.0 - sin_a * sin_a).sqrt();
    let a2 = (params.s / params.t).sqrt();
    let diag = Complex64::new(0.0, sin_a / cos_a);
    let c = |x: f64| Complex64::new(x / cos_a, 0.0);
    Ok(from_rows(&[&[diag, c(a2)], &[c(1.0 / a2), -diag]]))
}
