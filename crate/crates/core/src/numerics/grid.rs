use std::f64::consts::PI;

use num_complex::Complex64;

use super::hermite::gauss_hermite;
use crate::error::{invalid, Result};

/// How a grid was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Gauss–Hermite nodes with the Gaussian weight folded into the weights.
    GaussHermite,
    /// Equally spaced real points with trapezoid weights.
    Uniform,
    /// Two rays through the origin inside the Stokes wedges.
    Wedge,
}

/// Node placement for [`build_real_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealScheme {
    GaussHermite,
    Uniform,
}

/// A discretized integration path: ordered points and complex weights that
/// carry the line element, so `Σ wᵢ f(xᵢ) ≈ ∫_C f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<Complex64>,
    weights: Vec<Complex64>,
    kind: GridKind,
}

impl Grid {
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Real parts of the points; meaningful for real-line grids.
    pub fn real_points(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.re).collect()
    }

    pub fn is_real(&self) -> bool {
        matches!(self.kind, GridKind::GaussHermite | GridKind::Uniform)
    }

    /// Index of the PT image of node `i`: the node at `−xᵢ*`.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        self.points.len() - 1 - i
    }

    /// True when the node set is closed under `x → −x*` by index reversal
    /// and mirrored weights agree, which is what the PT inner product and
    /// the permutation parity kernel rely on.
    pub fn is_pt_symmetric(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            let j = n - 1 - i;
            let scale = 1.0 + self.points[i].norm();
            (self.points[j] + self.points[i].conj()).norm() <= 1e-12 * scale
                && (self.weights[j] - self.weights[i].conj()).norm() <= 1e-12 * (self.weights[i].norm() + 1e-300)
        })
    }

    /// Same point set (to rounding), used to reject mixing kernels from
    /// different grids.
    pub fn same_nodes(&self, other: &Grid) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a - b).norm() <= 1e-12 * (1.0 + a.norm()))
    }

    /// Builds a grid from raw parts. Lengths must agree.
    pub fn from_parts(points: Vec<Complex64>, weights: Vec<Complex64>, kind: GridKind) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(invalid(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        Ok(Self { points, weights, kind })
    }

    /// `Σ wᵢ sᵢ`.
    pub fn integrate(&self, samples: &[Complex64]) -> Result<Complex64> {
        contour_integrate(samples, self)
    }

    /// Weighted L² norm `(Σ |wᵢ| |sᵢ|²)^{1/2}`.
    pub fn l2_norm(&self, samples: &[Complex64]) -> f64 {
        self.weights
            .iter()
            .zip(samples)
            .map(|(w, s)| w.norm() * s.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        self.points.iter().map(|&x| f(x)).collect()
    }
}

/// Angular placement of the Stokes wedges for `H = p² + x²(ix)^ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeSpec {
    pub nu: f64,
    pub center_right: f64,
    pub center_left: f64,
    pub half_opening: f64,
}

impl WedgeSpec {
    /// Wedges in which solutions of `−φ'' + x²(ix)^ν φ = Eφ` decay: along the
    /// right center `x = ρ e^{iθ}` the equation becomes
    /// `φ_ρρ = (ρ^{ν+2} − e^{2iθ} E) φ` with a real, positive potential.
    pub fn for_nu(nu: f64) -> Result<Self> {
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(invalid(format!("nu must be finite and >= 0, got {nu}")));
        }
        let center_right = -PI * nu / (2.0 * (nu + 4.0));
        Ok(Self {
            nu,
            center_right,
            center_left: -PI - center_right,
            half_opening: PI / (nu + 4.0),
        })
    }
}

/// Symmetric real grid on `[-extent, extent]`.
///
/// `Uniform` uses trapezoid weights. `GaussHermite` uses `n_points`
/// Gauss–Hermite nodes (whose span is fixed by `n_points`; `extent` is only
/// validated) with the `e^{x²}` factor absorbed into the weights.
pub fn build_real_grid(n_points: usize, extent: f64, scheme: RealScheme) -> Result<Grid> {
    if n_points < 2 {
        return Err(invalid(format!("real grid needs n_points >= 2, got {n_points}")));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(invalid(format!("grid extent must be positive, got {extent}")));
    }
    let n = n_points;
    let (xs, ws, kind) = match scheme {
        RealScheme::Uniform => {
            let h = 2.0 * extent / (n - 1) as f64;
            let mut xs = vec![0.0; n];
            for i in 0..n / 2 {
                let x = extent - i as f64 * h;
                xs[n - 1 - i] = x;
                xs[i] = -x;
            }
            let mut ws = vec![h; n];
            ws[0] = 0.5 * h;
            ws[n - 1] = 0.5 * h;
            (xs, ws, GridKind::Uniform)
        }
        RealScheme::GaussHermite => {
            let (xs, ws) = gauss_hermite(n)?;
            (xs, ws, GridKind::GaussHermite)
        }
    };
    Ok(Grid {
        points: xs.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        weights: ws.into_iter().map(|w| Complex64::new(w, 0.0)).collect(),
        kind,
    })
}

/// Two straight rays `radius·e^{i·center_left} → 0 → radius·e^{i·center_right}`.
///
/// Odd `n_points` put a node at the origin and use the trapezoid rule on
/// each ray; even `n_points` use the midpoint rule on each ray. Either way
/// the node set is invariant under `x → −x*` with mirrored weights.
pub fn build_wedge_contour(spec: &WedgeSpec, radius: f64, n_points: usize) -> Result<Grid> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("contour radius must be positive, got {radius}")));
    }
    if n_points < 2 {
        return Err(invalid(format!("contour needs n_points >= 2, got {n_points}")));
    }
    let expected = WedgeSpec::for_nu(spec.nu)?;
    if (expected.center_right - spec.center_right).abs() > 1e-12
        || (expected.center_left - spec.center_left).abs() > 1e-12
        || (expected.half_opening - spec.half_opening).abs() > 1e-12
    {
        return Err(invalid("wedge angles do not match its nu"));
    }
    let right = Complex64::from_polar(1.0, spec.center_right);
    // x = ρ e^{iθ_L} traversed with ρ decreasing, so dx = −e^{iθ_L} dρ.
    let left = Complex64::from_polar(1.0, spec.center_left);
    let left_tangent = -left;

    let half = n_points / 2;
    let mut rho = Vec::with_capacity(half);
    let mut rho_w = Vec::with_capacity(half);
    let origin_weight = if n_points % 2 == 1 {
        let h = radius / half as f64;
        for k in 1..=half {
            rho.push(k as f64 * h);
            rho_w.push(if k == half { 0.5 * h } else { h });
        }
        Some(0.5 * h)
    } else {
        let h = radius / half as f64;
        for k in 0..half {
            rho.push((k as f64 + 0.5) * h);
            rho_w.push(h);
        }
        None
    };

    let mut points = Vec::with_capacity(n_points);
    let mut weights = Vec::with_capacity(n_points);
    for k in (0..half).rev() {
        points.push(left * rho[k]);
        weights.push(left_tangent * rho_w[k]);
    }
    if let Some(w0) = origin_weight {
        points.push(Complex64::new(0.0, 0.0));
        weights.push((left_tangent + right) * w0);
    }
    for k in 0..half {
        points.push(right * rho[k]);
        weights.push(right * rho_w[k]);
    }
    Ok(Grid {
        points,
        weights,
        kind: GridKind::Wedge,
    })
}

/// `Σᵢ weightᵢ · sampleᵢ`.
pub fn contour_integrate(samples: &[Complex64], grid: &Grid) -> Result<Complex64> {
    if samples.len() != grid.len() {
        return Err(invalid(format!(
            "{} samples on a grid of {} points",
            samples.len(),
            grid.len()
        )));
    }
    Ok(grid.weights.iter().zip(samples).map(|(w, s)| w * s).sum())
}
