use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use super::phase::pt_phase_fix;
use super::spectrum::{energy_order, Backend, EigenSolution};
use super::{potential, SturmLiouvilleProblem};
use crate::algebra::pt_inner_product;
use crate::error::{invalid, Error, Result};
use crate::numerics::{find_root_1d, gauss_legendre, Grid, GridKind, Tolerances, WedgeSpec};

/// Target RK4 phase advance per step, in radians.
const PHASE_STEP: f64 = 3.0e-3;
/// WKB decay (in e-folds) between the turning point and the far end of a path.
const DECAY: f64 = 40.0;
const MAX_SECANT: usize = 100;
const RESCALE_ABOVE: f64 = 1e150;

/// WKB estimate of the n-th level; used as the starting guess for shooting.
pub fn wkb_energy_estimate(nu: f64, n: usize) -> f64 {
    let a = 1.0 / (nu + 2.0);
    let num = gamma(1.5 + a) * std::f64::consts::PI.sqrt() * (n as f64 + 0.5);
    let den = (std::f64::consts::PI * a).sin() * gamma(1.0 + a);
    (num / den).powf((2.0 * nu + 4.0) / (nu + 4.0))
}

/// Turning point of `x²(ix)^ν = E` in the lower right quadrant.
fn turning_point(nu: f64, energy: f64) -> Complex64 {
    let angle = -std::f64::consts::PI * nu / (2.0 * (nu + 2.0));
    Complex64::from_polar(energy.powf(1.0 / (nu + 2.0)), angle)
}

/// `Re ∫ √(V − E) dx` along the straight segment `a → b`, with the square
/// root continued along the path and its overall sign fixed by
/// `Im ∫ ≥ 0`.
fn wkb_action(nu: f64, energy: f64, a: Complex64, b: Complex64) -> f64 {
    const PIECES: usize = 400;
    let dx = (b - a) / PIECES as f64;
    let mut prev: Option<Complex64> = None;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..PIECES {
        let x = a + dx * (k as f64 + 0.5);
        let mut s = (potential(nu, x) - energy).sqrt();
        if let Some(p) = prev {
            if (s - p).norm() > (s + p).norm() {
                s = -s;
            }
        }
        prev = Some(s);
        acc += s * dx;
    }
    if acc.im < 0.0 {
        -acc.re
    } else {
        acc.re
    }
}

/// Right half of the integration path for levels near `energy`, listed
/// from the far end inward: a point deep in the right Stokes wedge, the
/// turning point, and a junction `−id` on the negative imaginary axis.
///
/// The junction lies on the anti-Stokes level of the turning point, so
/// eigenfunctions stay of moderate size along the whole path.
fn right_path(nu: f64, spec: &WedgeSpec, energy: f64) -> Vec<Complex64> {
    let e = energy.max(1.0);
    let xt = turning_point(nu, e);
    let junction = if nu == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        let s = |d: f64| wkb_action(nu, e, xt, Complex64::new(0.0, -d));
        let depth = find_root_1d(s, (0.0, xt.norm()), 1e-10).unwrap_or(0.0);
        Complex64::new(0.0, -depth)
    };
    let dir = Complex64::from_polar(1.0, spec.center_right);
    let (mut r, dr, mut acc) = (0.0, 0.01, 0.0);
    while acc < DECAY {
        r += dr;
        acc += (potential(nu, xt + dir * r) - e).sqrt().re.abs() * dr;
    }
    vec![xt + dir * (r + 1.0), xt, junction]
}

fn mirror(x: Complex64) -> Complex64 {
    -x.conj()
}

/// RK4 step counts for each segment of `path`, sized by the local wavenumber
/// and kept even so every segment takes Simpson weights.
fn segment_steps(nu: f64, energy: f64, path: &[Complex64]) -> Vec<usize> {
    path.windows(2)
        .map(|w| {
            let k = [w[0], 0.5 * (w[0] + w[1]), w[1]]
                .iter()
                .map(|&x| (potential(nu, x) - energy).norm().sqrt())
                .fold(1.0, f64::max);
            let n = ((w[1] - w[0]).norm() * k / PHASE_STEP).ceil().max(4.0) as usize;
            n + n % 2
        })
        .collect()
}

/// Solution decaying at `path[0]`, integrated along the path to its last vertex.
struct PathSolution {
    value: Complex64,
    slope: Complex64,
    /// Values at every step node, starting at `path[0]`.
    samples: Vec<Complex64>,
}

/// RK4 for `φ'' = (V − E)φ` along the straight segment `a → b` in `n` steps.
/// `visit` sees each new node, plus the rescaling factor applied to keep
/// the solution finite (earlier samples must be scaled by it too).
fn rk4_segment(
    nu: f64,
    energy: Complex64,
    (a, b): (Complex64, Complex64),
    n: usize,
    (mut y, mut dy): (Complex64, Complex64),
    mut visit: impl FnMut(Complex64, Complex64, Option<f64>),
) -> (Complex64, Complex64) {
    let q = |x: Complex64| potential(nu, x) - energy;
    let h = (b - a) / n as f64;
    for k in 0..n {
        let x = a + h * k as f64;
        let (q0, qm, q1) = (q(x), q(x + 0.5 * h), q(x + h));
        let k1y = dy;
        let k1d = q0 * y;
        let k2y = dy + 0.5 * h * k1d;
        let k2d = qm * (y + 0.5 * h * k1y);
        let k3y = dy + 0.5 * h * k2d;
        let k3d = qm * (y + 0.5 * h * k2y);
        let k4y = dy + h * k3d;
        let k4d = q1 * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        let mut rescale = None;
        if y.norm() > RESCALE_ABOVE {
            let s = 1.0 / y.norm();
            y *= s;
            dy *= s;
            rescale = Some(s);
        }
        visit(y, dy, rescale);
    }
    (y, dy)
}

fn integrate_path(nu: f64, energy: Complex64, path: &[Complex64], steps: &[usize], keep: bool) -> PathSolution {
    let q = |x: Complex64| potential(nu, x) - energy;
    let start = path[0];
    let outward = (path[0] - path[1]) / (path[0] - path[1]).norm();
    let q0 = q(start);
    let eps = 1e-5 * outward;
    let dq = (q(start + eps) - q(start - eps)) / (2.0 * eps);
    let mut root = q0.sqrt();
    if (root * outward).re < 0.0 {
        root = -root;
    }
    let mut y = Complex64::new(1.0, 0.0);
    let mut dy = -root - dq / (4.0 * q0);
    let mut samples = Vec::new();
    if keep {
        samples.push(y);
    }
    for (w, &n) in path.windows(2).zip(steps) {
        (y, dy) = rk4_segment(nu, energy, (w[0], w[1]), n, (y, dy), |y, dy, s| {
            if let Some(s) = s {
                samples.iter_mut().for_each(|z| *z *= s);
            }
            if keep {
                samples.push(y);
            }
            let _ = dy;
        });
    }
    PathSolution {
        value: y,
        slope: dy,
        samples,
    }
}

/// Normalized matching Wronskian `(φ_L φ_R' − φ_L' φ_R)/(|φ_L,φ_L'|·|φ_R,φ_R'|)`
/// at the junction.
fn mismatch(nu: f64, energy: Complex64, right: &[Complex64], steps: &[usize]) -> Complex64 {
    let left: Vec<Complex64> = right.iter().map(|&x| mirror(x)).collect();
    let l = integrate_path(nu, energy, &left, steps, false);
    let r = integrate_path(nu, energy, right, steps, false);
    let w = l.value * r.slope - l.slope * r.value;
    let nl = (l.value.norm_sqr() + l.slope.norm_sqr()).sqrt();
    let nr = (r.value.norm_sqr() + r.slope.norm_sqr()).sqrt();
    w / (nl * nr)
}

/// Refines an eigenvalue by complex shooting.
///
/// Both ends of a PT-symmetric path inside the Stokes wedges start from
/// WKB-decaying data and are integrated inward by RK4; secant iteration in
/// complex `E` drives the matching Wronskian at the junction to zero. The
/// path is fixed from `e_guess` and bends through the turning points so the
/// solution never becomes exponentially large along it.
pub fn refine_eigenvalue_shooting(problem: &SturmLiouvilleProblem, e_guess: Complex64) -> Result<Complex64> {
    let nu = problem.nu;
    let spec = WedgeSpec::for_nu(nu)?;
    if !(e_guess.re.is_finite() && e_guess.im.is_finite()) {
        return Err(invalid("energy guess must be finite"));
    }
    let scale = e_guess.norm().max(1.0);
    let path = right_path(nu, &spec, scale);
    let steps = segment_steps(nu, scale, &path);
    let delta = 1e-4 * scale;
    let mut e0 = e_guess;
    let mut e1 = e_guess + delta;
    let mut m0 = mismatch(nu, e0, &path, &steps);
    let mut m1 = mismatch(nu, e1, &path, &steps);
    for _ in 0..MAX_SECANT {
        let denom = m1 - m0;
        if denom.norm() == 0.0 {
            break;
        }
        let e2 = e1 - m1 * (e1 - e0) / denom;
        if !(e2.re.is_finite() && e2.im.is_finite()) || e2.norm() > 1e3 * scale {
            return Err(Error::NumericalFailure {
                message: "secant iteration diverged".into(),
                last_iterate: Some(e1),
            });
        }
        if (e2 - e1).norm() < 1e-12 * e2.norm().max(1.0) {
            return Ok(e2);
        }
        e0 = e1;
        m0 = m1;
        e1 = e2;
        m1 = mismatch(nu, e1, &path, &steps);
    }
    Err(Error::NumericalFailure {
        message: "secant iteration did not converge".into(),
        last_iterate: Some(e1),
    })
}

/// Gauss–Legendre order of each contour panel.
const PANEL_ORDER: usize = 10;

/// PT-symmetric contour adapted to levels up to `energy`: from deep in the
/// left Stokes wedge to the left turning point, across to the right turning
/// point through a junction on the negative imaginary axis, and out into the
/// right wedge. Each straight piece carries Gauss–Legendre panels, about
/// `n_points` nodes in total, shared out by length times local wavenumber.
/// For `ν = 0` this is a real interval.
pub fn build_turning_point_contour(nu: f64, energy: f64, n_points: usize) -> Result<Grid> {
    let spec = WedgeSpec::for_nu(nu)?;
    if !(energy.is_finite() && energy > 0.0) {
        return Err(invalid(format!("energy scale must be positive, got {energy}")));
    }
    if n_points < 4 * PANEL_ORDER {
        return Err(invalid(format!("need at least {} contour points", 4 * PANEL_ORDER)));
    }
    let mut outward = right_path(nu, &spec, energy);
    outward.reverse();
    let cost: Vec<f64> = segment_steps(nu, energy, &outward).iter().map(|&n| n as f64).collect();
    let total: f64 = cost.iter().sum();
    let (nodes, weights) = gauss_legendre(PANEL_ORDER);
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    for (w, c) in outward.windows(2).zip(&cost) {
        let panels = ((c / total) * (n_points / 2) as f64 / PANEL_ORDER as f64)
            .round()
            .max(1.0) as usize;
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let mid = w[0] + h * (p as f64 + 0.5);
            for (t, wt) in nodes.iter().zip(&weights) {
                pts.push(mid + 0.5 * h * *t);
                wts.push(0.5 * h * *wt);
            }
        }
    }
    let mut points: Vec<Complex64> = pts.iter().rev().map(|&x| mirror(x)).collect();
    let mut all_weights: Vec<Complex64> = wts.iter().rev().map(|w| w.conj()).collect();
    points.extend_from_slice(&pts);
    all_weights.extend_from_slice(&wts);
    Grid::from_parts(points, all_weights, GridKind::Wedge)
}

/// Samples of the eigenfunction at `energy` on the nodes of `grid`, which
/// must trace a path whose ends lie inside the Stokes wedges. The solution
/// is integrated inward from both ends and the halves are joined by a
/// least-squares match of `(φ, φ')` at the middle node.
fn grid_eigenfunction(nu: f64, energy: Complex64, grid: &Grid) -> Vec<Complex64> {
    let pts = grid.points();
    let join = pts.len() / 2;
    let right: Vec<Complex64> = pts[join..].iter().rev().copied().collect();
    let (r, dr) = integrate_through(nu, energy, &right);
    let (l, dl) = integrate_through(nu, energy, &pts[..=join]);
    let (rv, lv) = (r[r.len() - 1], l[l.len() - 1]);
    let scale = (rv * lv.conj() + dr * dl.conj()) / (lv.norm_sqr() + dl.norm_sqr());
    let mut phi: Vec<Complex64> = l[..join].iter().map(|z| z * scale).collect();
    phi.extend(r.iter().rev());
    phi
}

/// Eigenfunction at a converged `energy`, sampled on the
/// [`build_turning_point_contour`] of that energy.
pub fn shooting_eigenfunction(nu: f64, energy: Complex64, n_points: usize) -> Result<(Grid, Vec<Complex64>)> {
    let grid = build_turning_point_contour(nu, energy.norm().max(1.0), n_points)?;
    let phi = grid_eigenfunction(nu, energy, &grid);
    Ok((grid, phi))
}

/// Scales each function to unit PT norm after PT phase normalization, or to
/// unit L² norm when its energy is complex. Returns signs and phases.
pub(crate) fn normalize_levels(
    energies: &[Complex64],
    functions: &mut [Vec<Complex64>],
    grid: &Grid,
    tol: Tolerances,
) -> Result<(Vec<i8>, Vec<Option<f64>>)> {
    let mut signs = Vec::with_capacity(energies.len());
    let mut phases = Vec::with_capacity(energies.len());
    for (e, phi) in energies.iter().zip(functions.iter_mut()) {
        if e.im.abs() < tol.imag_reality {
            let fix = pt_phase_fix(phi, grid, tol.residual)?;
            phi.iter_mut().for_each(|z| *z *= fix.factor);
            // Keep only the PT-even part; what is dropped is numerical noise.
            let reflected: Vec<Complex64> = phi.iter().rev().map(|z| z.conj()).collect();
            phi.iter_mut().zip(reflected).for_each(|(z, r)| *z = 0.5 * (*z + r));
            let norm = pt_inner_product(phi, phi, grid)?.re;
            let scale = 1.0 / norm.abs().sqrt();
            phi.iter_mut().for_each(|z| *z *= scale);
            signs.push(if norm > 0.0 { 1 } else { -1 });
            phases.push(Some(fix.omega));
        } else {
            let scale = 1.0 / grid.l2_norm(phi);
            phi.iter_mut().for_each(|z| *z *= scale);
            signs.push(0);
            phases.push(None);
        }
    }
    Ok((signs, phases))
}

/// Lowest `n_levels` eigenpairs by shooting, for any `ν ≥ 0`.
///
/// Starting guesses come from the WKB formula and levels are refined
/// independently (in parallel). Eigenfunctions are sampled on the
/// [`build_turning_point_contour`] of the highest level, with as many nodes
/// as `problem.grid`, and stored PT-normalized with unit PT norm. Use
/// [`resample_on_grid`] to move them onto another contour or the real axis.
pub fn solve_spectrum_shooting(problem: &SturmLiouvilleProblem, n_levels: usize) -> Result<EigenSolution> {
    if n_levels == 0 {
        return Err(invalid("n_levels must be positive"));
    }
    let nu = problem.nu;
    let mut energies = (0..n_levels)
        .into_par_iter()
        .map(|n| refine_eigenvalue_shooting(problem, Complex64::new(wkb_energy_estimate(nu, n), 0.0)))
        .collect::<Result<Vec<_>>>()?;
    energies.sort_by(energy_order);
    for pair in energies.windows(2) {
        if (pair[1] - pair[0]).norm() < 1e-6 * pair[0].norm().max(1.0) {
            return Err(Error::NumericalFailure {
                message: format!("two starting guesses converged to the same level {}", pair[0]),
                last_iterate: Some(pair[0]),
            });
        }
    }

    let top = energies.iter().map(|e| e.norm()).fold(1.0, f64::max);
    let grid = build_turning_point_contour(nu, top, problem.grid.len().max(4 * PANEL_ORDER))?;
    let mut functions: Vec<Vec<Complex64>> = energies.par_iter().map(|&e| grid_eigenfunction(nu, e, &grid)).collect();
    let (signs, phases) = normalize_levels(&energies, &mut functions, &grid, problem.tolerances)?;

    Ok(EigenSolution {
        nu,
        backend: Backend::Shooting,
        grid,
        energies,
        eigenfunctions: functions,
        coefficients: None,
        pt_norm_signs: signs,
        phase_report: phases,
        converged: vec![true; n_levels],
        tolerances: problem.tolerances,
    })
}

/// Solution decaying at `nodes[0]`, integrated through the listed nodes;
/// returns the value at every node and the final slope.
fn integrate_through(nu: f64, energy: Complex64, nodes: &[Complex64]) -> (Vec<Complex64>, Complex64) {
    let steps = segment_steps(nu, energy.norm(), nodes);
    let start = integrate_path(nu, energy, &nodes[..2], &steps[..1], true);
    let mut values = vec![start.samples[0], start.value];
    let (mut y, mut dy) = (start.value, start.slope);
    for (w, &n) in nodes[1..].windows(2).zip(&steps[1..]) {
        (y, dy) = rk4_segment(nu, energy, (w[0], w[1]), n, (y, dy), |_, _, s| {
            if let Some(s) = s {
                values.iter_mut().for_each(|z| *z *= s);
            }
        });
        values.push(y);
    }
    (values, dy)
}

/// Re-samples every level of `solution` on another PT-symmetric grid by
/// integrating the eigenvalue equation inward from both ends of the grid at
/// the stored energy, then PT-normalizes there. The grid's ends must lie in
/// the Stokes wedges; for a real grid that means `ν < 2`.
pub fn resample_on_grid(solution: &EigenSolution, grid: &Grid) -> Result<EigenSolution> {
    let nu = solution.nu;
    if grid.is_real() && nu >= 2.0 {
        return Err(Error::UnsupportedRegime(format!(
            "the real axis leaves the Stokes wedges at nu = {nu}"
        )));
    }
    if !grid.is_pt_symmetric() || grid.len() < 4 {
        return Err(invalid("resampling needs a PT-symmetric grid of at least 4 points"));
    }
    let mut functions: Vec<Vec<Complex64>> = solution
        .energies
        .par_iter()
        .map(|&e| grid_eigenfunction(nu, e, grid))
        .collect();
    let (signs, phases) = normalize_levels(&solution.energies, &mut functions, grid, solution.tolerances)?;
    Ok(EigenSolution {
        grid: grid.clone(),
        eigenfunctions: functions,
        coefficients: None,
        pt_norm_signs: signs,
        phase_report: phases,
        ..solution.clone()
    })
}
