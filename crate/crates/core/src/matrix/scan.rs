use rayon::prelude::*;
use serde::Serialize;

use super::two_level::{reality_condition, RealityPhase, TwoLevelParams};
use crate::error::{invalid, Result};

/// Phase classification on an `s × t` lattice at fixed `r`, `θ`.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseScan {
    pub r: f64,
    pub theta: f64,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    /// `phases[i][j]` belongs to `(s[i], t[j])`.
    pub phases: Vec<Vec<RealityPhase>>,
    /// Points of `st = r² sin²θ` on lattice edges whose endpoints differ in
    /// phase, sorted by `s` then `t`.
    pub boundary: Vec<(f64, f64)>,
}

impl PhaseScan {
    /// `(s, t, phase)` in s-major order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, RealityPhase)> + '_ {
        self.s
            .iter()
            .enumerate()
            .flat_map(move |(i, &s)| self.t.iter().enumerate().map(move |(j, &t)| (s, t, self.phases[i][j])))
    }
}

fn axis(range: (f64, f64), n: usize, name: &str) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid(format!("{name} range [{lo}, {hi}] is empty")));
    }
    Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
}

/// Classifies `resolution × resolution` lattice points of `s_range × t_range`
/// and locates the exceptional curve between them.
///
/// `st − r² sin²θ` is linear in each variable, so crossings on lattice
/// edges are exact.
pub fn exceptional_point_scan(
    r: f64,
    theta: f64,
    s_range: (f64, f64),
    t_range: (f64, f64),
    resolution: usize,
) -> Result<PhaseScan> {
    if resolution < 2 {
        return Err(invalid(format!("resolution must be at least 2, got {resolution}")));
    }
    let s = axis(s_range, resolution, "s")?;
    let t = axis(t_range, resolution, "t")?;
    let phases: Vec<Vec<RealityPhase>> = s
        .par_iter()
        .map(|&si| {
            t.iter()
                .map(|&tj| reality_condition(&TwoLevelParams::new(r, si, tj, theta)))
                .collect()
        })
        .collect();

    let c = (r * theta.sin()).powi(2);
    let f = |a: f64, b: f64| a * b - c;
    let unbroken = |i: usize, j: usize| phases[i][j] == RealityPhase::Unbroken;
    let mut boundary = Vec::new();
    for i in 0..resolution {
        for j in 0..resolution {
            if phases[i][j] == RealityPhase::Exceptional {
                boundary.push((s[i], t[j]));
            }
            if j + 1 < resolution && unbroken(i, j) != unbroken(i, j + 1) {
                let (f0, f1) = (f(s[i], t[j]), f(s[i], t[j + 1]));
                if f0 != f1 {
                    boundary.push((s[i], t[j] + (t[j + 1] - t[j]) * f0 / (f0 - f1)));
                }
            }
            if i + 1 < resolution && unbroken(i, j) != unbroken(i + 1, j) {
                let (f0, f1) = (f(s[i], t[j]), f(s[i + 1], t[j]));
                if f0 != f1 {
                    boundary.push((s[i] + (s[i + 1] - s[i]) * f0 / (f0 - f1), t[j]));
                }
            }
        }
    }
    boundary.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    boundary.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
    Ok(PhaseScan {
        r,
        theta,
        s,
        t,
        phases,
        boundary,
    })
}
