use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::output::{complex, emit, matrix, to_csv, to_json, Format};
use super::{
    BackendChoice, ContinuumArgs, SweepArgs, TwoLevelArgs, VerifyArgs, EXIT_BROKEN, EXIT_OK, EXIT_VERIFY_FAILED,
};
use crate::algebra::{build_c_kernel, default_test_functions, run_verification_suite_with, SuiteTolerances};
use crate::continuum::{solve_spectrum, solve_spectrum_shooting, Backend, EigenSolution, SturmLiouvilleProblem};
use crate::error::{invalid, Result};
use crate::matrix::{
    build_c_two_level, build_two_level, c_parity_commutation, cpt_completeness, exceptional_point_scan,
    reality_condition, spectral_c_operator, two_level_eigensystem, RealityPhase, TwoLevelParams,
};
use crate::numerics::linalg::{self, mat_vec};
use crate::numerics::{build_real_grid, RealScheme};

use super::fmt_f64;

fn solve(args: &ContinuumArgs, default: BackendChoice) -> Result<EigenSolution> {
    if args.levels == 0 {
        return Err(invalid("--levels must be at least 1"));
    }
    let grid = build_real_grid(args.grid_points, args.grid_extent, RealScheme::Uniform)?;
    let problem = SturmLiouvilleProblem::new(args.nu, grid, args.basis_size, args.tolerances()?)?;
    let spectral = match args.backend.unwrap_or(default) {
        BackendChoice::Spectral => true,
        BackendChoice::Shooting => false,
        BackendChoice::Auto => args.nu == 0.0,
    };
    if spectral {
        solve_spectrum(&problem, args.levels)
    } else {
        solve_spectrum_shooting(&problem, args.levels)
    }
}

fn basis_size(solution: &EigenSolution) -> Value {
    match solution.backend {
        Backend::Spectral { basis_size } => json!(basis_size),
        Backend::Shooting => Value::Null,
    }
}

fn write(bytes: Vec<u8>, args: &super::CommonArgs) -> Result<()> {
    emit(&bytes, &args.output)
}

pub fn spectrum(args: &ContinuumArgs) -> Result<i32> {
    let sol = solve(args, BackendChoice::Spectral)?;
    let bytes = match args.common.format {
        Format::Json => {
            let levels: Vec<Value> = sol
                .energies
                .iter()
                .zip(&sol.pt_norm_signs)
                .enumerate()
                .map(|(n, (e, s))| json!({"n": n, "energy_re": e.re, "energy_im": e.im, "pt_norm_sign": s}))
                .collect();
            to_json(&json!({
                "nu": sol.nu,
                "backend": sol.backend.name(),
                "basis_size": basis_size(&sol),
                "converged": sol.converged.iter().all(|&c| c),
                "levels": levels,
            }))?
        }
        Format::Csv => to_csv(
            &["n", "energy_re", "energy_im", "pt_norm_sign"],
            sol.energies
                .iter()
                .zip(&sol.pt_norm_signs)
                .enumerate()
                .map(|(n, (e, s))| vec![n.to_string(), fmt_f64(e.re), fmt_f64(e.im), s.to_string()]),
        )?,
    };
    write(bytes, &args.common)?;
    Ok(if args.require_unbroken && !sol.is_unbroken() {
        EXIT_BROKEN
    } else {
        EXIT_OK
    })
}

pub fn verify(args: &VerifyArgs) -> Result<i32> {
    let c = &args.continuum;
    let sol = solve(c, BackendChoice::Auto)?;
    if c.require_unbroken && !sol.is_unbroken() {
        eprintln!("error: PT symmetry is broken for this spectrum");
        return Ok(EXIT_BROKEN);
    }
    let tol = SuiteTolerances {
        algebraic: sol.tolerances.residual,
        truncation: args.truncation_tolerance(),
    };
    let report = run_verification_suite_with(&sol, &default_test_functions(&sol.grid), tol)?;
    let bytes = match c.common.format {
        Format::Json => {
            let checks: BTreeMap<&str, Value> = report
                .checks
                .iter()
                .map(|(k, v)| {
                    (
                        *k,
                        json!({"residual": v.residual, "tolerance": v.tolerance, "pass": v.pass}),
                    )
                })
                .collect();
            to_json(&json!({
                "nu": sol.nu,
                "backend": sol.backend.name(),
                "levels": report.levels,
                "checks": checks,
                "min_cpt_norm": report.min_cpt_norm,
                "all_passed": report.all_passed(),
            }))?
        }
        Format::Csv => to_csv(
            &["check", "residual", "tolerance", "pass"],
            report.checks.iter().map(|(k, v)| {
                vec![
                    k.to_string(),
                    fmt_f64(v.residual),
                    fmt_f64(v.tolerance),
                    v.pass.to_string(),
                ]
            }),
        )?,
    };
    write(bytes, &c.common)?;
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

pub fn ckernel(args: &ContinuumArgs) -> Result<i32> {
    let sol = solve(args, BackendChoice::Auto)?;
    if args.require_unbroken && !sol.is_unbroken() {
        eprintln!("error: PT symmetry is broken for this spectrum");
        return Ok(EXIT_BROKEN);
    }
    let kernel = build_c_kernel(&sol)?;
    let grid = kernel.grid();
    let (x, w) = (grid.points(), grid.weights());
    let n = grid.len();
    let bytes = match args.common.format {
        Format::Json => to_json(&json!({
            "nu": sol.nu,
            "backend": sol.backend.name(),
            "levels": sol.converged_levels(),
            "grid": x.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
            "weights": w.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
            "kernel": matrix(kernel.values()),
        }))?,
        Format::Csv => to_csv(
            &["i", "j", "x_re", "x_im", "y_re", "y_im", "c_re", "c_im"],
            (0..n).flat_map(|i| {
                let kernel = &kernel;
                (0..n).map(move |j| {
                    let c = kernel.get(i, j);
                    vec![
                        i.to_string(),
                        j.to_string(),
                        fmt_f64(x[i].re),
                        fmt_f64(x[i].im),
                        fmt_f64(x[j].re),
                        fmt_f64(x[j].im),
                        fmt_f64(c.re),
                        fmt_f64(c.im),
                    ]
                })
            }),
        )?,
    };
    write(bytes, &args.common)?;
    Ok(EXIT_OK)
}

fn two_level_document(params: &TwoLevelParams) -> Result<Value> {
    let phase = reality_condition(params);
    let mut doc = json!({
        "params": {"r": params.r, "s": params.s, "t": params.t, "theta": params.theta},
        "phase": phase.name(),
    });
    if phase == RealityPhase::Exceptional {
        doc["coalesced_eigenvalue"] = json!(params.r * params.theta.cos());
        return Ok(doc);
    }
    let sys = two_level_eigensystem(params)?;
    doc["eps_plus"] = complex(sys.eps_plus);
    doc["eps_minus"] = complex(sys.eps_minus);
    doc["alpha"] = complex(sys.alpha);
    if phase == RealityPhase::Broken {
        return Ok(doc);
    }
    let h = build_two_level(params);
    let c = build_c_two_level(params)?;
    let (np, nm) = sys.pt_norms.expect("unbroken systems carry PT norms");
    let mut eigen_residual: f64 = 0.0;
    for (v, sigma) in [(sys.v_plus, np), (sys.v_minus, nm)] {
        let cv = mat_vec(&c, &v);
        for i in 0..2 {
            eigen_residual = eigen_residual.max((cv[i] - f64::from(sigma) * v[i]).norm());
        }
    }
    let completeness = cpt_completeness(&sys.vectors(), &c, h.p())?;
    let parity = c_parity_commutation(&c, h.p())?;
    let spectral = spectral_c_operator(&h)?;
    doc["pt_norms"] = json!([np, nm]);
    doc["c"] = matrix(&c);
    doc["residuals"] = json!({
        "c_squared": linalg::max_abs_diff(&(&c * &c), &linalg::identity(2)),
        "c_eigenvectors": eigen_residual,
        "c_commutes_with_h": linalg::max_abs_diff(&(&c * h.h()), &(h.h() * &c)),
        "cpt_completeness": completeness.residual,
        "c_real_commutator": parity.real_commutator,
        "c_imag_anticommutator": parity.imag_anticommutator,
        "closed_form_vs_spectral": linalg::max_abs_diff(&c, &spectral),
    });
    doc["eigenvector_condition"] = json!(completeness.condition);
    Ok(doc)
}

/// Flattens a JSON document into `key,value` rows (`a.b`, `a.0` paths).
fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::Number(n) => out.push(vec![
            prefix.to_string(),
            n.as_i64()
                .map_or_else(|| fmt_f64(n.as_f64().unwrap_or(f64::NAN)), |i| i.to_string()),
        ]),
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        other => out.push(vec![prefix.to_string(), other.to_string()]),
    }
}

pub fn two_level(args: &TwoLevelArgs) -> Result<i32> {
    for (name, v) in [("r", args.r), ("s", args.s), ("t", args.t), ("theta", args.theta)] {
        if !v.is_finite() {
            return Err(invalid(format!("--{name} must be finite")));
        }
    }
    let doc = two_level_document(&TwoLevelParams::new(args.r, args.s, args.t, args.theta))?;
    let bytes = match args.common.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &doc, &mut rows);
            to_csv(&["key", "value"], rows)?
        }
    };
    write(bytes, &args.common)?;
    Ok(EXIT_OK)
}

pub fn sweep(args: &SweepArgs) -> Result<i32> {
    let scan = exceptional_point_scan(
        args.r,
        args.theta,
        (args.s_min, args.s_max),
        (args.t_min, args.t_max),
        args.resolution,
    )?;
    let bytes = match args.common.format {
        Format::Json => to_json(&json!({
            "r": scan.r,
            "theta": scan.theta,
            "cells": scan.cells().map(|(s, t, p)| json!({"s": s, "t": t, "phase": p.name()})).collect::<Vec<_>>(),
            "boundary": scan.boundary.iter().map(|&(s, t)| json!([s, t])).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            if let Some(path) = &args.boundary_output {
                let boundary = to_csv(
                    &["s", "t"],
                    scan.boundary.iter().map(|&(s, t)| vec![fmt_f64(s), fmt_f64(t)]),
                )?;
                emit(&boundary, path)?;
            }
            to_csv(
                &["s", "t", "phase"],
                scan.cells()
                    .map(|(s, t, p)| vec![fmt_f64(s), fmt_f64(t), p.name().to_string()]),
            )?
        }
    };
    write(bytes, &args.common)?;
    Ok(EXIT_OK)
}
