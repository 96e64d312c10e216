// SPDX-License-Identifier: Apache-2.0

//! Subcommand implementations.

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{Format, ModelKind, ScenarioConfig};
use super::output::{emit, json_bytes, Cell, Table};
use super::scenario::{initial_trajectory, Model};
use super::CliError;
use crate::adiabatic::{component_ratio, detect_hops, dominance_switches, ratio_series, HopEvent};
use crate::asymptotics::{
    bessel_series, critical_equation, critical_ratio, r_minus_asymptotic, uniform_bessel,
    xi_exponent, Wedge,
};
use crate::error::Error;
use crate::geophase::{aa_phase, bloch_coords};
use crate::models::BUParams;
use crate::numerics::{Branch, Integrator};

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn ratio_cells(r: Option<C64>) -> [Cell; 2] {
    match r {
        Some(z) => [Cell::Num(z.re), Cell::Num(z.im)],
        None => [Cell::Empty, Cell::Empty],
    }
}

/// Time series of the state, its component ratio and the eigenpath ratios.
pub fn trajectory(cfg: &ScenarioConfig) -> Result<(), CliError> {
    cfg.require_model()?;
    let model = Model::build(cfg, cfg.single_period()?)?;
    let integ = Integrator::new(cfg.steps);
    let paths = model.eigenpaths(&integ)?;
    let traj = initial_trajectory(&model, &cfg.initial, &integ, &paths)?;
    let (rp, rm) = (paths[0].ratios(), paths[1].ratios());
    let mut table = Table::new(&[
        "t",
        "theta",
        "re_a",
        "im_a",
        "re_b",
        "im_b",
        "re_psi",
        "im_psi",
        "norm",
        "re_psi_e_plus",
        "im_psi_e_plus",
        "re_psi_e_minus",
        "im_psi_e_minus",
    ]);
    for (k, (&t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![Cell::Num(t), Cell::Num(TAU * t / traj.period)];
        row.extend([s.a.re, s.a.im, s.b.re, s.b.im].map(Cell::Num));
        row.extend(ratio_cells(component_ratio(s).ok()));
        row.push(Cell::Num(s.norm()));
        row.extend(ratio_cells(rp[k]));
        row.extend(ratio_cells(rm[k]));
        table.push(row);
    }
    emit(
        cfg.out.as_deref(),
        &table.render(cfg.format.unwrap_or(Format::Csv))?,
    )
}

fn sweep_point(cfg: &ScenarioConfig, period: f64) -> Result<[Result<f64, Error>; 2], Error> {
    let model = Model::build(cfg, period)?;
    let orbits = model.cyclic_orbits(&Integrator::new(cfg.steps))?;
    Ok([0, 1].map(|b| aa_phase(&orbits[b].trajectory).map(|p| p.beta)))
}

fn sidecar_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".warnings");
    PathBuf::from(s)
}

/// AA phases of both cyclic states over a period sweep.
pub fn aa_sweep(cfg: &ScenarioConfig) -> Result<(), CliError> {
    cfg.require_model()?;
    let periods = cfg.periods()?;
    let results: Vec<_> =
        pool(cfg.jobs)?.install(|| periods.par_iter().map(|&t| sweep_point(cfg, t)).collect());
    let mut table = Table::new(&["period", "beta_plus", "beta_minus"]);
    let mut warnings = Vec::new();
    for (&t, res) in periods.iter().zip(results) {
        let mut row = vec![Cell::Num(t)];
        match res {
            Ok(betas) => {
                for (b, beta) in [Branch::Plus, Branch::Minus].into_iter().zip(betas) {
                    match beta {
                        Ok(x) => row.push(Cell::Num(x)),
                        Err(e) => {
                            warnings.push(format!("T={t:.16e} branch {b}: {e}"));
                            row.push(Cell::Empty);
                        }
                    }
                }
            }
            Err(e) => {
                warnings.push(format!("T={t:.16e}: {e}"));
                row.extend([Cell::Empty, Cell::Empty]);
            }
        }
        table.push(row);
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    if let Some(out) = &cfg.out {
        let side = sidecar_path(out);
        if warnings.is_empty() {
            if side.exists() {
                std::fs::remove_file(&side)
                    .map_err(|e| CliError::Io(format!("{}: {e}", side.display())))?;
            }
        } else {
            let text = warnings.join("\n") + "\n";
            std::fs::write(&side, text)
                .map_err(|e| CliError::Io(format!("{}: {e}", side.display())))?;
        }
    }
    emit(
        cfg.out.as_deref(),
        &table.render(cfg.format.unwrap_or(Format::Csv))?,
    )
}

fn hop_point(
    cfg: &ScenarioConfig,
    period: f64,
    dominance: bool,
) -> Result<(Model, Vec<HopEvent>), Error> {
    let model = Model::build(cfg, period)?;
    let integ = Integrator::new(cfg.steps);
    let paths = model.eigenpaths(&integ)?;
    let traj = initial_trajectory(&model, &cfg.initial, &integ, &paths)?;
    let events = if dominance {
        dominance_switches(&traj, &paths)?
    } else {
        detect_hops(&traj, &paths)?
    };
    Ok((model, events))
}

fn hop_json(cfg: &ScenarioConfig, model: &Model, events: &[HopEvent]) -> Value {
    let info = model.info(cfg.steps);
    let params: serde_json::Map<String, Value> = info
        .params
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    json!({
        "model": info.model,
        "params": params,
        "steps": cfg.steps,
        "initial": cfg.initial.label(),
        "events": events,
        "summary": {
            "count": events.len(),
            "first_t_star": events.first().map(|e| e.t_star),
            "first_relative": events.first().map(|e| e.relative),
        },
    })
}

/// Hop events for one period or a sweep.
pub fn hops(cfg: &ScenarioConfig, dominance: bool) -> Result<(), CliError> {
    cfg.require_model()?;
    let periods = cfg.periods()?;
    let results: Vec<Result<_, Error>> = pool(cfg.jobs)?.install(|| {
        periods
            .par_iter()
            .map(|&t| hop_point(cfg, t, dominance))
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, Error>>()?;
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut docs: Vec<Value> = results.iter().map(|(m, ev)| hop_json(cfg, m, ev)).collect();
            let doc = if cfg.sweep.is_none() && docs.len() == 1 {
                docs.remove(0)
            } else {
                Value::Array(docs)
            };
            json_bytes(&doc)?
        }
        Format::Csv => {
            let mut table = Table::new(&[
                "period", "index", "t_star", "relative", "from", "to", "kind",
            ]);
            for (m, events) in &results {
                for (i, e) in events.iter().enumerate() {
                    let kind = serde_json::to_value(e.kind)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string));
                    table.push(vec![
                        Cell::Num(m.period()),
                        Cell::Int(i as i64),
                        Cell::Num(e.t_star),
                        Cell::Num(e.relative),
                        Cell::Text(e.from.to_string()),
                        Cell::Text(e.to.to_string()),
                        Cell::Text(kind.unwrap_or_default()),
                    ]);
                }
            }
            table.to_csv()?
        }
    };
    emit(cfg.out.as_deref(), &bytes)
}

/// Bloch angles of the state and both eigenpaths.
pub fn bloch(cfg: &ScenarioConfig) -> Result<(), CliError> {
    cfg.require_model()?;
    let model = Model::build(cfg, cfg.single_period()?)?;
    let integ = Integrator::new(cfg.steps);
    let paths = model.eigenpaths(&integ)?;
    let traj = initial_trajectory(&model, &cfg.initial, &integ, &paths)?;
    let mut table = Table::new(&[
        "t",
        "theta_state",
        "phi_state",
        "theta_plus",
        "phi_plus",
        "theta_minus",
        "phi_minus",
    ]);
    for (k, (&t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![Cell::Num(t)];
        for v in [s, &paths[0].vectors[k], &paths[1].vectors[k]] {
            let b = bloch_coords(v)?;
            row.extend([Cell::Num(b.theta), Cell::Num(b.phi)]);
        }
        table.push(row);
    }
    emit(
        cfg.out.as_deref(),
        &table.render(cfg.format.unwrap_or(Format::Csv))?,
    )
}

/// The critical ratio and optional consistency checks.
pub fn critical(
    cfg: &ScenarioConfig,
    tol: f64,
    equation: bool,
    check_theta: bool,
) -> Result<(), CliError> {
    let sol = critical_ratio(tol)?;
    let mut fields: Vec<(&str, Value)> = vec![
        ("c", json!(sol.c)),
        ("residual", json!(sol.residual)),
        ("iterations", json!(sol.iterations)),
    ];
    if equation {
        fields.push(("equation_residual", json!(critical_equation(sol.c))));
    }
    if check_theta {
        fields.push(("re_exponent_at_pi", json!(xi_exponent(sol.c, 1.0, PI)?.re)));
    }
    let bytes = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => json_bytes(&Value::Object(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        ))?,
        Format::Csv => {
            let mut s = String::new();
            for (k, v) in fields {
                match v.as_f64() {
                    Some(x) if !v.is_u64() => s.push_str(&format!("{k} = {x:.16e}\n")),
                    _ => s.push_str(&format!("{k} = {v}\n")),
                }
            }
            s.into_bytes()
        }
    };
    emit(cfg.out.as_deref(), &bytes)
}

/// The exponent, exact and asymptotic `|R-|` of the BU `F-` orbit on
/// `samples + 1` angles.
pub fn stokes(cfg: &ScenarioConfig, samples: usize) -> Result<(), CliError> {
    if let Some(m) = cfg.model.filter(|&m| m != ModelKind::Bu) {
        return Err(CliError::Config(format!(
            "stokes needs model bu, got {}",
            m.name()
        )));
    }
    let mut cfg = cfg.clone();
    cfg.model = Some(ModelKind::Bu);
    let period = cfg.single_period()?;
    if samples == 0 || samples > cfg.steps {
        return Err(CliError::Config(format!(
            "samples must lie in 1..={}",
            cfg.steps
        )));
    }
    let p = BUParams::new(cfg.rho, cfg.r, period)?;
    let model = Model::Bu(p);
    let integ = Integrator::new(cfg.steps);
    let paths = model.eigenpaths(&integ)?;
    let orbit = &model.cyclic_orbits(&integ)?[Branch::Minus.index()];
    let ratios = ratio_series(&orbit.trajectory, &paths, Branch::Minus)?.ratios();
    let mut table = Table::new(&[
        "theta",
        "re_exponent",
        "abs_r_minus_exact",
        "abs_r_minus_asym",
        "wedge",
    ]);
    for i in 0..=samples {
        let k = i * cfg.steps / samples;
        let theta = p.theta(orbit.trajectory.times[k]);
        let ex = xi_exponent(p.rho, p.r, theta)?;
        let asym = match r_minus_asymptotic(p.rho, p.r, period, theta) {
            Ok((r, _)) => Cell::Num(r.norm()),
            Err(Error::OnStokesLine(_)) => Cell::Empty,
            Err(e) => return Err(e.into()),
        };
        let wedge = match Wedge::of(ex) {
            Wedge::Plus => "+",
            Wedge::Minus => "-",
            Wedge::Boundary => "0",
        };
        table.push(vec![
            Cell::Num(theta),
            Cell::Num(ex.re),
            Cell::Num(ratios[k].norm()),
            asym,
            Cell::Text(wedge.into()),
        ]);
    }
    emit(
        cfg.out.as_deref(),
        &table.render(cfg.format.unwrap_or(Format::Csv))?,
    )
}

/// Power series against leading uniform asymptotics of `J_{+/-nu}(nu x)`.
pub fn bessel_check(cfg: &ScenarioConfig, nus: &[f64], x: C64) -> Result<(), CliError> {
    let mut table = Table::new(&[
        "nu",
        "re_x",
        "im_x",
        "re_j_series",
        "im_j_series",
        "re_j_uniform",
        "im_j_uniform",
        "rel_err_plus",
        "rel_err_minus",
        "accuracy_warning",
    ]);
    for &nu in nus {
        let series_plus = bessel_series(nu, nu * x).ok().map(|v| v.0);
        let series_minus = bessel_series(-nu, nu * x).ok().map(|v| v.0);
        let uni = uniform_bessel(nu, x)?;
        let rel = |s: Option<C64>, u: C64| s.map(|s| (u - s).norm() / s.norm());
        let mut row = vec![Cell::Num(nu), Cell::Num(x.re), Cell::Num(x.im)];
        row.extend(ratio_cells(series_plus));
        row.extend([Cell::Num(uni.j_plus.re), Cell::Num(uni.j_plus.im)]);
        row.push(rel(series_plus, uni.j_plus).into());
        row.push(rel(series_minus, uni.j_minus).into());
        row.push(Cell::Int(i64::from(uni.accuracy_warning)));
        table.push(row);
    }
    emit(
        cfg.out.as_deref(),
        &table.render(cfg.format.unwrap_or(Format::Csv))?,
    )
}
