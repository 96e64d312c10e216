// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use nhfloquet::adiabatic::{detect_hops, dominance_switches, ratio_series, HopEvent};
use nhfloquet::asymptotics::{critical_ratio, stokes_point, wedge_boundaries, xi_exponent, Wedge};
use nhfloquet::cli::{initial_trajectory, InitialState, Model, ModelKind, ScenarioConfig};
use nhfloquet::geophase::{aa_phase, aa_phase_energy_form, phase_distance, FORM_TOL};
use nhfloquet::models::{h1_aa_exact, BUParams, Model1Params, Model2Params};
use nhfloquet::numerics::{Branch, Integrator, Trajectory};

const STEPS: usize = 1 << 14;

fn run(model: Model, initial: InitialState) -> (Trajectory, [nhfloquet::adiabatic::EigenPath; 2]) {
    let integ = Integrator::new(STEPS);
    let paths = model.eigenpaths(&integ).unwrap();
    let traj = initial_trajectory(&model, &initial, &integ, &paths).unwrap();
    (traj, paths)
}

fn bu(rho: f64, period: f64) -> Model {
    Model::Bu(BUParams::new(rho, 1.0, period).unwrap())
}

fn hops(model: Model, initial: InitialState) -> Vec<HopEvent> {
    let (traj, paths) = run(model, initial);
    detect_hops(&traj, &paths).unwrap()
}

#[test]
fn plus_floquet_state_never_hops() {
    for rho in [0.3, 0.5, 0.9] {
        assert!(
            hops(bu(rho, 250.0), InitialState::Cyclic(Branch::Plus)).is_empty(),
            "rho = {rho}"
        );
    }
}

#[test]
fn sub_critical_minus_state_stays_adiabatic() {
    let (traj, paths) = run(bu(0.3, 250.0), InitialState::Cyclic(Branch::Minus));
    let r = ratio_series(&traj, &paths, Branch::Minus).unwrap().ratios();
    let max = r.iter().map(|x| x.norm()).fold(0.0, f64::max);
    assert!(max < 0.2, "max |R-| = {max}");
}

#[test]
fn super_critical_minus_ratio_crosses_one_twice() {
    let (traj, paths) = run(bu(0.5, 250.0), InitialState::Cyclic(Branch::Minus));
    let r = ratio_series(&traj, &paths, Branch::Minus).unwrap().ratios();
    let crossings = r
        .windows(2)
        .filter(|w| (w[0].norm() - 1.0).signum() != (w[1].norm() - 1.0).signum())
        .count();
    assert_eq!(crossings, 2);
}

#[test]
fn own_eigenpath_has_zero_ratio() {
    let model = bu(0.5, 50.0);
    let paths = model.eigenpaths(&Integrator::new(512)).unwrap();
    let traj = Trajectory::new(
        paths[1].grid.iter().map(|th| th * 50.0 / TAU).collect(),
        paths[1].vectors.clone(),
        50.0,
    )
    .unwrap();
    let r = ratio_series(&traj, &paths, Branch::Minus).unwrap().ratios();
    assert!(r.iter().all(|x| x.norm() < 1e-14));
}

#[test]
fn table_first_hops_and_trend_value() {
    let t20 = hops(bu(0.5, 20.0), InitialState::Cyclic(Branch::Minus));
    assert!((t20[0].relative - 0.376).abs() < 0.01, "{t20:?}");
    let mix = hops(bu(0.5, 250.0), InitialState::Mix(0.5, 1.0));
    assert!((mix[0].relative - 0.035).abs() < 0.005, "{mix:?}");
}

#[test]
fn pt_drive_regimes() {
    // slow, weak drive: each cyclic state stays on its own eigenpath
    let model = Model::H2(Model2Params::with_period(0.2, 200.0).unwrap());
    for b in [Branch::Plus, Branch::Minus] {
        let (traj, paths) = run(model, InitialState::Cyclic(b));
        // cyclic labels order Re alpha, eigenpath labels Re E: pair by overlap
        let u = traj.first();
        let own = if paths[0].vectors[0].dot(&u).norm() > paths[1].vectors[0].dot(&u).norm() {
            Branch::Plus
        } else {
            Branch::Minus
        };
        let r = ratio_series(&traj, &paths, own).unwrap().ratios();
        assert!(r.iter().all(|x| x.norm() < 0.01), "branch {b}");
    }
    // strong drive: the ratio trace switches dominance twice
    let model = Model::H2(Model2Params::with_period(1.2, 100.0).unwrap());
    let (traj, paths) = run(model, InitialState::Cyclic(Branch::Minus));
    assert_eq!(dominance_switches(&traj, &paths).unwrap().len(), 2);
}

#[test]
fn sub_critical_eigenstate_hops() {
    assert!(!hops(bu(0.3, 250.0), InitialState::Eigen(Branch::Minus)).is_empty());
}

#[test]
fn phase_forms_agree_on_generated_orbits() {
    let integ = Integrator::new(STEPS);
    let models = [
        Model::H1(Model1Params::new(C64::new(0.5, 0.0), 1.0).unwrap()),
        Model::H1(Model1Params::new(C64::new(0.2, 0.3), 2.0).unwrap()),
        Model::H2(Model2Params::with_period(0.2, 50.0).unwrap()),
        bu(0.5, 50.0),
    ];
    for m in models {
        for o in m.cyclic_orbits(&integ).unwrap() {
            let a = aa_phase(&o.trajectory).unwrap().beta;
            let e = aa_phase_energy_form(&o.trajectory, &m).unwrap().beta;
            assert!(phase_distance(a, e) < FORM_TOL, "{m:?}: {a} vs {e}");
        }
    }
}

#[test]
fn h1_sweep_matches_closed_form() {
    let integ = Integrator::new(STEPS);
    for period in [2.0, 5.0, 9.0] {
        let p = Model1Params::new(C64::new(0.5, 0.0), TAU / period).unwrap();
        let orbits = Model::H1(p).cyclic_orbits(&integ).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let beta = aa_phase(&orbits[b.index()].trajectory).unwrap().beta;
            assert!(phase_distance(beta, h1_aa_exact(&p, b).unwrap()) < 1e-6);
        }
    }
}

#[test]
fn stokes_exponent_regimes() {
    assert_eq!(wedge_boundaries(0.55, 1.0, 720).unwrap().len(), 2);
    assert!(wedge_boundaries(0.35, 1.0, 720).unwrap().is_empty());
    assert!((0..=360).all(|k| xi_exponent(0.35, 1.0, TAU * k as f64 / 360.0).unwrap().re > 0.0));
    let c = critical_ratio(1e-15).unwrap().c;
    assert!(xi_exponent(c, 1.0, PI).unwrap().re.abs() < 1e-12);
    assert_eq!(stokes_point(c, 1.0, PI).unwrap().wedge, Wedge::Boundary);
    assert!(matches!(
        stokes_point(0.3, 1.0, 1.0).unwrap().wedge,
        Wedge::Plus
    ));
}

#[test]
fn config_selects_models() {
    let cfg = ScenarioConfig {
        model: Some(ModelKind::H1),
        ..ScenarioConfig::default()
    };
    assert!(
        matches!(Model::build(&cfg, 10.0).unwrap(), Model::H1(p) if (p.period() - 10.0).abs() < 1e-12)
    );
    let cfg = ScenarioConfig {
        model: Some(ModelKind::Bu),
        rho: 0.2,
        ..ScenarioConfig::default()
    };
    assert!(
        matches!(Model::build(&cfg, 30.0).unwrap(), Model::Bu(p) if p.rho == 0.2 && p.period == 30.0)
    );
}
