mod common;

use common::{c, fig2_config, fig2_initial, run_full};
use nalgebra::DMatrix;
use nhflip::effective::{integrate_reduced, CouplingMatrix, Provenance, ReducedState};
use nhflip::experiment::{run_experiment, ExperimentOptions, ExperimentSpec};
use nhflip::lattice::{FullState, StepOptions};
use nhflip::observables::{
    echo_report, fidelity, frozen_deviation, populations, secular_growth_check, ObservableSeries,
};
use nhflip::{CouplingSchedule, InitialExcitation, SystemConfig};

#[test]
fn initial_populations() {
    let st = FullState::empty_continuum(&InitialExcitation::new(fig2_initial()), 11).unwrap();
    let p = populations(&st);
    for pn in &p.discrete {
        assert!((pn - 1.0 / 3.0).abs() < 1e-15);
    }
    assert_eq!(p.continuum, Some(0.0));
    assert!((p.total - 1.0).abs() < 1e-15);

    let zero = populations(&FullState::zeros(2, 5));
    assert_eq!(zero.total, 0.0);
    let r = populations(&ReducedState::new(vec![c(1.0, 0.0), c(0.0, 0.0)], 0.0));
    assert_eq!((r.discrete, r.continuum, r.total), (vec![1.0, 0.0], None, 1.0));
}

#[test]
fn fidelity_can_exceed_one() {
    let a0 = [c(0.6, 0.0), c(0.0, 0.8)];
    let doubled: Vec<_> = a0.iter().map(|z| z * 2.0).collect();
    assert!((fidelity(&a0, &doubled).unwrap() - 2.0).abs() < 1e-15);
    assert_eq!(fidelity(&a0, &[c(0.8, 0.0), c(0.0, -0.6)]).unwrap(), 0.0);
}

#[test]
fn decay_without_flip_does_not_refocus() {
    let traj = run_full(
        &fig2_config(),
        &CouplingSchedule::hermitian(400.0).unwrap(),
        fig2_initial(),
        400.0,
        None,
    );
    let e = echo_report(&traj, 200.0).unwrap();
    let series = ObservableSeries::from_trajectory(&traj).unwrap();
    let f_t = series.fidelity[traj.index_at(200.0)];
    assert!(e.f_at_2t < 1.0 && e.f_at_2t < f_t, "{} {f_t}", e.f_at_2t);

    // the continuum only absorbs what the discrete states lose
    let p_c = traj.continuum.as_ref().unwrap();
    assert!(!secular_growth_check(&traj.times, p_c, &series.p_tot, 200.0, None));
}

#[test]
fn fig2_continuum_grows_after_the_flip() {
    let r = run_experiment(&ExperimentSpec::fig2(), &ExperimentOptions::default()).unwrap();
    assert!(r.verdict.secular_growth);
    let p_c = r.full.continuum.as_ref().unwrap();
    let (k200, k400) = (r.full.index_at(200.0), r.full.index_at(400.0));
    assert!(p_c[k200..].windows(2).all(|w| w[1] >= w[0]));
    assert!(p_c[k400] > p_c[k200] + 0.1);
    assert!(r.verdict.echo_full.unwrap().f_at_2t >= 0.98);
}

#[test]
fn fig3a_echo_is_approximate() {
    let r = run_experiment(&ExperimentSpec::fig3a(), &ExperimentOptions::default()).unwrap();
    assert!(r.verdict.echo_full.unwrap().f_at_2t >= 0.9);
    assert!(r.conditions.rwa_ok && !r.conditions.degenerate);
}

#[test]
fn frozen_dynamics_under_fast_switching() {
    let r = run_experiment(&ExperimentSpec::fig4(), &ExperimentOptions::default()).unwrap();
    assert!(r.verdict.frozen_deviation <= 0.1, "{}", r.verdict.frozen_deviation);
    assert!(r.verdict.secular_growth && r.verdict.continuum_gain > 0.05);
}

#[test]
fn the_same_states_decay_without_switching() {
    let cfg = SystemConfig::new(vec![0.0, 0.05, -0.025], vec![0.0375, 0.025, 0.05], vec![-1, 0, 1]);
    let traj = run_full(
        &cfg,
        &CouplingSchedule::hermitian(400.0).unwrap(),
        fig2_initial(),
        400.0,
        None,
    );
    let d = frozen_deviation(&traj, 400.0).unwrap();
    // well above the frozen threshold, bounded by the initial 1/3
    assert!(d > 0.15 && d <= 1.0 / 3.0 + 1e-9, "{d}");
}

#[test]
fn uncoupled_states_are_exactly_frozen() {
    let delta = CouplingMatrix::new(DMatrix::zeros(3, 3), Provenance::Analytic);
    let traj = integrate_reduced(
        &fig2_initial(),
        &delta,
        &[0.0, 0.3, -0.3],
        &CouplingSchedule::alternating(8.0).unwrap(),
        &StepOptions::new(64.0, 0.01, 10),
    )
    .unwrap();
    assert_eq!(frozen_deviation(&traj, 64.0).unwrap(), 0.0);
}

#[test]
fn hermitian_segments_conserve_population() {
    let traj = run_full(
        &fig2_config(),
        &CouplingSchedule::alternating(20.0).unwrap(),
        fig2_initial(),
        200.0,
        None,
    );
    assert!(traj.meta.max_hermitian_drift.unwrap() <= 1e-6);
    let s = ObservableSeries::from_trajectory(&traj).unwrap();
    let p_c = s.p_c.as_ref().unwrap();
    assert!(s.p_n.iter().flatten().chain(p_c).all(|p| *p >= 0.0));
}
