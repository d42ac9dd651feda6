//! Populations, fidelity and the verdicts built from them.

use num_complex::Complex64;

use crate::effective::ReducedState;
use crate::error::{Error, Result};
use crate::lattice::FullState;
use crate::trajectory::Trajectory;

/// Slack for monotonicity tests on sampled populations.
pub const MONOTONE_SLACK: f64 = 1e-9;

/// `F = |sum_n a_n(0) conj(a_n(t))| / sum_n |a_n(0)|^2`.
///
/// Normalised by the initial population only, so `F > 1` is possible when
/// the discrete states end up with more population than they started with.
pub fn fidelity(a0: &[Complex64], a_t: &[Complex64]) -> Result<f64> {
    if a0.len() != a_t.len() {
        return Err(Error::InvalidConfig(format!(
            "fidelity of vectors with lengths {} and {}",
            a0.len(),
            a_t.len()
        )));
    }
    let norm: f64 = a0.iter().map(Complex64::norm_sqr).sum();
    if norm == 0.0 {
        return Err(Error::ZeroInitialState);
    }
    let overlap: Complex64 = a0.iter().zip(a_t).map(|(x, y)| x * y.conj()).sum();
    Ok(overlap.norm() / norm)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationRecord {
    /// `P_n = |c_n|^2`.
    pub discrete: Vec<f64>,
    /// `P_c = sum_alpha |b_alpha|^2`, absent for the reduced model.
    pub continuum: Option<f64>,
    pub total: f64,
}

/// States whose populations can be read off.
pub trait Populations {
    fn populations(&self) -> PopulationRecord;
}

impl Populations for FullState {
    fn populations(&self) -> PopulationRecord {
        let discrete: Vec<f64> = self.c.iter().map(Complex64::norm_sqr).collect();
        let continuum = self.continuum_population();
        PopulationRecord {
            total: discrete.iter().sum::<f64>() + continuum,
            discrete,
            continuum: Some(continuum),
        }
    }
}

impl Populations for ReducedState {
    fn populations(&self) -> PopulationRecord {
        let discrete: Vec<f64> = self.a.iter().map(Complex64::norm_sqr).collect();
        PopulationRecord {
            total: discrete.iter().sum(),
            discrete,
            continuum: None,
        }
    }
}

pub fn populations<S: Populations>(state: &S) -> PopulationRecord {
    state.populations()
}

/// Observables sampled along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub t: Vec<f64>,
    /// `p_n[k][n]`.
    pub p_n: Vec<Vec<f64>>,
    pub p_c: Option<Vec<f64>>,
    pub p_tot: Vec<f64>,
    /// Fidelity against the first sample.
    pub fidelity: Vec<f64>,
}

impl ObservableSeries {
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let a0 = traj.amplitudes.first().ok_or(Error::TrajectoryTooShort {
            available: 0.0,
            required: 0.0,
        })?;
        let fidelity = traj
            .amplitudes
            .iter()
            .map(|a| fidelity(a0, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            t: traj.times.clone(),
            p_n: traj.discrete_populations(),
            p_c: traj.continuum.clone(),
            p_tot: traj.total_population(),
            fidelity,
        })
    }
}

/// Echo quality of a single flip at `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoReport {
    pub f_at_2t: f64,
    /// Sample time in `[T, 2T]` where `F` is largest.
    pub t_of_peak: f64,
    pub peak: f64,
}

fn sample_tolerance(t: f64) -> f64 {
    1e-9 * (1.0 + t.abs())
}

/// Fidelity at `2T` and its peak over `[T, 2T]`, relative to the first
/// sample of `traj`.
pub fn echo_report(traj: &Trajectory, t_flip: f64) -> Result<EchoReport> {
    let end = 2.0 * t_flip;
    if traj.is_empty() || traj.t_end() < end - sample_tolerance(end) {
        return Err(Error::TrajectoryTooShort {
            available: traj.t_end(),
            required: end,
        });
    }
    let a0 = &traj.amplitudes[0];
    let k_end = traj.index_at(end);
    if (traj.times[k_end] - end).abs() > sample_tolerance(end) {
        return Err(Error::InvalidConfig(format!(
            "no sample at t = {end}; nearest is {}",
            traj.times[k_end]
        )));
    }
    let f_at_2t = fidelity(a0, &traj.amplitudes[k_end])?;
    let mut peak = f64::NEG_INFINITY;
    let mut t_of_peak = t_flip;
    for (t, a) in traj.times.iter().zip(&traj.amplitudes) {
        if *t < t_flip - sample_tolerance(t_flip) || *t > end + sample_tolerance(end) {
            continue;
        }
        let f = fidelity(a0, a)?;
        if f > peak {
            peak = f;
            t_of_peak = *t;
        }
    }
    Ok(EchoReport {
        f_at_2t,
        t_of_peak,
        peak,
    })
}

/// Slack on the growth of `P_tot` that counts as non-unitary.
pub const UNITARITY_SLACK: f64 = 1e-6;

/// Whether `p_c` keeps growing after `t_flip` beyond what unitary dynamics
/// allows.
///
/// With `window = None` every consecutive pair of samples after `t_flip`
/// must be non-decreasing (within [`MONOTONE_SLACK`]). With
/// `Some(w)`, the means over consecutive complete windows `[t_flip + j w,
/// t_flip + (j+1) w)` must be non-decreasing instead, which tolerates the
/// in-period wiggles of a periodic schedule. In both cases the last sample
/// must exceed the value at `t_flip`, and so must the total population
/// `p_tot` (by more than [`UNITARITY_SLACK`]): a continuum that merely
/// absorbs what the discrete states lose is decay, not secular growth.
pub fn secular_growth_check(
    times: &[f64],
    p_c: &[f64],
    p_tot: &[f64],
    t_flip: f64,
    window: Option<f64>,
) -> bool {
    let start = times
        .iter()
        .position(|&t| t >= t_flip - sample_tolerance(t_flip))
        .unwrap_or(times.len());
    let end = times.len().min(p_c.len()).min(p_tot.len());
    if start + 1 >= end {
        return false;
    }
    let ts = &times[start..end];
    let ps = &p_c[start..end];
    if ps.len() < 2 {
        return false;
    }
    let monotone = match window {
        None => ps.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK),
        Some(w) if w > 0.0 => {
            let mut means = Vec::new();
            let (mut sum, mut count, mut bin) = (0.0, 0usize, 0i64);
            let t_last = *ts.last().unwrap();
            for (t, p) in ts.iter().zip(ps) {
                let b = ((t - t_flip) / w + 1e-9).floor() as i64;
                if b != bin {
                    if count > 0 {
                        means.push(sum / count as f64);
                    }
                    sum = 0.0;
                    count = 0;
                    bin = b;
                }
                // drop a trailing partial window
                if t_flip + (b + 1) as f64 * w > t_last + sample_tolerance(t_last) {
                    break;
                }
                sum += p;
                count += 1;
            }
            if count > 0 {
                means.push(sum / count as f64);
            }
            means.windows(2).all(|m| m[1] >= m[0] - MONOTONE_SLACK)
        }
        Some(_) => false,
    };
    monotone && ps[ps.len() - 1] > ps[0] && p_tot[end - 1] > p_tot[start] + UNITARITY_SLACK
}

/// `max_n max_{t <= horizon} |P_n(t) - P_n(0)|`.
pub fn frozen_deviation(traj: &Trajectory, horizon: f64) -> Result<f64> {
    if traj.is_empty() || traj.t_end() < horizon - sample_tolerance(horizon) {
        return Err(Error::TrajectoryTooShort {
            available: traj.t_end(),
            required: horizon,
        });
    }
    let p0: Vec<f64> = traj.amplitudes[0].iter().map(Complex64::norm_sqr).collect();
    let mut worst = 0.0_f64;
    for (t, a) in traj.times.iter().zip(&traj.amplitudes) {
        if *t > horizon + sample_tolerance(horizon) {
            break;
        }
        for (x, p) in a.iter().zip(&p0) {
            worst = worst.max((x.norm_sqr() - p).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InitialExcitation;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fidelity_examples() {
        let a0 = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!((fidelity(&a0, &a0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&a0, &[c(0.0, 0.8), c(0.6, 0.0)]).unwrap(), 0.0);
        let doubled: Vec<_> = a0.iter().map(|z| z * 2.0).collect();
        assert!((fidelity(&a0, &doubled).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            fidelity(&[c(0.0, 0.0)], &[c(1.0, 0.0)]),
            Err(Error::ZeroInitialState)
        ));
    }

    #[test]
    fn population_records() {
        let s3 = 3f64.sqrt().recip();
        let init = InitialExcitation::new(vec![c(s3, 0.0), c(0.0, -s3), c(-s3, 0.0)]);
        let full = FullState::empty_continuum(&init, 11).unwrap();
        let r = populations(&full);
        assert!(r.discrete.iter().all(|p| (p - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(r.continuum, Some(0.0));
        assert!((r.total - 1.0).abs() < 1e-15);

        let zero = populations(&FullState::zeros(2, 5));
        assert_eq!(zero.total, 0.0);

        let red = populations(&ReducedState::new(vec![c(1.0, 0.0), c(0.0, 0.0)], 0.0));
        assert_eq!(red.discrete, vec![1.0, 0.0]);
        assert_eq!(red.continuum, None);
        assert_eq!(red.total, 1.0);
    }

    #[test]
    fn secular_growth_pointwise_and_windowed() {
        let times: Vec<f64> = (0..=40).map(f64::from).collect();
        let rising: Vec<f64> = times.iter().map(|t| (t - 10.0).max(0.0) * 0.01).collect();
        let gaining: Vec<f64> = rising.iter().map(|p| 1.0 + p).collect();
        let conserved = vec![1.0; times.len()];
        assert!(secular_growth_check(&times, &rising, &gaining, 10.0, None));
        // same continuum curve, but only fed by the discrete states
        assert!(!secular_growth_check(&times, &rising, &conserved, 10.0, None));
        let flat = vec![0.5; times.len()];
        assert!(!secular_growth_check(&times, &flat, &gaining, 10.0, None));

        // growth with a ripple of period 4
        let rippled: Vec<f64> = times
            .iter()
            .map(|t| 0.01 * t + 0.02 * (std::f64::consts::FRAC_PI_2 * t).sin())
            .collect();
        let total: Vec<f64> = rippled.iter().map(|p| 1.0 + p).collect();
        assert!(!secular_growth_check(&times, &rippled, &total, 0.0, None));
        assert!(secular_growth_check(&times, &rippled, &total, 0.0, Some(4.0)));

        assert!(!secular_growth_check(&times, &rising, &gaining, 40.0, None));
        assert!(!secular_growth_check(&times, &rising, &gaining, 50.0, None));
    }

    #[test]
    fn short_trajectory_errors() {
        let times = vec![0.0, 1.0];
        let traj = crate::trajectory::Trajectory {
            times,
            amplitudes: vec![vec![c(1.0, 0.0)]; 2],
            continuum: None,
            lattice: None,
            meta: crate::trajectory::TrajectoryMeta {
                model: crate::trajectory::ModelKind::Reduced,
                config_hash: 0,
                omega: vec![0.0],
                schedule: crate::model::CouplingSchedule::hermitian(1.0).unwrap(),
                dt: 0.01,
                sample_stride: 100,
                lattice_size: None,
                max_hermitian_drift: None,
                max_edge_population: None,
            },
        };
        assert!(matches!(
            echo_report(&traj, 1.0),
            Err(Error::TrajectoryTooShort { .. })
        ));
        assert!(matches!(
            frozen_deviation(&traj, 2.0),
            Err(Error::TrajectoryTooShort { .. })
        ));
        assert_eq!(frozen_deviation(&traj, 1.0).unwrap(), 0.0);
        let e = echo_report(&traj, 0.5).unwrap();
        assert_eq!(e.f_at_2t, 1.0);
    }

    fn amp() -> impl Strategy<Value = Complex64> {
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
    }

    proptest! {
        #[test]
        fn fidelity_phase_invariance(
            a0 in prop::collection::vec(amp(), 1..6),
            seed in prop::collection::vec(amp(), 6),
            phi in -10.0..10.0f64,
            psi in -10.0..10.0f64,
        ) {
            prop_assume!(a0.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
            let at: Vec<_> = seed[..a0.len()].to_vec();
            let base = fidelity(&a0, &at).unwrap();
            let rot = |v: &[Complex64], p: f64| -> Vec<Complex64> {
                v.iter().map(|z| z * Complex64::from_polar(1.0, p)).collect()
            };
            prop_assert!((fidelity(&a0, &rot(&at, phi)).unwrap() - base).abs() < 1e-12);
            prop_assert!((fidelity(&rot(&a0, psi), &at).unwrap() - base).abs() < 1e-12);
            prop_assert!((fidelity(&a0, &rot(&a0, phi)).unwrap() - 1.0).abs() < 1e-12);
            prop_assert!(base >= 0.0);
        }
    }
}
