//! Complete experiments: a configuration, a schedule, an initial state and
//! the verdicts computed from running both simulators on them.

use num_complex::Complex64;

use crate::effective::{
    delta_analytic_lattice, eigen_analysis, integrate_reduced, protocol_conditions,
    CouplingMatrix, EigenMode, ProtocolReport, ProtocolThresholds,
};
use crate::error::{Error, Result};
use crate::lattice::{integrate_full, lattice_size_for, FullState, StepOptions, DEFAULT_BUFFER};
use crate::model::{Coupling, CouplingSchedule, InitialExcitation, SystemConfig};
use crate::observables::{echo_report, frozen_deviation, secular_growth_check, EchoReport};
use crate::trajectory::Trajectory;

/// Names accepted by [`ExperimentSpec::preset`].
pub const PRESETS: [&str; 4] = ["fig2", "fig3a", "fig3b", "fig4"];

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub config: SystemConfig,
    pub schedule: CouplingSchedule,
    pub initial: InitialExcitation,
    pub t_max: f64,
    pub dt: f64,
    pub sample_stride: usize,
}

fn three_state(omega: Vec<f64>) -> SystemConfig {
    SystemConfig::new(omega, vec![0.0375, 0.025, 0.05], vec![-1, 0, 1])
}

fn three_state_initial() -> InitialExcitation {
    let s = 3f64.sqrt().recip();
    InitialExcitation::new(vec![
        Complex64::new(s, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(-s, 0.0),
    ])
}

impl ExperimentSpec {
    fn single_flip(name: &str, omega: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            config: three_state(omega),
            schedule: CouplingSchedule::flip(200.0, 200.0).expect("valid durations"),
            initial: three_state_initial(),
            t_max: 400.0,
            dt: 0.01,
            sample_stride: 10,
        }
    }

    /// Degenerate states at the band centre, one flip at `kappa t = 200`.
    pub fn fig2() -> Self {
        Self::single_flip("fig2", vec![0.0; 3])
    }

    /// Detunings large compared with the decay rates.
    pub fn fig3a() -> Self {
        Self::single_flip("fig3a", vec![0.0, 0.5, -0.5])
    }

    /// Detunings comparable with the decay rates.
    pub fn fig3b() -> Self {
        Self::single_flip("fig3b", vec![0.0, 0.05, -0.025])
    }

    /// The `fig3b` states under fast alternation, `kappa T = 8`.
    pub fn fig4() -> Self {
        Self {
            name: "fig4".into(),
            schedule: CouplingSchedule::alternating(8.0).expect("valid durations"),
            ..Self::single_flip("fig3b", vec![0.0, 0.05, -0.025])
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "fig2" => Some(Self::fig2()),
            "fig3a" => Some(Self::fig3a()),
            "fig3b" => Some(Self::fig3b()),
            "fig4" => Some(Self::fig4()),
            _ => None,
        }
    }

    /// Start of the first non-Hermitian segment of a single-flip schedule.
    pub fn flip_time(&self) -> Option<f64> {
        if self.schedule.is_periodic() {
            return None;
        }
        let mut t = 0.0;
        for seg in self.schedule.segments() {
            if seg.coupling == Coupling::NonHermitian {
                return Some(t);
            }
            t += seg.duration;
        }
        None
    }

    /// Returns a copy with one sweep parameter set to `value`.
    pub fn with_parameter(&self, param: SweepParameter, value: f64) -> Result<Self> {
        let mut out = self.clone();
        match param {
            SweepParameter::T => {
                if self.schedule.is_periodic() {
                    out.schedule = CouplingSchedule::alternating(value)?;
                } else {
                    out.schedule = CouplingSchedule::flip(value, value)?;
                    out.t_max = 2.0 * value;
                }
            }
            SweepParameter::DetuningScale => {
                let omega = &self.config.omega;
                let max = omega.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
                let spread = omega.iter().any(|w| (w - omega[0]).abs() > 1e-12);
                out.config.omega = if spread && max > 0.0 {
                    omega.iter().map(|w| w / max * value).collect()
                } else {
                    (0..omega.len()).map(|k| detuning_pattern(k) * value).collect()
                };
            }
            SweepParameter::CouplingScale => {
                out.config.kappa_n = self.config.kappa_n.iter().map(|k| k * value).collect();
            }
        }
        Ok(out)
    }
}

/// `0, +1, -1, +2, -2, ...`
fn detuning_pattern(k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        let m = k.div_ceil(2) as f64;
        if k % 2 == 1 {
            m
        } else {
            -m
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Flip time, or the segment length of a periodic schedule.
    T,
    /// Spread of the state frequencies.
    DetuningScale,
    /// Common factor on all `kappa_n`.
    CouplingScale,
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" => Ok(Self::T),
            "detuning_scale" => Ok(Self::DetuningScale),
            "coupling_scale" => Ok(Self::CouplingScale),
            other => Err(Error::Parse {
                field: "param".into(),
                message: format!(
                    "unknown sweep parameter `{other}`; expected T, detuning_scale or coupling_scale"
                ),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentOptions {
    pub lattice_buffer: usize,
    pub thresholds: ProtocolThresholds,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            lattice_buffer: DEFAULT_BUFFER,
            thresholds: ProtocolThresholds::default(),
        }
    }
}

/// Numbers extracted from a run. Thresholds are applied by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    /// Echo of the full model, single-flip schedules only.
    pub echo_full: Option<EchoReport>,
    pub echo_reduced: Option<EchoReport>,
    /// Whether `P_c` keeps growing after the flip, beyond what unitary
    /// dynamics allows (after `t = 0` for periodic schedules, judged on
    /// period averages).
    pub secular_growth: bool,
    /// `P_c(t_max) - P_c(t_flip)`, with `t_flip = 0` for periodic schedules.
    pub continuum_gain: f64,
    /// Over the whole run.
    pub frozen_deviation: f64,
    /// `max_{t, n} |P_n^reduced - P_n^full|`.
    pub reduced_full_gap: f64,
    pub max_hermitian_drift: f64,
    pub max_edge_population: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub warnings: Vec<String>,
    pub lattice_size: usize,
    pub full: Trajectory,
    pub reduced: Trajectory,
    pub delta: CouplingMatrix,
    pub modes: Vec<EigenMode>,
    pub conditions: ProtocolReport,
    pub verdict: Verdict,
}

fn max_population_gap(a: &Trajectory, b: &Trajectory) -> f64 {
    a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p.norm_sqr() - q.norm_sqr()).abs()))
        .fold(0.0, f64::max)
}

/// Runs the full and reduced simulators and evaluates every observable.
pub fn run_experiment(spec: &ExperimentSpec, opts: &ExperimentOptions) -> Result<ExperimentResult> {
    let config = spec.config.validate()?;
    spec.initial.check_against(&spec.config)?;
    let step = StepOptions::new(spec.t_max, spec.dt, spec.sample_stride);
    let lattice_size = lattice_size_for(spec.t_max, &config, opts.lattice_buffer);
    let initial = FullState::empty_continuum(&spec.initial, lattice_size)?;
    let full = integrate_full(&config, &spec.schedule, &initial, &step)?;

    let delta = delta_analytic_lattice(&config)?;
    let reduced = integrate_reduced(
        spec.initial.amplitudes(),
        &delta,
        config.omega(),
        &spec.schedule,
        &step,
    )?;
    let modes = eigen_analysis(&delta)?;

    let flip = spec.flip_time();
    let period = if spec.schedule.is_periodic() {
        spec.schedule.segments()[0].duration
    } else {
        flip.unwrap_or(spec.t_max)
    };
    let conditions = protocol_conditions(&delta, config.omega(), period, &opts.thresholds)?;

    let p_c = full.continuum.as_deref().unwrap_or(&[]);
    let p_tot = full.total_population();
    let (t_ref, window) = if spec.schedule.is_periodic() {
        (0.0, Some(spec.schedule.period()))
    } else {
        (flip.unwrap_or(0.0), None)
    };
    let k_ref = full.index_at(t_ref);
    let verdict = Verdict {
        echo_full: match flip {
            Some(t) if 2.0 * t <= spec.t_max + 1e-9 => Some(echo_report(&full, t)?),
            _ => None,
        },
        echo_reduced: match flip {
            Some(t) if 2.0 * t <= spec.t_max + 1e-9 => Some(echo_report(&reduced, t)?),
            _ => None,
        },
        secular_growth: secular_growth_check(&full.times, p_c, &p_tot, t_ref, window),
        continuum_gain: p_c.last().copied().unwrap_or(0.0) - p_c.get(k_ref).copied().unwrap_or(0.0),
        frozen_deviation: frozen_deviation(&full, spec.t_max)?,
        reduced_full_gap: max_population_gap(&full, &reduced),
        max_hermitian_drift: full.meta.max_hermitian_drift.unwrap_or(0.0),
        max_edge_population: full.meta.max_edge_population.unwrap_or(0.0),
    };
    Ok(ExperimentResult {
        spec: spec.clone(),
        warnings: config.warnings().to_vec(),
        lattice_size,
        full,
        reduced,
        delta,
        modes,
        conditions,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            let spec = ExperimentSpec::preset(name).unwrap();
            assert_eq!(spec.name, name);
            spec.config.validate().unwrap();
            spec.initial.check_against(&spec.config).unwrap();
            let norm: f64 = spec.initial.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-15);
        }
        assert!(ExperimentSpec::preset("fig5").is_none());
        assert_eq!(ExperimentSpec::fig2().flip_time(), Some(200.0));
        assert_eq!(ExperimentSpec::fig4().flip_time(), None);
    }

    #[test]
    fn sweep_parameters() {
        let fig2 = ExperimentSpec::fig2();
        let t = fig2.with_parameter(SweepParameter::T, 50.0).unwrap();
        assert_eq!(t.flip_time(), Some(50.0));
        assert_eq!(t.t_max, 100.0);
        let d = fig2.with_parameter(SweepParameter::DetuningScale, 0.5).unwrap();
        assert_eq!(d.config.omega, vec![0.0, 0.5, -0.5]);
        let d = ExperimentSpec::fig3b()
            .with_parameter(SweepParameter::DetuningScale, 0.1)
            .unwrap();
        assert_eq!(d.config.omega, vec![0.0, 0.1, -0.05]);
        let c = fig2.with_parameter(SweepParameter::CouplingScale, 2.0).unwrap();
        assert_eq!(c.config.kappa_n, vec![0.075, 0.05, 0.1]);
        let p = ExperimentSpec::fig4().with_parameter(SweepParameter::T, 4.0).unwrap();
        assert_eq!(p.schedule.period(), 8.0);
        assert_eq!(p.t_max, 400.0);
        assert!("bogus".parse::<SweepParameter>().is_err());
        assert_eq!((0..5).map(detuning_pattern).collect::<Vec<_>>(), vec![0.0, 1.0, -1.0, 2.0, -2.0]);
    }
}
