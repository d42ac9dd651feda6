//! Problem instances shared by the lattice and reduced simulators.
//!
//! All frequencies and rates are in units of the lattice hopping `kappa`,
//! times in units of `1/kappa`. The presets use `kappa = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this `max(kappa_n / kappa)` the markovian reduction is suspect.
pub const WEAK_COUPLING_WARN: f64 = 0.2;

/// `N` discrete states side-coupled to a one-dimensional tight-binding lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n_states: usize,
    /// Frequency offsets from the band centre.
    pub omega: Vec<f64>,
    /// Hopping between state `n` and its lattice site.
    pub kappa_n: Vec<f64>,
    /// Lattice site each state attaches to.
    pub alpha_n: Vec<i64>,
    /// Nearest-neighbour lattice hopping.
    pub kappa: f64,
}

impl SystemConfig {
    pub fn new(omega: Vec<f64>, kappa_n: Vec<f64>, alpha_n: Vec<i64>) -> Self {
        Self {
            n_states: omega.len(),
            omega,
            kappa_n,
            alpha_n,
            kappa: 1.0,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    /// Largest `|alpha_n|`.
    pub fn max_site(&self) -> i64 {
        self.alpha_n.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<ValidatedConfig> {
        validate_config(self)
    }
}

/// A [`SystemConfig`] that has passed [`validate_config`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig {
    config: SystemConfig,
    weak_coupling_ratio: f64,
    warnings: Vec<String>,
}

impl ValidatedConfig {
    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn n_states(&self) -> usize {
        self.config.n_states
    }

    pub fn omega(&self) -> &[f64] {
        &self.config.omega
    }

    pub fn kappa_n(&self) -> &[f64] {
        &self.config.kappa_n
    }

    pub fn alpha_n(&self) -> &[i64] {
        &self.config.alpha_n
    }

    pub fn kappa(&self) -> f64 {
        self.config.kappa
    }

    /// `max_n kappa_n / kappa`.
    pub fn weak_coupling_ratio(&self) -> f64 {
        self.weak_coupling_ratio
    }

    /// Non-fatal diagnostics raised during validation.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

impl std::ops::Deref for ValidatedConfig {
    type Target = SystemConfig;

    fn deref(&self) -> &SystemConfig {
        &self.config
    }
}

/// Check the invariants of a [`SystemConfig`].
///
/// Every discrete frequency must lie strictly inside the band `(-2 kappa, 2 kappa)`,
/// attachment sites must be distinct and at least one state must be coupled.
/// A coupling ratio above [`WEAK_COUPLING_WARN`] produces a warning only.
pub fn validate_config(config: &SystemConfig) -> Result<ValidatedConfig> {
    let n = config.n_states;
    if n == 0 {
        return Err(Error::InvalidConfig("n_states must be positive".into()));
    }
    for (name, len) in [
        ("omega", config.omega.len()),
        ("kappa_n", config.kappa_n.len()),
        ("alpha_n", config.alpha_n.len()),
    ] {
        if len != n {
            return Err(Error::InvalidConfig(format!(
                "{name} has {len} entries, expected n_states = {n}"
            )));
        }
    }
    if !(config.kappa > 0.0) || !config.kappa.is_finite() {
        return Err(Error::NonPositiveHopping(config.kappa));
    }
    let band_edge = 2.0 * config.kappa;
    for (index, &omega) in config.omega.iter().enumerate() {
        if !omega.is_finite() || omega.abs() >= band_edge {
            return Err(Error::EmbeddingViolation {
                index,
                omega,
                band_edge,
            });
        }
    }
    for first in 0..n {
        for second in first + 1..n {
            if config.alpha_n[first] == config.alpha_n[second] {
                return Err(Error::DuplicateSite {
                    site: config.alpha_n[first],
                    first,
                    second,
                });
            }
        }
    }
    if let Some(k) = config.kappa_n.iter().find(|k| !(**k >= 0.0) || !k.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "kappa_n entries must be finite and non-negative, got {k}"
        )));
    }
    if config.kappa_n.iter().all(|&k| k == 0.0) {
        return Err(Error::InvalidConfig(
            "at least one kappa_n must be positive".into(),
        ));
    }

    let weak_coupling_ratio = config
        .kappa_n
        .iter()
        .fold(0.0_f64, |acc, &k| acc.max(k / config.kappa));
    let mut warnings = Vec::new();
    if weak_coupling_ratio > WEAK_COUPLING_WARN {
        warnings.push(format!(
            "max kappa_n/kappa = {weak_coupling_ratio:.4} exceeds {WEAK_COUPLING_WARN}; \
             the markovian reduced model assumes weak coupling"
        ));
    }
    Ok(ValidatedConfig {
        config: config.clone(),
        weak_coupling_ratio,
        warnings,
    })
}

/// Value of the coupling prefactor `f` on one schedule segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coupling {
    /// `f = 1`
    #[serde(rename = "H")]
    Hermitian,
    /// `f = i`
    #[serde(rename = "NH")]
    NonHermitian,
}

impl Coupling {
    pub fn value(self) -> Complex64 {
        match self {
            Coupling::Hermitian => Complex64::new(1.0, 0.0),
            Coupling::NonHermitian => Complex64::new(0.0, 1.0),
        }
    }

    /// `f^2`, exactly `+1` or `-1`.
    pub fn squared(self) -> f64 {
        match self {
            Coupling::Hermitian => 1.0,
            Coupling::NonHermitian => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Coupling::Hermitian => "H",
            Coupling::NonHermitian => "NH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub duration: f64,
    pub coupling: Coupling,
}

/// Piecewise-constant `f(t)` taking values in `{1, i}`.
///
/// Each segment owns its left endpoint: at a boundary `t_k` the value is that
/// of the segment starting at `t_k`. With `repeat` set, the segment list is
/// continued periodically with period equal to the summed durations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSchedule {
    segments: Vec<Segment>,
    repeat: bool,
}

impl CouplingSchedule {
    pub fn new(segments: Vec<Segment>, repeat: bool) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidConfig("schedule has no segments".into()));
        }
        if let Some(s) = segments
            .iter()
            .find(|s| !(s.duration > 0.0) || !s.duration.is_finite())
        {
            return Err(Error::InvalidConfig(format!(
                "segment durations must be positive and finite, got {}",
                s.duration
            )));
        }
        Ok(Self { segments, repeat })
    }

    /// `f = 1` for the whole of `[0, duration]`.
    pub fn hermitian(duration: f64) -> Result<Self> {
        Self::new(
            vec![Segment {
                duration,
                coupling: Coupling::Hermitian,
            }],
            false,
        )
    }

    /// `f = 1` on `[0, t_flip)`, `f = i` on `[t_flip, t_flip + after]`.
    pub fn flip(t_flip: f64, after: f64) -> Result<Self> {
        Self::new(
            vec![
                Segment {
                    duration: t_flip,
                    coupling: Coupling::Hermitian,
                },
                Segment {
                    duration: after,
                    coupling: Coupling::NonHermitian,
                },
            ],
            false,
        )
    }

    /// Periodic alternation `1, i, 1, i, ...` switching every `half_period`.
    pub fn alternating(half_period: f64) -> Result<Self> {
        Self::new(
            vec![
                Segment {
                    duration: half_period,
                    coupling: Coupling::Hermitian,
                },
                Segment {
                    duration: half_period,
                    coupling: Coupling::NonHermitian,
                },
            ],
            true,
        )
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_periodic(&self) -> bool {
        self.repeat
    }

    /// Summed segment durations (one period when periodic).
    pub fn period(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Total duration, or `None` for periodic schedules.
    pub fn total_duration(&self) -> Option<f64> {
        (!self.repeat).then(|| self.period())
    }

    /// The coupling in force at `t`.
    pub fn coupling_at(&self, t: f64) -> Result<Coupling> {
        if !(t >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "schedule evaluated at negative time {t}"
            )));
        }
        let period = self.period();
        let local = if self.repeat {
            t.rem_euclid(period)
        } else {
            if t > period {
                return Err(Error::TimeBeyondSchedule { t, total: period });
            }
            t
        };
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            if local < end {
                return Ok(seg.coupling);
            }
            start = end;
        }
        // local == period on a finite schedule: the closing point belongs to
        // the last segment.
        Ok(self.segments[self.segments.len() - 1].coupling)
    }

    /// `f(t)`.
    pub fn eval(&self, t: f64) -> Result<Complex64> {
        self.coupling_at(t).map(Coupling::value)
    }

    /// Times in `(0, t_max)` at which `f` may change.
    pub fn boundaries(&self, t_max: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut start = 0.0;
        'outer: loop {
            for seg in &self.segments {
                start += seg.duration;
                if start >= t_max {
                    break 'outer;
                }
                out.push(start);
            }
            if !self.repeat {
                break;
            }
        }
        out
    }

    /// `[start, end)` intervals of `[0, t_max]` with their coupling.
    pub fn intervals(&self, t_max: f64) -> Vec<(f64, f64, Coupling)> {
        let mut out = Vec::new();
        let mut start = 0.0;
        'outer: loop {
            for seg in &self.segments {
                if start >= t_max {
                    break 'outer;
                }
                let end = (start + seg.duration).min(t_max);
                out.push((start, end, seg.coupling));
                start += seg.duration;
            }
            if !self.repeat {
                break;
            }
        }
        out
    }
}

/// Schedule evaluation as a free function.
pub fn schedule_eval(schedule: &CouplingSchedule, t: f64) -> Result<Complex64> {
    schedule.eval(t)
}

/// Discrete-state amplitudes at `t = 0`; the continuum starts empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialExcitation {
    a0: Vec<Complex64>,
}

impl InitialExcitation {
    pub fn new(a0: Vec<Complex64>) -> Self {
        Self { a0 }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.a0
    }

    pub fn len(&self) -> usize {
        self.a0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a0.is_empty()
    }

    pub fn check_against(&self, config: &SystemConfig) -> Result<()> {
        if self.a0.len() != config.n_states {
            return Err(Error::InvalidConfig(format!(
                "a0 has {} entries, expected n_states = {}",
                self.a0.len(),
                config.n_states
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig2() -> SystemConfig {
        SystemConfig::new(vec![0.0; 3], vec![0.0375, 0.025, 0.05], vec![-1, 0, 1])
    }

    #[test]
    fn fig2_config_is_valid() {
        let v = validate_config(&fig2()).unwrap();
        assert!((v.weak_coupling_ratio() - 0.05).abs() < 1e-15);
        assert!(v.warnings().is_empty());
    }

    #[test]
    fn frequency_outside_band_is_rejected() {
        let c = SystemConfig::new(vec![2.5], vec![0.05], vec![0]);
        assert!(matches!(
            validate_config(&c),
            Err(Error::EmbeddingViolation { index: 0, .. })
        ));
        let edge = SystemConfig::new(vec![-2.0], vec![0.05], vec![0]);
        assert!(matches!(
            validate_config(&edge),
            Err(Error::EmbeddingViolation { .. })
        ));
    }

    #[test]
    fn duplicate_sites_are_rejected() {
        let c = SystemConfig::new(vec![0.0, 0.0], vec![0.05, 0.05], vec![0, 0]);
        assert!(matches!(
            validate_config(&c),
            Err(Error::DuplicateSite { site: 0, .. })
        ));
    }

    #[test]
    fn non_positive_hopping_is_rejected() {
        let c = fig2().with_kappa(0.0);
        assert_eq!(validate_config(&c), Err(Error::NonPositiveHopping(0.0)));
    }

    #[test]
    fn all_uncoupled_is_rejected() {
        let c = SystemConfig::new(vec![0.0], vec![0.0], vec![0]);
        assert!(matches!(validate_config(&c), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn strong_coupling_warns_but_validates() {
        let c = SystemConfig::new(vec![0.0], vec![0.3], vec![0]);
        let v = validate_config(&c).unwrap();
        assert_eq!(v.warnings().len(), 1);
    }

    #[test]
    fn flip_schedule_values() {
        let s = CouplingSchedule::flip(200.0, 200.0).unwrap();
        assert_eq!(s.eval(100.0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(s.eval(300.0).unwrap(), Complex64::new(0.0, 1.0));
        // left endpoint ownership
        assert_eq!(s.eval(200.0).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(s.eval(400.0).unwrap(), Complex64::new(0.0, 1.0));
        assert!(matches!(
            s.eval(400.5),
            Err(Error::TimeBeyondSchedule { .. })
        ));
    }

    #[test]
    fn periodic_schedule_wraps() {
        let s = CouplingSchedule::alternating(8.0).unwrap();
        assert_eq!(s.eval(28.0).unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(s.eval(16.0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(s.eval(1e6 + 3.0).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(s.total_duration(), None);
        assert_eq!(s.boundaries(40.0), vec![8.0, 16.0, 24.0, 32.0]);
    }

    #[test]
    fn intervals_cover_horizon() {
        let s = CouplingSchedule::alternating(8.0).unwrap();
        let iv = s.intervals(20.0);
        assert_eq!(iv.len(), 3);
        assert_eq!(iv[2], (16.0, 20.0, Coupling::Hermitian));
    }

    fn arb_schedule() -> impl Strategy<Value = CouplingSchedule> {
        (
            prop::collection::vec((0.1f64..50.0, any::<bool>()), 1..6),
            any::<bool>(),
        )
            .prop_map(|(segs, repeat)| {
                let segments = segs
                    .into_iter()
                    .map(|(duration, h)| Segment {
                        duration,
                        coupling: if h {
                            Coupling::Hermitian
                        } else {
                            Coupling::NonHermitian
                        },
                    })
                    .collect();
                CouplingSchedule::new(segments, repeat).unwrap()
            })
    }

    proptest! {
        #[test]
        fn f_squared_is_plus_or_minus_one(s in arb_schedule(), frac in 0.0f64..1.0) {
            let t = frac * s.period();
            let f = s.eval(t).unwrap();
            let f2 = f * f;
            prop_assert!(f2 == Complex64::new(1.0, 0.0) || f2 == Complex64::new(-1.0, 0.0));
            prop_assert_eq!(s.eval(t).unwrap(), f);
        }

        #[test]
        fn periodic_schedules_repeat(s in arb_schedule(), frac in 0.0f64..1.0, k in 1u32..20) {
            prop_assume!(s.is_periodic());
            // keep away from boundaries where t + k*period rounds across them
            let t = frac * s.period();
            let shifted = t + f64::from(k) * s.period();
            let near_boundary = s.boundaries(s.period()).iter().any(|b| (b - t).abs() < 1e-9)
                || t < 1e-9 || (s.period() - t) < 1e-9;
            prop_assume!(!near_boundary);
            prop_assert_eq!(s.eval(shifted).unwrap(), s.eval(t).unwrap());
        }
    }
}
