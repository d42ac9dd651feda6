//! Direct integration of discrete states side-coupled to a truncated
//! tight-binding lattice.
//!
//! ```text
//! dc_n/dt = -i omega_n c_n + i f(t) kappa_n b_{alpha_n}
//! db_a/dt =  i kappa (b_{a+1} + b_{a-1}) + i f(t) sum_n kappa_n c_n delta_{a, alpha_n}
//! ```
//!
//! The lattice keeps `M` (odd) sites `alpha = -(M-1)/2 ..= (M-1)/2` with
//! zero amplitude beyond both ends. The integrator works on one flat vector
//! `[c_1 .. c_N, b_{-(M-1)/2} .. b_{(M-1)/2}]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Coupling, CouplingSchedule, InitialExcitation, ValidatedConfig};
use crate::ode::{aligned_steps, check_step, Rk4};
use crate::trajectory::{config_hash, ModelKind, Trajectory, TrajectoryMeta};

/// Sites added beyond the ballistic light cone on each side.
pub const DEFAULT_BUFFER: usize = 50;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes of the discrete states and lattice sites at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub c: Vec<Complex64>,
    /// `b[j]` is the amplitude on site `alpha = j - (M-1)/2`.
    pub b: Vec<Complex64>,
    pub t: f64,
}

impl FullState {
    /// Discrete states excited, continuum empty, `t = 0`.
    pub fn empty_continuum(initial: &InitialExcitation, lattice_size: usize) -> Result<Self> {
        if lattice_size % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "lattice size must be odd, got {lattice_size}"
            )));
        }
        Ok(Self {
            c: initial.amplitudes().to_vec(),
            b: vec![Complex64::new(0.0, 0.0); lattice_size],
            t: 0.0,
        })
    }

    pub fn zeros(n_states: usize, lattice_size: usize) -> Self {
        Self {
            c: vec![Complex64::new(0.0, 0.0); n_states],
            b: vec![Complex64::new(0.0, 0.0); lattice_size],
            t: 0.0,
        }
    }

    pub fn lattice_size(&self) -> usize {
        self.b.len()
    }

    pub fn half_width(&self) -> i64 {
        (self.b.len() as i64 - 1) / 2
    }

    /// Amplitude on lattice site `alpha`, zero outside the truncated range.
    pub fn site(&self, alpha: i64) -> Complex64 {
        let j = alpha + self.half_width();
        if j < 0 || j as usize >= self.b.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.b[j as usize]
        }
    }

    pub fn discrete_population(&self) -> f64 {
        self.c.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn continuum_population(&self) -> f64 {
        self.b.iter().map(Complex64::norm_sqr).sum()
    }

    fn to_flat(&self) -> Vec<Complex64> {
        let mut y = Vec::with_capacity(self.c.len() + self.b.len());
        y.extend_from_slice(&self.c);
        y.extend_from_slice(&self.b);
        y
    }
}

/// Odd lattice size whose hard walls the ballistic front (group velocity at
/// most `2 kappa`) cannot reach before `t_max`:
/// the smallest odd `M >= 2 ceil(2 kappa t_max) + 2 max|alpha_n| + 2 buffer`.
pub fn lattice_size_for(t_max: f64, config: &ValidatedConfig, buffer: usize) -> usize {
    let light_cone = (2.0 * config.kappa() * t_max.max(0.0)).ceil() as usize;
    let m = 2 * light_cone + 2 * config.max_site() as usize + 2 * buffer;
    m | 1
}

/// The discrete-plus-lattice model on a fixed truncation.
#[derive(Debug, Clone)]
pub struct LatticeModel<'a> {
    config: &'a ValidatedConfig,
    lattice_size: usize,
    /// Flat-vector index of each state's attachment site.
    attach: Vec<usize>,
}

impl<'a> LatticeModel<'a> {
    pub fn new(config: &'a ValidatedConfig, lattice_size: usize) -> Result<Self> {
        if lattice_size % 2 == 0 {
            return Err(Error::InvalidConfig(format!(
                "lattice size must be odd, got {lattice_size}"
            )));
        }
        let half = (lattice_size as i64 - 1) / 2;
        if config.max_site() >= half {
            return Err(Error::InvalidConfig(format!(
                "attachment site {} is not interior to a lattice of {lattice_size} sites",
                config.max_site()
            )));
        }
        let n = config.n_states();
        let attach = config
            .alpha_n()
            .iter()
            .map(|&a| n + (a + half) as usize)
            .collect();
        Ok(Self {
            config,
            lattice_size,
            attach,
        })
    }

    pub fn lattice_size(&self) -> usize {
        self.lattice_size
    }

    pub fn dim(&self) -> usize {
        self.config.n_states() + self.lattice_size
    }

    /// Writes `dy/dt` for the flat state `y` at coupling value `f`.
    pub fn rhs_flat(&self, f: Complex64, y: &[Complex64], dy: &mut [Complex64]) {
        let n = self.config.n_states();
        let (c, b) = y.split_at(n);
        let (dc, db) = dy.split_at_mut(n);
        let hop = I * self.config.kappa();
        let m = b.len();
        match m {
            0 => {}
            1 => db[0] = Complex64::new(0.0, 0.0),
            _ => {
                db[0] = hop * b[1];
                for j in 1..m - 1 {
                    db[j] = hop * (b[j - 1] + b[j + 1]);
                }
                db[m - 1] = hop * b[m - 2];
            }
        }
        let fi = I * f;
        for k in 0..n {
            let site = self.attach[k] - n;
            let kn = self.config.kappa_n()[k];
            dc[k] = -I * self.config.omega()[k] * c[k] + fi * kn * b[site];
            db[site] += fi * kn * c[k];
        }
    }
}

/// Time derivative of `state` under the coupling in force at `t`.
pub fn full_rhs(
    state: &FullState,
    t: f64,
    config: &ValidatedConfig,
    schedule: &CouplingSchedule,
) -> Result<FullState> {
    if state.c.len() != config.n_states() {
        return Err(Error::InvalidConfig(format!(
            "state has {} discrete amplitudes, config has {}",
            state.c.len(),
            config.n_states()
        )));
    }
    let model = LatticeModel::new(config, state.lattice_size())?;
    let f = schedule.eval(t)?;
    let y = state.to_flat();
    let mut dy = vec![Complex64::new(0.0, 0.0); y.len()];
    model.rhs_flat(f, &y, &mut dy);
    let n = config.n_states();
    Ok(FullState {
        c: dy[..n].to_vec(),
        b: dy[n..].to_vec(),
        t,
    })
}

/// Step and sampling controls shared by both integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub t_max: f64,
    pub dt: f64,
    /// Record a sample every this many steps.
    pub sample_stride: usize,
    /// Keep lattice amplitudes at every sample (full model only).
    pub keep_lattice: bool,
}

impl StepOptions {
    pub fn new(t_max: f64, dt: f64, sample_stride: usize) -> Self {
        Self {
            t_max,
            dt,
            sample_stride,
            keep_lattice: false,
        }
    }

    pub fn keep_lattice(mut self, keep: bool) -> Self {
        self.keep_lattice = keep;
        self
    }
}

/// Classical RK4 integration of the full model from `initial` (taken at
/// `t = 0`) to `opts.t_max`.
///
/// Schedule boundaries must fall on the step grid so that `f` is constant
/// within every step. Population drift inside Hermitian segments is measured
/// at every step and reported in [`TrajectoryMeta::max_hermitian_drift`].
pub fn integrate_full(
    config: &ValidatedConfig,
    schedule: &CouplingSchedule,
    initial: &FullState,
    opts: &StepOptions,
) -> Result<Trajectory> {
    check_step(opts.dt, config.kappa())?;
    let n_steps = aligned_steps(schedule, opts.t_max, opts.dt)?;
    if opts.sample_stride == 0 {
        return Err(Error::InvalidConfig("sample_stride must be positive".into()));
    }
    if initial.c.len() != config.n_states() {
        return Err(Error::InvalidConfig(format!(
            "initial state has {} discrete amplitudes, config has {}",
            initial.c.len(),
            config.n_states()
        )));
    }
    let model = LatticeModel::new(config, initial.lattice_size())?;
    let n = config.n_states();
    let dt = opts.dt;
    let omega = config.omega().to_vec();

    let mut y = initial.to_flat();
    let mut rk = Rk4::new(y.len());

    let n_samples = n_steps / opts.sample_stride + 2;
    let mut times = Vec::with_capacity(n_samples);
    let mut amplitudes = Vec::with_capacity(n_samples);
    let mut continuum = Vec::with_capacity(n_samples);
    let mut lattice = opts.keep_lattice.then(|| Vec::with_capacity(n_samples));
    let mut max_edge = 0.0_f64;

    let mut record = |step: usize, y: &[Complex64]| {
        let t = step as f64 * dt;
        times.push(t);
        amplitudes.push(
            y[..n]
                .iter()
                .zip(&omega)
                .map(|(c, w)| c * Complex64::new(0.0, w * t).exp())
                .collect::<Vec<_>>(),
        );
        continuum.push(y[n..].iter().map(Complex64::norm_sqr).sum::<f64>());
        if let Some(l) = lattice.as_mut() {
            l.push(y[n..].to_vec());
        }
        let edge = y[n].norm_sqr() + y[y.len() - 1].norm_sqr();
        max_edge = max_edge.max(edge);
    };

    let total = |y: &[Complex64]| y.iter().map(Complex64::norm_sqr).sum::<f64>();
    let mut max_drift = 0.0_f64;
    let mut segment_start: Option<f64> = None;

    record(0, &y);
    for step in 0..n_steps {
        let t = step as f64 * dt;
        // Aligned schedules never change inside a step; the midpoint avoids
        // rounding onto the wrong side of a boundary.
        let coupling = schedule.coupling_at(t + 0.5 * dt)?;
        match coupling {
            Coupling::Hermitian => {
                let p0 = *segment_start.get_or_insert_with(|| total(&y));
                rk.step(t, dt, &mut y, |_, y, dy| model.rhs_flat(coupling.value(), y, dy));
                max_drift = max_drift.max((total(&y) - p0).abs());
            }
            Coupling::NonHermitian => {
                segment_start = None;
                rk.step(t, dt, &mut y, |_, y, dy| model.rhs_flat(coupling.value(), y, dy));
            }
        }
        let done = step + 1;
        if done % opts.sample_stride == 0 || done == n_steps {
            record(done, &y);
        }
    }

    Ok(Trajectory {
        times,
        amplitudes,
        continuum: Some(continuum),
        lattice,
        meta: TrajectoryMeta {
            model: ModelKind::Full,
            config_hash: config_hash(config.config()),
            omega,
            schedule: schedule.clone(),
            dt,
            sample_stride: opts.sample_stride,
            lattice_size: Some(model.lattice_size()),
            max_hermitian_drift: Some(max_drift),
            max_edge_population: Some(max_edge),
        },
    })
}
