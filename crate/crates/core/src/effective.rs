//! The markovian reduced model on the discrete states.
//!
//! ```text
//! da_n/dt = -f(t)^2 sum_m Delta_{n,m} a_m exp[i (omega_n - omega_m) t]
//! Delta_{n,m} = int_0^inf dtau Phi_{n,m}(tau) e^{i omega_m tau}
//!             = pi S_{n,m}(omega_m) - i PV int domega S_{n,m}(omega) / (omega - omega_m)
//! Phi_{n,m}(tau) = int domega S_{n,m}(omega) e^{-i omega tau}
//! ```
//!
//! `Delta` can be built three ways: the closed form for the tight-binding
//! lattice, the principal-value form, and the time-domain kernel form. They
//! are computed independently and cross-checked in the tests.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eigen::eigenvalues;
use crate::error::{Error, Result};
use crate::lattice::StepOptions;
use crate::model::{CouplingSchedule, ValidatedConfig};
use crate::ode::{aligned_steps, check_step, Rk4};
use crate::quadrature::{gauss_legendre, Adaptive};
use crate::spectral::SpectralCorrelation;
use crate::trajectory::{ModelKind, Trajectory, TrajectoryMeta};

/// Frequencies closer than this (in units of `kappa`) to a band edge are
/// rejected.
pub const BAND_EDGE_TOL: f64 = 1e-6;

/// Numerical slack on the sign of decay rates.
pub const DECAY_RATE_SLACK: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    PvQuadrature,
    KernelQuadrature,
}

/// The `N x N` coupling matrix of the reduced model.
///
/// Columns are evaluated at `omega_m`, so `Delta` is neither Hermitian nor
/// symmetric in general.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub delta: DMatrix<Complex64>,
    pub provenance: Provenance,
}

impl CouplingMatrix {
    pub fn new(delta: DMatrix<Complex64>, provenance: Provenance) -> Self {
        assert!(delta.is_square(), "coupling matrix must be square");
        Self { delta, provenance }
    }

    pub fn n(&self) -> usize {
        self.delta.nrows()
    }

    /// Largest entrywise `|self - reference| / |reference|`.
    pub fn max_relative_error(&self, reference: &CouplingMatrix) -> f64 {
        self.delta
            .iter()
            .zip(reference.delta.iter())
            .map(|(a, b)| {
                let scale = b.norm();
                if scale == 0.0 {
                    a.norm()
                } else {
                    (a - b).norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

fn check_inside_band(omega: f64, band: (f64, f64), tol: f64) -> Result<()> {
    if omega <= band.0 + tol || omega >= band.1 - tol {
        return Err(Error::BandEdgeSingularity {
            omega,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Closed-form `Delta` for states side-coupled to the tight-binding lattice:
///
/// ```text
/// Delta_{n,m} = kappa_n kappa_m i^d [sqrt(4 kappa^2 - omega_m^2) + i omega_m]^d
///               / ((2 kappa)^d sqrt(4 kappa^2 - omega_m^2)),   d = |alpha_n - alpha_m|
/// ```
pub fn delta_analytic_lattice(config: &ValidatedConfig) -> Result<CouplingMatrix> {
    let n = config.n_states();
    let kappa = config.kappa();
    let band = (-2.0 * kappa, 2.0 * kappa);
    for &w in config.omega() {
        check_inside_band(w, band, BAND_EDGE_TOL * kappa)?;
    }
    let delta = DMatrix::from_fn(n, n, |row, col| {
        let w = config.omega()[col];
        let root = (4.0 * kappa * kappa - w * w).sqrt();
        let d = (config.alpha_n()[row] - config.alpha_n()[col]).unsigned_abs() as i32;
        let bracket = Complex64::new(root, w) / (2.0 * kappa);
        I.powi(d) * bracket.powi(d) * (config.kappa_n()[row] * config.kappa_n()[col] / root)
    });
    Ok(CouplingMatrix::new(delta, Provenance::Analytic))
}

fn to_matrix(n: usize, flat: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| flat[i * n + j])
}

/// `Phi(tau) = int domega S(omega) e^{-i omega tau}` by adaptive quadrature
/// over the band. Defined for any real `tau`.
pub fn memory_kernel(spectral: &dyn SpectralCorrelation, tau: f64) -> Result<DMatrix<Complex64>> {
    let n = spectral.dim();
    let (a, b) = spectral.band();
    let quad = Adaptive::new(1e-16, 1e-11);
    let flat = quad.integrate_cosine(
        |w, out| {
            spectral.eval(w, out);
            let phase = Complex64::new(0.0, -w * tau).exp();
            for z in out.iter_mut() {
                *z *= phase;
            }
        },
        a,
        b,
        n * n,
    )?;
    Ok(to_matrix(n, &flat))
}

/// Controls for [`delta_pv_quadrature_with`].
#[derive(Debug, Clone, Copy)]
pub struct PvOptions {
    /// Largest excision radius as a fraction of the bandwidth; the other two
    /// are 10x and 100x smaller.
    pub radius: f64,
    /// Target accuracy relative to `max_n |S_{n,m}(omega_m)| * bandwidth`
    /// for column `m`.
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for PvOptions {
    fn default() -> Self {
        Self {
            radius: 1e-2,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        }
    }
}

/// `Delta` from the principal-value form with default options.
pub fn delta_pv_quadrature(
    spectral: &dyn SpectralCorrelation,
    omega: &[f64],
) -> Result<CouplingMatrix> {
    delta_pv_quadrature_with(spectral, omega, &PvOptions::default())
}

/// `Delta_{n,m} = pi S_{n,m}(omega_m) - i PV int S_{n,m}(omega) / (omega - omega_m)`.
///
/// The principal value is the limit of the integral with `(omega_m - r,
/// omega_m + r)` removed. For three radii `r, r/10, r/100` the excised
/// integral is computed by folding the two sides together,
/// `int_r^rho [S(omega_m + x) - S(omega_m - x)] / x dx`, plus the one-sided
/// remainder out to the far band edge. Its error is odd in `r`, so two
/// Richardson steps remove the `r` and `r^3` terms.
pub fn delta_pv_quadrature_with(
    spectral: &dyn SpectralCorrelation,
    omega: &[f64],
    opts: &PvOptions,
) -> Result<CouplingMatrix> {
    let n = spectral.dim();
    if omega.len() != n {
        return Err(Error::InvalidConfig(format!(
            "{} frequencies for a {n}-state spectral correlation",
            omega.len()
        )));
    }
    let (a, b) = spectral.band();
    let bw = b - a;
    let unit = bw / 4.0;
    let mut delta = DMatrix::from_element(n, n, ZERO);
    let mut s_plus = vec![ZERO; n * n];
    let mut s_minus = vec![ZERO; n * n];
    for (col, &wm) in omega.iter().enumerate() {
        check_inside_band(wm, (a, b), BAND_EDGE_TOL * unit)?;
        let s_here = spectral.matrix(wm);
        let scale = (0..n).map(|row| s_here[row * n + col].norm()).fold(0.0, f64::max) * bw;
        let quad = Adaptive {
            abs_tol: opts.rel_tol * scale,
            rel_tol: opts.rel_tol,
            max_intervals: opts.max_intervals,
        };
        let rho = (wm - a).min(b - wm);
        let r0 = (opts.radius * bw).min(0.5 * rho);

        // Far side beyond rho: its endpoint at the band edge is singular.
        let remainder = if (b - wm) - (wm - a) > 1e-15 * bw {
            quad.integrate_cosine(
                |w, out| {
                    spectral.eval(w, &mut s_plus);
                    for (row, z) in out.iter_mut().enumerate() {
                        *z = s_plus[row * n + col] / (w - wm);
                    }
                },
                wm + rho,
                b,
                n,
            )?
        } else if (wm - a) - (b - wm) > 1e-15 * bw {
            quad.integrate_cosine(
                |w, out| {
                    spectral.eval(w, &mut s_plus);
                    for (row, z) in out.iter_mut().enumerate() {
                        *z = s_plus[row * n + col] / (w - wm);
                    }
                },
                a,
                wm - rho,
                n,
            )?
        } else {
            vec![ZERO; n]
        };

        let mut excised = |r: f64| -> Result<Vec<Complex64>> {
            let folded = quad.integrate_cosine(
                |x, out| {
                    spectral.eval(wm + x, &mut s_plus);
                    spectral.eval(wm - x, &mut s_minus);
                    for (row, z) in out.iter_mut().enumerate() {
                        *z = (s_plus[row * n + col] - s_minus[row * n + col]) / x;
                    }
                },
                r,
                rho,
                n,
            )?;
            Ok(folded
                .iter()
                .zip(&remainder)
                .map(|(f, r)| f + r)
                .collect())
        };
        let i1 = excised(r0)?;
        let i2 = excised(r0 / 10.0)?;
        let i3 = excised(r0 / 100.0)?;
        for row in 0..n {
            let r12 = (i2[row] * 10.0 - i1[row]) / 9.0;
            let r23 = (i3[row] * 10.0 - i2[row]) / 9.0;
            let pv = (r23 * 1000.0 - r12) / 999.0;
            delta[(row, col)] = s_here[row * n + col] * PI - I * pv;
        }
    }
    Ok(CouplingMatrix::new(delta, Provenance::PvQuadrature))
}

/// Controls for [`delta_from_kernel_with`]. Frequencies and rates are in
/// units of a quarter bandwidth (`kappa` for the lattice).
#[derive(Debug, Clone)]
pub struct KernelOptions {
    /// Regularisation rates `epsilon`; the result is the polynomial
    /// extrapolation through all of them to `epsilon = 0`.
    pub eps: Vec<f64>,
    /// `epsilon_min * tau_max`: the damped integrand is cut at `e^{-tail}`.
    pub tail: f64,
    /// Gauss-Legendre nodes per `tau` panel.
    pub panel_nodes: usize,
    /// Band nodes per unit of `(half bandwidth) * tau`.
    pub band_nodes_per_phase: f64,
    /// Relative disagreement between the full and reduced extrapolations
    /// above which the result is rejected.
    pub max_extrapolation_spread: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            eps: vec![0.05, 0.025, 0.0125, 0.00625],
            tail: 18.0,
            panel_nodes: 32,
            band_nodes_per_phase: 0.8,
            max_extrapolation_spread: 1e-2,
        }
    }
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn cached_rule(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(gauss_legendre(n));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

/// Polynomial through `(x_i, y_i)` evaluated at `x = 0` (Neville).
fn extrapolate_to_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let k = xs.len();
    for level in 1..k {
        for i in 0..k - level {
            let (xi, xj) = (xs[i], xs[i + level]);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    p[0]
}

/// `Delta` from the time-domain kernel form with default options.
pub fn delta_from_kernel(
    spectral: &dyn SpectralCorrelation,
    omega: &[f64],
) -> Result<CouplingMatrix> {
    delta_from_kernel_with(spectral, omega, &KernelOptions::default())
}

/// `Delta_{n,m} = lim_{eps -> 0+} int_0^inf dtau Phi_{n,m}(tau) e^{(i omega_m - eps) tau}`.
///
/// `Phi` is sampled on composite Gauss-Legendre panels in `tau`; at each
/// sample it is a band integral in the variable `omega = c - h cos(theta)`
/// with a Gauss-Legendre rule whose size grows with `tau` to resolve
/// `e^{-i omega tau}`. The damped integral is evaluated for every
/// `eps` in [`KernelOptions::eps`] and extrapolated to zero.
pub fn delta_from_kernel_with(
    spectral: &dyn SpectralCorrelation,
    omega: &[f64],
    opts: &KernelOptions,
) -> Result<CouplingMatrix> {
    let n = spectral.dim();
    if omega.len() != n {
        return Err(Error::InvalidConfig(format!(
            "{} frequencies for a {n}-state spectral correlation",
            omega.len()
        )));
    }
    if opts.eps.len() < 2 || opts.eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidConfig(
            "kernel quadrature needs at least two positive eps values".into(),
        ));
    }
    let (a, b) = spectral.band();
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let unit = half / 2.0;
    for &w in omega {
        check_inside_band(w, (a, b), BAND_EDGE_TOL * unit)?;
    }
    let nn = n * n;
    let eps: Vec<f64> = opts.eps.iter().map(|e| e * unit).collect();
    let eps_min = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let tau_max = opts.tail / eps_min;

    // tau panels: the integrand oscillates at |omega - omega_m| <= 2 half.
    let (px, pw) = &*cached_rule(opts.panel_nodes);
    let max_freq = 2.0 * half;
    let panel_width = opts.panel_nodes as f64 * 2.0 * PI / (6.0 * max_freq);
    let n_panels = (tau_max / panel_width).ceil() as usize;
    let offsets: Vec<f64> = px.iter().map(|x| 0.5 * panel_width * (1.0 + x)).collect();
    let tau_weights: Vec<f64> = pw.iter().map(|w| 0.5 * panel_width * w).collect();

    struct BandRule {
        omega: Vec<f64>,
        weighted_s: Vec<Complex64>,
        local_phase: Vec<Complex64>,
    }
    let mut rules: Vec<(usize, BandRule)> = Vec::new();
    let build_rule = |size: usize| -> BandRule {
        let (x, w) = &*cached_rule(size);
        let mut weighted_s = vec![ZERO; size * nn];
        let mut local_phase = vec![ZERO; size * offsets.len()];
        let mut nodes = Vec::with_capacity(size);
        let mut s = vec![ZERO; nn];
        for k in 0..size {
            let theta = 0.5 * PI * (1.0 + x[k]);
            let (sin, cos) = theta.sin_cos();
            let wk = centre - half * cos;
            let weight = 0.5 * PI * w[k] * half * sin;
            spectral.eval(wk, &mut s);
            for e in 0..nn {
                weighted_s[k * nn + e] = s[e] * weight;
            }
            for (j, u) in offsets.iter().enumerate() {
                local_phase[k * offsets.len() + j] = Complex64::new(0.0, -wk * u).exp();
            }
            nodes.push(wk);
        }
        BandRule {
            omega: nodes,
            weighted_s,
            local_phase,
        }
    };

    let mut damped = vec![ZERO; eps.len() * nn];
    let mut phi = vec![ZERO; offsets.len() * nn];
    let mut base = Vec::new();
    for p in 0..n_panels {
        let start = p as f64 * panel_width;
        let needed = (opts.band_nodes_per_phase * half * (start + panel_width)).ceil() as usize + 48;
        // Rule sizes grow geometrically so only a few are ever built.
        let mut size = 64usize;
        while size < needed {
            size = ((size as f64 * 1.25) as usize).div_ceil(16) * 16;
        }
        let idx = match rules.iter().position(|(s, _)| *s == size) {
            Some(i) => i,
            None => {
                rules.push((size, build_rule(size)));
                rules.len() - 1
            }
        };
        let rule = &rules[idx].1;
        base.clear();
        base.extend(rule.omega.iter().map(|w| Complex64::new(0.0, -w * start).exp()));

        phi.fill(ZERO);
        let nj = offsets.len();
        for k in 0..size {
            let ws = &rule.weighted_s[k * nn..(k + 1) * nn];
            let lp = &rule.local_phase[k * nj..(k + 1) * nj];
            let bk = base[k];
            for j in 0..nj {
                let ph = bk * lp[j];
                let row = &mut phi[j * nn..(j + 1) * nn];
                for e in 0..nn {
                    row[e] += ws[e] * ph;
                }
            }
        }
        for j in 0..nj {
            let tau = start + offsets[j];
            for (ie, &ep) in eps.iter().enumerate() {
                let damp = (-ep * tau).exp() * tau_weights[j];
                if damp < 1e-300 {
                    continue;
                }
                for col in 0..n {
                    let factor = Complex64::new(0.0, omega[col] * tau).exp() * damp;
                    for row in 0..n {
                        damped[ie * nn + row * n + col] += phi[j * nn + row * n + col] * factor;
                    }
                }
            }
        }
    }

    // Order eps from large to small so dropping the first one keeps the
    // points closest to the limit.
    let mut order: Vec<usize> = (0..eps.len()).collect();
    order.sort_by(|&i, &j| eps[j].total_cmp(&eps[i]));
    let xs: Vec<f64> = order.iter().map(|&i| eps[i]).collect();
    let mut delta = DMatrix::from_element(n, n, ZERO);
    let mut spread = 0.0_f64;
    for row in 0..n {
        for col in 0..n {
            let ys: Vec<Complex64> = order
                .iter()
                .map(|&i| damped[i * nn + row * n + col])
                .collect();
            let full = extrapolate_to_zero(&xs, &ys);
            let reduced = extrapolate_to_zero(&xs[1..], &ys[1..]);
            if !full.re.is_finite() || !full.im.is_finite() {
                return Err(Error::ExtrapolationUnstable(format!(
                    "non-finite extrapolant for entry ({row}, {col})"
                )));
            }
            let scale = full.norm().max(ys.last().unwrap().norm());
            if scale > 0.0 {
                spread = spread.max((full - reduced).norm() / scale);
            }
            delta[(row, col)] = full;
        }
    }
    if spread > opts.max_extrapolation_spread {
        return Err(Error::ExtrapolationUnstable(format!(
            "extrapolants disagree by {spread:.3e} (relative)"
        )));
    }
    Ok(CouplingMatrix::new(delta, Provenance::KernelQuadrature))
}

/// Interaction-picture amplitudes `a_n` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    pub a: Vec<Complex64>,
    pub t: f64,
}

impl ReducedState {
    pub fn new(a: Vec<Complex64>, t: f64) -> Self {
        Self { a, t }
    }

    /// `c_n = a_n e^{-i omega_n t}`.
    pub fn schrodinger(&self, omega: &[f64]) -> Vec<Complex64> {
        self.a
            .iter()
            .zip(omega)
            .map(|(a, w)| a * Complex64::new(0.0, -w * self.t).exp())
            .collect()
    }
}

struct ReducedModel<'a> {
    delta: &'a DMatrix<Complex64>,
    omega: &'a [f64],
}

impl ReducedModel<'_> {
    fn rhs(&self, f2: f64, t: f64, a: &[Complex64], da: &mut [Complex64]) {
        let n = a.len();
        let rot: Vec<Complex64> = self
            .omega
            .iter()
            .map(|w| Complex64::new(0.0, w * t).exp())
            .collect();
        for row in 0..n {
            let mut acc = ZERO;
            for col in 0..n {
                acc += self.delta[(row, col)] * a[col] * rot[col].conj();
            }
            da[row] = -acc * rot[row] * f2;
        }
    }
}

/// `da/dt` at time `t` under the coupling in force at `t`.
pub fn reduced_rhs(
    state: &ReducedState,
    t: f64,
    delta: &CouplingMatrix,
    omega: &[f64],
    schedule: &CouplingSchedule,
) -> Result<Vec<Complex64>> {
    let n = delta.n();
    if state.a.len() != n || omega.len() != n {
        return Err(Error::InvalidConfig(format!(
            "reduced model of size {n} given {} amplitudes and {} frequencies",
            state.a.len(),
            omega.len()
        )));
    }
    let f2 = schedule.coupling_at(t)?.squared();
    let mut da = vec![ZERO; n];
    ReducedModel {
        delta: &delta.delta,
        omega,
    }
    .rhs(f2, t, &state.a, &mut da);
    Ok(da)
}

/// Classical RK4 integration of the reduced model from `a0` at `t = 0`.
///
/// `opts.dt` obeys the same guard and schedule alignment as the lattice
/// integrator; `keep_lattice` is ignored.
pub fn integrate_reduced(
    a0: &[Complex64],
    delta: &CouplingMatrix,
    omega: &[f64],
    schedule: &CouplingSchedule,
    opts: &StepOptions,
) -> Result<Trajectory> {
    let n = delta.n();
    if a0.len() != n || omega.len() != n {
        return Err(Error::InvalidConfig(format!(
            "reduced model of size {n} given {} amplitudes and {} frequencies",
            a0.len(),
            omega.len()
        )));
    }
    check_step(opts.dt, 1.0)?;
    let n_steps = aligned_steps(schedule, opts.t_max, opts.dt)?;
    if opts.sample_stride == 0 {
        return Err(Error::InvalidConfig("sample_stride must be positive".into()));
    }
    let model = ReducedModel {
        delta: &delta.delta,
        omega,
    };
    let dt = opts.dt;
    let mut a = a0.to_vec();
    let mut rk = Rk4::new(n);
    let mut times = vec![0.0];
    let mut amplitudes = vec![a.clone()];
    for step in 0..n_steps {
        let t = step as f64 * dt;
        let f2 = schedule.coupling_at(t + 0.5 * dt)?.squared();
        rk.step(t, dt, &mut a, |tt, y, dy| model.rhs(f2, tt, y, dy));
        let done = step + 1;
        if done % opts.sample_stride == 0 || done == n_steps {
            times.push(done as f64 * dt);
            amplitudes.push(a.clone());
        }
    }
    Ok(Trajectory {
        times,
        amplitudes,
        continuum: None,
        lattice: None,
        meta: TrajectoryMeta {
            model: ModelKind::Reduced,
            config_hash: 0,
            omega: omega.to_vec(),
            schedule: schedule.clone(),
            dt,
            sample_stride: opts.sample_stride,
            lattice_size: None,
            max_hermitian_drift: None,
            max_edge_population: None,
        },
    })
}

/// One eigenvalue of `Delta` and whether it marks a bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    pub lambda: Complex64,
    pub bound_state: bool,
}

/// Largest `N` handled by [`eigen_analysis`].
pub const MAX_EIGEN_DIM: usize = 64;

/// Eigenvalues of `Delta`, sorted by decay rate `Re lambda`. A mode with
/// `Re lambda < 1e-8 max|lambda|` is flagged as a bound state.
pub fn eigen_analysis(delta: &CouplingMatrix) -> Result<Vec<EigenMode>> {
    if delta.n() > MAX_EIGEN_DIM {
        return Err(Error::InvalidConfig(format!(
            "eigen analysis supports N <= {MAX_EIGEN_DIM}, got {}",
            delta.n()
        )));
    }
    let mut lambdas = eigenvalues(&delta.delta)?;
    lambdas.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
    Ok(lambdas
        .into_iter()
        .map(|lambda| EigenMode {
            lambda,
            bound_state: lambda.re < 1e-8 * scale,
        })
        .collect())
}

/// Thresholds turning "much larger" and "much smaller than one" into numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolThresholds {
    /// RWA holds when every detuning exceeds this multiple of `max|lambda|`.
    pub rwa_factor: f64,
    /// Frozen dynamics needs `T max|lambda|` and `T max|detuning|` below this.
    pub frozen: f64,
    /// Frequencies closer than this count as degenerate.
    pub degeneracy_tol: f64,
}

impl Default for ProtocolThresholds {
    fn default() -> Self {
        Self {
            rwa_factor: 100.0,
            frozen: 0.1,
            degeneracy_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolReport {
    pub degenerate: bool,
    pub rwa_ok: bool,
    pub frozen_ok: bool,
    pub max_abs_lambda: f64,
    /// `min_{n != m} |omega_n - omega_m|`, infinite for one state.
    pub min_detuning: f64,
    pub max_detuning: f64,
}

/// Which time-reversal regimes a configuration falls into for switching
/// interval `period`.
pub fn protocol_conditions(
    delta: &CouplingMatrix,
    omega: &[f64],
    period: f64,
    thresholds: &ProtocolThresholds,
) -> Result<ProtocolReport> {
    let modes = eigen_analysis(delta)?;
    let max_abs_lambda = modes.iter().map(|m| m.lambda.norm()).fold(0.0, f64::max);
    let mut min_detuning = f64::INFINITY;
    let mut max_detuning = 0.0_f64;
    for i in 0..omega.len() {
        for j in i + 1..omega.len() {
            let d = (omega[i] - omega[j]).abs();
            min_detuning = min_detuning.min(d);
            max_detuning = max_detuning.max(d);
        }
    }
    Ok(ProtocolReport {
        degenerate: max_detuning <= thresholds.degeneracy_tol,
        rwa_ok: min_detuning > thresholds.rwa_factor * max_abs_lambda,
        frozen_ok: period * max_abs_lambda < thresholds.frozen
            && period * max_detuning < thresholds.frozen,
        max_abs_lambda,
        min_detuning,
        max_detuning,
    })
}
