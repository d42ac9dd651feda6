//! Spectral correlations `S_{n,m}(omega) = g_n(omega) g_m^*(omega)` of the
//! discrete-continuum coupling, summed over degenerate continuum branches.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::model::SystemConfig;

/// A Hermitian positive-semidefinite matrix function on a finite band.
pub trait SpectralCorrelation: Sync {
    /// Number of discrete states `N`.
    fn dim(&self) -> usize;

    /// Band support `[omega_min, omega_max]`.
    fn band(&self) -> (f64, f64);

    /// Writes `S(omega)` row-major into `out` (`N * N` entries).
    fn eval(&self, omega: f64, out: &mut [Complex64]);

    fn bandwidth(&self) -> f64 {
        let (a, b) = self.band();
        b - a
    }

    fn matrix(&self, omega: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim() * self.dim()];
        self.eval(omega, &mut out);
        out
    }
}

/// The tight-binding continuum seen from the attachment sites.
///
/// The band is `omega = -2 kappa cos q`, `q in (0, pi)`; both Bloch waves
/// `+q` and `-q` are degenerate at `omega`. With
/// `g_n(q) = -kappa_n e^{i q alpha_n} / sqrt(2 pi)` and the density of
/// states `1 / |d omega / dq| = 1 / sqrt(4 kappa^2 - omega^2)`:
///
/// ```text
/// S_{n,m}(omega) = kappa_n kappa_m cos(q (alpha_n - alpha_m)) / (pi sqrt(4 kappa^2 - omega^2))
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpectral {
    kappa: f64,
    kappa_n: Vec<f64>,
    alpha_n: Vec<i64>,
}

impl LatticeSpectral {
    pub fn new(kappa: f64, kappa_n: Vec<f64>, alpha_n: Vec<i64>) -> Self {
        assert_eq!(kappa_n.len(), alpha_n.len());
        Self {
            kappa,
            kappa_n,
            alpha_n,
        }
    }

    pub fn from_config(config: &SystemConfig) -> Self {
        Self::new(config.kappa, config.kappa_n.clone(), config.alpha_n.clone())
    }
}

impl SpectralCorrelation for LatticeSpectral {
    fn dim(&self) -> usize {
        self.kappa_n.len()
    }

    fn band(&self) -> (f64, f64) {
        (-2.0 * self.kappa, 2.0 * self.kappa)
    }

    fn eval(&self, omega: f64, out: &mut [Complex64]) {
        let n = self.dim();
        let edge = 2.0 * self.kappa;
        if omega.abs() >= edge {
            out.fill(Complex64::new(0.0, 0.0));
            return;
        }
        let q = (-omega / edge).acos();
        let dos = 1.0 / (PI * (edge * edge - omega * omega).sqrt());
        for i in 0..n {
            for j in 0..n {
                let d = (self.alpha_n[i] - self.alpha_n[j]) as f64;
                out[i * n + j] =
                    Complex64::new(self.kappa_n[i] * self.kappa_n[j] * (q * d).cos() * dos, 0.0);
            }
        }
    }
}

/// `S = 0` on a given band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSpectral {
    pub dim: usize,
    pub band: (f64, f64),
}

impl SpectralCorrelation for ZeroSpectral {
    fn dim(&self) -> usize {
        self.dim
    }

    fn band(&self) -> (f64, f64) {
        self.band
    }

    fn eval(&self, _omega: f64, out: &mut [Complex64]) {
        out.fill(Complex64::new(0.0, 0.0));
    }
}

/// A spectral correlation given by a closure.
pub struct FnSpectral<F> {
    dim: usize,
    band: (f64, f64),
    f: F,
}

impl<F> FnSpectral<F>
where
    F: Fn(f64, &mut [Complex64]) + Sync,
{
    pub fn new(dim: usize, band: (f64, f64), f: F) -> Self {
        Self { dim, band, f }
    }
}

impl<F> SpectralCorrelation for FnSpectral<F>
where
    F: Fn(f64, &mut [Complex64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn band(&self) -> (f64, f64) {
        self.band
    }

    fn eval(&self, omega: f64, out: &mut [Complex64]) {
        (self.f)(omega, out)
    }
}
