use num_complex::Complex64;

use crate::model::{CouplingSchedule, SystemConfig};

/// Which simulator produced a [`Trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Discrete states plus truncated lattice.
    Full,
    /// Markovian reduced model on the discrete states only.
    Reduced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub model: ModelKind,
    pub config_hash: u64,
    pub omega: Vec<f64>,
    pub schedule: CouplingSchedule,
    pub dt: f64,
    pub sample_stride: usize,
    /// Number of lattice sites `M` (full model only).
    pub lattice_size: Option<usize>,
    /// Largest `|P_tot(t) - P_tot(t_start)|` seen inside any Hermitian segment (full model only).
    pub max_hermitian_drift: Option<f64>,
    /// Largest population on the two outermost lattice sites (full model only).
    pub max_edge_population: Option<f64>,
}

/// Sampled time evolution of the discrete amplitudes.
///
/// `amplitudes[k][n]` is the interaction-picture amplitude
/// `a_n(t_k) = c_n(t_k) exp(i omega_n t_k)`; it has the same modulus as the
/// Schrodinger-picture `c_n`. Samples are taken every `sample_stride` steps
/// and the final time is always included.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Vec<Complex64>>,
    /// `P_c(t_k)`, present for the full model.
    pub continuum: Option<Vec<f64>>,
    /// Lattice amplitudes `b` at each sample, when requested.
    pub lattice: Option<Vec<Vec<Complex64>>>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_states(&self) -> usize {
        self.amplitudes.first().map_or(0, Vec::len)
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// Index of the sample closest to `t`.
    pub fn index_at(&self, t: f64) -> usize {
        match self
            .times
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i >= self.times.len() => self.times.len() - 1,
            Err(i) => {
                if (self.times[i] - t).abs() < (t - self.times[i - 1]).abs() {
                    i
                } else {
                    i - 1
                }
            }
        }
    }

    /// Schrodinger-picture amplitudes `c_n(t_k)`.
    pub fn schrodinger_amplitudes(&self, k: usize) -> Vec<Complex64> {
        let t = self.times[k];
        self.amplitudes[k]
            .iter()
            .zip(&self.meta.omega)
            .map(|(a, w)| a * Complex64::new(0.0, -w * t).exp())
            .collect()
    }

    /// `|a_n(t_k)|^2` for every sample.
    pub fn discrete_populations(&self) -> Vec<Vec<f64>> {
        self.amplitudes
            .iter()
            .map(|a| a.iter().map(Complex64::norm_sqr).collect())
            .collect()
    }

    pub fn total_population(&self) -> Vec<f64> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let discrete: f64 = a.iter().map(Complex64::norm_sqr).sum();
                discrete + self.continuum.as_ref().map_or(0.0, |c| c[k])
            })
            .collect()
    }
}

/// FNV-1a over the bit patterns of a configuration, used to tag outputs.
pub fn config_hash(config: &SystemConfig) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut feed = |word: u64| {
        for byte in word.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(PRIME);
        }
    };
    feed(config.n_states as u64);
    feed(config.kappa.to_bits());
    for &w in &config.omega {
        feed(w.to_bits());
    }
    for &k in &config.kappa_n {
        feed(k.to_bits());
    }
    for &a in &config.alpha_n {
        feed(a as u64);
    }
    h
}
